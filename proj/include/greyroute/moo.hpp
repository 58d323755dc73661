#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "greyroute/encoding.hpp"
#include "greyroute/evaluator.hpp"

namespace greyroute {

inline constexpr int kNumObjectives = 3;

// a dominates b: no worse everywhere, strictly better somewhere (minimization).
inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    bool strict = false;
    for (int m = 0; m < kNumObjectives; ++m) {
        if (a[m] > b[m]) return false;
        if (a[m] < b[m]) strict = true;
    }
    return strict;
}

// Fast non-dominated sort; returns fronts of indices into the population.
inline std::vector<std::vector<int>> nondominated_sort(const std::vector<ObjectiveVector>& pop) {
    const int n = static_cast<int>(pop.size());
    std::vector<int> dominated_count(n, 0);
    std::vector<std::vector<int>> dominates_list(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (dominates(pop[i], pop[j])) {
                dominates_list[i].push_back(j);
                ++dominated_count[j];
            } else if (dominates(pop[j], pop[i])) {
                dominates_list[j].push_back(i);
                ++dominated_count[i];
            }
        }
    std::vector<std::vector<int>> fronts;
    std::vector<int> current;
    for (int i = 0; i < n; ++i)
        if (dominated_count[i] == 0) current.push_back(i);
    while (!current.empty()) {
        std::vector<int> next;
        for (int i : current)
            for (int j : dominates_list[i])
                if (--dominated_count[j] == 0) next.push_back(j);
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

// Crowding distance of a mutually non-dominated front (Deb's formula);
// boundary entries are infinite.
inline std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& front) {
    const int n = static_cast<int>(front.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) return std::vector<double>(n, inf);
    for (int m = 0; m < kNumObjectives; ++m) {
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return front[a][m] < front[b][m]; });
        double range = front[order.back()][m] - front[order.front()][m];
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        if (range <= 0) continue;
        for (int i = 1; i + 1 < n; ++i)
            dist[order[i]] += (front[order[i + 1]][m] - front[order[i - 1]][m]) / range;
    }
    return dist;
}

struct FrontEntry {
    Genotype genotype;
    ObjectiveVector objectives;
};

struct ParetoFront {
    std::vector<FrontEntry> entries;  // mutually non-dominated, unique objective vectors
};

// Keep an archive non-dominated with unique objective vectors.
inline bool archive_insert(std::vector<FrontEntry>& archive, FrontEntry candidate) {
    for (const auto& e : archive) {
        if (e.objectives == candidate.objectives || dominates(e.objectives, candidate.objectives))
            return false;
    }
    std::erase_if(archive, [&](const FrontEntry& e) {
        return dominates(candidate.objectives, e.objectives);
    });
    archive.push_back(std::move(candidate));
    return true;
}

struct FrontMetrics {
    int nps = 0;
    double sm = 0;   // Schott spacing over normalized objectives
    double dm = 0;   // diagonal of the normalized objective ranges
    double mid = 0;  // mean distance to the normalized ideal point
};

// Quality metrics over a front; objectives are min-max normalized over the
// front itself (zero-range objectives normalize to 0).
inline FrontMetrics front_metrics(const std::vector<ObjectiveVector>& front) {
    if (front.empty()) throw std::invalid_argument("front_metrics: empty front");
    const int n = static_cast<int>(front.size());
    FrontMetrics fm;
    fm.nps = n;
    if (n == 1) return fm;  // singleton convention: sm = dm = mid = 0

    double lo[kNumObjectives], hi[kNumObjectives];
    for (int m = 0; m < kNumObjectives; ++m) {
        lo[m] = hi[m] = front[0][m];
        for (const auto& v : front) {
            lo[m] = std::min(lo[m], v[m]);
            hi[m] = std::max(hi[m], v[m]);
        }
    }
    auto norm = [&](const ObjectiveVector& v, int m) {
        double range = hi[m] - lo[m];
        return range > 0 ? (v[m] - lo[m]) / range : 0.0;
    };

    // sm: standard deviation of nearest-neighbor Manhattan distances
    std::vector<double> nn(n, std::numeric_limits<double>::infinity());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double d = 0;
            for (int m = 0; m < kNumObjectives; ++m) d += std::abs(norm(front[i], m) - norm(front[j], m));
            nn[i] = std::min(nn[i], d);
        }
    double mean = 0;
    for (double d : nn) mean += d;
    mean /= n;
    double ssq = 0;
    for (double d : nn) ssq += (d - mean) * (d - mean);
    fm.sm = std::sqrt(ssq / (n - 1));

    // dm: diagonal of the normalized bounding box
    double diag = 0;
    for (int m = 0; m < kNumObjectives; ++m) {
        double range = hi[m] - lo[m] > 0 ? 1.0 : 0.0;
        diag += range * range;
    }
    fm.dm = std::sqrt(diag);

    // mid: mean Euclidean distance to the normalized ideal (componentwise minimum)
    double sum = 0;
    for (const auto& v : front) {
        double d = 0;
        for (int m = 0; m < kNumObjectives; ++m) {
            double z = norm(v, m);  // ideal normalizes to 0
            d += z * z;
        }
        sum += std::sqrt(d);
    }
    fm.mid = sum / n;
    return fm;
}

}  // namespace greyroute
