#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "greyroute/evaluator.hpp"
#include "greyroute/moo.hpp"
#include "greyroute/rng.hpp"

namespace greyroute {

struct NsgaParams {
    int population = 100;       // even, >= 4
    int generations = 200;
    double crossover_rate = 0.8;
    double mutation_rate = 0.1;
    int tournament = 2;
    std::uint64_t seed = 0;
    int threads = 1;  // evaluation parallelism; results are thread-count independent
};

inline void validate_params(const NsgaParams& p) {
    if (p.population < 4 || p.population % 2 != 0)
        throw std::invalid_argument("population must be even and >= 4");
    if (p.generations < 1) throw std::invalid_argument("generations must be >= 1");
    if (p.crossover_rate < 0 || p.crossover_rate > 1 || p.mutation_rate < 0 || p.mutation_rate > 1)
        throw std::invalid_argument("rates must be in [0, 1]");
    if (p.tournament < 1) throw std::invalid_argument("tournament size must be >= 1");
    if (p.threads < 1) throw std::invalid_argument("threads must be >= 1");
}

namespace detail {

// Order crossover (OX) on one permutation array.
inline void order_crossover(const std::vector<int>& p1, const std::vector<int>& p2,
                            std::vector<int>& c1, std::vector<int>& c2, Rng& rng) {
    const int n = static_cast<int>(p1.size());
    if (n <= 1) {
        c1 = p1;
        c2 = p2;
        return;
    }
    int a = rng.below_int(n), b = rng.below_int(n);
    if (a > b) std::swap(a, b);
    auto make_child = [&](const std::vector<int>& keep, const std::vector<int>& fill,
                          std::vector<int>& child) {
        child.assign(n, 0);
        std::vector<char> taken(n + 1, 0);
        for (int i = a; i <= b; ++i) {
            child[i] = keep[i];
            taken[keep[i]] = 1;
        }
        int pos = (b + 1) % n;
        for (int i = 0; i < n; ++i) {
            int v = fill[(b + 1 + i) % n];
            if (taken[v]) continue;
            child[pos] = v;
            pos = (pos + 1) % n;
        }
    };
    make_child(p1, p2, c1);
    make_child(p2, p1, c2);
}

}  // namespace detail

// OX on each permutation array, uniform crossover on the entry array.
inline std::pair<Genotype, Genotype> crossover(const Genotype& p1, const Genotype& p2,
                                               std::uint64_t seed) {
    if (p1.assignment.size() != p2.assignment.size() || p1.carpool.size() != p2.carpool.size() ||
        p1.bus_route.size() != p2.bus_route.size() || p1.trz_route.size() != p2.trz_route.size() ||
        p1.entry.size() != p2.entry.size())
        throw std::invalid_argument("crossover: mismatched genotype sizes");
    Rng rng(seed);
    Genotype c1, c2;
    detail::order_crossover(p1.assignment, p2.assignment, c1.assignment, c2.assignment, rng);
    detail::order_crossover(p1.carpool, p2.carpool, c1.carpool, c2.carpool, rng);
    detail::order_crossover(p1.bus_route, p2.bus_route, c1.bus_route, c2.bus_route, rng);
    detail::order_crossover(p1.trz_route, p2.trz_route, c1.trz_route, c2.trz_route, rng);
    c1.entry.resize(p1.entry.size());
    c2.entry.resize(p1.entry.size());
    for (std::size_t i = 0; i < p1.entry.size(); ++i) {
        bool flip = rng.uniform01() < 0.5;
        c1.entry[i] = flip ? p2.entry[i] : p1.entry[i];
        c2.entry[i] = flip ? p1.entry[i] : p2.entry[i];
    }
    return {std::move(c1), std::move(c2)};
}

// With probability `rate` per permutation array, swap two random positions;
// each entry-array position is resampled with probability `rate`.
inline Genotype mutate(const Genotype& g, double rate, std::uint64_t seed, int n_entries) {
    Rng rng(seed);
    Genotype out = g;
    auto maybe_swap = [&](std::vector<int>& a) {
        if (a.size() < 2) return;
        if (rng.uniform01() >= rate) return;
        int i = rng.below_int(static_cast<int>(a.size()));
        int j = rng.below_int(static_cast<int>(a.size() - 1));
        if (j >= i) ++j;
        std::swap(a[i], a[j]);
    };
    maybe_swap(out.assignment);
    maybe_swap(out.carpool);
    maybe_swap(out.bus_route);
    maybe_swap(out.trz_route);
    for (auto& v : out.entry)
        if (rng.uniform01() < rate) v = 1 + rng.below_int(std::max(1, n_entries));
    return out;
}

struct RunHooks {
    // Called after each generation with the surviving population's objectives.
    std::function<void(int generation, const std::vector<ObjectiveVector>&)> on_generation;
};

namespace detail {

struct Individual {
    Genotype genotype;
    ObjectiveVector objectives;
    int rank = 0;
    double crowding = 0;
};

// Deterministic evaluation regardless of thread count: each index draws
// regeneration randomness from its own stream.
inline void evaluate_all(std::vector<Individual>& pop, const Instance& inst, std::uint64_t run_seed,
                         int generation, int threads) {
    auto eval_one = [&](int idx) {
        Individual& ind = pop[idx];
        for (int attempt = 0;; ++attempt) {
            try {
                ind.objectives = evaluate(ind.genotype, inst);
                return;
            } catch (const InfeasibleError&) {
                if (attempt >= 50) throw;
                ind.genotype = random_genotype(
                    inst, Rng::derive(run_seed, 0x7e6a1ull * (generation + 1),
                                      0x51f3ull * (idx + 1) + attempt));
            }
        }
    };
    const int n = static_cast<int>(pop.size());
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) eval_one(i);
        return;
    }
    std::vector<std::thread> workers;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
        workers.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) eval_one(i);
        });
    for (auto& w : workers) w.join();
}

inline void rank_population(std::vector<Individual>& pop) {
    std::vector<ObjectiveVector> objs(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) objs[i] = pop[i].objectives;
    auto fronts = nondominated_sort(objs);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        std::vector<ObjectiveVector> sub;
        sub.reserve(fronts[f].size());
        for (int i : fronts[f]) sub.push_back(objs[i]);
        auto cd = crowding_distance(sub);
        for (std::size_t k = 0; k < fronts[f].size(); ++k) {
            pop[fronts[f][k]].rank = static_cast<int>(f);
            pop[fronts[f][k]].crowding = cd[k];
        }
    }
}

inline bool better(const Individual& a, const Individual& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    return a.crowding > b.crowding;
}

}  // namespace detail

// Elitist (mu + lambda) NSGA-II over genotypes. `seeds` are injected into the
// initial population (used by warm-started parameter sweeps).
inline ParetoFront run_nsga2(const Instance& inst, const NsgaParams& params,
                             const std::vector<Genotype>& seeds = {},
                             const RunHooks* hooks = nullptr) {
    validate_params(params);
    using detail::Individual;
    Rng rng(Rng::derive(params.seed, 0xa11ceull));
    const int n = params.population;

    std::vector<Individual> pop(n);
    for (int i = 0; i < n; ++i) {
        if (i < static_cast<int>(seeds.size()))
            pop[i].genotype = seeds[i];
        else
            pop[i].genotype = random_genotype(inst, Rng::derive(params.seed, 0x1271ull, i));
    }
    detail::evaluate_all(pop, inst, params.seed, 0, params.threads);
    detail::rank_population(pop);

    for (int gen = 1; gen <= params.generations; ++gen) {
        auto select = [&]() -> const Individual& {
            int best = rng.below_int(n);
            for (int t = 1; t < params.tournament; ++t) {
                int c = rng.below_int(n);
                if (detail::better(pop[c], pop[best])) best = c;
            }
            return pop[best];
        };
        std::vector<Individual> offspring;
        offspring.reserve(n);
        while (static_cast<int>(offspring.size()) < n) {
            const Individual& p1 = select();
            const Individual& p2 = select();
            Genotype c1 = p1.genotype, c2 = p2.genotype;
            if (rng.uniform01() < params.crossover_rate)
                std::tie(c1, c2) = crossover(p1.genotype, p2.genotype, rng.next_u64());
            c1 = mutate(c1, params.mutation_rate, rng.next_u64(),
                        static_cast<int>(inst.trz_entries.size()));
            c2 = mutate(c2, params.mutation_rate, rng.next_u64(),
                        static_cast<int>(inst.trz_entries.size()));
            offspring.push_back({std::move(c1), {}, 0, 0});
            if (static_cast<int>(offspring.size()) < n)
                offspring.push_back({std::move(c2), {}, 0, 0});
        }
        detail::evaluate_all(offspring, inst, params.seed, gen, params.threads);

        std::vector<Individual> merged;
        merged.reserve(2 * n);
        for (auto& ind : pop) merged.push_back(std::move(ind));
        for (auto& ind : offspring) merged.push_back(std::move(ind));
        detail::rank_population(merged);
        std::stable_sort(merged.begin(), merged.end(), detail::better);
        merged.resize(n);
        pop = std::move(merged);
        detail::rank_population(pop);

        if (hooks && hooks->on_generation) {
            std::vector<ObjectiveVector> objs(pop.size());
            for (std::size_t i = 0; i < pop.size(); ++i) objs[i] = pop[i].objectives;
            hooks->on_generation(gen, objs);
        }
    }

    ParetoFront front;
    for (const auto& ind : pop)
        if (ind.rank == 0) archive_insert(front.entries, {ind.genotype, ind.objectives});
    return front;
}

}  // namespace greyroute
