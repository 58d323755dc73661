#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "greyroute/instance.hpp"
#include "greyroute/rng.hpp"

namespace greyroute {

// Raised when repair cannot produce a feasible plan; names the binding resource.
class InfeasibleError : public std::runtime_error {
  public:
    InfeasibleError(std::string resource, const std::string& what)
        : std::runtime_error(what), resource_(std::move(resource)) {}
    const std::string& resource() const { return resource_; }

  private:
    std::string resource_;
};

// Five-array permutation encoding. All array values are 1-based:
//  assignment: permutation of 1..(|W|+|V|-1); values > |W| delimit stations
//  carpool:    permutation of 1..(|W|+|G|);   values > |W| delimit vehicles
//  bus_route:  permutation of 1..(|V|+|B|-1); values > |V| delimit buses
//  trz_route:  permutation of 1..(|S|+|E|+|H|-1)
//  entry:      |G| values in 1..|S|, the entry point of each carpool vehicle
struct Genotype {
    std::vector<int> assignment;
    std::vector<int> carpool;
    std::vector<int> bus_route;
    std::vector<int> trz_route;
    std::vector<int> entry;

    bool operator==(const Genotype&) const = default;
};

struct CarpoolGroup {
    int vehicle = -1;                // fuel fleet index (the driver's car)
    std::vector<int> occupants;      // employee indices, driver first
    int entry = -1;                  // TRZ entry index
};

struct BusRoute {
    int vehicle = -1;                // bus fleet index
    std::vector<int> stations;       // station indices in visiting order
};

struct TrzRoute {
    bool is_electric = false;
    int vehicle = -1;                // index into the electric or hybrid fleet
    std::vector<int> entries;        // entry indices in visiting order
};

// Decoded phenotype. All indices 0-based.
struct Plan {
    std::vector<CarpoolGroup> carpool_groups;
    std::vector<int> rider_station;          // employee -> station index, -1 for carpoolers
    std::vector<std::vector<int>> station_riders;  // station -> employees, boarding order
    std::vector<BusRoute> bus_routes;
    std::vector<TrzRoute> trz_routes;
    std::vector<int> entry_headcount;        // per entry, carpool occupants transferring there

    bool is_carpooler(int employee) const { return rider_station[employee] < 0; }
};

namespace detail {

inline void require_permutation(const std::vector<int>& a, int n, const char* name) {
    if (static_cast<int>(a.size()) != n)
        throw std::invalid_argument(std::string(name) + ": expected length " + std::to_string(n));
    std::vector<char> seen(n + 1, 0);
    for (int v : a) {
        if (v < 1 || v > n || seen[v])
            throw std::invalid_argument(std::string(name) + ": not a permutation of 1.." +
                                        std::to_string(n));
        seen[v] = 1;
    }
}

}  // namespace detail

// First array: values > nW delimit stations (value nW+s belongs to station s,
// 1-based); an employee goes to the station whose delimiter first follows it;
// trailing employees go to station nV. Returns station -> employees (0-based),
// preserving array order.
inline std::vector<std::vector<int>> decode_assignment_array(const std::vector<int>& a, int nW,
                                                             int nV) {
    detail::require_permutation(a, nW + nV - 1, "assignment array");
    std::vector<std::vector<int>> stations(nV);
    std::vector<int> pending;
    for (int v : a) {
        if (v <= nW) {
            pending.push_back(v - 1);
        } else {
            auto& dst = stations[v - nW - 1];
            dst.insert(dst.end(), pending.begin(), pending.end());
            pending.clear();
        }
    }
    auto& last = stations[nV - 1];
    last.insert(last.end(), pending.begin(), pending.end());
    return stations;
}

struct CarpoolDecode {
    std::vector<CarpoolGroup> groups;  // only nonempty groups, in delimiter order
    std::vector<int> bus_riders;       // employees left to the buses
};

// Second array: values > nW delimit carpool vehicles; the segment before
// delimiter g is vehicle g's occupant list, the tail rides the bus. Repair:
// a segment without a car owner is dissolved to the bus riders; the driver is
// the first car owner of the segment and the group uses the driver's own car;
// occupants beyond that car's capacity (driver always kept) spill to the bus.
inline CarpoolDecode decode_carpool_array(const std::vector<int>& a, int nW,
                                          const std::vector<int>& owner_vehicle,
                                          const std::vector<Vehicle>& fuel_cars) {
    const int nG = static_cast<int>(fuel_cars.size());
    detail::require_permutation(a, nW + nG, "carpool array");
    CarpoolDecode out;
    std::vector<int> segment;
    auto flush = [&](bool to_bus) {
        if (to_bus) {
            out.bus_riders.insert(out.bus_riders.end(), segment.begin(), segment.end());
            segment.clear();
            return;
        }
        int driver = -1;
        for (int e : segment)
            if (owner_vehicle[e] >= 0) {
                driver = e;
                break;
            }
        if (driver < 0) {  // no car owner: dissolve
            out.bus_riders.insert(out.bus_riders.end(), segment.begin(), segment.end());
            segment.clear();
            return;
        }
        CarpoolGroup g;
        g.vehicle = owner_vehicle[driver];
        g.occupants.push_back(driver);
        const int cap = fuel_cars[g.vehicle].capacity;
        for (int e : segment) {
            if (e == driver) continue;
            if (static_cast<int>(g.occupants.size()) < cap)
                g.occupants.push_back(e);
            else
                out.bus_riders.push_back(e);
        }
        out.groups.push_back(std::move(g));
        segment.clear();
    };
    for (int v : a) {
        if (v <= nW)
            segment.push_back(v - 1);
        else
            flush(false);
    }
    flush(true);  // tail
    return out;
}

// Third/fourth array: values > nStops delimit vehicles; the segment before
// delimiter v, filtered to nonempty stops, is vehicle v's route; the tail
// belongs to vehicle nVehicles. Empty post-filter segments leave the vehicle
// unused. Returns vehicle -> ordered stop indices (0-based).
inline std::vector<std::vector<int>> decode_route_array(const std::vector<int>& a, int nStops,
                                                        int nVehicles,
                                                        const std::vector<char>& nonempty) {
    detail::require_permutation(a, nStops + nVehicles - 1, "route array");
    std::vector<std::vector<int>> routes(nVehicles);
    std::vector<int> segment;
    for (int v : a) {
        if (v <= nStops) {
            if (nonempty[v - 1]) segment.push_back(v - 1);
        } else {
            routes[v - nStops - 1] = std::move(segment);
            segment.clear();
        }
    }
    routes[nVehicles - 1] = std::move(segment);
    return routes;
}

// Fifth array: used carpool vehicle g reads its TRZ entry from entry_array[g].
inline std::vector<int> assign_entries(const std::vector<int>& entry_array, int nEntries,
                                       const std::vector<char>& used) {
    if (entry_array.size() < used.size())
        throw std::invalid_argument("entry array shorter than carpool fleet");
    std::vector<int> out(used.size(), -1);
    for (std::size_t g = 0; g < used.size(); ++g) {
        if (!used[g]) continue;
        int s = entry_array[g];
        if (s < 1 || s > nEntries)
            throw std::invalid_argument("entry array value " + std::to_string(s) + " out of range");
        out[g] = s - 1;
    }
    return out;
}

namespace detail {

inline double bus_route_distance(const Instance& inst, const std::vector<int>& stations) {
    double d = 0;
    const Node* prev = &inst.urban_depot;
    for (int s : stations) {
        d += distance(*prev, inst.bus_stations[s]);
        prev = &inst.bus_stations[s];
    }
    return d + distance(*prev, inst.company);
}

inline double trz_route_distance(const Instance& inst, const std::vector<int>& entries) {
    double d = 0;
    const Node* prev = &inst.trz_depot;
    for (int e : entries) {
        d += distance(*prev, inst.trz_entries[e]);
        prev = &inst.trz_entries[e];
    }
    return d + distance(*prev, inst.company);
}

}  // namespace detail

// Full decode pipeline: carpool groups, bus assignment of the remainder, bus
// routes with capacity repair, entry assignment, TRZ routes with range-driven
// vehicle-kind selection and capacity repair.
inline Plan decode(const Genotype& g, const Instance& inst) {
    const int nW = static_cast<int>(inst.employees.size());
    const int nV = static_cast<int>(inst.bus_stations.size());
    const int nS = static_cast<int>(inst.trz_entries.size());
    const int nB = static_cast<int>(inst.buses.size());
    const int nG = static_cast<int>(inst.fuel_cars.size());
    const int nTrz = static_cast<int>(inst.electric.size() + inst.hybrid.size());
    if (nV < 1 || nB < 1) throw InfeasibleError("bus fleet", "instance has no bus stations or buses");

    Plan plan;

    // (1) carpool groups, (2) carpoolers leave the bus pool
    auto cp = decode_carpool_array(g.carpool, nW, inst.owner_vehicle(), inst.fuel_cars);
    plan.carpool_groups = std::move(cp.groups);
    std::vector<char> carpooler(nW, 0);
    for (const auto& grp : plan.carpool_groups)
        for (int e : grp.occupants) carpooler[e] = 1;

    // (3) remaining employees to stations
    auto full_assignment = decode_assignment_array(g.assignment, nW, nV);
    plan.rider_station.assign(nW, -1);
    plan.station_riders.assign(nV, {});
    for (int s = 0; s < nV; ++s)
        for (int e : full_assignment[s])
            if (!carpooler[e]) {
                plan.rider_station[e] = s;
                plan.station_riders[s].push_back(e);
            }

    // (4) bus routes over nonempty stations, capacity repair
    std::vector<char> station_nonempty(nV, 0);
    for (int s = 0; s < nV; ++s) station_nonempty[s] = !plan.station_riders[s].empty();
    auto bus_station_seq = decode_route_array(g.bus_route, nV, nB, station_nonempty);
    {
        std::vector<int> load(nB, 0);
        auto route_load = [&](int b) {
            int l = 0;
            for (int s : bus_station_seq[b]) l += static_cast<int>(plan.station_riders[s].size());
            return l;
        };
        for (int b = 0; b < nB; ++b) load[b] = route_load(b);
        for (int b = 0; b < nB; ++b) {
            while (load[b] > inst.buses[b].capacity) {
                int next = -1;  // next bus already carrying riders
                for (int b2 = b + 1; b2 < nB; ++b2)
                    if (!bus_station_seq[b2].empty()) {
                        next = b2;
                        break;
                    }
                if (bus_station_seq[b].size() > 1) {
                    // move the trailing station wholesale
                    int st = bus_station_seq[b].back();
                    bus_station_seq[b].pop_back();
                    int moved = static_cast<int>(plan.station_riders[st].size());
                    load[b] -= moved;
                    if (next < 0) {
                        for (int b2 = b + 1; b2 < nB; ++b2)
                            if (bus_station_seq[b2].empty()) {
                                next = b2;
                                break;
                            }
                        if (next < 0)
                            throw InfeasibleError("bus fleet capacity",
                                                  "bus riders exceed total bus capacity");
                    }
                    bus_station_seq[next].push_back(st);
                    load[next] += moved;
                } else {
                    // single overfull station: reseat trailing riders on another bus
                    int st = bus_station_seq[b].front();
                    auto& riders = plan.station_riders[st];
                    int excess = load[b] - inst.buses[b].capacity;
                    int dest_station = -1, dest_bus = -1;
                    if (next >= 0) {
                        dest_bus = next;
                        dest_station = bus_station_seq[next].front();
                    } else {
                        for (int b2 = b + 1; b2 < nB && dest_bus < 0; ++b2)
                            if (bus_station_seq[b2].empty()) dest_bus = b2;
                        for (int s = 0; s < nV && dest_station < 0; ++s)
                            if (!station_nonempty[s]) dest_station = s;
                        if (dest_bus < 0 || dest_station < 0)
                            throw InfeasibleError("bus fleet capacity",
                                                  "bus riders exceed reachable bus capacity");
                        bus_station_seq[dest_bus].push_back(dest_station);
                        station_nonempty[dest_station] = 1;
                    }
                    for (int i = 0; i < excess; ++i) {
                        int e = riders.back();
                        riders.pop_back();
                        plan.rider_station[e] = dest_station;
                        plan.station_riders[dest_station].push_back(e);
                    }
                    load[b] -= excess;
                    load[dest_bus] += excess;
                }
            }
        }
    }
    for (int b = 0; b < nB; ++b)
        if (!bus_station_seq[b].empty()) plan.bus_routes.push_back({b, std::move(bus_station_seq[b])});

    // (5) entry points for used carpool vehicles
    std::vector<char> used_car(nG, 0);
    for (const auto& grp : plan.carpool_groups) used_car[grp.vehicle] = 1;
    auto entries = assign_entries(g.entry, nS, used_car);
    plan.entry_headcount.assign(nS, 0);
    for (auto& grp : plan.carpool_groups) {
        grp.entry = entries[grp.vehicle];
        plan.entry_headcount[grp.entry] += static_cast<int>(grp.occupants.size());
    }

    // (6) TRZ routes over entries with positive head-count
    if (nS > 0 && nTrz > 0) {
        std::vector<char> entry_nonempty(nS, 0);
        for (int s = 0; s < nS; ++s) entry_nonempty[s] = plan.entry_headcount[s] > 0;
        auto segs = decode_route_array(g.trz_route, nS, nTrz, entry_nonempty);
        std::vector<int> free_electric, free_hybrid;
        for (int i = static_cast<int>(inst.electric.size()) - 1; i >= 0; --i)
            free_electric.push_back(i);
        for (int i = static_cast<int>(inst.hybrid.size()) - 1; i >= 0; --i) free_hybrid.push_back(i);
        for (std::size_t slot = 0; slot < segs.size(); ++slot) {
            auto seg = std::move(segs[slot]);
            if (seg.empty()) continue;
            double dist = detail::trz_route_distance(inst, seg);
            TrzRoute route;
            if (dist <= inst.params.electric_max_km && !free_electric.empty()) {
                route.is_electric = true;
                route.vehicle = free_electric.back();
                free_electric.pop_back();
            } else if (!free_hybrid.empty()) {
                route.is_electric = false;
                route.vehicle = free_hybrid.back();
                free_hybrid.pop_back();
            } else {
                throw InfeasibleError("trz fleet", "no electric/hybrid vehicle left for a TRZ route");
            }
            const Vehicle& veh =
                route.is_electric ? inst.electric[route.vehicle] : inst.hybrid[route.vehicle];
            // head-count capacity: spill trailing entry stations to the next segment
            int head = 0;
            for (std::size_t i = 0; i < seg.size(); ++i) head += plan.entry_headcount[seg[i]];
            while (head > veh.capacity && seg.size() > 1) {
                int spilled = seg.back();
                seg.pop_back();
                head -= plan.entry_headcount[spilled];
                std::size_t target = slot + 1;
                if (target >= segs.size()) {
                    segs.push_back({});
                    target = segs.size() - 1;
                }
                segs[target].insert(segs[target].begin(), spilled);
            }
            if (head > veh.capacity)
                throw InfeasibleError("trz vehicle capacity",
                                      "entry head-count exceeds every remaining vehicle capacity");
            route.entries = std::move(seg);
            plan.trz_routes.push_back(std::move(route));
        }
    } else if (nS == 0 || nTrz == 0) {
        bool any_head = false;
        for (int h : plan.entry_headcount)
            if (h > 0) any_head = true;
        if (any_head) throw InfeasibleError("trz fleet", "carpoolers present but no TRZ fleet");
    }
    return plan;
}

inline Genotype random_genotype(const Instance& inst, std::uint64_t seed) {
    const int nW = static_cast<int>(inst.employees.size());
    const int nV = static_cast<int>(inst.bus_stations.size());
    const int nS = static_cast<int>(inst.trz_entries.size());
    const int nB = static_cast<int>(inst.buses.size());
    const int nG = static_cast<int>(inst.fuel_cars.size());
    const int nTrz = static_cast<int>(inst.electric.size() + inst.hybrid.size());
    Rng rng(seed);
    auto perm = [&](int n) {
        std::vector<int> v(n);
        std::iota(v.begin(), v.end(), 1);
        rng.shuffle(v);
        return v;
    };
    Genotype g;
    g.assignment = perm(nW + nV - 1);
    g.carpool = perm(nW + nG);
    g.bus_route = perm(nV + nB - 1);
    g.trz_route = perm(nS + nTrz - 1);
    g.entry.resize(nG);
    for (int i = 0; i < nG; ++i) g.entry[i] = 1 + rng.below_int(std::max(1, nS));
    return g;
}

}  // namespace greyroute
