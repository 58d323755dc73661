#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "greyroute/encoding.hpp"
#include "greyroute/instance.hpp"

namespace greyroute {

struct ObjectiveVector {
    double cost = 0;             // f1, money
    double dissatisfaction = 0;  // f2
    double emissions = 0;        // f3, g CO2

    double operator[](int i) const { return i == 0 ? cost : i == 1 ? dissatisfaction : emissions; }
    bool operator==(const ObjectiveVector&) const = default;
};

struct VehicleSchedule {
    std::vector<double> arrivals;  // minutes, one per route node including start and company
    std::vector<double> waits;     // TRZ only: wait at each visited entry
    double earliness = 0;          // t1
    double lateness = 0;           // t2
};

struct Schedule {
    std::vector<VehicleSchedule> buses;     // aligned with plan.bus_routes
    std::vector<VehicleSchedule> carpools;  // aligned with plan.carpool_groups
    std::vector<VehicleSchedule> trz;       // aligned with plan.trz_routes
};

struct BatteryTrace {
    std::vector<double> level;   // charge-units at each route node
    std::vector<double> gas_km;  // gasoline km per leg (zero for electric vehicles)
    double gas_total = 0;
    double route_km = 0;
    bool range_ok = true;        // electric: distance within limit and level never negative
};

// All vehicles leave their first node at system time 0. TRZ vehicles may not
// leave an entry before every carpool vehicle assigned there has arrived.
inline Schedule propagate_times(const Plan& plan, const Instance& inst) {
    Schedule sched;
    const double delta = inst.params.work_start_min;

    for (const auto& route : plan.bus_routes) {
        VehicleSchedule s;
        const Vehicle& v = inst.buses[route.vehicle];
        double t = 0;
        s.arrivals.push_back(t);
        const Node* prev = &inst.urban_depot;
        for (int st : route.stations) {
            const Node& n = inst.bus_stations[st];
            t += 60.0 * distance(*prev, n) / v.speed_kmh;
            s.arrivals.push_back(t);
            prev = &n;
        }
        t += 60.0 * distance(*prev, inst.company) / v.speed_kmh;
        s.arrivals.push_back(t);
        s.earliness = std::max(0.0, delta - t);
        s.lateness = std::max(0.0, t - delta);
        sched.buses.push_back(std::move(s));
    }

    std::vector<double> entry_latest(inst.trz_entries.size(), 0.0);
    for (const auto& grp : plan.carpool_groups) {
        VehicleSchedule s;
        const Vehicle& v = inst.fuel_cars[grp.vehicle];
        double t = 0;
        s.arrivals.push_back(t);
        const Node* prev = &inst.employees[grp.occupants.front()].node;
        for (std::size_t i = 1; i < grp.occupants.size(); ++i) {
            const Node& n = inst.employees[grp.occupants[i]].node;
            t += 60.0 * distance(*prev, n) / v.speed_kmh;
            s.arrivals.push_back(t);
            prev = &n;
        }
        const Node& entry = inst.trz_entries[grp.entry];
        t += 60.0 * distance(*prev, entry) / v.speed_kmh;
        s.arrivals.push_back(t);
        entry_latest[grp.entry] = std::max(entry_latest[grp.entry], t);
        sched.carpools.push_back(std::move(s));
    }

    for (const auto& route : plan.trz_routes) {
        VehicleSchedule s;
        const Vehicle& v =
            route.is_electric ? inst.electric[route.vehicle] : inst.hybrid[route.vehicle];
        double t = 0;
        s.arrivals.push_back(t);
        const Node* prev = &inst.trz_depot;
        for (int e : route.entries) {
            const Node& n = inst.trz_entries[e];
            t += 60.0 * distance(*prev, n) / v.speed_kmh;
            s.arrivals.push_back(t);
            double wait = std::max(0.0, entry_latest[e] - t);
            s.waits.push_back(wait);
            t += wait;
            prev = &n;
        }
        t += 60.0 * distance(*prev, inst.company) / v.speed_kmh;
        s.arrivals.push_back(t);
        s.earliness = std::max(0.0, delta - t);
        s.lateness = std::max(0.0, t - delta);
        sched.trz.push_back(std::move(s));
    }
    return sched;
}

// Battery starts full; electric vehicles drain at `battery_rate` per km and
// must stay within range; hybrids spend battery first and cover the shortfall
// with gasoline.
inline BatteryTrace propagate_battery(const TrzRoute& route, const Instance& inst) {
    BatteryTrace trace;
    const double r = inst.params.battery_rate;
    double z = inst.params.battery_capacity;
    trace.level.push_back(z);
    const Node* prev = &inst.trz_depot;
    auto step = [&](const Node& n) {
        double d = distance(*prev, n);
        trace.route_km += d;
        double gas = 0;
        if (route.is_electric) {
            z -= r * d;
            if (z < 0) trace.range_ok = false;
        } else {
            gas = (r > 0) ? std::max(0.0, d - z / r) : d * 0.0;
            z = std::max(0.0, z - r * d);
        }
        trace.gas_km.push_back(gas);
        trace.gas_total += gas;
        trace.level.push_back(z);
        prev = &n;
    };
    for (int e : route.entries) step(inst.trz_entries[e]);
    step(inst.company);
    if (route.is_electric && trace.route_km > inst.params.electric_max_km) trace.range_ok = false;
    return trace;
}

namespace detail {

inline double carpool_route_distance(const Instance& inst, const CarpoolGroup& grp) {
    double d = 0;
    const Node* prev = &inst.employees[grp.occupants.front()].node;
    for (std::size_t i = 1; i < grp.occupants.size(); ++i) {
        const Node& n = inst.employees[grp.occupants[i]].node;
        d += distance(*prev, n);
        prev = &n;
    }
    return d + distance(*prev, inst.trz_entries[grp.entry]);
}

}  // namespace detail

// f1: per-km driver cost and fixed cost of every used bus/electric/hybrid
// vehicle, plus the incentive budget paid out for each idle carpool car.
inline double objective_cost(const Plan& plan, const Schedule&, const Instance& inst) {
    double cost = 0;
    for (const auto& route : plan.bus_routes) {
        const Vehicle& v = inst.buses[route.vehicle];
        cost += v.var_cost * detail::bus_route_distance(inst, route.stations) + v.fixed_cost;
    }
    for (const auto& route : plan.trz_routes) {
        const Vehicle& v =
            route.is_electric ? inst.electric[route.vehicle] : inst.hybrid[route.vehicle];
        cost += v.var_cost * detail::trz_route_distance(inst, route.entries) + v.fixed_cost;
    }
    std::vector<char> used(inst.fuel_cars.size(), 0);
    for (const auto& grp : plan.carpool_groups) used[grp.vehicle] = 1;
    for (char u : used)
        if (!u) cost += inst.params.carpool_incentive;
    return cost;
}

// f2: walking dissatisfaction of every bus rider plus the early/late penalty
// of every used bus and TRZ vehicle.
inline double objective_satisfaction(const Plan& plan, const Schedule& sched,
                                     const Instance& inst) {
    double f = 0;
    const double theta = inst.params.walk_dissatisfaction;
    const double tw = inst.params.walk_pace_h_per_km;
    for (int e = 0; e < static_cast<int>(plan.rider_station.size()); ++e) {
        int s = plan.rider_station[e];
        if (s < 0) continue;
        f += theta * tw * distance(inst.employees[e].node, inst.bus_stations[s]);
    }
    const double eps = inst.params.schedule_penalty;
    for (const auto& s : sched.buses) f += eps * (s.earliness + s.lateness);
    for (const auto& s : sched.trz) f += eps * (s.earliness + s.lateness);
    return f;
}

// f3: emissions of buses and carpool cars over their full routes plus the
// gasoline-powered share of hybrid TRZ routes. Electric vehicles emit nothing.
inline double objective_emissions(const Plan& plan, const std::vector<BatteryTrace>& traces,
                                  const Instance& inst) {
    double f = 0;
    for (const auto& route : plan.bus_routes)
        f += inst.buses[route.vehicle].emission_factor *
             detail::bus_route_distance(inst, route.stations);
    for (const auto& grp : plan.carpool_groups)
        f += inst.fuel_cars[grp.vehicle].emission_factor *
             detail::carpool_route_distance(inst, grp);
    for (std::size_t i = 0; i < plan.trz_routes.size(); ++i)
        if (!plan.trz_routes[i].is_electric)
            f += inst.hybrid[plan.trz_routes[i].vehicle].emission_factor * traces[i].gas_total;
    return f;
}

inline std::vector<BatteryTrace> propagate_batteries(const Plan& plan, const Instance& inst) {
    std::vector<BatteryTrace> traces;
    traces.reserve(plan.trz_routes.size());
    for (const auto& route : plan.trz_routes) traces.push_back(propagate_battery(route, inst));
    return traces;
}

inline std::vector<Violation> check_feasibility(const Plan& plan, const Schedule& sched,
                                                const std::vector<BatteryTrace>& traces,
                                                const Instance& inst,
                                                bool strict_min_occupancy = false) {
    std::vector<Violation> out;
    const int nW = static_cast<int>(inst.employees.size());
    const int nV = static_cast<int>(inst.bus_stations.size());
    const int nS = static_cast<int>(inst.trz_entries.size());
    const double tol = 1e-9;

    // employee partition: exactly one role per employee
    std::vector<int> seen(nW, 0);
    for (const auto& grp : plan.carpool_groups)
        for (int e : grp.occupants) ++seen[e];
    for (int e = 0; e < nW; ++e)
        if (plan.rider_station[e] >= 0) ++seen[e];
    for (int e = 0; e < nW; ++e)
        if (seen[e] != 1)
            out.push_back({"employee-partition",
                           "employee " + std::to_string(e) + " appears " + std::to_string(seen[e]) +
                               " times across carpool groups and bus assignments"});

    std::vector<char> car_used(inst.fuel_cars.size(), 0);
    for (std::size_t i = 0; i < plan.carpool_groups.size(); ++i) {
        const auto& grp = plan.carpool_groups[i];
        const std::string tag = "carpool group " + std::to_string(i);
        if (grp.occupants.empty()) {
            out.push_back({"carpool-empty-group", tag + " has no occupants"});
            continue;
        }
        int driver = grp.occupants.front();
        if (!inst.employees[driver].owns_car)
            out.push_back({"carpool-driver", tag + ": driver does not own a car"});
        else if (inst.owner_vehicle()[driver] != grp.vehicle)
            out.push_back({"carpool-driver", tag + ": vehicle is not the driver's own car"});
        if (grp.vehicle < 0 || grp.vehicle >= static_cast<int>(inst.fuel_cars.size())) {
            out.push_back({"carpool-vehicle", tag + ": unknown vehicle"});
            continue;
        }
        if (car_used[grp.vehicle])
            out.push_back({"carpool-vehicle", tag + ": vehicle used by two groups"});
        car_used[grp.vehicle] = 1;
        if (static_cast<int>(grp.occupants.size()) > inst.fuel_cars[grp.vehicle].capacity)
            out.push_back({"carpool-capacity", tag + ": occupants exceed the car capacity"});
        if (strict_min_occupancy && grp.occupants.size() < 2)
            out.push_back({"carpool-min-occupancy", tag + ": fewer than two occupants"});
        if (grp.entry < 0 || grp.entry >= nS)
            out.push_back({"carpool-entry", tag + ": no valid TRZ entry assigned"});
    }

    // bus structure and capacity
    std::vector<int> station_visits(nV, 0);
    std::vector<char> bus_used(inst.buses.size(), 0);
    for (std::size_t i = 0; i < plan.bus_routes.size(); ++i) {
        const auto& route = plan.bus_routes[i];
        const std::string tag = "bus route " + std::to_string(i);
        if (bus_used[route.vehicle]) out.push_back({"bus-vehicle", tag + ": bus used twice"});
        bus_used[route.vehicle] = 1;
        int load = 0;
        for (int s : route.stations) {
            ++station_visits[s];
            load += static_cast<int>(plan.station_riders[s].size());
        }
        if (load > inst.buses[route.vehicle].capacity)
            out.push_back({"bus-capacity", tag + ": " + std::to_string(load) + " riders exceed capacity " +
                                               std::to_string(inst.buses[route.vehicle].capacity)});
        if (route.stations.empty()) out.push_back({"bus-empty-route", tag + " visits no station"});
    }
    for (int s = 0; s < nV; ++s) {
        if (station_visits[s] > 1)
            out.push_back({"station-single-visit",
                           "station " + std::to_string(s) + " visited by several buses"});
        if (!plan.station_riders[s].empty() && station_visits[s] == 0)
            out.push_back({"rider-at-visited-station",
                           "station " + std::to_string(s) + " has riders but no bus"});
    }

    // TRZ structure, capacity, range and battery
    std::vector<int> entry_visits(nS, 0);
    for (std::size_t i = 0; i < plan.trz_routes.size(); ++i) {
        const auto& route = plan.trz_routes[i];
        const std::string tag = "trz route " + std::to_string(i);
        const Vehicle& v =
            route.is_electric ? inst.electric[route.vehicle] : inst.hybrid[route.vehicle];
        int head = 0;
        for (int e : route.entries) {
            ++entry_visits[e];
            head += plan.entry_headcount[e];
        }
        if (head > v.capacity)
            out.push_back({"trz-capacity", tag + ": head-count " + std::to_string(head) +
                                               " exceeds capacity " + std::to_string(v.capacity)});
        if (route.entries.empty()) out.push_back({"trz-empty-route", tag + " visits no entry"});
        if (i < traces.size()) {
            const auto& tr = traces[i];
            if (route.is_electric && tr.route_km > inst.params.electric_max_km + tol)
                out.push_back({"electric-range", tag + ": distance exceeds the electric range"});
            if (!tr.level.empty() &&
                std::abs(tr.level.front() - inst.params.battery_capacity) > tol)
                out.push_back({"battery-initial", tag + ": battery does not start full"});
            for (double z : tr.level)
                if (z < -tol) out.push_back({"battery-level", tag + ": battery level negative"});
            if (route.is_electric && tr.gas_total > tol)
                out.push_back({"electric-no-gas", tag + ": electric vehicle burned gasoline"});
            if (inst.params.return_reserve) {
                double d_back = distance(inst.company, inst.trz_depot);
                double z_end = tr.level.back();
                double gas_back = route.is_electric
                                      ? 0.0
                                      : std::max(0.0, d_back - (inst.params.battery_rate > 0
                                                                    ? z_end / inst.params.battery_rate
                                                                    : d_back));
                if (z_end + tol < inst.params.battery_rate * (d_back - gas_back))
                    out.push_back({"battery-return-reserve", tag + ": no energy left to return"});
            }
        }
    }
    for (int s = 0; s < nS; ++s) {
        if (entry_visits[s] > 1)
            out.push_back({"entry-single-visit",
                           "entry " + std::to_string(s) + " visited by several TRZ vehicles"});
        if (plan.entry_headcount[s] > 0 && entry_visits[s] == 0)
            out.push_back({"entry-served",
                           "entry " + std::to_string(s) + " has transfers but no TRZ route"});
    }

    // precedence: a TRZ vehicle may not leave an entry before its carpoolers arrive
    std::vector<double> entry_latest(nS, 0.0);
    for (std::size_t i = 0; i < plan.carpool_groups.size() && i < sched.carpools.size(); ++i)
        entry_latest[plan.carpool_groups[i].entry] =
            std::max(entry_latest[plan.carpool_groups[i].entry], sched.carpools[i].arrivals.back());
    for (std::size_t i = 0; i < plan.trz_routes.size() && i < sched.trz.size(); ++i) {
        const auto& route = plan.trz_routes[i];
        const auto& s = sched.trz[i];
        for (std::size_t j = 0; j < route.entries.size(); ++j) {
            double departure = s.arrivals[j + 1] + (j < s.waits.size() ? s.waits[j] : 0.0);
            if (departure + tol < entry_latest[route.entries[j]])
                out.push_back({"entry-precedence",
                               "trz route " + std::to_string(i) + " leaves entry " +
                                   std::to_string(route.entries[j]) + " before its carpoolers arrive"});
        }
    }
    return out;
}

// decode -> schedules -> battery traces -> objectives. Pure and deterministic.
inline ObjectiveVector evaluate_plan(const Plan& plan, const Instance& inst) {
    Schedule sched = propagate_times(plan, inst);
    auto traces = propagate_batteries(plan, inst);
    for (const auto& tr : traces)
        if (!tr.range_ok)
            throw std::logic_error("decoder produced an out-of-range electric route");
    ObjectiveVector v;
    v.cost = objective_cost(plan, sched, inst);
    v.dissatisfaction = objective_satisfaction(plan, sched, inst);
    v.emissions = objective_emissions(plan, traces, inst);
    return v;
}

inline ObjectiveVector evaluate(const Genotype& g, const Instance& inst) {
    return evaluate_plan(decode(g, inst), inst);
}

}  // namespace greyroute
