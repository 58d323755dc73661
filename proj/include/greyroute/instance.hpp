#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "greyroute/rng.hpp"

namespace greyroute {

struct Node {
    int id = 0;
    double x = 0.0;  // km
    double y = 0.0;  // km
};

struct Employee {
    Node node;
    bool owns_car = false;
};

enum class FleetKind { Bus, Fuel, Electric, Hybrid };

inline const char* fleet_kind_name(FleetKind k) {
    switch (k) {
        case FleetKind::Bus: return "bus";
        case FleetKind::Fuel: return "fuel";
        case FleetKind::Electric: return "electric";
        case FleetKind::Hybrid: return "hybrid";
    }
    return "?";
}

struct Vehicle {
    int capacity = 1;              // persons
    double fixed_cost = 0.0;       // money, charged once when the vehicle is used
    double var_cost = 0.0;         // money per km driven
    double emission_factor = 0.0;  // g CO2 per km
    double speed_kmh = 30.0;
};

struct Params {
    double walk_dissatisfaction = 1.0;  // per walked km (signed; negative means satisfaction)
    double work_start_min = 60.0;       // arrival target, minutes from system time 0
    double carpool_incentive = 50.0;    // money per idle carpool vehicle
    double battery_rate = 0.2;          // charge-units per km
    double battery_capacity = 10.0;     // charge-units
    double walk_pace_h_per_km = 0.2;    // hours per walked km
    double schedule_penalty = 10.0;     // per minute of early/late arrival
    double electric_max_km = 20.0;      // max total route distance for electric vehicles
    bool return_reserve = false;        // require energy left for the return leg
};

// Immutable problem data. Employees live in the urban zone; the company and
// the TRZ entry points live in the traffic-restricted grey zone. Buses run
// urban depot -> stations -> company; carpool cars run driver home ->
// passenger homes -> entry point; electric/hybrid shuttles run TRZ depot ->
// entry points -> company.
struct Instance {
    std::vector<Employee> employees;
    std::vector<Node> bus_stations;
    std::vector<Node> trz_entries;
    Node urban_depot;
    Node trz_depot;
    Node company;
    std::vector<Vehicle> buses;
    std::vector<Vehicle> fuel_cars;  // one per car-owning employee, same order
    std::vector<Vehicle> electric;
    std::vector<Vehicle> hybrid;
    Params params;
    std::uint64_t seed = 0;

    std::vector<int> car_owners() const {
        std::vector<int> out;
        for (int i = 0; i < static_cast<int>(employees.size()); ++i)
            if (employees[i].owns_car) out.push_back(i);
        return out;
    }

    // fuel vehicle index owned by each employee, -1 for non-owners
    std::vector<int> owner_vehicle() const {
        std::vector<int> out(employees.size(), -1);
        int g = 0;
        for (int i = 0; i < static_cast<int>(employees.size()); ++i)
            if (employees[i].owns_car) out[i] = g++;
        return out;
    }

    const Node& node_by_id(int id) const {
        if (urban_depot.id == id) return urban_depot;
        if (trz_depot.id == id) return trz_depot;
        if (company.id == id) return company;
        for (const auto& e : employees)
            if (e.node.id == id) return e.node;
        for (const auto& n : bus_stations)
            if (n.id == id) return n;
        for (const auto& n : trz_entries)
            if (n.id == id) return n;
        throw std::invalid_argument("unknown node id " + std::to_string(id));
    }

    const Vehicle& vehicle(FleetKind kind, int idx) const {
        const std::vector<Vehicle>* fleet = nullptr;
        switch (kind) {
            case FleetKind::Bus: fleet = &buses; break;
            case FleetKind::Fuel: fleet = &fuel_cars; break;
            case FleetKind::Electric: fleet = &electric; break;
            case FleetKind::Hybrid: fleet = &hybrid; break;
        }
        if (idx < 0 || idx >= static_cast<int>(fleet->size()))
            throw std::invalid_argument(std::string("unknown vehicle ") + fleet_kind_name(kind) +
                                        "#" + std::to_string(idx));
        return (*fleet)[idx];
    }
};

inline double distance(const Node& a, const Node& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Minutes to drive from node i to node j with vehicle k (Euclidean, per-vehicle speed).
inline double travel_time_minutes(const Instance& inst, int node_i, int node_j, FleetKind kind,
                                  int vehicle_idx) {
    const Node& a = inst.node_by_id(node_i);
    const Node& b = inst.node_by_id(node_j);
    const Vehicle& v = inst.vehicle(kind, vehicle_idx);
    if (v.speed_kmh <= 0) throw std::invalid_argument("vehicle speed must be positive");
    return 60.0 * distance(a, b) / v.speed_kmh;
}

struct Violation {
    std::string field;    // field path or constraint tag
    std::string message;
};

inline std::vector<Violation> validate_instance(const Instance& inst) {
    std::vector<Violation> out;
    const int nW = static_cast<int>(inst.employees.size());
    const int nC = static_cast<int>(inst.car_owners().size());
    if (nC > nW) out.push_back({"employees", "more car owners than employees"});
    if (static_cast<int>(inst.fuel_cars.size()) != nC)
        out.push_back({"fleets.fuel", "fuel fleet size " + std::to_string(inst.fuel_cars.size()) +
                                          " != car owner count " + std::to_string(nC)});
    auto check_fleet = [&](const std::vector<Vehicle>& fleet, const std::string& name) {
        for (std::size_t i = 0; i < fleet.size(); ++i) {
            const auto& v = fleet[i];
            const std::string path = "fleets." + name + "[" + std::to_string(i) + "]";
            if (v.capacity < 1) out.push_back({path + ".capacity", "capacity must be >= 1"});
            if (v.speed_kmh <= 0) out.push_back({path + ".speed", "speed must be positive"});
            if (v.var_cost < 0) out.push_back({path + ".var_cost", "must be nonnegative"});
            if (v.emission_factor < 0) out.push_back({path + ".emission_factor", "must be nonnegative"});
        }
    };
    check_fleet(inst.buses, "buses");
    check_fleet(inst.fuel_cars, "fuel");
    check_fleet(inst.electric, "electric");
    check_fleet(inst.hybrid, "hybrid");
    if (inst.params.work_start_min <= 0) out.push_back({"params.work_start_min", "must be positive"});
    if (inst.params.battery_rate < 0) out.push_back({"params.battery_rate", "must be nonnegative"});
    if (inst.params.battery_capacity < 0)
        out.push_back({"params.battery_capacity", "must be nonnegative"});
    if (!inst.electric.empty() && inst.params.battery_capacity <= 0)
        out.push_back({"params.battery_capacity", "electric fleet present but battery capacity is 0"});
    if (inst.params.electric_max_km < 0) out.push_back({"params.electric_max_km", "must be nonnegative"});
    if (inst.params.walk_pace_h_per_km < 0) out.push_back({"params.walk_pace_h_per_km", "must be nonnegative"});

    std::set<int> ids;
    auto check_id = [&](int id, const std::string& where) {
        if (!ids.insert(id).second)
            out.push_back({where, "duplicate node id " + std::to_string(id)});
    };
    check_id(inst.urban_depot.id, "nodes.urban_depot");
    check_id(inst.trz_depot.id, "nodes.trz_depot");
    check_id(inst.company.id, "nodes.company");
    for (std::size_t i = 0; i < inst.employees.size(); ++i)
        check_id(inst.employees[i].node.id, "nodes.employees[" + std::to_string(i) + "]");
    for (std::size_t i = 0; i < inst.bus_stations.size(); ++i)
        check_id(inst.bus_stations[i].id, "nodes.bus_stations[" + std::to_string(i) + "]");
    for (std::size_t i = 0; i < inst.trz_entries.size(); ++i)
        check_id(inst.trz_entries[i].id, "nodes.trz_entries[" + std::to_string(i) + "]");
    return out;
}

// ---------------------------------------------------------------------------
// Synthetic instance generation
// ---------------------------------------------------------------------------

struct Box {
    double x0 = 0, y0 = 0, x1 = 10, y1 = 10;
};

struct Range {
    double lo = 0, hi = 0;  // lo == hi pins the value
};

struct VehicleRanges {
    Range capacity;
    Range fixed_cost;
    Range var_cost;
    Range emission;
    Range speed;
};

struct InstanceSpec {
    int n_stations = 0;   // |V|
    int n_entries = 0;    // |S|
    int n_employees = 0;  // |W|
    int n_car_owners = 0; // |C|
    int n_buses = 0;      // |B|
    int n_fuel = 0;       // |G|, must equal |C|
    int n_electric = 0;   // |E|
    int n_hybrid = 0;     // |H|
    Box urban_box{0, 0, 10, 10};
    Box grey_box{10, 0, 14, 4};
    // Non-published magnitudes; every range is overridable.
    VehicleRanges bus_ranges{{45, 45}, {100, 100}, {2, 2}, {800, 800}, {25, 25}};
    VehicleRanges fuel_ranges{{4, 4}, {0, 0}, {1, 1}, {180, 180}, {35, 35}};
    VehicleRanges electric_ranges{{30, 30}, {20, 20}, {1, 1}, {0, 0}, {30, 30}};
    VehicleRanges hybrid_ranges{{30, 30}, {20, 20}, {1, 1}, {120, 120}, {30, 30}};
    Params params;
    std::uint64_t seed = 0;
};

inline std::vector<Violation> validate_spec(const InstanceSpec& s) {
    std::vector<Violation> out;
    auto nonneg = [&](int v, const char* name) {
        if (v < 0) out.push_back({name, "must be nonnegative"});
    };
    nonneg(s.n_stations, "n_stations");
    nonneg(s.n_entries, "n_entries");
    nonneg(s.n_employees, "n_employees");
    nonneg(s.n_car_owners, "n_car_owners");
    nonneg(s.n_buses, "n_buses");
    nonneg(s.n_fuel, "n_fuel");
    nonneg(s.n_electric, "n_electric");
    nonneg(s.n_hybrid, "n_hybrid");
    if (s.n_car_owners > s.n_employees)
        out.push_back({"n_car_owners", "more car owners than employees"});
    if (s.n_fuel != s.n_car_owners)
        out.push_back({"n_fuel", "fuel fleet size must equal car owner count"});
    if (s.n_car_owners > 0 && s.n_entries == 0)
        out.push_back({"n_entries", "car owners present but no TRZ entry points"});
    return out;
}

// Table of published instance shapes I1..I13: {V, S, W, C, B, G, E, H}.
inline const std::array<std::array<int, 8>, 13>& instance_shape_table() {
    static const std::array<std::array<int, 8>, 13> t{{
        {2, 1, 10, 3, 1, 3, 1, 2},
        {2, 3, 15, 4, 1, 4, 2, 2},
        {3, 3, 20, 4, 1, 4, 3, 4},
        {3, 4, 25, 6, 2, 6, 3, 4},
        {4, 4, 30, 6, 2, 6, 4, 5},
        {4, 5, 35, 8, 2, 8, 5, 6},
        {5, 5, 40, 8, 3, 8, 6, 7},
        {5, 6, 45, 12, 3, 12, 6, 7},
        {6, 6, 50, 12, 3, 12, 7, 7},
        {6, 6, 55, 12, 4, 12, 8, 8},
        {8, 8, 60, 15, 4, 15, 8, 8},
        {8, 8, 65, 15, 5, 15, 9, 9},
        {8, 8, 70, 15, 5, 15, 9, 9},
    }};
    return t;
}

// row is 1-based (1 -> I1).
inline InstanceSpec shape_spec(int row, std::uint64_t seed) {
    if (row < 1 || row > 13) throw std::invalid_argument("instance shape row must be in 1..13");
    const auto& r = instance_shape_table()[row - 1];
    InstanceSpec s;
    s.n_stations = r[0];
    s.n_entries = r[1];
    s.n_employees = r[2];
    s.n_car_owners = r[3];
    s.n_buses = r[4];
    s.n_fuel = r[5];
    s.n_electric = r[6];
    s.n_hybrid = r[7];
    s.seed = seed;
    return s;
}

inline Instance generate_instance(const InstanceSpec& spec) {
    auto errs = validate_spec(spec);
    if (!errs.empty())
        throw std::invalid_argument("invalid spec: " + errs.front().field + ": " +
                                    errs.front().message);
    Rng rng(spec.seed);
    auto sample_node = [&](const Box& b, int id) {
        return Node{id, rng.uniform(b.x0, b.x1), rng.uniform(b.y0, b.y1)};
    };
    auto sample_vehicle = [&](const VehicleRanges& r) {
        Vehicle v;
        double cap = rng.uniform(r.capacity.lo, r.capacity.hi);
        v.capacity = std::max(1, static_cast<int>(cap + 0.5));
        v.fixed_cost = rng.uniform(r.fixed_cost.lo, r.fixed_cost.hi);
        v.var_cost = rng.uniform(r.var_cost.lo, r.var_cost.hi);
        v.emission_factor = rng.uniform(r.emission.lo, r.emission.hi);
        v.speed_kmh = rng.uniform(r.speed.lo, r.speed.hi);
        return v;
    };

    Instance inst;
    inst.seed = spec.seed;
    inst.params = spec.params;
    int next_id = 0;
    inst.urban_depot = sample_node(spec.urban_box, next_id++);
    inst.employees.reserve(spec.n_employees);
    for (int i = 0; i < spec.n_employees; ++i) {
        Employee e;
        e.node = sample_node(spec.urban_box, next_id++);
        e.owns_car = i < spec.n_car_owners;
        inst.employees.push_back(e);
    }
    for (int i = 0; i < spec.n_stations; ++i)
        inst.bus_stations.push_back(sample_node(spec.urban_box, next_id++));
    for (int i = 0; i < spec.n_entries; ++i)
        inst.trz_entries.push_back(sample_node(spec.grey_box, next_id++));
    inst.trz_depot = sample_node(spec.grey_box, next_id++);
    inst.company = sample_node(spec.grey_box, next_id++);
    for (int i = 0; i < spec.n_buses; ++i) inst.buses.push_back(sample_vehicle(spec.bus_ranges));
    for (int i = 0; i < spec.n_fuel; ++i) inst.fuel_cars.push_back(sample_vehicle(spec.fuel_ranges));
    for (int i = 0; i < spec.n_electric; ++i)
        inst.electric.push_back(sample_vehicle(spec.electric_ranges));
    for (int i = 0; i < spec.n_hybrid; ++i)
        inst.hybrid.push_back(sample_vehicle(spec.hybrid_ranges));
    return inst;
}

}  // namespace greyroute
