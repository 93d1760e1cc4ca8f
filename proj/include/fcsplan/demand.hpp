#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <fcsplan/network.hpp>
#include <fcsplan/types.hpp>

namespace fcsplan {

/// Origin-destination draw policy. Uniform draws over all ordered pairs with
/// origin != destination; Pairs draws from an explicit weighted list.
struct OdPolicy {
    enum class Kind { Uniform, Pairs };
    Kind kind = Kind::Uniform;

    struct WeightedPair {
        NodeId origin;
        NodeId destination;
        double weight;
    };
    std::vector<WeightedPair> pairs;  // used when kind == Pairs
};

struct FleetSpec {
    int n_vehicles = 500;
    double departure_start_hour = 6.0;  // window [start, end) of day
    double departure_end_hour = 22.0;
    OdPolicy od_policy;
    std::uint64_t seed = 1;
    double charge_energy_kwh = 30.0;
    double charge_power_kw = 150.0;
    double avg_speed_mph = 30.0;  // converts en-route distance to arrival time

    void validate(const CoupledNetwork& net) const;
};

struct Vehicle {
    int id = 0;
    int depart_min = 0;  // minutes of day
    int chain_index = 0; // into Fleet::chains
};

/// Monte-Carlo generated fleet. Vehicles with the same O-D pair share one trip
/// chain; flows[i] counts the vehicles on chains[i].
struct Fleet {
    FleetSpec spec;
    std::vector<Vehicle> vehicles;
    std::vector<TripChain> chains;  // unique chains, ordered by first appearance
    std::vector<int> flows;         // f_q, aligned with chains
    std::vector<std::vector<int>> chain_vehicles;  // vehicle indices per chain

    int num_chains() const { return static_cast<int>(chains.size()); }
    int total_flow() const;
};

/// Deterministic function of (net, spec): per-vehicle substreams are derived
/// from the seed, so each vehicle's draws are independent of the others.
Fleet generate_fleet(const CoupledNetwork& net, const FleetSpec& spec);

/// Rectangular charging pulse on a daily grid: height charge_power_kw from the
/// interval containing start_min, lasting ceil(energy/power) worth of whole
/// intervals, wrapping across midnight.
ArrayXd session_profile(int start_min, double charge_energy_kwh, double charge_power_kw,
                        int interval_minutes);

/// Number of whole intervals a charging session occupies.
int session_intervals(double charge_energy_kwh, double charge_power_kw, int interval_minutes);

/// Chain signature used in flow maps and CSV exports: path nodes joined by '-'.
std::string chain_signature(const TripChain& chain);

}  // namespace fcsplan
