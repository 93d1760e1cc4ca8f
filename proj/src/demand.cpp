#include <fcsplan/demand.hpp>

#include <cmath>
#include <map>
#include <sstream>

#include <fcsplan/rng.hpp>

namespace fcsplan {

void FleetSpec::validate(const CoupledNetwork& net) const {
    if (n_vehicles <= 0) throw ValidationError("fleet: n_vehicles must be > 0");
    if (!(departure_start_hour >= 0.0 && departure_end_hour <= 24.0 &&
          departure_start_hour < departure_end_hour))
        throw ValidationError("fleet: departure window must satisfy 0 <= start < end <= 24");
    if (!(charge_energy_kwh > 0.0)) throw ValidationError("fleet: charge_energy_kwh must be > 0");
    if (!(charge_power_kw > 0.0)) throw ValidationError("fleet: charge_power_kw must be > 0");
    if (!(avg_speed_mph > 0.0)) throw ValidationError("fleet: avg_speed_mph must be > 0");
    if (od_policy.kind == OdPolicy::Kind::Pairs) {
        if (od_policy.pairs.empty()) throw ValidationError("fleet: od_policy.pairs is empty");
        for (std::size_t i = 0; i < od_policy.pairs.size(); ++i) {
            const auto& p = od_policy.pairs[i];
            const std::string where = "fleet: od_policy.pairs[" + std::to_string(i) + "]";
            if (!net.transport.has_node(p.origin) || !net.transport.has_node(p.destination))
                throw ValidationError(where + ": unknown node");
            if (p.origin == p.destination) throw ValidationError(where + ": origin == destination");
            if (!(p.weight > 0.0)) throw ValidationError(where + ": weight must be > 0");
        }
    }
}

int Fleet::total_flow() const {
    int total = 0;
    for (int f : flows) total += f;
    return total;
}

namespace {

std::pair<NodeId, NodeId> draw_od(const CoupledNetwork& net, const OdPolicy& policy, Rng& rng) {
    if (policy.kind == OdPolicy::Kind::Pairs) {
        double total = 0.0;
        for (const auto& p : policy.pairs) total += p.weight;
        const double target = rng.uniform_unit() * total;
        double cum = 0.0;
        for (const auto& p : policy.pairs) {
            cum += p.weight;
            if (target < cum) return {p.origin, p.destination};
        }
        const auto& last = policy.pairs.back();
        return {last.origin, last.destination};
    }
    // uniform over ordered pairs with origin != destination
    const std::uint64_t m = static_cast<std::uint64_t>(net.transport.n_nodes);
    const std::uint64_t k = rng.uniform_below(m * (m - 1));
    const NodeId origin = static_cast<NodeId>(k / (m - 1)) + 1;
    const std::uint64_t r = k % (m - 1);
    const NodeId destination =
        static_cast<NodeId>(r) + 1 + (static_cast<NodeId>(r) + 1 >= origin ? 1 : 0);
    return {origin, destination};
}

}  // namespace

Fleet generate_fleet(const CoupledNetwork& net, const FleetSpec& spec) {
    spec.validate(net);

    Fleet fleet;
    fleet.spec = spec;
    fleet.vehicles.reserve(spec.n_vehicles);

    const int window_start_min = static_cast<int>(std::lround(spec.departure_start_hour * 60.0));
    const int window_end_min = static_cast<int>(std::lround(spec.departure_end_hour * 60.0));
    const std::uint64_t window_len = static_cast<std::uint64_t>(window_end_min - window_start_min);

    std::map<std::pair<NodeId, NodeId>, int> chain_of_od;
    for (int i = 0; i < spec.n_vehicles; ++i) {
        Rng rng(derive_stream(spec.seed, static_cast<std::uint64_t>(i)));
        Vehicle veh;
        veh.id = i;
        veh.depart_min = window_start_min + static_cast<int>(rng.uniform_below(window_len));
        const auto [origin, destination] = draw_od(net, spec.od_policy, rng);

        const auto key = std::make_pair(origin, destination);
        auto it = chain_of_od.find(key);
        if (it == chain_of_od.end()) {
            const int idx = fleet.num_chains();
            fleet.chains.push_back(shortest_path(net, origin, destination));
            fleet.flows.push_back(0);
            fleet.chain_vehicles.emplace_back();
            it = chain_of_od.emplace(key, idx).first;
        }
        veh.chain_index = it->second;
        fleet.flows[veh.chain_index] += 1;
        fleet.chain_vehicles[veh.chain_index].push_back(i);
        fleet.vehicles.push_back(veh);
    }
    return fleet;
}

int session_intervals(double charge_energy_kwh, double charge_power_kw, int interval_minutes) {
    const double minutes_needed = charge_energy_kwh / charge_power_kw * 60.0;
    return static_cast<int>(std::ceil(minutes_needed / interval_minutes - 1e-12));
}

ArrayXd session_profile(int start_min, double charge_energy_kwh, double charge_power_kw,
                        int interval_minutes) {
    if (interval_minutes <= 0 || 1440 % interval_minutes != 0)
        throw ValidationError("session_profile: interval must divide 1440");
    const int n = 1440 / interval_minutes;
    ArrayXd profile = ArrayXd::Zero(n);
    const int start = ((start_min % 1440) + 1440) % 1440 / interval_minutes;
    const int len = session_intervals(charge_energy_kwh, charge_power_kw, interval_minutes);
    for (int k = 0; k < len; ++k) profile[(start + k) % n] += charge_power_kw;
    return profile;
}

std::string chain_signature(const TripChain& chain) {
    std::ostringstream os;
    for (std::size_t i = 0; i < chain.path.size(); ++i) {
        if (i) os << '-';
        os << chain.path[i];
    }
    return os.str();
}

}  // namespace fcsplan
