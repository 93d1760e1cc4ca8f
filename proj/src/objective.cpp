#include <fcsplan/objective.hpp>

#include <cmath>
#include <numeric>

namespace fcsplan {

void ObjectiveSpec::validate(const CoupledNetwork& net) const {
    if (capture_value_per_vehicle < 0.0) throw ValidationError("objective: c must be >= 0");
    if (!(penalty_coefficient > 0.0)) throw ValidationError("objective: c_p must be > 0");
    if (n_fcs <= 0 || n_fcs > net.num_candidates())
        throw ValidationError("objective: n_fcs must satisfy 0 < n_fcs <= |K|");
    if (!(span_hours > 0.0)) throw ValidationError("objective: span_hours must be > 0");
    if (interval_minutes <= 0 || 1440 % interval_minutes != 0)
        throw ValidationError("objective: interval_minutes must divide 1440");
    const double expected = span_hours * 60.0 / interval_minutes;
    if (std::abs(static_cast<double>(base_load_kw.size()) - expected) > 1e-9)
        throw ValidationError("objective: base load length does not match span and interval");
    if ((base_load_kw < 0.0).any()) throw ValidationError("objective: base load must be >= 0");
    transformer.validate();
}

double penalty_cost(const Placement& placement, const ObjectiveSpec& spec) {
    const double deviation = static_cast<double>(placement.cast<int>().sum() - spec.n_fcs);
    if (spec.penalty_form == PenaltyForm::Quadratic)
        return spec.penalty_coefficient * deviation * deviation;
    return spec.penalty_coefficient * std::abs(deviation);
}

Evaluation evaluate(const Placement& placement, const CoupledNetwork& net, const Fleet& fleet,
                    const ObjectiveSpec& spec) {
    Evaluation ev;
    ev.capture = evaluate_capture(net, fleet, placement);
    const LoadingProfile profile =
        build_loading(spec.base_load_kw, spec.interval_minutes, ev.capture, fleet,
                      spec.transformer);
    ev.tco = tco(profile, spec.transformer, spec.span_hours);
    ev.penalty = penalty_cost(placement, spec);
    ev.S = ev.tco.total - spec.capture_value_per_vehicle * ev.capture.captured_volume + ev.penalty;
    return ev;
}

Evaluator::Evaluator(const CoupledNetwork& net, const Fleet& fleet, const ObjectiveSpec& spec)
    : net_(net), fleet_(fleet), spec_(spec) {
    spec_.validate(net);
    num_candidates_ = net.num_candidates();
    n_intervals_ = static_cast<int>(spec_.base_load_kw.size());
    session_len_ = session_intervals(fleet.spec.charge_energy_kwh, fleet.spec.charge_power_kw,
                                     spec_.interval_minutes);

    const double unit_miles = net.transport.distance_unit_miles;
    chains_.resize(fleet.num_chains());
    chain_vehicle_departs_.resize(fleet.num_chains());
    for (int q = 0; q < fleet.num_chains(); ++q) {
        ChainInfo& info = chains_[q];
        info.flow = fleet.flows[q];
        const TripChain& chain = fleet.chains[q];
        double units = 0.0;
        for (std::size_t pos = 0; pos < chain.path.size(); ++pos) {
            if (pos > 0) {
                const NodeId a = chain.path[pos - 1];
                const NodeId b = chain.path[pos];
                for (const auto& nb : net.transport.adjacency[a])
                    if (nb.node == b) {
                        units += nb.distance;
                        break;
                    }
            }
            const int k = net.candidate_index(chain.path[pos]);
            if (k >= 0) {
                const int travel = static_cast<int>(
                    std::lround(units * unit_miles / fleet.spec.avg_speed_mph * 60.0));
                info.hits.push_back({k, travel});
            }
        }
        for (int vi : fleet.chain_vehicles[q])
            chain_vehicle_departs_[q].push_back(fleet.vehicles[vi].depart_min);
    }
}

Evaluator::Workspace Evaluator::make_workspace() const {
    Workspace ws;
    ws.load_kw = ArrayXd::Zero(n_intervals_);
    ws.s = ArrayXd::Zero(n_intervals_);
    ws.hotspot_c = ArrayXd::Zero(n_intervals_);
    return ws;
}

double Evaluator::score(const Placement& placement, Workspace& ws) const {
    ws.load_kw = spec_.base_load_kw;
    const double power = fleet_.spec.charge_power_kw;
    int captured = 0;
    for (std::size_t q = 0; q < chains_.size(); ++q) {
        const ChainInfo& info = chains_[q];
        for (const StationHit& hit : info.hits) {
            if (placement[hit.candidate]) {
                captured += info.flow;
                for (const int depart : chain_vehicle_departs_[q]) {
                    const int start =
                        ((depart + hit.travel_min) % 1440 + 1440) % 1440 / spec_.interval_minutes;
                    for (int k = 0; k < session_len_; ++k)
                        ws.load_kw[(start + k) % n_intervals_] += power;
                }
                break;
            }
        }
    }
    // Same kernels as the full evaluate() path, so the score is bit-identical.
    ws.s = ws.load_kw / spec_.transformer.rated_kva;
    const TcoResult cost = tco_with_buffer(ws.s, spec_.interval_minutes, spec_.transformer,
                                           spec_.span_hours, ws.hotspot_c);
    return cost.total - spec_.capture_value_per_vehicle * captured +
           penalty_cost(placement, spec_);
}

Evaluation Evaluator::evaluate(const Placement& placement) const {
    return fcsplan::evaluate(placement, net_, fleet_, spec_);
}

std::uint64_t binomial_coefficient(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
    return result;
}

EnumerationResult brute_force_optimum(const CoupledNetwork& net, const Fleet& fleet,
                                      const ObjectiveSpec& spec,
                                      std::uint64_t max_enumeration) {
    const int m = net.num_candidates();
    const int k = spec.n_fcs;
    const std::uint64_t count = binomial_coefficient(m, k);
    if (count == 0 || count > max_enumeration)
        throw ValidationError("brute_force_optimum: enumeration budget exceeded (C(" +
                              std::to_string(m) + "," + std::to_string(k) + ") = " +
                              std::to_string(count) + ")");

    Evaluator evaluator(net, fleet, spec);
    auto ws = evaluator.make_workspace();

    std::vector<int> chosen(k);
    std::iota(chosen.begin(), chosen.end(), 0);

    EnumerationResult best;
    best.S = std::numeric_limits<double>::infinity();
    Placement x = Placement::Zero(m);
    for (;;) {
        x.setZero();
        for (const int idx : chosen) x[idx] = 1;
        const double s = evaluator.score(x, ws);
        ++best.evaluated;
        if (s < best.S) {  // lexicographic enumeration: first strict improvement wins ties
            best.S = s;
            best.placement = x;
        }
        // next combination in lexicographic order
        int pos = k - 1;
        while (pos >= 0 && chosen[pos] == m - k + pos) --pos;
        if (pos < 0) break;
        ++chosen[pos];
        for (int j = pos + 1; j < k; ++j) chosen[j] = chosen[j - 1] + 1;
    }
    best.evaluation = evaluator.evaluate(best.placement);
    return best;
}

}  // namespace fcsplan
