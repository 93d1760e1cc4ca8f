#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <fcsplan/fcm.hpp>
#include <fcsplan/gadm.hpp>

namespace fcsplan {

enum class PenaltyForm { Abs, Quadratic };

struct ObjectiveSpec {
    // c must stay well under c_p / (max marginal capture of one extra station),
    // otherwise the station-count penalty never binds and infeasible
    // placements win. On the bundled benchmark that bound is ~2.
    double capture_value_per_vehicle = 1.0;  // c
    double penalty_coefficient = 100.0;      // c_p
    PenaltyForm penalty_form = PenaltyForm::Abs;
    int n_fcs = 0;  // required station count
    TransformerSpec transformer;
    ArrayXd base_load_kw;      // one entry per interval over the span
    int interval_minutes = 15;
    double span_hours = 24.0;

    void validate(const CoupledNetwork& net) const;
};

struct Evaluation {
    double S = 0.0;  // tco.total - c * captured_volume + penalty
    TcoResult tco;
    CaptureResult capture;
    double penalty = 0.0;
};

double penalty_cost(const Placement& placement, const ObjectiveSpec& spec);

/// Full objective evaluation of one placement. Pure; repeated calls identical.
Evaluation evaluate(const Placement& placement, const CoupledNetwork& net, const Fleet& fleet,
                    const ObjectiveSpec& spec);

/// Precomputed evaluation engine for the hot loop: chain/candidate hits and
/// per-vehicle arrival times are indexed once, after which score() runs with a
/// caller-owned workspace and no allocation. Immutable after construction, so
/// any number of workers may score placements concurrently.
class Evaluator {
  public:
    Evaluator(const CoupledNetwork& net, const Fleet& fleet, const ObjectiveSpec& spec);

    struct Workspace {
        ArrayXd load_kw;
        ArrayXd s;
        ArrayXd hotspot_c;
    };
    Workspace make_workspace() const;

    double score(const Placement& placement, Workspace& ws) const;
    Evaluation evaluate(const Placement& placement) const;

    int num_candidates() const { return num_candidates_; }
    const ObjectiveSpec& spec() const { return spec_; }

  private:
    struct StationHit {
        int candidate;   // index into the candidate set
        int travel_min;  // driving time from the chain origin to this node
    };
    struct ChainInfo {
        std::vector<StationHit> hits;  // candidates on the path, in path order
        int flow = 0;
    };

    const CoupledNetwork& net_;
    const Fleet& fleet_;
    ObjectiveSpec spec_;
    std::vector<ChainInfo> chains_;
    std::vector<std::vector<int>> chain_vehicle_departs_;  // depart_min per chain
    int num_candidates_ = 0;
    int n_intervals_ = 0;
    int session_len_ = 0;  // intervals per charging pulse
};

struct EnumerationResult {
    Placement placement;
    double S = 0.0;
    Evaluation evaluation;
    std::uint64_t evaluated = 0;
};

/// Exact minimizer over all placements with sum(x) == n_fcs, enumerated in
/// lexicographic order (ties keep the first, i.e. lexicographically smallest).
/// Throws ValidationError if C(|K|, n_fcs) exceeds max_enumeration.
EnumerationResult brute_force_optimum(const CoupledNetwork& net, const Fleet& fleet,
                                      const ObjectiveSpec& spec,
                                      std::uint64_t max_enumeration);

std::uint64_t binomial_coefficient(int n, int k);

}  // namespace fcsplan
