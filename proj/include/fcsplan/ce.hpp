#pragma once

#include <cstdint>
#include <vector>

#include <fcsplan/objective.hpp>
#include <fcsplan/rng.hpp>
#include <fcsplan/types.hpp>

namespace fcsplan::ce {

struct CeConfig {
    int n_samples = 2000;          // N
    double rarity = 0.05;          // rho: fraction of samples kept as elites
    double smoothing = 0.7;        // alpha: blend toward the elite mean
    int max_iterations = 200;
    double degeneracy_epsilon = 0.01;
    std::uint64_t seed = 1;
    int workers = 0;  // 0 = hardware concurrency

    void validate() const;
    int num_elites() const;  // ceil(rho * N)
};

struct IterationStats {
    int iteration = 0;
    double best_S = 0.0;        // best score seen so far (cumulative)
    double mean_elite_S = 0.0;  // mean score of this iteration's elites
    ArrayXd v;                  // probability vector after the update
};

struct CeState {
    ArrayXd v;  // Bernoulli parameter per candidate, in [0,1]
    int iteration = 0;
    std::vector<IterationStats> history;
};

struct CeResult {
    Placement placement;
    double S = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<IterationStats> history;
};

/// v_j = n_fcs / M for all j, iteration 0, empty history.
CeState init_state(int num_candidates, int n_fcs, const CeConfig& config);

/// N i.i.d. samples, each component Bernoulli(v_j). Draw order is fixed
/// (sample-major, component-minor) so the stream is worker-independent.
BinaryMatrix sample_population(const ArrayXd& v, int n_samples, Rng& rng);

/// Indices of the ceil(rho*N) smallest scores, stable on (score, index).
std::vector<int> select_elites(const std::vector<double>& scores, double rarity);

/// Smoothed update: alpha * columnwise mean of the elite samples + (1-alpha) * v.
ArrayXd update_parameters(const ArrayXd& v, const BinaryMatrix& samples,
                          const std::vector<int>& elites, double smoothing);

/// True once every component has committed to 0 or 1 within epsilon.
bool is_degenerate(const ArrayXd& v, double epsilon);

/// Round v to the nearest binary vector (0.5 rounds up).
Placement round_vector(const ArrayXd& v);

/// Full optimizer loop: sample, evaluate, select, update, until the parameter
/// vector degenerates or max_iterations is hit. Returns the better of the
/// rounded degenerate vector and the best sample ever scored. Evaluations run
/// on a worker pool; results merge in sample-index order, so the outcome is
/// independent of the worker count.
CeResult run(const Evaluator& evaluator, int n_fcs, const CeConfig& config);

}  // namespace fcsplan::ce
