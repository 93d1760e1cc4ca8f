#include <fcsplan/ce.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include <fcsplan/network.hpp>

namespace fcsplan::ce {

void CeConfig::validate() const {
    if (n_samples < 10) throw ValidationError("ce: n_samples must be >= 10");
    if (!(rarity > 0.0 && rarity < 1.0)) throw ValidationError("ce: rarity must be in (0,1)");
    if (!(smoothing >= 0.0 && smoothing <= 1.0))
        throw ValidationError("ce: smoothing must be in [0,1]");
    if (max_iterations < 1) throw ValidationError("ce: max_iterations must be >= 1");
    if (!(degeneracy_epsilon > 0.0 && degeneracy_epsilon < 0.5))
        throw ValidationError("ce: degeneracy_epsilon must be in (0, 0.5)");
    if (workers < 0) throw ValidationError("ce: workers must be >= 0");
}

int CeConfig::num_elites() const {
    return static_cast<int>(std::ceil(rarity * n_samples));
}

CeState init_state(int num_candidates, int n_fcs, const CeConfig& config) {
    config.validate();
    if (num_candidates < 1 || n_fcs < 1 || n_fcs > num_candidates)
        throw ValidationError("ce: need 0 < n_fcs <= number of candidates");
    CeState state;
    state.v = ArrayXd::Constant(num_candidates,
                                static_cast<double>(n_fcs) / num_candidates);
    state.iteration = 0;
    return state;
}

BinaryMatrix sample_population(const ArrayXd& v, int n_samples, Rng& rng) {
    const Eigen::Index m = v.size();
    BinaryMatrix samples(n_samples, m);
    for (int i = 0; i < n_samples; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            samples(i, j) = rng.uniform_unit() < v[j] ? 1 : 0;
    return samples;
}

std::vector<int> select_elites(const std::vector<double>& scores, double rarity) {
    const int n = static_cast<int>(scores.size());
    const int n_elites = std::min(n, static_cast<int>(std::ceil(rarity * n)));
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    // stable on (score, sample index): ties across the threshold are resolved
    // deterministically and exactly n_elites are kept
    std::stable_sort(order.begin(), order.end(),
                     [&scores](int a, int b) { return scores[a] < scores[b]; });
    order.resize(n_elites);
    return order;
}

ArrayXd update_parameters(const ArrayXd& v, const BinaryMatrix& samples,
                          const std::vector<int>& elites, double smoothing) {
    if (elites.empty()) throw ValidationError("ce: elite set is empty");
    ArrayXd elite_mean = ArrayXd::Zero(v.size());
    for (const int idx : elites)
        elite_mean += samples.row(idx).cast<double>().transpose();
    elite_mean /= static_cast<double>(elites.size());
    return smoothing * elite_mean + (1.0 - smoothing) * v;
}

bool is_degenerate(const ArrayXd& v, double epsilon) {
    return (v.min(1.0 - v) < epsilon).all();
}

Placement round_vector(const ArrayXd& v) {
    Placement x(v.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) x[j] = v[j] >= 0.5 ? 1 : 0;
    return x;
}

namespace {

/// Scores samples[first..last) into scores[]; each worker owns a workspace.
void score_range(const Evaluator& evaluator, const BinaryMatrix& samples, int first, int last,
                 std::vector<double>& scores) {
    auto ws = evaluator.make_workspace();
    Placement x(samples.cols());
    for (int i = first; i < last; ++i) {
        x = samples.row(i).transpose();
        scores[i] = evaluator.score(x, ws);
    }
}

void score_population(const Evaluator& evaluator, const BinaryMatrix& samples, int workers,
                      std::vector<double>& scores) {
    const int n = static_cast<int>(samples.rows());
    scores.resize(n);
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        score_range(evaluator, samples, 0, n, scores);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int first = w * chunk;
        const int last = std::min(n, first + chunk);
        if (first >= last) break;
        pool.emplace_back(score_range, std::cref(evaluator), std::cref(samples), first, last,
                          std::ref(scores));
    }
    for (auto& t : pool) t.join();
}

}  // namespace

CeResult run(const Evaluator& evaluator, int n_fcs, const CeConfig& config) {
    const int m = evaluator.num_candidates();
    CeState state = init_state(m, n_fcs, config);
    Rng rng(config.seed);

    CeResult result;
    double best_S = std::numeric_limits<double>::infinity();
    Placement best_x;
    std::vector<double> scores;

    for (int t = 1; t <= config.max_iterations; ++t) {
        const BinaryMatrix samples = sample_population(state.v, config.n_samples, rng);
        score_population(evaluator, samples, config.workers, scores);

        for (int i = 0; i < config.n_samples; ++i) {
            if (scores[i] < best_S) {
                best_S = scores[i];
                best_x = samples.row(i).transpose();
            }
        }

        const std::vector<int> elites = select_elites(scores, config.rarity);
        double elite_sum = 0.0;
        for (const int idx : elites) elite_sum += scores[idx];
        state.v = update_parameters(state.v, samples, elites, config.smoothing);
        state.iteration = t;

        IterationStats stats;
        stats.iteration = t;
        stats.best_S = best_S;
        stats.mean_elite_S = elite_sum / static_cast<double>(elites.size());
        stats.v = state.v;
        state.history.push_back(std::move(stats));

        if (is_degenerate(state.v, config.degeneracy_epsilon)) {
            result.converged = true;
            break;
        }
    }

    result.iterations = state.iteration;
    result.history = std::move(state.history);

    // The degenerate vector is the algorithm's answer; keep the best sample
    // ever scored when smoothing drifted the rounded vector past it.
    const Placement rounded = round_vector(state.v);
    auto ws = evaluator.make_workspace();
    const double rounded_S = evaluator.score(rounded, ws);
    if (rounded_S <= best_S || best_x.size() == 0) {
        result.placement = rounded;
        result.S = rounded_S;
    } else {
        result.placement = best_x;
        result.S = best_S;
    }
    return result;
}

}  // namespace fcsplan::ce
