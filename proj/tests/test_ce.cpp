#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <fcsplan/ce.hpp>

#include "test_support.hpp"

using namespace fcsplan;

namespace {

ce::CeConfig small_config(std::uint64_t seed, int n_samples = 400) {
    ce::CeConfig cfg;
    cfg.n_samples = n_samples;
    cfg.seed = seed;
    cfg.workers = 1;
    return cfg;
}

/// Indicator-mean parameter update: average of all samples whose score is
/// within the elite threshold, then smoothed. Test-only reference.
ArrayXd indicator_mean_update(const ArrayXd& v, const BinaryMatrix& samples,
                              const std::vector<double>& scores, double gamma, double alpha) {
    ArrayXd numer = ArrayXd::Zero(v.size());
    double denom = 0.0;
    for (Eigen::Index i = 0; i < samples.rows(); ++i) {
        if (scores[i] <= gamma) {
            numer += samples.row(i).cast<double>().transpose();
            denom += 1.0;
        }
    }
    return alpha * (numer / denom) + (1.0 - alpha) * v;
}

/// Sampled cross-entropy objective: mean log-likelihood of the elite samples
/// under Bernoulli(v). Test-only reference.
double cross_entropy_objective(const ArrayXd& v, const BinaryMatrix& samples,
                               const std::vector<int>& elites) {
    double total = 0.0;
    for (const int idx : elites) {
        for (Eigen::Index j = 0; j < v.size(); ++j) {
            const double p = samples(idx, j) ? v[j] : 1.0 - v[j];
            if (p <= 0.0) return -std::numeric_limits<double>::infinity();
            total += std::log(p);
        }
    }
    return total / static_cast<double>(samples.rows());
}

ObjectiveSpec sub_benchmark_objective(CoupledNetwork& net, int n_fcs,
                                      const std::vector<NodeId>& candidates) {
    net.candidates = candidates;
    net.validate();
    ObjectiveSpec spec;
    spec.n_fcs = n_fcs;
    spec.base_load_kw = ArrayXd::Constant(96, 1000.0);
    return spec;
}

}  // namespace

TEST_CASE("init_state spreads the station budget uniformly") {
    const ce::CeConfig cfg = small_config(1);
    CHECK((ce::init_state(25, 5, cfg).v == 0.2).all());
    CHECK((ce::init_state(25, 10, cfg).v == 0.4).all());
    CHECK((ce::init_state(4, 4, cfg).v == 1.0).all());
    CHECK_THROWS_AS(ce::init_state(4, 5, cfg), ValidationError);
    CHECK_THROWS_AS(ce::init_state(4, 0, cfg), ValidationError);
}

TEST_CASE("sampling respects degenerate and intermediate probabilities") {
    Rng rng(99);
    const BinaryMatrix zeros = ce::sample_population(ArrayXd::Zero(8), 50, rng);
    CHECK((zeros == 0).all());
    const BinaryMatrix ones = ce::sample_population(ArrayXd::Ones(8), 50, rng);
    CHECK((ones == 1).all());

    const ArrayXd v = ArrayXd::Constant(25, 0.2);
    Rng pop_rng(7);
    const BinaryMatrix pop = ce::sample_population(v, 2000, pop_rng);
    const double sigma = std::sqrt(0.2 * 0.8 / 2000.0);
    for (int j = 0; j < 25; ++j) {
        const double mean = pop.col(j).cast<double>().mean();
        CHECK(std::abs(mean - 0.2) <= 3.0 * sigma);
    }
}

TEST_CASE("elite selection keeps exactly ceil(rho N) best, stable under ties") {
    std::vector<double> scores(2000);
    std::mt19937_64 gen(5);
    for (int i = 0; i < 2000; ++i) scores[i] = static_cast<double>(i + 1);
    std::shuffle(scores.begin(), scores.end(), gen);
    const std::vector<int> elites = ce::select_elites(scores, 0.05);
    REQUIRE(elites.size() == 100);
    // oracle: a full sort
    std::vector<double> sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    for (const int idx : elites) CHECK(scores[idx] <= sorted[99]);

    const std::vector<double> equal(2000, 7.0);
    const std::vector<int> tied = ce::select_elites(equal, 0.05);
    for (int i = 0; i < 100; ++i) CHECK(tied[i] == i);

    CHECK(ce::select_elites(std::vector<double>(10, 1.0), 0.05).size() == 1);
}

TEST_CASE("parameter update arithmetic") {
    BinaryMatrix samples(2, 3);
    samples << 1, 0, 1, 1, 0, 1;
    const ArrayXd v = ArrayXd::Constant(3, 0.2);

    // alpha = 1 with identical elites: instant degeneracy at that vector
    const ArrayXd full = ce::update_parameters(v, samples, {0, 1}, 1.0);
    CHECK(full[0] == 1.0);
    CHECK(full[1] == 0.0);
    CHECK(full[2] == 1.0);
    CHECK(ce::is_degenerate(full, 0.01));

    const ArrayXd frozen = ce::update_parameters(v, samples, {0, 1}, 0.0);
    CHECK((frozen == 0.2).all());

    BinaryMatrix two(2, 2);
    two << 1, 0, 1, 0;
    const ArrayXd blended = ce::update_parameters(ArrayXd::Constant(2, 0.2), two, {0, 1}, 0.7);
    CHECK(blended[0] == doctest::Approx(0.76).epsilon(1e-15));
    CHECK(blended[1] == doctest::Approx(0.06).epsilon(1e-15));
}

TEST_CASE("update equals the indicator-mean form at the elite threshold") {
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 200, m = 12;
        const ArrayXd v = 0.5 * (ArrayXd::Random(m) * 0.8 + 1.0).abs();  // in (0, 0.9)
        Rng rng(trial + 1);
        const BinaryMatrix samples = ce::sample_population(v, n, rng);
        std::vector<double> scores(n);
        for (int i = 0; i < n; ++i) scores[i] = static_cast<double>(i) + 1.0;
        std::shuffle(scores.begin(), scores.end(), gen);  // distinct scores

        const auto elites = ce::select_elites(scores, 0.05);
        double gamma = -std::numeric_limits<double>::infinity();
        for (const int idx : elites) gamma = std::max(gamma, scores[idx]);

        const ArrayXd direct = indicator_mean_update(v, samples, scores, gamma, 0.7);
        const ArrayXd update = ce::update_parameters(v, samples, elites, 0.7);
        for (int j = 0; j < m; ++j) CHECK(std::abs(update[j] - direct[j]) <= 1e-12);
    }
}

TEST_CASE("the closed-form update maximizes the sampled cross-entropy objective") {
    Rng rng(31);
    const int n = 100, m = 10;
    const ArrayXd v = ArrayXd::Constant(m, 0.3);
    const BinaryMatrix samples = ce::sample_population(v, n, rng);
    std::vector<double> scores(n);
    for (int i = 0; i < n; ++i) scores[i] = static_cast<double>((i * 37) % n);
    const auto elites = ce::select_elites(scores, 0.1);

    // unsmoothed update: the elite mean itself
    const ArrayXd vstar = ce::update_parameters(v, samples, elites, 1.0);
    const double best = cross_entropy_objective(vstar, samples, elites);

    std::mt19937_64 gen(44);
    std::uniform_real_distribution<double> delta(-0.2, 0.2);
    for (int trial = 0; trial < 1000; ++trial) {
        ArrayXd perturbed = vstar;
        for (int j = 0; j < m; ++j)
            perturbed[j] = std::clamp(perturbed[j] + delta(gen), 0.0, 1.0);
        CHECK(cross_entropy_objective(perturbed, samples, elites) <= best + 1e-12);
    }
}

TEST_CASE("degeneracy detection and rounding") {
    ArrayXd v(3);
    v << 0.001, 0.995, 0.0;
    CHECK(ce::is_degenerate(v, 0.01));
    v[1] = 0.9;
    CHECK_FALSE(ce::is_degenerate(v, 0.01));
    const Placement x = ce::round_vector(v);
    CHECK(x[0] == 0);
    CHECK(x[1] == 1);
    CHECK(x[2] == 0);
}

TEST_CASE("one candidate converges immediately") {
    auto net = testing::line_network(2);
    CoupledNetwork one = net;
    one.candidates = {1};
    one.validate();
    FleetSpec fs;
    fs.n_vehicles = 5;
    fs.seed = 2;
    const Fleet fleet = generate_fleet(one, fs);
    ObjectiveSpec spec;
    spec.n_fcs = 1;
    spec.base_load_kw = ArrayXd::Constant(96, 500.0);
    const Evaluator evaluator(one, fleet, spec);

    const ce::CeResult result = ce::run(evaluator, 1, small_config(3, 50));
    CHECK(result.converged);
    CHECK(result.iterations <= 2);
    CHECK(result.placement[0] == 1);
}

TEST_CASE("CE recovers the enumeration optimum on a 10-candidate instance") {
    CoupledNetwork net = testing::benchmark_network();
    ObjectiveSpec spec =
        sub_benchmark_objective(net, 3, {1, 3, 7, 8, 9, 13, 17, 20, 22, 25});
    FleetSpec fs = testing::benchmark_fleet_spec();
    fs.n_vehicles = 200;
    const Fleet fleet = generate_fleet(net, fs);
    const Evaluator evaluator(net, fleet, spec);

    const EnumerationResult exact = brute_force_optimum(net, fleet, spec, 1000);
    const ce::CeResult result = ce::run(evaluator, 3, small_config(12, 500));
    CHECK(result.converged);
    CHECK(result.S == doctest::Approx(exact.S).epsilon(1e-12));
}

TEST_CASE("full-run determinism, independent of the worker count") {
    CoupledNetwork net = testing::benchmark_network();
    ObjectiveSpec spec = sub_benchmark_objective(net, 2, {3, 8, 9, 13, 20, 22});
    FleetSpec fs = testing::benchmark_fleet_spec();
    fs.n_vehicles = 100;
    const Fleet fleet = generate_fleet(net, fs);
    const Evaluator evaluator(net, fleet, spec);

    ce::CeConfig cfg = small_config(77, 200);
    const ce::CeResult a = ce::run(evaluator, 2, cfg);
    const ce::CeResult b = ce::run(evaluator, 2, cfg);
    cfg.workers = 3;
    const ce::CeResult c = ce::run(evaluator, 2, cfg);

    REQUIRE(a.history.size() == b.history.size());
    REQUIRE(a.history.size() == c.history.size());
    for (std::size_t t = 0; t < a.history.size(); ++t) {
        CHECK(a.history[t].best_S == b.history[t].best_S);
        CHECK(a.history[t].best_S == c.history[t].best_S);
        CHECK((a.history[t].v == b.history[t].v).all());
        CHECK((a.history[t].v == c.history[t].v).all());
    }
    CHECK(a.S == c.S);
    CHECK((a.placement == c.placement).all());
}

TEST_CASE("run invariants: monotone best, probabilities in bounds") {
    CoupledNetwork net = testing::benchmark_network();
    ObjectiveSpec spec = sub_benchmark_objective(net, 2, {3, 8, 9, 13, 20, 22});
    FleetSpec fs = testing::benchmark_fleet_spec();
    fs.n_vehicles = 100;
    const Fleet fleet = generate_fleet(net, fs);
    const Evaluator evaluator(net, fleet, spec);

    const ce::CeResult result = ce::run(evaluator, 2, small_config(5, 200));
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& it : result.history) {
        CHECK(it.best_S <= prev);
        prev = it.best_S;
        CHECK((it.v >= 0.0).all());
        CHECK((it.v <= 1.0).all());
    }
    CHECK(result.S <= result.history.back().best_S);
}

TEST_CASE("non-convergence is flagged, with the best-so-far answer") {
    CoupledNetwork net = testing::benchmark_network();
    ObjectiveSpec spec = sub_benchmark_objective(net, 2, {3, 8, 9, 13, 20, 22});
    FleetSpec fs = testing::benchmark_fleet_spec();
    fs.n_vehicles = 50;
    const Fleet fleet = generate_fleet(net, fs);
    const Evaluator evaluator(net, fleet, spec);

    ce::CeConfig cfg = small_config(8, 100);
    cfg.max_iterations = 1;
    const ce::CeResult result = ce::run(evaluator, 2, cfg);
    CHECK_FALSE(result.converged);
    CHECK(result.iterations == 1);
    CHECK(result.placement.size() == 6);
    CHECK(std::isfinite(result.S));
}

TEST_CASE("config validation") {
    ce::CeConfig cfg;
    cfg.n_samples = 5;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = ce::CeConfig{};
    cfg.rarity = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = ce::CeConfig{};
    cfg.degeneracy_epsilon = 0.6;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = ce::CeConfig{};
    CHECK(cfg.num_elites() == 100);
}
