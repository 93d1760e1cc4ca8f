#include <doctest.h>

#include <cmath>
#include <random>

#include <fcsplan/gadm.hpp>

#include "oracles.hpp"
#include "test_support.hpp"

using namespace fcsplan;

namespace {

LoadingProfile make_profile(const ArrayXd& s, int interval_minutes = 15) {
    LoadingProfile p;
    p.interval_minutes = interval_minutes;
    p.s = s;
    return p;
}

CaptureResult one_session_capture(int start_min) {
    CaptureResult capture;
    capture.captured_vehicles.push_back({0, 1, start_min});
    return capture;
}

}  // namespace

TEST_CASE("build_loading with no captured vehicles is the per-unit base load") {
    TransformerSpec xf;
    const ArrayXd base = ArrayXd::Constant(96, 1250.0);
    Fleet fleet;
    const LoadingProfile profile = build_loading(base, 15, CaptureResult{}, fleet, xf);
    CHECK((profile.s == 0.5).all());
}

TEST_CASE("one 150 kW session lifts exactly its hour") {
    TransformerSpec xf;
    xf.rated_kva = 2000.0;
    Fleet fleet;
    fleet.spec.charge_energy_kwh = 100.0;  // 40 min at 150 kW: one 60-min interval
    fleet.spec.charge_power_kw = 150.0;
    const ArrayXd base = ArrayXd::Constant(24, 1000.0);
    const LoadingProfile profile =
        build_loading(base, 60, one_session_capture(8 * 60), fleet, xf);
    for (int t = 0; t < 24; ++t) CHECK(profile.s[t] == (t == 8 ? 0.575 : 0.5));
}

TEST_CASE("benchmark loading satisfies the energy bookkeeping identity") {
    const CoupledNetwork& net = testing::benchmark_network();
    const Fleet& fleet = testing::benchmark_fleet();
    Placement x = Placement::Zero(25);
    for (const NodeId node : {8, 9, 13, 20, 22}) x[net.candidate_index(node)] = 1;
    const CaptureResult capture = evaluate_capture(net, fleet, x);

    TransformerSpec xf;
    const ArrayXd base = ArrayXd::Constant(96, 1000.0);
    const LoadingProfile profile = build_loading(base, 15, capture, fleet, xf);

    const double total_kwh = (profile.s * xf.rated_kva).sum() * 0.25;
    const double base_kwh = base.sum() * 0.25;
    const int n_captured = static_cast<int>(capture.captured_vehicles.size());
    // each session delivers the quantized energy exactly
    const double quantum = fleet.spec.charge_power_kw * 0.25;
    const double session_kwh =
        session_intervals(fleet.spec.charge_energy_kwh, fleet.spec.charge_power_kw, 15) * quantum;
    CHECK(total_kwh == doctest::Approx(base_kwh + n_captured * session_kwh).epsilon(1e-12));
    CHECK(std::abs(session_kwh - fleet.spec.charge_energy_kwh) <= quantum);
}

TEST_CASE("steady-state hot-spot at rated load is ambient plus rated rises") {
    TransformerSpec xf;
    // constant rated load: initial state is already the steady state
    const ArrayXd hs = hotspot_temperature(make_profile(ArrayXd::Constant(192, 1.0)), xf);
    CHECK(hs[0] == doctest::Approx(115.0).epsilon(1e-12));
    CHECK(hs[hs.size() - 1] == doctest::Approx(115.0).epsilon(1e-12));

    // approached from below: within 0.1 degC after 8 oil time constants (24 h)
    ArrayXd s(192);
    s.head(96) = 0.5;
    s.tail(96) = 1.0;
    const ArrayXd hs2 = hotspot_temperature(make_profile(s), xf);
    CHECK(std::abs(hs2[191] - 115.0) < 0.1);
    CHECK(hs2[96] < 114.0);  // still in transient right after the step
}

TEST_CASE("zero load settles at the formula value") {
    TransformerSpec xf;
    const double expected =
        30.0 + 50.0 * std::pow(1.0 / (1.0 + 5.0), 0.9);  // R = 50/10
    const ArrayXd hs = hotspot_temperature(make_profile(ArrayXd::Zero(96)), xf);
    CHECK(hs[95] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("top-oil step response matches the closed-form solution") {
    TransformerSpec xf;
    const int pre = 48;
    ArrayXd s(pre + 96);
    s.head(pre) = 0.5;
    s.tail(96) = 1.0;
    const ArrayXd hs = hotspot_temperature(make_profile(s), xf);

    const double initial = top_oil_rise_ultimate(0.5, xf);
    const double ultimate = top_oil_rise_ultimate(1.0, xf);
    const double hotspot_rise = 35.0;  // s = 1 after the step
    for (int k = 1; k <= 96; ++k) {
        const double top_oil = oracles::step_response(initial, ultimate, k * 15.0,
                                                      xf.thermal.oil_time_constant_min);
        const double expected = 30.0 + top_oil + hotspot_rise;
        CHECK(hs[pre - 1 + k] == doctest::Approx(expected).epsilon(1e-9));
        CHECK(std::abs(hs[pre - 1 + k] - expected) < 0.1);
    }
}

TEST_CASE("aging acceleration anchors") {
    CHECK(aging_acceleration_factor(110.0) == 1.0);
    CHECK(aging_acceleration_factor(110.0) == oracles::arrhenius(110.0));
    // ~7 degC above reference doubles the aging rate
    CHECK(aging_acceleration_factor(116.0) == doctest::Approx(oracles::arrhenius(116.0)));
    CHECK(oracles::arrhenius(116.0) == doctest::Approx(1.8295).epsilon(1e-3));
    CHECK(oracles::arrhenius(117.0) > 1.9);
    CHECK(oracles::arrhenius(117.0) < 2.1);
}

TEST_CASE("loss of life at the reference temperature consumes clock time") {
    TransformerSpec xf;  // insulation life 180000 h
    const ArrayXd hs = ArrayXd::Constant(96, 110.0);
    CHECK(loss_of_life(hs, 15, xf) == doctest::Approx(24.0 / 180000.0).epsilon(1e-12));

    const ArrayXd hs116 = ArrayXd::Constant(96, 116.0);
    const double ratio = loss_of_life(hs116, 15, xf) / loss_of_life(hs, 15, xf);
    CHECK(ratio == doctest::Approx(oracles::arrhenius(116.0)).epsilon(1e-9));

    CHECK(loss_of_life(ArrayXd(), 15, xf) == 0.0);
}

TEST_CASE("aging is additive over disjoint spans") {
    TransformerSpec xf;
    std::mt19937_64 gen(31);
    ArrayXd hs(192);
    for (int t = 0; t < 192; ++t)
        hs[t] = 60.0 + static_cast<double>(gen() % 700) / 10.0;  // 60..130 degC
    const double full = loss_of_life(hs, 15, xf);
    const double first = loss_of_life(hs.head(100).eval(), 15, xf);
    const double second = loss_of_life(hs.tail(92).eval(), 15, xf);
    CHECK(std::abs(full - (first + second)) <= 1e-12 * full);
}

TEST_CASE("tco components follow the cost identities") {
    TransformerSpec xf;  // no-load 10 kW, load loss 50 kW, price 0.1

    const TcoResult zero = tco(make_profile(ArrayXd::Zero(96)), xf, 24.0);
    CHECK(zero.no_load_loss_cost == doctest::Approx(24.0).epsilon(1e-12));
    CHECK(zero.load_loss_cost == 0.0);
    CHECK(zero.total == zero.aging_cost + zero.no_load_loss_cost + zero.load_loss_cost);

    const TcoResult rated = tco(make_profile(ArrayXd::Constant(96, 1.0)), xf, 24.0);
    CHECK(rated.load_loss_cost == doctest::Approx(50.0 * 24.0 * 0.1).epsilon(1e-12));
    CHECK(rated.total == rated.aging_cost + rated.no_load_loss_cost + rated.load_loss_cost);
}

TEST_CASE("doubling the loading quadruples the load-loss cost") {
    TransformerSpec xf;
    std::mt19937_64 gen(8);
    for (int trial = 0; trial < 20; ++trial) {
        ArrayXd s(96);
        for (int t = 0; t < 96; ++t) s[t] = static_cast<double>(gen() % 100) / 100.0;
        const TcoResult base = tco(make_profile(s), xf, 24.0);
        const TcoResult doubled = tco(make_profile((2.0 * s).eval()), xf, 24.0);
        CHECK(doubled.load_loss_cost == doctest::Approx(4.0 * base.load_loss_cost).epsilon(1e-12));
    }
}

TEST_CASE("pointwise-increasing loading never lowers aging or cost") {
    TransformerSpec xf;
    std::mt19937_64 gen(4242);
    for (int trial = 0; trial < 20; ++trial) {
        ArrayXd lo(96), hi(96);
        for (int t = 0; t < 96; ++t) {
            lo[t] = static_cast<double>(gen() % 90) / 100.0;
            hi[t] = lo[t] + static_cast<double>(gen() % 40) / 100.0;
        }
        const TcoResult a = tco(make_profile(lo), xf, 24.0);
        const TcoResult b = tco(make_profile(hi), xf, 24.0);
        CHECK(b.loss_of_life >= a.loss_of_life);
        CHECK(b.load_loss_cost >= a.load_loss_cost);
        CHECK(b.total >= a.total);
    }
}

TEST_CASE("a spike ages the transformer more than the same mean held flat") {
    TransformerSpec xf;
    const ArrayXd flat = ArrayXd::Constant(96, 0.6);

    ArrayXd spike = ArrayXd::Constant(96, (0.6 * 96.0 - 1.2 * 8.0) / 88.0);
    spike.segment(72, 8) = 1.2;  // two hours at 1.2 pu, 18:00-20:00
    CHECK(spike.mean() == doctest::Approx(0.6).epsilon(1e-12));

    const double lol_flat =
        loss_of_life(hotspot_temperature(make_profile(flat), xf), 15, xf);
    const double lol_spike =
        loss_of_life(hotspot_temperature(make_profile(spike), xf), 15, xf);
    CHECK(lol_spike > lol_flat);
    CHECK(lol_spike / lol_flat > 2.0);
}

TEST_CASE("tco validates the span and build_loading validates its grid") {
    TransformerSpec xf;
    CHECK_THROWS_AS(tco(make_profile(ArrayXd::Zero(96)), xf, 12.0), ValidationError);
    Fleet fleet;
    CHECK_THROWS_AS(build_loading(ArrayXd(), 15, CaptureResult{}, fleet, xf), ValidationError);
    CHECK_THROWS_AS(build_loading(ArrayXd::Zero(96), 7, CaptureResult{}, fleet, xf),
                    ValidationError);
}

TEST_CASE("transformer spec validation") {
    TransformerSpec xf;
    xf.thermal.oil_exponent_n = 2.5;
    CHECK_THROWS_AS(xf.validate(), ValidationError);
    xf = TransformerSpec{};
    xf.rated_kva = 0.0;
    CHECK_THROWS_AS(xf.validate(), ValidationError);
    xf = TransformerSpec{};
    CHECK_NOTHROW(xf.validate());
}
