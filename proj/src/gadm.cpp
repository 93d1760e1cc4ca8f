#include <fcsplan/gadm.hpp>

#include <cmath>

namespace fcsplan {

namespace {
// Arrhenius reference: unity aging rate at 110 degC hot-spot, 15000 K activation.
constexpr double kActivationK = 15000.0;
constexpr double kReferenceK = 383.0;  // 110 degC
constexpr double kCelsiusToKelvin = 273.0;
}  // namespace

void TransformerSpec::validate() const {
    if (!(rated_kva > 0.0)) throw ValidationError("transformer: rated_kva must be > 0");
    if (!(capital_cost > 0.0)) throw ValidationError("transformer: capital_cost must be > 0");
    if (!(no_load_loss_kw > 0.0)) throw ValidationError("transformer: no_load_loss_kw must be > 0");
    if (!(load_loss_rated_kw > 0.0))
        throw ValidationError("transformer: load_loss_rated_kw must be > 0");
    if (!(energy_price_per_kwh > 0.0))
        throw ValidationError("transformer: energy_price_per_kwh must be > 0");
    if (!(insulation_life_hours > 0.0))
        throw ValidationError("transformer: insulation_life_hours must be > 0");
    if (!(thermal.hotspot_rise_rated_c > 0.0) || !(thermal.top_oil_rise_rated_c > 0.0))
        throw ValidationError("transformer: rated temperature rises must be > 0");
    if (!(thermal.oil_time_constant_min > 0.0))
        throw ValidationError("transformer: oil_time_constant_min must be > 0");
    if (!(thermal.oil_exponent_n > 0.0 && thermal.oil_exponent_n <= 2.0))
        throw ValidationError("transformer: oil exponent must be in (0, 2]");
    if (!(thermal.winding_exponent_m > 0.0 && thermal.winding_exponent_m <= 2.0))
        throw ValidationError("transformer: winding exponent must be in (0, 2]");
}

LoadingProfile build_loading(const ArrayXd& base_load_kw, int interval_minutes,
                             const CaptureResult& capture, const Fleet& fleet,
                             const TransformerSpec& spec) {
    if (base_load_kw.size() == 0) throw ValidationError("build_loading: empty base load");
    if (interval_minutes <= 0 || 1440 % interval_minutes != 0)
        throw ValidationError("build_loading: interval must divide 1440");

    const int n = static_cast<int>(base_load_kw.size());
    ArrayXd load = base_load_kw;
    const int len = session_intervals(fleet.spec.charge_energy_kwh, fleet.spec.charge_power_kw,
                                      interval_minutes);
    for (const CapturedVehicle& cv : capture.captured_vehicles) {
        const int start = ((cv.charge_start_min % 1440) + 1440) % 1440 / interval_minutes;
        for (int k = 0; k < len; ++k) load[(start + k) % n] += fleet.spec.charge_power_kw;
    }

    LoadingProfile profile;
    profile.interval_minutes = interval_minutes;
    profile.s = load / spec.rated_kva;
    return profile;
}

double top_oil_rise_ultimate(double s, const TransformerSpec& spec) {
    const double r = spec.loss_ratio();
    return spec.thermal.top_oil_rise_rated_c *
           std::pow((1.0 + r * s * s) / (1.0 + r), spec.thermal.oil_exponent_n);
}

double hotspot_steady_state(double s, const TransformerSpec& spec) {
    return spec.thermal.ambient_c + top_oil_rise_ultimate(s, spec) +
           spec.thermal.hotspot_rise_rated_c * std::pow(s, 2.0 * spec.thermal.winding_exponent_m);
}

void hotspot_temperature_into(const ArrayXd& s, int interval_minutes, const TransformerSpec& spec,
                              ArrayXd& out) {
    const Eigen::Index n = s.size();
    if (n == 0) throw ValidationError("hotspot_temperature: empty profile");
    out.resize(n);

    // Exact first-order response for piecewise-constant loading.
    const double decay =
        std::exp(-static_cast<double>(interval_minutes) / spec.thermal.oil_time_constant_min);
    const double two_m = 2.0 * spec.thermal.winding_exponent_m;

    double top_oil = top_oil_rise_ultimate(s[0], spec);  // steady state at s(0)
    out[0] = spec.thermal.ambient_c + top_oil +
             spec.thermal.hotspot_rise_rated_c * std::pow(s[0], two_m);
    for (Eigen::Index t = 1; t < n; ++t) {
        const double ultimate = top_oil_rise_ultimate(s[t], spec);
        top_oil = ultimate + (top_oil - ultimate) * decay;
        out[t] = spec.thermal.ambient_c + top_oil +
                 spec.thermal.hotspot_rise_rated_c * std::pow(s[t], two_m);
    }
}

ArrayXd hotspot_temperature(const LoadingProfile& profile, const TransformerSpec& spec) {
    ArrayXd hotspot;
    hotspot_temperature_into(profile.s, profile.interval_minutes, spec, hotspot);
    return hotspot;
}

double aging_acceleration_factor(double hotspot_c) {
    return std::exp(kActivationK / kReferenceK - kActivationK / (hotspot_c + kCelsiusToKelvin));
}

double loss_of_life(const ArrayXd& hotspots_c, int interval_minutes, const TransformerSpec& spec) {
    const double dt_hours = interval_minutes / 60.0;
    double aged_hours = 0.0;
    for (Eigen::Index t = 0; t < hotspots_c.size(); ++t)
        aged_hours += aging_acceleration_factor(hotspots_c[t]) * dt_hours;
    return aged_hours / spec.insulation_life_hours;
}

TcoResult tco_with_buffer(const ArrayXd& s, int interval_minutes, const TransformerSpec& spec,
                          double span_hours, ArrayXd& hotspot_buffer) {
    hotspot_temperature_into(s, interval_minutes, spec, hotspot_buffer);

    const double dt_hours = interval_minutes / 60.0;
    double sum_s2 = 0.0;
    for (Eigen::Index t = 0; t < s.size(); ++t) sum_s2 += s[t] * s[t];

    TcoResult result;
    result.loss_of_life = loss_of_life(hotspot_buffer, interval_minutes, spec);
    result.aging_cost = result.loss_of_life * spec.capital_cost;
    result.no_load_loss_cost = spec.no_load_loss_kw * span_hours * spec.energy_price_per_kwh;
    result.load_loss_cost =
        spec.load_loss_rated_kw * (sum_s2 * dt_hours) * spec.energy_price_per_kwh;
    result.total = result.aging_cost + result.no_load_loss_cost + result.load_loss_cost;
    return result;
}

TcoResult tco(const LoadingProfile& profile, const TransformerSpec& spec, double span_hours) {
    if (std::abs(profile.span_hours() - span_hours) > 1e-9)
        throw ValidationError("tco: profile does not cover the requested span");
    ArrayXd hotspot_buffer;
    return tco_with_buffer(profile.s, profile.interval_minutes, spec, span_hours, hotspot_buffer);
}

}  // namespace fcsplan
