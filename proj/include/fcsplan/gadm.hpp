#pragma once

#include <fcsplan/demand.hpp>
#include <fcsplan/fcm.hpp>
#include <fcsplan/types.hpp>

namespace fcsplan {

/// Exponential thermal response parameters of the substation transformer.
struct ThermalSpec {
    double ambient_c = 30.0;
    double hotspot_rise_rated_c = 35.0;  // hot-spot over top-oil at rated load
    double top_oil_rise_rated_c = 50.0;  // top-oil over ambient at rated load
    double oil_exponent_n = 0.9;
    double winding_exponent_m = 0.8;
    double oil_time_constant_min = 180.0;
};

struct TransformerSpec {
    double rated_kva = 2500.0;
    double capital_cost = 200000.0;
    double no_load_loss_kw = 10.0;
    double load_loss_rated_kw = 50.0;
    double energy_price_per_kwh = 0.10;
    ThermalSpec thermal;
    double insulation_life_hours = 180000.0;

    void validate() const;

    /// Ratio of load loss to no-load loss at rated load.
    double loss_ratio() const { return load_loss_rated_kw / no_load_loss_kw; }
};

/// Per-unit transformer loading over the evaluation span.
struct LoadingProfile {
    int interval_minutes = 15;
    ArrayXd s;  // load kVA / rated kVA, >= 0

    double span_hours() const {
        return static_cast<double>(s.size()) * interval_minutes / 60.0;
    }
};

struct TcoResult {
    double loss_of_life = 0.0;  // fraction of insulation life consumed over the span
    double aging_cost = 0.0;
    double no_load_loss_cost = 0.0;
    double load_loss_cost = 0.0;
    double total = 0.0;  // exact sum of the three components
};

/// Base load plus the captured vehicles' charging pulses, per-unitized on the
/// transformer rating. Pulses wrap modulo the profile length.
LoadingProfile build_loading(const ArrayXd& base_load_kw, int interval_minutes,
                             const CaptureResult& capture, const Fleet& fleet,
                             const TransformerSpec& spec);

/// Hot-spot temperature trace. Top-oil rise follows a first-order lag toward
/// its ultimate value for the interval's loading; the initial top-oil state is
/// the steady state for s(0). Hot-spot rise tracks s^(2m) instantaneously.
ArrayXd hotspot_temperature(const LoadingProfile& profile, const TransformerSpec& spec);

/// In-place variant for hot loops; `out` is resized to match s.
void hotspot_temperature_into(const ArrayXd& s, int interval_minutes, const TransformerSpec& spec,
                              ArrayXd& out);

/// Ultimate (steady-state) top-oil rise above ambient at per-unit loading s.
double top_oil_rise_ultimate(double s, const TransformerSpec& spec);

/// Steady-state hot-spot temperature at constant per-unit loading s.
double hotspot_steady_state(double s, const TransformerSpec& spec);

/// Relative aging rate: unity at the 110 degC reference hot-spot.
double aging_acceleration_factor(double hotspot_c);

/// Fraction of insulation life consumed by the given hot-spot trace.
double loss_of_life(const ArrayXd& hotspots_c, int interval_minutes,
                    const TransformerSpec& spec);

/// Total cost of ownership over the span: aging + no-load-loss energy cost +
/// load-loss energy cost (quadratic in loading).
TcoResult tco(const LoadingProfile& profile, const TransformerSpec& spec, double span_hours);

/// Allocation-free core of tco(); hotspot_buffer is reused between calls. All
/// reductions are sequential so repeated evaluations are bit-identical.
TcoResult tco_with_buffer(const ArrayXd& s, int interval_minutes, const TransformerSpec& spec,
                          double span_hours, ArrayXd& hotspot_buffer);

}  // namespace fcsplan
