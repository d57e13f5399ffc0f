#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vlc/led.hpp"
#include "vlc/ofdm.hpp"

namespace vlc {

// Degree-2 least-squares fit y ~ a x^2 + b x + c, solved by Householder QR.
struct PolyFit2 {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double correlation = 0.0; // R of the fit

    double eval(double x) const { return (a * x + b) * x + c; }
};

PolyFit2 polyfit2(const std::vector<double>& xs, const std::vector<double>& ys);

enum class DpdMode { None, Fixed, LuminousFeedback };

// Calibrated commanded-current -> drive-current mapping.
struct DpdCurve {
    double c2 = 0.0;
    double c1 = 1.0;
    double c0 = 0.0;            // drive at I = 0; equals the bias current
    double bias_current = 0.0;
    DpdMode source_mode = DpdMode::None;
    double calib_temp_c = 0.0;  // meaningful for Fixed
    std::size_t calib_levels = 0;
    double drive_min = 0.0;     // LED valid current range used for clamping
    double drive_max = 0.35;

    static DpdCurve passthrough(double bias0, double drive_min, double drive_max);

    double eval(double i) const { return (c2 * i + c1) * i + c0; }

    std::string to_csv() const;
    static DpdCurve from_csv(const std::string& text);
};

// Drive currents for a commanded frame; samples clamp to the LED valid range.
TimeFrame apply(const DpdCurve& curve, const TimeFrame& frame);

// Mean TIA voltage for a drive current; noisy implementations average out in
// the per-level mean.
using FeedbackSampler = std::function<double(double)>;

struct CalibrationOptions {
    std::size_t samples_per_level = 16;
    // Target output span in TIA volts. Unset: the span observed during this
    // calibration (the drive range then maps onto the currently achievable
    // flux). Set: a fixed factory span, giving a temperature-invariant
    // composed response.
    std::optional<std::pair<double, double>> target_vspan;
    double drive_min = 0.0;
    double drive_max = 0.35;
};

struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

DpdCurve calibrate(const FeedbackSampler& sampler, std::size_t j_levels,
                   double i_lo, double i_hi, double i_bias0,
                   const CalibrationOptions& opts = {});

// Noiseless sampler backed by an LED model at a fixed junction temperature.
FeedbackSampler make_led_sampler(const LedModel& model, double temp_c,
                                 double volts_per_watt);

// F-DPD: one-time noiseless calibration at calib_temp; the runtime LED
// temperature may differ.
DpdCurve make_fixed_dpd(const LedModel& model, double calib_temp_c,
                        std::size_t j_levels, double i_lo, double i_hi,
                        double i_bias0, double volts_per_watt,
                        const CalibrationOptions& opts = {});

// TIA voltage span a calibration sweep observes at the given temperature;
// used to pin the factory target span (typically at the hottest supported
// temperature so the target stays reachable everywhere).
std::pair<double, double> observed_vspan(const FeedbackSampler& sampler,
                                         std::size_t j_levels, double i_lo,
                                         double i_hi, double i_bias0);

} // namespace vlc
