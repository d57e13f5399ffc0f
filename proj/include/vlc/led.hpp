#pragma once

#include <complex>
#include <string>
#include <vector>

namespace vlc {

// One fitted temperature row: P(I) = a2*I^2 + a1*I + a0, watts vs amperes.
struct LedPolyEntry {
    double temp_c = 0.0;
    double a2 = 0.0; // W/A^2, compressive (a2 < 0) for real devices
    double a1 = 0.0; // W/A
    double a0 = 0.0; // W
    double corr = 0.0; // fit correlation, metadata only
};

class LedModel {
public:
    LedModel(std::vector<LedPolyEntry> entries,
             double flux_ref_lm = 115.0,
             double vtia_ref_v = 3.457,
             double watts_per_lumen = 2.1e-3,
             double current_min = 0.0,
             double current_max = 0.35,
             bool allow_temp_extrapolation = false);

    // Fitted coefficients for the 1 W phosphor white HPLED characterized
    // between -10 and 100 degC.
    static LedModel builtin();

    // CSV with header temp_c,a2,a1,a0[,corr]
    static LedModel from_csv(const std::string& path);

    // Polynomial evaluation with per-coefficient linear interpolation between
    // the two bracketing temperature rows.
    double optical_power(double i_led, double temp_c) const;

    // Local slope dP/dI, same interpolation rule.
    double optical_power_slope(double i_led, double temp_c) const;

    double flux_from_tia_voltage(double v_tia) const;
    double optical_power_from_flux(double flux_lm) const;

    LedPolyEntry coefficients_at(double temp_c) const;

    const std::vector<LedPolyEntry>& entries() const { return entries_; }
    double current_min() const { return current_min_; }
    double current_max() const { return current_max_; }
    double watts_per_lumen() const { return watts_per_lumen_; }

private:
    std::vector<LedPolyEntry> entries_;
    double flux_ref_lm_;
    double vtia_ref_v_;
    double watts_per_lumen_;
    double current_min_;
    double current_max_;
    bool allow_extrapolation_;
};

// Sampled magnitude/phase response of the LED -> PD -> TIA electric chain.
// Interpolation is linear in magnitude and phase; queries outside the sampled
// span hold the nearest endpoint.
class FrequencyResponse {
public:
    struct Sample {
        double freq_hz;
        double magnitude; // linear
        double phase_rad;
    };

    explicit FrequencyResponse(std::vector<Sample> samples);

    static FrequencyResponse flat(double magnitude = 1.0);

    // First-order pole at the LED cutoff times a second-order Butterworth
    // pole at the TIA bandwidth, sampled up to f_max. Stand-in for a measured
    // response table.
    static FrequencyResponse lowpass_default(double f_led_cutoff_hz = 2e6,
                                             double f_tia_bandwidth_hz = 10.01e6,
                                             std::size_t n_points = 512,
                                             double f_max_hz = 10e6);

    // CSV with header freq_hz,magnitude_db,phase_deg
    static FrequencyResponse from_csv(const std::string& path);

    std::complex<double> eval(double f_hz) const;

    const std::vector<Sample>& samples() const { return samples_; }

private:
    std::vector<Sample> samples_;
};

// Combined electric gain: interpolated chain response scaled by the DC
// optical channel gain.
std::complex<double> electric_gain(const FrequencyResponse& resp, double omega_dc, double f_hz);

} // namespace vlc
