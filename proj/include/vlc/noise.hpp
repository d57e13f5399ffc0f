#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace vlc {

// Receiver noise budget for a PIN photodiode followed by an FET-input TIA.
// Electronics values not printed in the source literature default to a
// representative indoor receiver design and are config-overridable.
struct NoiseParams {
    double elementary_charge = 1.602176634e-19; // C
    double bandwidth_hz = 10.01e6;              // B
    double responsivity = 0.54;                 // A/W
    double pd_area = 1e-6;                      // m^2
    double background_irradiance = 5.8e-6;      // W/(m^2*nm)
    double optical_filter_bw_nm = 30.0;         // delta lambda
    double dark_current = 1e-9;                 // A
    double boltzmann = 1.380649e-23;            // J/K
    double temp_kelvin = 298.0;
    double open_loop_gain = 10.0;               // G_ol
    double pd_cap_per_area = 112e-6;            // F/m^2 (112 pF/cm^2)
    double fet_noise_factor = 1.5;              // Gamma
    double fet_transconductance = 30e-3;        // S

    // TIA bandwidth and noise factors; fixed constants of the noise model.
    static constexpr double i2 = 0.562;
    static constexpr double i3 = 0.0868;
};

// 2qB [ R_pd (P_R + A_pd p_bs dl) + I_dc ], A^2
double shot_variance(const NoiseParams& p, double received_power_w);

// Feedback-resistor and FET-channel terms, A^2
double thermal_variance(const NoiseParams& p);

double total_noise_std(const NoiseParams& p, double received_power_w);

// Adds zero-mean Gaussian noise so that noise variance equals
// var(signal) / 10^(snr_db/10). Deterministic for a fixed seed.
std::vector<double> awgn_at_snr(const std::vector<double>& signal, double snr_db,
                                std::uint64_t rng_seed);

// In-place variant reusing a caller-owned engine (one stream per Monte Carlo
// worker; generators are never shared).
void add_awgn(std::vector<double>& signal, double noise_std, std::mt19937_64& rng);

double variance(const std::vector<double>& v);

} // namespace vlc
