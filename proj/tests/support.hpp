#pragma once

// shared helpers for the simulation-level tests

#include <cmath>
#include <vector>

#include "vlc/led.hpp"
#include "vlc/sim.hpp"

namespace testsupport {

inline double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// exact Gray-coded square M-QAM bit error rate over AWGN at symbol SNR
// gamma_s = Es/N0 (closed-form PAM decomposition)
inline double gray_qam_ber(std::size_t m, double gamma_s)
{
    const std::size_t l = static_cast<std::size_t>(std::lround(std::sqrt(double(m))));
    const std::size_t kk = static_cast<std::size_t>(std::lround(std::log2(double(l))));
    double total = 0.0;
    for (std::size_t k = 1; k <= kk; ++k) {
        double s = 0.0;
        const double p2k = std::pow(2.0, static_cast<double>(k) - 1.0);
        const std::size_t imax =
            static_cast<std::size_t>((1.0 - std::pow(2.0, -double(k))) * double(l));
        for (std::size_t i = 0; i < imax; ++i) {
            const double f = std::floor(double(i) * p2k / double(l));
            const double sign = (static_cast<long long>(f) % 2 == 0) ? 1.0 : -1.0;
            const double w = p2k - std::floor(double(i) * p2k / double(l) + 0.5);
            s += sign * w *
                 q_func((2.0 * double(i) + 1.0) *
                        std::sqrt(3.0 * gamma_s / (double(m) - 1.0)));
        }
        total += 2.0 / double(l) * s;
    }
    return total / double(kk);
}

// symbol SNR (dB) at which the closed form hits the target BER
inline double snr_db_for_ber(std::size_t m, double target_ber)
{
    double lo = -5.0, hi = 60.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (gray_qam_ber(m, std::pow(10.0, mid / 10.0)) > target_ber) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// prescribed frame SNR that yields the requested per-symbol SNR: the frame
// spreads its power over N-2 active bins of N time samples
inline double frame_snr_db(double symbol_snr_db, std::size_t n_fft)
{
    return symbol_snr_db +
           10.0 * std::log10((double(n_fft) - 2.0) / double(n_fft));
}

// perfectly linear electro-optical device covering the tabulated span
inline vlc::LedModel linear_led()
{
    return vlc::LedModel({{-10.0, 0.0, 0.742, 0.009, 1.0}, {100.0, 0.0, 0.742, 0.009, 1.0}});
}

} // namespace testsupport
