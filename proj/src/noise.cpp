#include "vlc/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vlc {

double shot_variance(const NoiseParams& p, double received_power_w)
{
    if (received_power_w < 0.0)
        throw std::domain_error("shot_variance: negative received power");
    const double photo = p.responsivity *
        (received_power_w + p.pd_area * p.background_irradiance * p.optical_filter_bw_nm);
    return 2.0 * p.elementary_charge * p.bandwidth_hz * (photo + p.dark_current);
}

double thermal_variance(const NoiseParams& p)
{
    if (p.open_loop_gain <= 0.0)
        throw std::domain_error("thermal_variance: open_loop_gain must be > 0");
    if (p.fet_transconductance <= 0.0)
        throw std::domain_error("thermal_variance: fet_transconductance must be > 0");

    const double pi = std::numbers::pi;
    const double cpd_apd = p.pd_cap_per_area * p.pd_area;
    const double b = p.bandwidth_hz;
    const double feedback = 8.0 * pi * p.boltzmann * p.temp_kelvin / p.open_loop_gain
                          * cpd_apd * NoiseParams::i2 * b * b;
    const double fet = 16.0 * pi * pi * p.boltzmann * p.temp_kelvin * p.fet_noise_factor
                     / p.fet_transconductance * cpd_apd * cpd_apd * NoiseParams::i3 * b * b * b;
    return feedback + fet;
}

double total_noise_std(const NoiseParams& p, double received_power_w)
{
    return std::sqrt(shot_variance(p, received_power_w) + thermal_variance(p));
}

double variance(const std::vector<double>& v)
{
    if (v.empty()) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(v.size());
}

void add_awgn(std::vector<double>& signal, double noise_std, std::mt19937_64& rng)
{
    if (noise_std == 0.0) return;
    std::normal_distribution<double> dist(0.0, noise_std);
    for (double& x : signal) x += dist(rng);
}

std::vector<double> awgn_at_snr(const std::vector<double>& signal, double snr_db,
                                std::uint64_t rng_seed)
{
    if (signal.empty()) throw std::invalid_argument("awgn_at_snr: empty signal");
    const double var = variance(signal);
    if (var == 0.0) throw std::invalid_argument("awgn_at_snr: zero-variance signal");

    std::vector<double> out = signal;
    std::mt19937_64 rng(rng_seed);
    add_awgn(out, std::sqrt(var / std::pow(10.0, snr_db / 10.0)), rng);
    return out;
}

} // namespace vlc
