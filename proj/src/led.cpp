#include "vlc/led.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace vlc {

LedModel::LedModel(std::vector<LedPolyEntry> entries, double flux_ref_lm, double vtia_ref_v,
                   double watts_per_lumen, double current_min, double current_max,
                   bool allow_temp_extrapolation)
    : entries_(std::move(entries)), flux_ref_lm_(flux_ref_lm), vtia_ref_v_(vtia_ref_v),
      watts_per_lumen_(watts_per_lumen), current_min_(current_min), current_max_(current_max),
      allow_extrapolation_(allow_temp_extrapolation)
{
    if (entries_.empty()) throw std::invalid_argument("LedModel: empty coefficient table");
    if (watts_per_lumen_ <= 0.0) throw std::invalid_argument("LedModel: watts_per_lumen must be > 0");
    if (current_min_ >= current_max_) throw std::invalid_argument("LedModel: invalid current range");
    for (std::size_t i = 1; i < entries_.size(); ++i)
        if (entries_[i].temp_c <= entries_[i - 1].temp_c)
            throw std::invalid_argument("LedModel: temperatures must be strictly increasing");
}

LedModel LedModel::builtin()
{
    return LedModel({
        {-10.0, -0.23735, 0.764263, 0.009285, 0.99997},
        {0.0,   -0.24969, 0.763086, 0.008686, 0.99998},
        {10.0,  -0.22750, 0.751208, 0.008882, 0.99999},
        {20.0,  -0.24060, 0.745831, 0.008781, 0.99998},
        {30.0,  -0.22566, 0.742316, 0.008848, 0.99997},
        {40.0,  -0.25976, 0.734123, 0.008910, 0.99993},
        {50.0,  -0.26767, 0.730652, 0.008128, 0.99997},
        {60.0,  -0.26323, 0.722152, 0.008205, 0.99998},
        {70.0,  -0.27341, 0.713003, 0.007769, 0.99997},
        {80.0,  -0.27189, 0.698047, 0.007694, 0.99997},
        {90.0,  -0.26485, 0.680774, 0.007487, 0.99997},
        {100.0, -0.25532, 0.661240, 0.007331, 0.99997},
    });
}

LedModel LedModel::from_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("LedModel: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("LedModel: empty file " + path);

    std::vector<LedPolyEntry> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        LedPolyEntry e;
        if (!(ss >> e.temp_c >> e.a2 >> e.a1 >> e.a0))
            throw std::runtime_error("LedModel: malformed row in " + path + ": " + line);
        ss >> e.corr; // optional
        rows.push_back(e);
    }
    return LedModel(std::move(rows));
}

LedPolyEntry LedModel::coefficients_at(double temp_c) const
{
    const auto& t = entries_;
    if (temp_c < t.front().temp_c || temp_c > t.back().temp_c) {
        if (!allow_extrapolation_)
            throw std::domain_error("LedModel: temperature " + std::to_string(temp_c) +
                                    " degC outside table range [" + std::to_string(t.front().temp_c) +
                                    ", " + std::to_string(t.back().temp_c) + "]");
        return temp_c < t.front().temp_c ? t.front() : t.back();
    }

    auto hi = std::lower_bound(t.begin(), t.end(), temp_c,
                               [](const LedPolyEntry& e, double v) { return e.temp_c < v; });
    if (hi->temp_c == temp_c) return *hi;
    auto lo = hi - 1;
    const double w = (temp_c - lo->temp_c) / (hi->temp_c - lo->temp_c);
    LedPolyEntry e;
    e.temp_c = temp_c;
    e.a2 = lo->a2 + w * (hi->a2 - lo->a2);
    e.a1 = lo->a1 + w * (hi->a1 - lo->a1);
    e.a0 = lo->a0 + w * (hi->a0 - lo->a0);
    e.corr = std::min(lo->corr, hi->corr);
    return e;
}

double LedModel::optical_power(double i_led, double temp_c) const
{
    if (i_led < current_min_ - 1e-12 || i_led > current_max_ + 1e-12)
        throw std::domain_error("LedModel: current " + std::to_string(i_led) +
                                " A outside valid range [" + std::to_string(current_min_) +
                                ", " + std::to_string(current_max_) + "] A");
    const LedPolyEntry e = coefficients_at(temp_c);
    return e.a2 * i_led * i_led + e.a1 * i_led + e.a0;
}

double LedModel::optical_power_slope(double i_led, double temp_c) const
{
    const LedPolyEntry e = coefficients_at(temp_c);
    return 2.0 * e.a2 * i_led + e.a1;
}

double LedModel::flux_from_tia_voltage(double v_tia) const
{
    if (v_tia < 0.0) throw std::domain_error("flux_from_tia_voltage: negative voltage");
    return flux_ref_lm_ / vtia_ref_v_ * v_tia;
}

double LedModel::optical_power_from_flux(double flux_lm) const
{
    if (flux_lm < 0.0) throw std::domain_error("optical_power_from_flux: negative flux");
    return watts_per_lumen_ * flux_lm;
}

FrequencyResponse::FrequencyResponse(std::vector<Sample> samples) : samples_(std::move(samples))
{
    if (samples_.empty()) throw std::invalid_argument("FrequencyResponse: empty sample table");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (samples_[i].freq_hz < 0.0 || samples_[i].magnitude < 0.0)
            throw std::invalid_argument("FrequencyResponse: negative frequency or magnitude");
        if (i > 0 && samples_[i].freq_hz <= samples_[i - 1].freq_hz)
            throw std::invalid_argument("FrequencyResponse: frequencies must be strictly increasing");
    }
}

FrequencyResponse FrequencyResponse::flat(double magnitude)
{
    return FrequencyResponse({{0.0, magnitude, 0.0}, {1e12, magnitude, 0.0}});
}

FrequencyResponse FrequencyResponse::lowpass_default(double f_led_cutoff_hz, double f_tia_bandwidth_hz,
                                                     std::size_t n_points, double f_max_hz)
{
    if (f_led_cutoff_hz <= 0.0 || f_tia_bandwidth_hz <= 0.0)
        throw std::invalid_argument("lowpass_default: cutoffs must be > 0");
    if (n_points < 2) throw std::invalid_argument("lowpass_default: n_points must be >= 2");

    std::vector<Sample> s;
    s.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double f = f_max_hz * static_cast<double>(i) / static_cast<double>(n_points - 1);
        const std::complex<double> led = 1.0 / std::complex<double>(1.0, f / f_led_cutoff_hz);
        const double w = f / f_tia_bandwidth_hz;
        const std::complex<double> tia =
            1.0 / std::complex<double>(1.0 - w * w, std::numbers::sqrt2 * w);
        const std::complex<double> h = led * tia;
        s.push_back({f, std::abs(h), std::arg(h)});
    }
    return FrequencyResponse(std::move(s));
}

FrequencyResponse FrequencyResponse::from_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("FrequencyResponse: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("FrequencyResponse: empty file " + path);

    std::vector<Sample> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double f, mag_db, ph_deg;
        if (!(ss >> f >> mag_db >> ph_deg))
            throw std::runtime_error("FrequencyResponse: malformed row in " + path + ": " + line);
        rows.push_back({f, std::pow(10.0, mag_db / 20.0), ph_deg * std::numbers::pi / 180.0});
    }
    return FrequencyResponse(std::move(rows));
}

std::complex<double> FrequencyResponse::eval(double f_hz) const
{
    if (f_hz < 0.0) throw std::domain_error("FrequencyResponse: negative frequency");
    const auto& s = samples_;
    if (f_hz <= s.front().freq_hz)
        return std::polar(s.front().magnitude, s.front().phase_rad);
    if (f_hz >= s.back().freq_hz)
        return std::polar(s.back().magnitude, s.back().phase_rad);

    auto hi = std::lower_bound(s.begin(), s.end(), f_hz,
                               [](const Sample& a, double v) { return a.freq_hz < v; });
    auto lo = hi - 1;
    const double w = (f_hz - lo->freq_hz) / (hi->freq_hz - lo->freq_hz);
    const double mag = lo->magnitude + w * (hi->magnitude - lo->magnitude);
    const double ph = lo->phase_rad + w * (hi->phase_rad - lo->phase_rad);
    return std::polar(mag, ph);
}

std::complex<double> electric_gain(const FrequencyResponse& resp, double omega_dc, double f_hz)
{
    return resp.eval(f_hz) * omega_dc;
}

} // namespace vlc
