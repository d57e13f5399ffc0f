#include "vlc/ofdm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vlc {

namespace {

std::size_t ilog2(std::size_t v)
{
    std::size_t r = 0;
    while (v > 1) { v >>= 1; ++r; }
    return r;
}

bool is_power_of_four(std::size_t m) { return is_power_of_two(m) && (ilog2(m) % 2 == 0); }

std::uint32_t gray_encode(std::uint32_t i) { return i ^ (i >> 1); }

std::uint32_t gray_decode(std::uint32_t g)
{
    std::uint32_t i = g;
    while (g >>= 1) i ^= g;
    return i;
}

} // namespace

void OfdmConfig::validate() const
{
    if (!is_power_of_two(n_fft) || n_fft < 8)
        throw std::invalid_argument("OfdmConfig: n_fft must be a power of two >= 8");
    if (!is_power_of_four(mod_order) || mod_order < 4 || mod_order > 256)
        throw std::invalid_argument("OfdmConfig: mod_order must be in {4,16,64,256}");
    if (clip_lo >= clip_hi)
        throw std::invalid_argument("OfdmConfig: clip_lo must be below clip_hi");
    if (clip_factor <= 0.0)
        throw std::invalid_argument("OfdmConfig: clip_factor must be > 0");
    if (n_suppressed >= n_fft / 2)
        throw std::invalid_argument("OfdmConfig: n_suppressed must be below n_fft/2");
    if (bandwidth_hz <= 0.0)
        throw std::invalid_argument("OfdmConfig: bandwidth_hz must be > 0");
}

std::size_t OfdmConfig::bits_per_frame() const
{
    return n_data_bins() * ilog2(mod_order);
}

double OfdmConfig::bin_freq_hz(std::size_t bin) const
{
    return static_cast<double>(bin) * sample_rate_hz() / static_cast<double>(n_fft);
}

double sigma_from_clip_factor(const OfdmConfig& cfg) { return cfg.sigma_x(); }

std::vector<cplx> qam_modulate(const std::vector<std::uint8_t>& bits, std::size_t m)
{
    if (!is_power_of_four(m) || m < 4)
        throw std::invalid_argument("qam_modulate: order must be a square power of two");
    const std::size_t bps = ilog2(m);
    if (bits.size() % bps != 0)
        throw std::invalid_argument("qam_modulate: bit count not divisible by log2(M)");
    const std::size_t k = bps / 2;           // bits per axis
    const std::uint32_t levels = 1u << k;

    auto axis = [&](std::size_t pos) {
        std::uint32_t g = 0;
        for (std::size_t b = 0; b < k; ++b) g = (g << 1) | (bits[pos + b] & 1u);
        const std::uint32_t idx = gray_decode(g);
        return static_cast<double>(2 * idx + 1) - static_cast<double>(levels);
    };

    std::vector<cplx> out;
    out.reserve(bits.size() / bps);
    for (std::size_t i = 0; i < bits.size(); i += bps)
        out.emplace_back(axis(i), axis(i + k));
    return out;
}

std::vector<std::uint8_t> qam_demodulate(const std::vector<cplx>& symbols, std::size_t m)
{
    if (!is_power_of_four(m) || m < 4)
        throw std::invalid_argument("qam_demodulate: order must be a square power of two");
    const std::size_t bps = ilog2(m);
    const std::size_t k = bps / 2;
    const std::int64_t levels = std::int64_t{1} << k;

    auto slice = [&](double x, std::vector<std::uint8_t>& out) {
        // level position on the index grid; ties go to the smaller index
        const double d = (x + static_cast<double>(levels - 1)) / 2.0;
        std::int64_t idx = static_cast<std::int64_t>(std::ceil(d - 0.5));
        idx = std::clamp<std::int64_t>(idx, 0, levels - 1);
        const std::uint32_t g = gray_encode(static_cast<std::uint32_t>(idx));
        for (std::size_t b = 0; b < k; ++b)
            out.push_back(static_cast<std::uint8_t>((g >> (k - 1 - b)) & 1u));
    };

    std::vector<std::uint8_t> bits;
    bits.reserve(symbols.size() * bps);
    for (const cplx& s : symbols) {
        slice(s.real(), bits);
        slice(s.imag(), bits);
    }
    return bits;
}

std::vector<cplx> hermitian_map(const std::vector<cplx>& data, std::size_t n_fft,
                                std::size_t first_bin)
{
    if (first_bin < 1) first_bin = 1;
    if (data.size() != n_fft / 2 - first_bin)
        throw std::invalid_argument("hermitian_map: data length mismatch (expected " +
                                    std::to_string(n_fft / 2 - first_bin) + ", got " +
                                    std::to_string(data.size()) + ")");

    std::vector<cplx> x(n_fft, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::size_t n = first_bin + i;
        x[n] = data[i];
        x[n_fft - n] = std::conj(data[i]);
    }
    return x;
}

std::vector<cplx> apply_subcarrier_gains(const std::vector<cplx>& x_h,
                                         const std::vector<cplx>& gains)
{
    if (x_h.size() != gains.size())
        throw std::invalid_argument("apply_subcarrier_gains: length mismatch");
    std::vector<cplx> out(x_h.size());
    for (std::size_t i = 0; i < x_h.size(); ++i) out[i] = x_h[i] * gains[i];
    return out;
}

std::vector<double> idft_frame(const std::vector<cplx>& x)
{
    const double n = static_cast<double>(x.size());
    std::vector<cplx> t = ifft_unnormalized(x);
    std::vector<double> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const cplx v = t[i] / n;
        if (std::abs(v.imag()) > 1e-9)
            throw std::invalid_argument("idft_frame: input is not Hermitian-symmetric");
        out[i] = v.real();
    }
    return out;
}

TimeFrame prepend_cp(const std::vector<double>& block, std::size_t n_cp)
{
    if (n_cp > block.size())
        throw std::invalid_argument("prepend_cp: prefix longer than the block");
    TimeFrame frame;
    frame.reserve(block.size() + n_cp);
    frame.insert(frame.end(), block.end() - static_cast<std::ptrdiff_t>(n_cp), block.end());
    frame.insert(frame.end(), block.begin(), block.end());
    return frame;
}

TimeFrame hard_clip(TimeFrame frame, double clip_lo, double clip_hi)
{
    if (clip_lo >= clip_hi) throw std::invalid_argument("hard_clip: clip_lo must be below clip_hi");
    for (double& s : frame) s = std::clamp(s, clip_lo, clip_hi);
    return frame;
}

std::vector<cplx> dft_receive(const TimeFrame& frame, const OfdmConfig& cfg)
{
    if (frame.size() != cfg.n_fft + cfg.n_cp)
        throw std::invalid_argument("dft_receive: frame length mismatch");
    std::vector<cplx> x(cfg.n_fft);
    for (std::size_t i = 0; i < cfg.n_fft; ++i) x[i] = cplx{frame[cfg.n_cp + i], 0.0};
    fft_inplace(x, false);
    return x;
}

std::vector<cplx> extract_data(const std::vector<cplx>& spectrum, const OfdmConfig& cfg)
{
    if (spectrum.size() != cfg.n_fft)
        throw std::invalid_argument("extract_data: spectrum length mismatch");
    const std::size_t first = cfg.first_data_bin();
    return {spectrum.begin() + static_cast<std::ptrdiff_t>(first),
            spectrum.begin() + static_cast<std::ptrdiff_t>(cfg.n_fft / 2)};
}

EqualizedSymbols post_equalize(const std::vector<cplx>& received,
                               const std::vector<cplx>& pilot_received,
                               const std::vector<cplx>& pilot_known)
{
    if (received.size() != pilot_received.size() || received.size() != pilot_known.size())
        throw std::invalid_argument("post_equalize: length mismatch");

    EqualizedSymbols eq;
    eq.symbols.resize(received.size());
    eq.usable.assign(received.size(), 1);
    for (std::size_t i = 0; i < received.size(); ++i) {
        if (pilot_received[i] == cplx{0.0, 0.0}) {
            eq.symbols[i] = cplx{0.0, 0.0};
            eq.usable[i] = 0;
            continue;
        }
        eq.symbols[i] = received[i] * (pilot_known[i] / pilot_received[i]);
    }
    return eq;
}

std::vector<std::uint8_t> random_bits(std::size_t n, std::mt19937_64& rng)
{
    std::vector<std::uint8_t> bits(n);
    std::uint64_t word = 0;
    std::size_t avail = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (avail == 0) { word = rng(); avail = 64; }
        bits[i] = static_cast<std::uint8_t>(word & 1u);
        word >>= 1;
        --avail;
    }
    return bits;
}

} // namespace vlc
