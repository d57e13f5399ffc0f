#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "vlc/fft.hpp"

namespace vlc {

// Real-valued baseband frame (N + N_CP drive samples).
using TimeFrame = std::vector<double>;

struct OfdmConfig {
    std::size_t n_fft = 1024;
    std::size_t n_cp = 16;
    std::size_t mod_order = 16;   // M, power of 4
    double clip_hi = 0.15;        // I_u, A
    double clip_lo = -0.15;       // I_l, A
    double clip_factor = 5.0;     // gamma
    std::size_t n_suppressed = 1; // excluded low bins per half-spectrum, counting the null DC bin
    double bandwidth_hz = 5e6;    // one-sided modulation bandwidth

    void validate() const;

    // gamma = (I_u - I_l) / (2 sigma_x)
    double sigma_x() const { return (clip_hi - clip_lo) / (2.0 * clip_factor); }

    std::size_t first_data_bin() const { return n_suppressed < 1 ? 1 : n_suppressed; }
    std::size_t n_data_bins() const { return n_fft / 2 - first_data_bin(); }
    std::size_t bits_per_frame() const;

    // The real drive signal occupies [0, bandwidth_hz]; bin n sits at
    // n * 2B / N on the DAC grid.
    double sample_rate_hz() const { return 2.0 * bandwidth_hz; }
    double bin_freq_hz(std::size_t bin) const;
};

double sigma_from_clip_factor(const OfdmConfig& cfg);

// Gray-mapped square M-QAM on the integer grid {+-1, +-3, ...}; in-phase bits
// first, most significant first. Average constellation power 2(M-1)/3.
std::vector<cplx> qam_modulate(const std::vector<std::uint8_t>& bits, std::size_t m);

// Nearest-neighbor hard decision; ties resolve toward the smaller
// constellation index.
std::vector<std::uint8_t> qam_demodulate(const std::vector<cplx>& symbols, std::size_t m);

// Hermitian-symmetric DFT input: X[0] = X[N/2] = 0, lower half carries the
// data, upper half the conjugate mirror. Bins below first_bin are zeroed in
// both halves.
std::vector<cplx> hermitian_map(const std::vector<cplx>& data, std::size_t n_fft,
                                std::size_t first_bin = 1);

std::vector<cplx> apply_subcarrier_gains(const std::vector<cplx>& x_h,
                                         const std::vector<cplx>& gains);

// Inverse DFT with 1/N normalization; rejects inputs whose transform is not
// real to within 1e-9.
std::vector<double> idft_frame(const std::vector<cplx>& x);

TimeFrame prepend_cp(const std::vector<double>& block, std::size_t n_cp);

TimeFrame hard_clip(TimeFrame frame, double clip_lo, double clip_hi);

// Strips the cyclic prefix and runs the forward DFT (no normalization).
std::vector<cplx> dft_receive(const TimeFrame& frame, const OfdmConfig& cfg);

// Selects the data-carrying lower-half bins.
std::vector<cplx> extract_data(const std::vector<cplx>& spectrum, const OfdmConfig& cfg);

struct EqualizedSymbols {
    std::vector<cplx> symbols;
    std::vector<std::uint8_t> usable; // 0 marks an unequalizable subcarrier (zero pilot)
};

// Per-subcarrier ZF correction pilot_known / pilot_received applied to the
// received symbols.
EqualizedSymbols post_equalize(const std::vector<cplx>& received,
                               const std::vector<cplx>& pilot_received,
                               const std::vector<cplx>& pilot_known);

std::vector<std::uint8_t> random_bits(std::size_t n, std::mt19937_64& rng);

} // namespace vlc
