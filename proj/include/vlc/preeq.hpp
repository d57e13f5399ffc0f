#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "vlc/ofdm.hpp"

namespace vlc {

enum class GainMode { Flat, ZeroForcing };

// Per-subcarrier complex gains applied before the IDFT. Hermitian-consistent
// by construction: G[N-n] = conj(G[n]), G[0] = G[N/2] = 0, zeros on
// suppressed bins.
struct GainVector {
    std::vector<cplx> gains; // length N
    double alpha = 0.0;
    GainMode mode = GainMode::Flat;
    bool rescaled = false;                 // alpha reduced by the dynamic-range post-check
    std::vector<std::size_t> excluded_bins; // active bins zeroed by the epsilon guard
};

// Probe-normalized feedback channel estimate (feedback DFT divided by the
// known probe spectrum), length N.
struct FeedbackSpectrum {
    std::vector<cplx> bins;

    double mean_square_active(const OfdmConfig& cfg) const;
};

// |G|_flat = sqrt(3 sigma_x^2 N^2 / (2 (N-2)(M-1)))
double flat_gain(const OfdmConfig& cfg);

GainVector flat_gain_vector(const OfdmConfig& cfg);

// ZF gains G = alpha / Y_FB on active bins. alpha is normalized so the
// pre-equalized frame keeps time-domain variance sigma_x^2; on a flat
// spectrum this reduces exactly to the flat gain vector. Active bins more
// than epsilon_db below the median magnitude are zeroed instead of inverted.
GainVector zf_gains(const FeedbackSpectrum& feedback, const OfdmConfig& cfg,
                    double epsilon_db = 40.0);

// Transmit a commanded (pre-DPD) drive frame, return the feedback TIA
// capture of the same length.
using ProbeLink = std::function<TimeFrame(const TimeFrame&)>;

struct PreeqOptions {
    std::size_t probe_frames = 4;
    std::uint64_t seed = 1234567;
    double epsilon_db = 40.0;
};

// Compensation-mode protocol: probe frames with flat gains, feedback
// capture, DFT, ZF gain computation. Checks that the resulting frames stay
// within the configured dynamic range and rescales alpha downward if not.
GainVector run_preeq_protocol(const ProbeLink& link, const OfdmConfig& cfg,
                              const PreeqOptions& opts = {});

} // namespace vlc
