#include "vlc/preeq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vlc {

double FeedbackSpectrum::mean_square_active(const OfdmConfig& cfg) const
{
    if (bins.size() != cfg.n_fft)
        throw std::invalid_argument("FeedbackSpectrum: length mismatch");
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t n = cfg.first_data_bin(); n < cfg.n_fft / 2; ++n) {
        acc += std::norm(bins[n]);
        ++count;
    }
    if (count == 0) throw std::invalid_argument("FeedbackSpectrum: no active bins");
    return acc / static_cast<double>(count);
}

double flat_gain(const OfdmConfig& cfg)
{
    if (cfg.n_fft <= 2) throw std::invalid_argument("flat_gain: n_fft must exceed 2");
    const double n = static_cast<double>(cfg.n_fft);
    const double m = static_cast<double>(cfg.mod_order);
    const double sx = cfg.sigma_x();
    return std::sqrt(3.0 * sx * sx * n * n / (2.0 * (n - 2.0) * (m - 1.0)));
}

namespace {

void mirror_upper_half(std::vector<cplx>& g, std::size_t n)
{
    g[0] = cplx{0.0, 0.0};
    g[n / 2] = cplx{0.0, 0.0};
    for (std::size_t i = 1; i < n / 2; ++i) g[n - i] = std::conj(g[i]);
}

} // namespace

GainVector flat_gain_vector(const OfdmConfig& cfg)
{
    GainVector gv;
    gv.mode = GainMode::Flat;
    gv.alpha = flat_gain(cfg);
    gv.gains.assign(cfg.n_fft, cplx{0.0, 0.0});
    for (std::size_t n = cfg.first_data_bin(); n < cfg.n_fft / 2; ++n)
        gv.gains[n] = cplx{gv.alpha, 0.0};
    mirror_upper_half(gv.gains, cfg.n_fft);
    return gv;
}

GainVector zf_gains(const FeedbackSpectrum& feedback, const OfdmConfig& cfg, double epsilon_db)
{
    if (feedback.bins.size() != cfg.n_fft)
        throw std::invalid_argument("zf_gains: feedback spectrum length mismatch");

    const std::size_t first = cfg.first_data_bin();
    const std::size_t half = cfg.n_fft / 2;

    std::vector<double> mags;
    mags.reserve(half - first);
    for (std::size_t n = first; n < half; ++n) mags.push_back(std::abs(feedback.bins[n]));
    std::vector<double> sorted = mags;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double eps = median * std::pow(10.0, -epsilon_db / 20.0);
    if (median <= 0.0) throw std::invalid_argument("zf_gains: feedback spectrum is zero on active bins");

    GainVector gv;
    gv.mode = GainMode::ZeroForcing;
    gv.gains.assign(cfg.n_fft, cplx{0.0, 0.0});

    // alpha keeps the pre-equalized time-domain variance at sigma_x^2; with a
    // flat |Y_FB| this is the alpha of the flat-gain formula times |Y_FB|.
    double inv_sq_sum = 0.0;
    for (std::size_t n = first; n < half; ++n) {
        const double m = mags[n - first];
        if (m <= eps) {
            gv.excluded_bins.push_back(n);
            continue;
        }
        inv_sq_sum += 1.0 / (m * m);
    }
    if (inv_sq_sum == 0.0) throw std::invalid_argument("zf_gains: every active bin is below the epsilon guard");

    const double nn = static_cast<double>(cfg.n_fft);
    const double m_order = static_cast<double>(cfg.mod_order);
    const double sx = cfg.sigma_x();
    gv.alpha = std::sqrt(3.0 * sx * sx * nn * nn / (4.0 * (m_order - 1.0) * inv_sq_sum));

    for (std::size_t n = first; n < half; ++n) {
        const double m = mags[n - first];
        if (m <= eps) continue;
        gv.gains[n] = gv.alpha / feedback.bins[n];
    }
    mirror_upper_half(gv.gains, cfg.n_fft);
    return gv;
}

GainVector run_preeq_protocol(const ProbeLink& link, const OfdmConfig& cfg,
                              const PreeqOptions& opts)
{
    if (opts.probe_frames < 1)
        throw std::invalid_argument("run_preeq_protocol: need at least one probe frame");

    const GainVector flat = flat_gain_vector(cfg);
    std::mt19937_64 rng(opts.seed);

    std::vector<cplx> h_sum(cfg.n_fft, cplx{0.0, 0.0});
    for (std::size_t p = 0; p < opts.probe_frames; ++p) {
        const auto bits = random_bits(cfg.bits_per_frame(), rng);
        const auto syms = qam_modulate(bits, cfg.mod_order);
        const auto x = apply_subcarrier_gains(
            hermitian_map(syms, cfg.n_fft, cfg.first_data_bin()), flat.gains);
        const TimeFrame probe =
            hard_clip(prepend_cp(idft_frame(x), cfg.n_cp), cfg.clip_lo, cfg.clip_hi);

        TimeFrame captured = link(probe);
        if (captured.size() != probe.size())
            throw std::runtime_error("run_preeq_protocol: feedback capture length mismatch");

        // remove the feedback DC bias before the DFT
        double mean = 0.0;
        for (double v : captured) mean += v;
        mean /= static_cast<double>(captured.size());
        for (double& v : captured) v -= mean;

        const auto y = dft_receive(captured, cfg);
        for (std::size_t n = cfg.first_data_bin(); n < cfg.n_fft / 2; ++n)
            h_sum[n] += y[n] / x[n];
    }
    for (cplx& h : h_sum) h /= static_cast<double>(opts.probe_frames);

    GainVector gv = zf_gains(FeedbackSpectrum{std::move(h_sum)}, cfg, opts.epsilon_db);

    // dynamic-range post-check: predicted variance of pre-equalized frames
    // must not exceed the sigma_x budget implied by the clipping factor
    double g_sq = 0.0;
    for (std::size_t n = cfg.first_data_bin(); n < cfg.n_fft / 2; ++n) g_sq += std::norm(gv.gains[n]);
    const double sym_power = 2.0 / 3.0 * (static_cast<double>(cfg.mod_order) - 1.0);
    const double nn = static_cast<double>(cfg.n_fft);
    const double predicted_var = 2.0 / (nn * nn) * sym_power * g_sq;
    const double target_var = cfg.sigma_x() * cfg.sigma_x();
    if (predicted_var > target_var * 1.0001) {
        const double scale = std::sqrt(target_var / predicted_var);
        for (cplx& g : gv.gains) g *= scale;
        gv.alpha *= scale;
        gv.rescaled = true;
    }
    return gv;
}

} // namespace vlc
