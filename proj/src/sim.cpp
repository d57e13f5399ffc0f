#include "vlc/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace vlc {

namespace {

std::string format_temp(double t)
{
    std::ostringstream out;
    out << t;
    return out.str();
}

// Received photocurrent block (CP stripped): clip -> DPD -> LED at the
// operating temperature -> per-bin chain response. The nonlinearity is
// memoryless, so the block stays circular and the response applies as a
// per-subcarrier multiplication.
std::vector<double> transit_block(const SimSetup& setup, const OfdmConfig& cfg,
                                  const FrequencyResponse& resp, const DpdCurve& dpd,
                                  double temp_c, double omega, const TimeFrame& frame)
{
    const TimeFrame drive = vlc::apply(dpd, hard_clip(frame, cfg.clip_lo, cfg.clip_hi));

    std::vector<cplx> spec(cfg.n_fft);
    const double scale = omega * setup.noise.responsivity;
    for (std::size_t i = 0; i < cfg.n_fft; ++i)
        spec[i] = cplx{scale * setup.led.optical_power(drive[cfg.n_cp + i], temp_c), 0.0};
    fft_inplace(spec, false);

    spec[0] *= std::abs(resp.eval(0.0));
    spec[cfg.n_fft / 2] *= std::abs(resp.eval(cfg.bin_freq_hz(cfg.n_fft / 2)));
    for (std::size_t n = 1; n < cfg.n_fft / 2; ++n) {
        spec[n] *= resp.eval(cfg.bin_freq_hz(n));
        spec[cfg.n_fft - n] = std::conj(spec[n]);
    }

    fft_inplace(spec, true);
    std::vector<double> out(cfg.n_fft);
    for (std::size_t i = 0; i < cfg.n_fft; ++i)
        out[i] = spec[i].real() / static_cast<double>(cfg.n_fft);
    return out;
}

void subtract_mean(std::vector<double>& v)
{
    double m = 0.0;
    for (double s : v) m += s;
    m /= static_cast<double>(v.size());
    for (double& s : v) s -= m;
}

std::vector<cplx> block_spectrum(const std::vector<double>& block)
{
    std::vector<cplx> x(block.size());
    for (std::size_t i = 0; i < block.size(); ++i) x[i] = cplx{block[i], 0.0};
    fft_inplace(x, false);
    return x;
}

TimeFrame build_frame(const std::vector<cplx>& syms, const OfdmConfig& cfg,
                      const GainVector& gains)
{
    const auto x = apply_subcarrier_gains(
        hermitian_map(syms, cfg.n_fft, cfg.first_data_bin()), gains.gains);
    return prepend_cp(idft_frame(x), cfg.n_cp);
}

std::size_t count_bit_errors(const std::vector<cplx>& estimated,
                             const std::vector<std::uint8_t>& sent_bits,
                             const std::vector<std::uint8_t>& bin_usable,
                             std::size_t mod_order, std::size_t& bits_counted)
{
    const auto decided = qam_demodulate(estimated, mod_order);
    std::size_t bps = 0;
    for (std::size_t m = mod_order; m > 1; m >>= 1) ++bps;
    std::size_t errors = 0;
    for (std::size_t s = 0; s < estimated.size(); ++s) {
        if (!bin_usable[s]) continue;
        for (std::size_t b = 0; b < bps; ++b) {
            errors += decided[s * bps + b] != sent_bits[s * bps + b];
            ++bits_counted;
        }
    }
    return errors;
}

} // namespace

std::string SchemeSpec::label() const
{
    std::string s;
    switch (dpd) {
    case DpdMode::None: s = "W-DPD"; break;
    case DpdMode::Fixed: s = "F-DPD(" + format_temp(fixed_calib_temp_c) + ")"; break;
    case DpdMode::LuminousFeedback: s = "LFB-DPD"; break;
    }
    s += eq == EqScheme::PostEq ? "/Post-Eq" : "/PP-Eq";
    return s;
}

LinkGeometry SimSetup::default_geometry()
{
    const double r = 1.0 / std::sqrt(2.0);
    return LinkGeometry({2.0, 2.0, 3.0}, {0.0, 0.0, -1.0},
                        {2.0, 2.0, 1.0}, {0.0, 0.0, 1.0},
                        {1.99, 2.0, 2.99}, {r, 0.0, r},
                        0.5, 1e-6);
}

double SimSetup::feedback_volts_per_watt() const
{
    return gain_from_vectors(geometry, PdTarget::Feedback) * noise.responsivity *
           tia_volts_per_amp;
}

std::pair<double, double> SimSetup::factory_vspan() const
{
    return observed_vspan(make_led_sampler(led, dpd_span_temp_c, feedback_volts_per_watt()),
                          dpd_levels, ofdm.clip_lo, ofdm.clip_hi, i_bias0);
}

DpdCurve SimSetup::dpd_for(DpdMode mode, double operating_temp_c,
                           double fixed_calib_temp_c) const
{
    if (mode == DpdMode::None)
        return DpdCurve::passthrough(i_bias0, led.current_min(), led.current_max());

    CalibrationOptions opts;
    opts.samples_per_level = dpd_samples_per_level;
    opts.target_vspan = factory_vspan();
    opts.drive_min = led.current_min();
    opts.drive_max = led.current_max();

    if (mode == DpdMode::Fixed)
        return make_fixed_dpd(led, fixed_calib_temp_c, dpd_levels, ofdm.clip_lo,
                              ofdm.clip_hi, i_bias0, feedback_volts_per_watt(), opts);

    DpdCurve c = calibrate(make_led_sampler(led, operating_temp_c, feedback_volts_per_watt()),
                           dpd_levels, ofdm.clip_lo, ofdm.clip_hi, i_bias0, opts);
    c.calib_temp_c = operating_temp_c;
    return c;
}

BerRecord run_ber_point(const SimSetup& setup, const PointSpec& point)
{
    OfdmConfig cfg = setup.ofdm;
    cfg.mod_order = point.mod_order;
    cfg.validate();

    const FrequencyResponse response =
        point.flat_response ? FrequencyResponse::flat() : setup.response;
    const double omega_rx = gain_from_vectors(setup.geometry, PdTarget::Remote);
    const double omega_fb = gain_from_vectors(setup.geometry, PdTarget::Feedback);

    const DpdCurve dpd =
        setup.dpd_for(point.scheme.dpd, point.temp_c, point.scheme.fixed_calib_temp_c);

    GainVector gains;
    if (point.scheme.eq == EqScheme::PPEq) {
        const ProbeLink fb_link = [&](const TimeFrame& frame) {
            return prepend_cp(
                transit_block(setup, cfg, response, dpd, point.temp_c, omega_fb, frame),
                cfg.n_cp);
        };
        PreeqOptions popts;
        popts.probe_frames = setup.probe_frames;
        popts.epsilon_db = setup.epsilon_db;
        popts.seed = point.seed ^ (0x9e3779b97f4a7c15ULL * (point.index + 1));
        gains = run_preeq_protocol(fb_link, cfg, popts);
    } else {
        gains = flat_gain_vector(cfg);
    }

    std::seed_seq ss{point.seed, static_cast<std::uint64_t>(point.index),
                     std::uint64_t{0xb5a9d3c1}};
    std::mt19937_64 rng(ss);

    const double pr_mean =
        omega_rx *
        setup.led.optical_power(std::clamp(dpd.bias_current, setup.led.current_min(),
                                           setup.led.current_max()),
                                point.temp_c);
    const double physical_std = total_noise_std(setup.noise, pr_mean);

    auto receive = [&](const TimeFrame& frame, bool noiseless) {
        std::vector<double> y =
            transit_block(setup, cfg, response, dpd, point.temp_c, omega_rx, frame);
        subtract_mean(y);
        if (!noiseless) {
            const double nstd =
                setup.noise_mode == NoiseMode::PrescribedSnr
                    ? std::sqrt(variance(y) / std::pow(10.0, point.snr_db / 10.0))
                    : physical_std;
            add_awgn(y, nstd, rng);
            subtract_mean(y);
        }
        return extract_data(block_spectrum(y), cfg);
    };

    // bins that actually carry data: pre-eq may zero some via the epsilon guard
    std::vector<std::uint8_t> bin_active(cfg.n_data_bins(), 1);
    for (std::size_t i = 0; i < cfg.n_data_bins(); ++i)
        if (gains.gains[cfg.first_data_bin() + i] == cplx{0.0, 0.0}) bin_active[i] = 0;

    std::vector<cplx> pilot_known;
    std::vector<cplx> pilot_received;

    auto send_pilot = [&](bool noiseless, std::mt19937_64& pilot_rng) {
        const auto bits = random_bits(cfg.bits_per_frame(), pilot_rng);
        pilot_known = qam_modulate(bits, cfg.mod_order);
        pilot_received = receive(build_frame(pilot_known, cfg, gains), noiseless);
    };

    if (point.receiver == ReceiverMode::Reference) {
        // factory receiver calibration: noiseless pilot through the reference
        // chain (feedback-corrected DPD at the reference temperature)
        const DpdCurve ref_dpd =
            setup.dpd_for(DpdMode::LuminousFeedback, setup.reference_temp_c, 0.0);
        std::seed_seq rss{point.seed, std::uint64_t{0x91107}};
        std::mt19937_64 pilot_rng(rss);
        const auto bits = random_bits(cfg.bits_per_frame(), pilot_rng);
        pilot_known = qam_modulate(bits, cfg.mod_order);
        std::vector<double> y =
            transit_block(setup, cfg, response, ref_dpd, setup.reference_temp_c, omega_rx,
                          build_frame(pilot_known, cfg, gains));
        subtract_mean(y);
        pilot_received = extract_data(block_spectrum(y), cfg);
    }

    BerRecord rec;
    rec.campaign = point.campaign;
    rec.scheme = point.scheme.label();
    rec.mod_order = point.mod_order;
    rec.temp_c = point.temp_c;
    rec.snr_db = point.snr_db;
    rec.distance_m = point.distance_m;
    rec.seed = point.seed;
    rec.index = point.index;

    std::size_t frames_in_burst = 0;
    while (rec.bit_errors < point.target_bit_errors && rec.bits_sent < point.max_bits) {
        if (point.receiver == ReceiverMode::Pilot && frames_in_burst == 0)
            send_pilot(false, rng);

        const auto bits = random_bits(cfg.bits_per_frame(), rng);
        const auto syms = qam_modulate(bits, cfg.mod_order);
        const auto data = receive(build_frame(syms, cfg, gains), false);
        const EqualizedSymbols eq = post_equalize(data, pilot_received, pilot_known);

        std::vector<std::uint8_t> usable(bin_active);
        for (std::size_t i = 0; i < usable.size(); ++i)
            if (!eq.usable[i]) usable[i] = 0;

        std::size_t counted = 0;
        rec.bit_errors += count_bit_errors(eq.symbols, bits, usable, cfg.mod_order, counted);
        rec.bits_sent += counted;

        if (++frames_in_burst >= setup.frames_per_burst) frames_in_burst = 0;
    }

    rec.censored = rec.bit_errors < point.target_bit_errors;
    rec.ber = rec.bits_sent ? static_cast<double>(rec.bit_errors) /
                                  static_cast<double>(rec.bits_sent)
                            : 0.0;
    return rec;
}

std::vector<BerRecord> run_points(const SimSetup& setup,
                                  const std::vector<PointSpec>& points, std::size_t jobs)
{
    std::vector<BerRecord> records(points.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < points.size(); ++i)
            records[i] = run_ber_point(setup, points[i]);
        return records;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            records[i] = run_ber_point(setup, points[i]);
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return records;
}

std::vector<PointSpec> figure7_points(const CampaignGrids& grids, double fixed_calib_temp_c)
{
    const SchemeSpec schemes[] = {
        {DpdMode::None, fixed_calib_temp_c, EqScheme::PostEq},
        {DpdMode::Fixed, fixed_calib_temp_c, EqScheme::PostEq},
        {DpdMode::LuminousFeedback, fixed_calib_temp_c, EqScheme::PostEq},
    };
    std::vector<PointSpec> points;
    for (std::size_t m : grids.mod_orders)
        for (const SchemeSpec& sch : schemes)
            for (double t : grids.temps_c)
                for (double snr : grids.snr_grid_db) {
                    PointSpec p;
                    p.scheme = sch;
                    p.mod_order = m;
                    p.temp_c = t;
                    p.snr_db = snr;
                    p.receiver = ReceiverMode::Reference;
                    p.flat_response = true;
                    p.target_bit_errors = grids.target_bit_errors;
                    p.max_bits = grids.max_bits;
                    p.seed = grids.seed;
                    p.index = points.size();
                    p.campaign = "fig7";
                    points.push_back(std::move(p));
                }
    return points;
}

std::vector<PointSpec> figure10_points(const CampaignGrids& grids)
{
    const SchemeSpec schemes[] = {
        {DpdMode::LuminousFeedback, 50.0, EqScheme::PostEq},
        {DpdMode::LuminousFeedback, 50.0, EqScheme::PPEq},
    };
    std::vector<PointSpec> points;
    for (std::size_t m : grids.mod_orders)
        for (const SchemeSpec& sch : schemes)
            for (double snr : grids.snr_grid_db) {
                PointSpec p;
                p.scheme = sch;
                p.mod_order = m;
                p.temp_c = 30.0;
                p.snr_db = snr;
                p.receiver = ReceiverMode::Pilot;
                p.target_bit_errors = grids.target_bit_errors;
                p.max_bits = grids.max_bits;
                p.seed = grids.seed;
                p.index = points.size();
                p.campaign = "fig10";
                points.push_back(std::move(p));
            }
    return points;
}

std::vector<PointSpec> distance_points(const SimSetup& setup, const CampaignGrids& grids)
{
    std::vector<PointSpec> points;
    for (std::size_t m : grids.mod_orders)
        for (double d : grids.distance_grid_m) {
            PointSpec p;
            p.scheme = {DpdMode::LuminousFeedback, 50.0, EqScheme::PPEq};
            p.mod_order = m;
            p.temp_c = setup.reference_temp_c;
            p.snr_db = snr_from_distance(setup.geometry, setup.led, setup.noise, d,
                                         setup.reference_temp_c, setup.i_bias0,
                                         setup.ofdm.sigma_x());
            p.distance_m = d;
            p.receiver = ReceiverMode::Pilot;
            p.target_bit_errors = grids.target_bit_errors;
            p.max_bits = grids.max_bits;
            p.seed = grids.seed;
            p.index = points.size();
            p.campaign = "distance";
            points.push_back(std::move(p));
        }
    return points;
}

double snr_from_distance(const LinkGeometry& geometry, const LedModel& led,
                         const NoiseParams& noise, double distance_m, double temp_c,
                         double i_bias, double sigma_x)
{
    if (distance_m <= 0.0)
        throw std::invalid_argument("snr_from_distance: distance must be > 0");

    const Vec3 axis = (geometry.rx_pos - geometry.led_pos).normalized();
    LinkGeometry g = geometry;
    g.rx_pos = geometry.led_pos + axis * distance_m;
    const double omega = gain_from_vectors(g, PdTarget::Remote);

    const double slope = led.optical_power_slope(i_bias, temp_c);
    const double signal_rms_a = omega * noise.responsivity * slope * sigma_x;
    const double pr = omega * led.optical_power(i_bias, temp_c);
    const double nv = shot_variance(noise, pr) + thermal_variance(noise);
    return 10.0 * std::log10(signal_rms_a * signal_rms_a / nv);
}

std::uint64_t fnv1a64(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p)
{
    std::ofstream f(p, std::ios::binary); // '\n' endings on every platform
    if (!f) throw std::runtime_error("emit_artifacts: cannot write " + p.string());
    f << std::setprecision(12);
    return f;
}

} // namespace

EmitStatus emit_artifacts(const std::vector<BerRecord>& records,
                          const std::vector<NamedSpectrum>& spectra,
                          const std::vector<NamedConstellation>& constellations,
                          const std::string& out_dir, const std::string& config_text,
                          std::uint64_t seed)
{
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<std::string> files;

    // group by (campaign, mod order), keeping first-appearance order
    std::vector<std::pair<std::string, std::size_t>> groups;
    for (const BerRecord& r : records) {
        const std::pair<std::string, std::size_t> key{r.campaign, r.mod_order};
        if (std::find(groups.begin(), groups.end(), key) == groups.end())
            groups.push_back(key);
    }
    for (const auto& [campaign, m] : groups) {
        const std::string name = "ber_" + campaign + "_m" + std::to_string(m) + ".csv";
        auto f = open_out(fs::path(out_dir) / name);
        f << "scheme,mod_order,temp_c,snr_db,distance_m,bits_sent,bit_errors,ber,censored,seed\n";
        for (const BerRecord& r : records) {
            if (r.campaign != campaign || r.mod_order != m) continue;
            f << r.scheme << ',' << r.mod_order << ',' << r.temp_c << ',' << r.snr_db << ',';
            if (r.distance_m) f << *r.distance_m;
            f << ',' << r.bits_sent << ',' << r.bit_errors << ',' << r.ber << ','
              << (r.censored ? 1 : 0) << ',' << r.seed << '\n';
        }
        files.push_back(name);
    }

    for (const NamedSpectrum& s : spectra) {
        const std::string name = "spectrum_" + s.name + ".csv";
        auto f = open_out(fs::path(out_dir) / name);
        f << "bin,re,im\n";
        for (std::size_t n = 0; n < s.bins.size(); ++n)
            f << n << ',' << s.bins[n].real() << ',' << s.bins[n].imag() << '\n';
        files.push_back(name);
    }

    for (const NamedConstellation& c : constellations) {
        const std::string name = "constellation_" + c.name + ".csv";
        auto f = open_out(fs::path(out_dir) / name);
        f << "subcarrier,re,im\n";
        for (std::size_t i = 0; i < c.symbols.size(); ++i)
            f << c.first_bin + i << ',' << c.symbols[i].real() << ',' << c.symbols[i].imag()
              << '\n';
        files.push_back(name);
    }

    {
        auto f = open_out(fs::path(out_dir) / "manifest.txt");
        f << "version=" << kVersion << '\n';
        f << "seed=" << seed << '\n';
        f << "config_hash=" << std::hex << std::setw(16) << std::setfill('0')
          << fnv1a64(config_text) << std::dec << '\n';
        f << "records=" << records.size() << '\n';
        for (const std::string& name : files) f << "file=" << name << '\n';
    }

    return records.empty() ? EmitStatus::NoData : EmitStatus::Ok;
}

} // namespace vlc
