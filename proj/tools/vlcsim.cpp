#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "vlc/config.hpp"
#include "vlc/sim.hpp"

namespace {

std::vector<vlc::PointSpec> build_points(const vlc::RunConfig& rc)
{
    using namespace vlc;
    if (rc.campaign == "fig7") return figure7_points(rc.grids, rc.fixed_calib_temp_c);
    if (rc.campaign == "fig10") return figure10_points(rc.grids);
    if (rc.campaign == "distance") return distance_points(rc.setup, rc.grids);
    if (rc.campaign != "custom")
        throw std::runtime_error("unknown campaign " + rc.campaign);

    // custom: full scheme matrix on the configured response, per-burst pilots
    std::vector<PointSpec> points;
    const SchemeSpec schemes[] = {
        {DpdMode::None, rc.fixed_calib_temp_c, EqScheme::PostEq},
        {DpdMode::None, rc.fixed_calib_temp_c, EqScheme::PPEq},
        {DpdMode::Fixed, rc.fixed_calib_temp_c, EqScheme::PostEq},
        {DpdMode::Fixed, rc.fixed_calib_temp_c, EqScheme::PPEq},
        {DpdMode::LuminousFeedback, rc.fixed_calib_temp_c, EqScheme::PostEq},
        {DpdMode::LuminousFeedback, rc.fixed_calib_temp_c, EqScheme::PPEq},
    };
    for (std::size_t m : rc.grids.mod_orders)
        for (const SchemeSpec& sch : schemes)
            for (double t : rc.grids.temps_c)
                for (double snr : rc.grids.snr_grid_db) {
                    PointSpec p;
                    p.scheme = sch;
                    p.mod_order = m;
                    p.temp_c = t;
                    p.snr_db = snr;
                    p.receiver = ReceiverMode::Pilot;
                    p.target_bit_errors = rc.grids.target_bit_errors;
                    p.max_bits = rc.grids.max_bits;
                    p.seed = rc.grids.seed;
                    p.index = points.size();
                    p.campaign = "custom";
                    points.push_back(std::move(p));
                }
    return points;
}

std::vector<vlc::NamedSpectrum> build_spectra(const vlc::RunConfig& rc)
{
    using namespace vlc;
    std::vector<NamedSpectrum> spectra;
    if (rc.campaign != "fig10" && rc.campaign != "custom") return spectra;

    // noiseless feedback estimate at the reference temperature; documents the
    // gain vectors the pre-equalizer actually applied
    const DpdCurve dpd =
        rc.setup.dpd_for(DpdMode::LuminousFeedback, rc.setup.reference_temp_c, 0.0);
    const double omega_fb = gain_from_vectors(rc.setup.geometry, PdTarget::Feedback);
    for (std::size_t m : rc.grids.mod_orders) {
        OfdmConfig cfg = rc.setup.ofdm;
        cfg.mod_order = m;
        const ProbeLink link = [&](const TimeFrame& frame) {
            TimeFrame clipped = hard_clip(frame, cfg.clip_lo, cfg.clip_hi);
            TimeFrame drive = vlc::apply(dpd, clipped);
            std::vector<cplx> spec(cfg.n_fft);
            for (std::size_t i = 0; i < cfg.n_fft; ++i)
                spec[i] = cplx{omega_fb * rc.setup.noise.responsivity *
                                   rc.setup.led.optical_power(drive[cfg.n_cp + i],
                                                              rc.setup.reference_temp_c),
                               0.0};
            fft_inplace(spec, false);
            for (std::size_t n = 1; n < cfg.n_fft / 2; ++n) {
                spec[n] *= rc.setup.response.eval(cfg.bin_freq_hz(n));
                spec[cfg.n_fft - n] = std::conj(spec[n]);
            }
            spec[0] *= std::abs(rc.setup.response.eval(0.0));
            spec[cfg.n_fft / 2] *= std::abs(rc.setup.response.eval(cfg.bin_freq_hz(cfg.n_fft / 2)));
            fft_inplace(spec, true);
            TimeFrame out(cfg.n_fft);
            for (std::size_t i = 0; i < cfg.n_fft; ++i)
                out[i] = spec[i].real() / static_cast<double>(cfg.n_fft);
            return prepend_cp(out, cfg.n_cp);
        };
        PreeqOptions popts;
        popts.probe_frames = rc.setup.probe_frames;
        popts.epsilon_db = rc.setup.epsilon_db;
        popts.seed = rc.grids.seed;
        const GainVector zf = run_preeq_protocol(link, cfg, popts);
        spectra.push_back({"zf_gains_m" + std::to_string(m), zf.gains});
        spectra.push_back({"flat_gains_m" + std::to_string(m), flat_gain_vector(cfg).gains});
    }
    return spectra;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"DCO-OFDM visible-light link simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", campaign_override;
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    std::size_t jobs = 1;

    CLI::App* run = app.add_subcommand("run", "run a Monte Carlo BER campaign");
    run->add_option("config", config_path, "experiment config file (INI)")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed", seed_override, "override the master seed")
        ->each([&](const std::string&) { seed_set = true; });
    run->add_option("--campaign", campaign_override, "fig7|fig10|distance|custom");
    run->add_option("--jobs", jobs, "parallel workers")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        vlc::RunConfig rc = vlc::RunConfig::load(config_path);
        if (!campaign_override.empty()) rc.campaign = campaign_override;
        if (seed_set) rc.grids.seed = seed_override;

        const auto points = build_points(rc);
        std::printf("campaign %s: %zu points, seed %llu, %zu jobs\n", rc.campaign.c_str(),
                    points.size(), static_cast<unsigned long long>(rc.grids.seed), jobs);

        const auto t0 = std::chrono::steady_clock::now();
        const auto records = vlc::run_points(rc.setup, points, jobs);
        const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);

        const auto status = vlc::emit_artifacts(records, build_spectra(rc), {}, out_dir,
                                                rc.canonical_text(), rc.grids.seed);
        std::printf("%zu records in %.1f s -> %s\n", records.size(), dt.count(),
                    out_dir.c_str());
        if (status == vlc::EmitStatus::NoData) {
            std::fprintf(stderr, "no data\n");
            return 2;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
