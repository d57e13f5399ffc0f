#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vlc/dpd.hpp"
#include "vlc/geometry.hpp"
#include "vlc/led.hpp"
#include "vlc/noise.hpp"
#include "vlc/ofdm.hpp"
#include "vlc/preeq.hpp"

namespace vlc {

inline constexpr const char* kVersion = "0.1.0";

enum class EqScheme { PostEq, PPEq };

enum class ReceiverMode {
    // ZF correction captured once from a noiseless pilot through the chain at
    // the reference temperature (factory-calibrated receiver).
    Reference,
    // One known pilot frame per burst, received at the operating noise level.
    Pilot,
};

enum class NoiseMode { PrescribedSnr, Physical };

struct SchemeSpec {
    DpdMode dpd = DpdMode::None;
    double fixed_calib_temp_c = 50.0; // used when dpd == Fixed
    EqScheme eq = EqScheme::PostEq;

    std::string label() const;
};

// Everything a BER point needs besides its own grid coordinates.
struct SimSetup {
    LedModel led = LedModel::builtin();
    LinkGeometry geometry = default_geometry();
    FrequencyResponse response = FrequencyResponse::lowpass_default();
    OfdmConfig ofdm;
    NoiseParams noise;

    double i_bias0 = 0.175;             // A, static bias added by the DPD block
    double tia_volts_per_amp = 32000.0; // feedback TIA transimpedance
    double reference_temp_c = 30.0;     // receiver / pre-eq calibration temperature
    double dpd_span_temp_c = 100.0;     // factory target-span sweep temperature
    std::size_t dpd_levels = 64;
    std::size_t dpd_samples_per_level = 16;
    std::size_t frames_per_burst = 20;  // payload frames per pilot
    std::size_t probe_frames = 4;
    double epsilon_db = 40.0;
    NoiseMode noise_mode = NoiseMode::PrescribedSnr;

    static LinkGeometry default_geometry();

    // TIA volts per watt of LED optical output as seen by the feedback PD.
    double feedback_volts_per_watt() const;

    // Algorithm-1 output voltage span observed at dpd_span_temp_c; pinning
    // every calibration to this span keeps the composed electro-optical gain
    // temperature-invariant (the span is reachable at all cooler temperatures
    // because efficiency only falls with heating).
    std::pair<double, double> factory_vspan() const;

    DpdCurve dpd_for(DpdMode mode, double operating_temp_c,
                     double fixed_calib_temp_c) const;
};

struct PointSpec {
    SchemeSpec scheme;
    std::size_t mod_order = 16;
    double temp_c = 30.0;
    double snr_db = 30.0;
    std::optional<double> distance_m;
    ReceiverMode receiver = ReceiverMode::Pilot;
    bool flat_response = false; // override the configured response with unity
    std::size_t target_bit_errors = 100;
    std::size_t max_bits = 2'000'000;
    std::uint64_t seed = 1;
    std::size_t index = 0; // position in the campaign; selects the RNG stream
    std::string campaign;
};

struct BerRecord {
    std::string campaign;
    std::string scheme;
    std::size_t mod_order = 0;
    double temp_c = 0.0;
    double snr_db = 0.0;
    std::optional<double> distance_m;
    std::size_t bits_sent = 0;
    std::size_t bit_errors = 0;
    double ber = 0.0;
    bool censored = false; // max_bits hit before target_bit_errors
    std::uint64_t seed = 0;
    std::size_t index = 0;
};

BerRecord run_ber_point(const SimSetup& setup, const PointSpec& point);

// Runs points in index order across `jobs` workers; output order is always
// the input order regardless of scheduling.
std::vector<BerRecord> run_points(const SimSetup& setup,
                                  const std::vector<PointSpec>& points,
                                  std::size_t jobs = 1);

struct CampaignGrids {
    std::vector<std::size_t> mod_orders = {16, 64, 256};
    std::vector<double> snr_grid_db = {10, 15, 20, 25, 30, 35, 40};
    std::vector<double> temps_c = {0, 20, 40, 60, 80, 100};
    std::vector<double> distance_grid_m = {0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1};
    std::size_t target_bit_errors = 100;
    std::size_t max_bits = 2'000'000;
    std::uint64_t seed = 1;
};

// W-DPD / F-DPD(calib) / LFB-DPD over temperature on a flat electric gain,
// factory-reference receiver.
std::vector<PointSpec> figure7_points(const CampaignGrids& grids,
                                      double fixed_calib_temp_c = 50.0);

// Post-Eq vs PP-Eq on the configured (non-flat) response, LFB-DPD at the
// reference temperature, per-burst pilots.
std::vector<PointSpec> figure10_points(const CampaignGrids& grids);

// Distance sweep: SNR derived from the link budget at each distance.
std::vector<PointSpec> distance_points(const SimSetup& setup, const CampaignGrids& grids);

// Electrical SNR of the received OFDM signal at the given LED-to-receiver
// distance (receiver moved along the existing LED->RX axis).
double snr_from_distance(const LinkGeometry& geometry, const LedModel& led,
                         const NoiseParams& noise, double distance_m,
                         double temp_c = 30.0, double i_bias = 0.175,
                         double sigma_x = 0.03);

struct NamedSpectrum {
    std::string name;
    std::vector<cplx> bins;
};

struct NamedConstellation {
    std::string name;
    std::vector<cplx> symbols; // index position = subcarrier offset
    std::size_t first_bin = 1;
};

enum class EmitStatus { Ok, NoData };

// Writes ber_<campaign>_m<M>.csv per modulation order, spectrum_<case>.csv,
// constellation_<case>.csv and a manifest.txt (config hash, seed, version).
EmitStatus emit_artifacts(const std::vector<BerRecord>& records,
                          const std::vector<NamedSpectrum>& spectra,
                          const std::vector<NamedConstellation>& constellations,
                          const std::string& out_dir,
                          const std::string& config_text,
                          std::uint64_t seed);

std::uint64_t fnv1a64(const std::string& text);

} // namespace vlc
