#include "vlc/config.hpp"

#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace vlc {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s)
{
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

} // namespace

IniFile IniFile::parse(const std::string& text)
{
    IniFile ini;
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": unterminated section header");
            section = lower(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        ini.values_[section][lower(trim(line.substr(0, eq)))] = trim(line.substr(eq + 1));
    }
    return ini;
}

IniFile IniFile::load(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse(buf.str());
}

bool IniFile::has(const std::string& section, const std::string& key) const
{
    const auto s = values_.find(lower(section));
    return s != values_.end() && s->second.count(lower(key)) > 0;
}

std::string IniFile::get(const std::string& section, const std::string& key,
                         const std::string& fallback) const
{
    const auto s = values_.find(lower(section));
    if (s == values_.end()) return fallback;
    const auto k = s->second.find(lower(key));
    return k == s->second.end() ? fallback : k->second;
}

double IniFile::get_double(const std::string& section, const std::string& key,
                           double fallback) const
{
    if (!has(section, key)) return fallback;
    return std::stod(get(section, key));
}

std::size_t IniFile::get_size(const std::string& section, const std::string& key,
                              std::size_t fallback) const
{
    if (!has(section, key)) return fallback;
    return static_cast<std::size_t>(std::stoull(get(section, key)));
}

std::vector<double> IniFile::get_list(const std::string& section, const std::string& key,
                                      const std::vector<double>& fallback) const
{
    if (!has(section, key)) return fallback;
    std::string v = get(section, key);
    for (char& c : v)
        if (c == ',') c = ' ';
    std::istringstream ss(v);
    std::vector<double> out;
    double x = 0.0;
    while (ss >> x) out.push_back(x);
    if (out.empty()) throw std::runtime_error("config key " + section + "." + key +
                                              ": expected a numeric list");
    return out;
}

namespace {

Vec3 get_vec3(const IniFile& ini, const std::string& section, const std::string& key,
              const Vec3& fallback)
{
    if (!ini.has(section, key)) return fallback;
    const auto v = ini.get_list(section, key, {});
    if (v.size() != 3)
        throw std::runtime_error("config key " + section + "." + key +
                                 ": expected 3 components");
    return {v[0], v[1], v[2]};
}

} // namespace

RunConfig RunConfig::from_ini(const IniFile& ini)
{
    RunConfig rc;
    rc.campaign = lower(ini.get("experiment", "campaign", rc.campaign));

    // grids carry campaign-appropriate defaults before any override
    if (rc.campaign == "fig10")
        rc.grids.snr_grid_db = {10, 14, 18, 22, 26, 30, 34};

    const LinkGeometry def = SimSetup::default_geometry();
    LinkGeometry g(get_vec3(ini, "geometry", "led_pos", def.led_pos),
                   get_vec3(ini, "geometry", "led_normal", def.led_normal),
                   get_vec3(ini, "geometry", "rx_pos", def.rx_pos),
                   get_vec3(ini, "geometry", "rx_normal", def.rx_normal),
                   get_vec3(ini, "geometry", "fb_pos", def.fb_pos),
                   get_vec3(ini, "geometry", "fb_normal", def.fb_normal),
                   ini.get_double("geometry", "lambert_order", def.lambert_order),
                   ini.get_double("geometry", "pd_area_m2", def.pd_area));
    rc.setup.geometry = g;

    if (ini.has("led", "model_csv"))
        rc.setup.led = LedModel::from_csv(ini.get("led", "model_csv"));
    rc.setup.tia_volts_per_amp =
        ini.get_double("led", "tia_volts_per_amp", rc.setup.tia_volts_per_amp);

    const std::string rtype = lower(ini.get("response", "type", "lowpass"));
    if (rtype == "flat") {
        rc.setup.response =
            FrequencyResponse::flat(ini.get_double("response", "magnitude", 1.0));
    } else if (rtype == "lowpass") {
        rc.setup.response = FrequencyResponse::lowpass_default(
            ini.get_double("response", "f_led_cutoff_hz", 2e6),
            ini.get_double("response", "f_tia_bandwidth_hz", 10.01e6),
            ini.get_size("response", "n_points", 512),
            ini.get_double("response", "f_max_hz", 10e6));
    } else if (rtype == "csv") {
        rc.setup.response = FrequencyResponse::from_csv(ini.get("response", "csv"));
    } else {
        throw std::runtime_error("response.type must be flat, lowpass or csv");
    }

    OfdmConfig& o = rc.setup.ofdm;
    o.n_fft = ini.get_size("ofdm", "n_fft", o.n_fft);
    o.n_cp = ini.get_size("ofdm", "n_cp", o.n_cp);
    o.clip_hi = ini.get_double("ofdm", "clip_hi_a", o.clip_hi);
    o.clip_lo = ini.get_double("ofdm", "clip_lo_a", o.clip_lo);
    o.clip_factor = ini.get_double("ofdm", "clip_factor", o.clip_factor);
    o.n_suppressed = ini.get_size("ofdm", "n_suppressed", o.n_suppressed);
    o.bandwidth_hz = ini.get_double("ofdm", "bandwidth_hz", o.bandwidth_hz);

    rc.setup.i_bias0 = ini.get_double("dpd", "bias0_a", rc.setup.i_bias0);
    rc.setup.dpd_levels = ini.get_size("dpd", "levels", rc.setup.dpd_levels);
    rc.setup.dpd_samples_per_level =
        ini.get_size("dpd", "samples_per_level", rc.setup.dpd_samples_per_level);
    rc.setup.dpd_span_temp_c =
        ini.get_double("dpd", "span_temp_c", rc.setup.dpd_span_temp_c);
    rc.fixed_calib_temp_c =
        ini.get_double("dpd", "fixed_calib_temp_c", rc.fixed_calib_temp_c);

    NoiseParams& n = rc.setup.noise;
    const std::string nmode = lower(ini.get("noise", "mode", "prescribed"));
    if (nmode == "prescribed") rc.setup.noise_mode = NoiseMode::PrescribedSnr;
    else if (nmode == "physical") rc.setup.noise_mode = NoiseMode::Physical;
    else throw std::runtime_error("noise.mode must be prescribed or physical");
    n.bandwidth_hz = ini.get_double("noise", "bandwidth_hz", n.bandwidth_hz);
    n.responsivity = ini.get_double("noise", "responsivity", n.responsivity);
    n.pd_area = ini.get_double("noise", "pd_area_m2", n.pd_area);
    n.background_irradiance =
        ini.get_double("noise", "background_irradiance", n.background_irradiance);
    n.optical_filter_bw_nm =
        ini.get_double("noise", "optical_filter_bw_nm", n.optical_filter_bw_nm);
    n.dark_current = ini.get_double("noise", "dark_current_a", n.dark_current);
    n.temp_kelvin = ini.get_double("noise", "temp_kelvin", n.temp_kelvin);
    n.open_loop_gain = ini.get_double("noise", "open_loop_gain", n.open_loop_gain);
    n.pd_cap_per_area = ini.get_double("noise", "pd_cap_per_area", n.pd_cap_per_area);
    n.fet_noise_factor = ini.get_double("noise", "fet_noise_factor", n.fet_noise_factor);
    n.fet_transconductance =
        ini.get_double("noise", "fet_transconductance", n.fet_transconductance);

    rc.setup.probe_frames = ini.get_size("equalization", "probe_frames", rc.setup.probe_frames);
    rc.setup.epsilon_db = ini.get_double("equalization", "epsilon_db", rc.setup.epsilon_db);
    rc.setup.frames_per_burst =
        ini.get_size("equalization", "frames_per_burst", rc.setup.frames_per_burst);
    rc.setup.reference_temp_c =
        ini.get_double("experiment", "reference_temp_c", rc.setup.reference_temp_c);

    CampaignGrids& gr = rc.grids;
    gr.seed = ini.get_size("experiment", "seed", gr.seed);
    gr.target_bit_errors =
        ini.get_size("experiment", "target_bit_errors", gr.target_bit_errors);
    if (gr.target_bit_errors < 100)
        throw std::runtime_error("experiment.target_bit_errors must be >= 100");
    gr.max_bits = ini.get_size("experiment", "max_bits", gr.max_bits);
    gr.snr_grid_db = ini.get_list("experiment", "snr_grid_db", gr.snr_grid_db);
    gr.temps_c = ini.get_list("experiment", "temps_c", gr.temps_c);
    gr.distance_grid_m = ini.get_list("experiment", "distance_grid_m", gr.distance_grid_m);
    if (ini.has("experiment", "mod_orders")) {
        gr.mod_orders.clear();
        for (double m : ini.get_list("experiment", "mod_orders", {}))
            gr.mod_orders.push_back(static_cast<std::size_t>(m));
    }

    rc.setup.ofdm.validate();
    return rc;
}

RunConfig RunConfig::load(const std::string& path)
{
    return from_ini(IniFile::load(path));
}

std::string RunConfig::canonical_text() const
{
    std::ostringstream out;
    out << std::setprecision(17);
    auto vec = [&](const char* k, const Vec3& v) {
        out << k << '=' << v.x << ' ' << v.y << ' ' << v.z << '\n';
    };

    out << "campaign=" << campaign << '\n';
    vec("led_pos", setup.geometry.led_pos);
    vec("led_normal", setup.geometry.led_normal);
    vec("rx_pos", setup.geometry.rx_pos);
    vec("rx_normal", setup.geometry.rx_normal);
    vec("fb_pos", setup.geometry.fb_pos);
    vec("fb_normal", setup.geometry.fb_normal);
    out << "lambert_order=" << setup.geometry.lambert_order << '\n';
    out << "pd_area=" << setup.geometry.pd_area << '\n';
    for (const LedPolyEntry& e : setup.led.entries())
        out << "led=" << e.temp_c << ' ' << e.a2 << ' ' << e.a1 << ' ' << e.a0 << '\n';
    for (const FrequencyResponse::Sample& s : setup.response.samples())
        out << "resp=" << s.freq_hz << ' ' << s.magnitude << ' ' << s.phase_rad << '\n';
    out << "n_fft=" << setup.ofdm.n_fft << '\n';
    out << "n_cp=" << setup.ofdm.n_cp << '\n';
    out << "clip=" << setup.ofdm.clip_lo << ' ' << setup.ofdm.clip_hi << ' '
        << setup.ofdm.clip_factor << '\n';
    out << "n_suppressed=" << setup.ofdm.n_suppressed << '\n';
    out << "bandwidth_hz=" << setup.ofdm.bandwidth_hz << '\n';
    out << "bias0=" << setup.i_bias0 << '\n';
    out << "tia=" << setup.tia_volts_per_amp << '\n';
    out << "reference_temp=" << setup.reference_temp_c << '\n';
    out << "span_temp=" << setup.dpd_span_temp_c << '\n';
    out << "dpd_levels=" << setup.dpd_levels << ' ' << setup.dpd_samples_per_level << '\n';
    out << "fixed_calib_temp=" << fixed_calib_temp_c << '\n';
    out << "frames_per_burst=" << setup.frames_per_burst << '\n';
    out << "probe_frames=" << setup.probe_frames << '\n';
    out << "epsilon_db=" << setup.epsilon_db << '\n';
    out << "noise_mode=" << (setup.noise_mode == NoiseMode::PrescribedSnr ? "prescribed" : "physical") << '\n';
    const NoiseParams& n = setup.noise;
    out << "noise=" << n.bandwidth_hz << ' ' << n.responsivity << ' ' << n.pd_area << ' '
        << n.background_irradiance << ' ' << n.optical_filter_bw_nm << ' ' << n.dark_current
        << ' ' << n.temp_kelvin << ' ' << n.open_loop_gain << ' ' << n.pd_cap_per_area << ' '
        << n.fet_noise_factor << ' ' << n.fet_transconductance << '\n';
    out << "seed=" << grids.seed << '\n';
    out << "target_bit_errors=" << grids.target_bit_errors << '\n';
    out << "max_bits=" << grids.max_bits << '\n';
    auto list = [&](const char* k, const auto& vs) {
        out << k << '=';
        for (std::size_t i = 0; i < vs.size(); ++i) out << (i ? " " : "") << vs[i];
        out << '\n';
    };
    list("mod_orders", grids.mod_orders);
    list("snr_grid_db", grids.snr_grid_db);
    list("temps_c", grids.temps_c);
    list("distance_grid_m", grids.distance_grid_m);
    return out.str();
}

} // namespace vlc
