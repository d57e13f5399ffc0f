#pragma once

#include <map>
#include <string>
#include <vector>

#include "vlc/sim.hpp"

namespace vlc {

// Minimal INI reader: [section] headers, key = value lines, '#'/';' comments.
class IniFile {
public:
    static IniFile parse(const std::string& text);
    static IniFile load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback = "") const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    std::size_t get_size(const std::string& section, const std::string& key,
                         std::size_t fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 const std::vector<double>& fallback) const;

private:
    std::map<std::string, std::map<std::string, std::string>> values_;
};

// One fully resolved experiment: setup + campaign grids. Every field has the
// shipped default; config keys override.
struct RunConfig {
    SimSetup setup;
    CampaignGrids grids;
    std::string campaign = "fig7";
    double fixed_calib_temp_c = 50.0;

    static RunConfig from_ini(const IniFile& ini);
    static RunConfig load(const std::string& path);

    // Deterministic dump of every effective value; hashed into the manifest.
    std::string canonical_text() const;
};

} // namespace vlc
