#pragma once

#include "wavesift/errors.hpp"
#include "wavesift/geometry.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace wavesift {

// Everything one reproducible experiment needs. The defaults are the
// reference measurement set-up shared by the bundled scenarios: unit
// wavelength, six incident waves and thirty receivers on a circle of radius
// five wavelengths, gap index 100, tolerance 1e-3, 10% noise.
struct RunConfig {
    std::string phantom = "twin_squares"; // built-in name or path of a geometry JSON
    double k = 2.0 * std::numbers::pi;
    std::size_t n_i = 6;
    std::size_t n_s = 30;
    double radius = 5.0; // measurement circle/sphere radius, same units as the box
    std::optional<SamplingBox> box; // unset: the phantom's preset search box
    double h0 = 0.0;                // 0: the phantom's preset initial spacing
    double big_m = 100.0;
    double eps = 1e-3;
    double xi = 0.1;
    std::uint64_t seed = 1;
    int k_max = 0; // 0: the phantom's preset level count
    std::filesystem::path out_dir = "out";
    std::vector<std::string> formats = {"csv", "json"};

    // Throws ConfigError naming the offending field.
    void validate() const;
};

// Named parameter baselines for the CLI. "paper" is the reference set-up
// above (it is also the default-constructed config). Throws ConfigError.
RunConfig preset_config(const std::string& name);

// Fills box, h0 and k_max from built-in per-phantom presets wherever the
// config left them unset; custom geometries get a box snapped outward to a
// multiple of h0. Throws ConfigError when nothing sensible can be derived.
void resolve_scenario(RunConfig& config);

// Reads a config JSON, starting from the defaults; unknown keys are errors.
// Diagnostics carry the field name, parse errors the line position.
RunConfig load_config_json(const std::filesystem::path& path);

// The config as JSON, resolved fields included; inverse of the file format.
nlohmann::ordered_json config_to_json(const RunConfig& config);

} // namespace wavesift
