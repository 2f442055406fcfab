#include "wavesift/config.hpp"

#include "wavesift/scenarios.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace wavesift {

namespace {

struct ScenarioPreset {
    double half;       // search box half-side in wavelengths
    double h0;         // initial spacing in wavelengths
    int k_max;
    int dim;
};

// Search region, initial spacing and level count used by the bundled
// examples; everything scales with the wavelength.
const std::map<std::string, ScenarioPreset> kScenarioPresets = {
    {"twin_squares", {1.2, 0.4, 6, 2}},
    {"twin_squares_sine", {1.2, 0.4, 6, 2}},
    {"annulus", {2.8, 0.4, 6, 2}},
    {"twin_cubes", {1.2, 0.8, 4, 3}},
    {"torus", {1.2, 0.8, 4, 3}},
};

bool is_geometry_file(const std::string& phantom)
{
    return phantom.size() > 5 && phantom.substr(phantom.size() - 5) == ".json";
}

[[noreturn]] void bad_field(const std::string& field, const std::string& why)
{
    throw ConfigError("config field '" + field + "': " + why);
}

} // namespace

void RunConfig::validate() const
{
    if (phantom.empty()) bad_field("phantom", "must not be empty");
    if (!(k > 0.0)) bad_field("k", "must be positive");
    if (n_i < 1) bad_field("n_i", "at least one incidence required");
    if (n_s < 1) bad_field("n_s", "at least one receiver required");
    if (!(radius > 0.0)) bad_field("radius", "must be positive");
    if (!(big_m > 1.0)) bad_field("big_m", "must exceed 1");
    if (!(eps > 0.0)) bad_field("eps", "must be positive");
    if (!(xi >= 0.0)) bad_field("xi", "must be nonnegative");
    if (h0 < 0.0) bad_field("h0", "must be positive (or 0 for the scenario preset)");
    if (k_max < 0) bad_field("k_max", "must be positive (or 0 for the scenario preset)");
    if (box && box->dim != 2 && box->dim != 3) bad_field("box", "dimension must be 2 or 3");
    if (formats.empty()) bad_field("formats", "at least one output format required");
    for (const auto& f : formats)
        if (f != "csv" && f != "vtk" && f != "json")
            bad_field("formats", "unknown format '" + f + "' (csv, vtk, json)");
}

RunConfig preset_config(const std::string& name)
{
    if (name == "paper") return RunConfig{};
    throw ConfigError("unknown preset '" + name + "' (available: paper)");
}

void resolve_scenario(RunConfig& config)
{
    config.validate();
    const double lambda = 2.0 * std::numbers::pi / config.k;

    const auto preset = kScenarioPresets.find(config.phantom);
    if (preset != kScenarioPresets.end()) {
        const ScenarioPreset& s = preset->second;
        if (config.h0 == 0.0) config.h0 = s.h0 * lambda;
        if (config.k_max == 0) config.k_max = s.k_max;
        if (!config.box) {
            const double half = s.half * lambda;
            config.box = s.dim == 2 ? SamplingBox::square(-half, half)
                                    : SamplingBox::cube(-half, half);
        }
        return;
    }
    if (!is_geometry_file(config.phantom))
        throw ConfigError("config field 'phantom': unknown phantom '" + config.phantom +
                          "' and not a .json geometry file");

    // Custom geometry: take dimensions from the file, snap a padded box to
    // multiples of h0 so the level-0 lattice fits exactly.
    const Phantom ph = load_phantom_json(config.phantom);
    if (config.h0 == 0.0) config.h0 = (ph.dim == 2 ? 0.4 : 0.8) * lambda;
    if (config.k_max == 0) config.k_max = ph.dim == 2 ? 6 : 4;
    if (!config.box) {
        const Point c = ph.bounding_box.center();
        Point lo{0.0, 0.0, 0.0}, hi{0.0, 0.0, 0.0};
        for (int a = 0; a < ph.dim; ++a) {
            const double half = 0.5 * ph.bounding_box.side(a) + 0.5 * config.h0;
            const double snapped = std::ceil(half / config.h0) * config.h0;
            lo[a] = c[a] - snapped;
            hi[a] = c[a] + snapped;
        }
        config.box = SamplingBox(lo, hi, ph.dim);
    }
}

RunConfig load_config_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config " + path.string() + ": not a JSON object");

    static const std::set<std::string> known = {
        "phantom", "k", "n_i", "n_s", "radius", "box", "h0", "big_m",
        "eps", "xi", "seed", "k_max", "out_dir", "formats"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw ConfigError("config field '" + key + "': unknown field");

    RunConfig config;
    const auto get = [&](const char* field, auto& slot) {
        if (!j.contains(field)) return;
        try {
            slot = j.at(field).get<std::decay_t<decltype(slot)>>();
        } catch (const nlohmann::json::exception& e) {
            bad_field(field, e.what());
        }
    };
    get("phantom", config.phantom);
    get("k", config.k);
    get("n_i", config.n_i);
    get("n_s", config.n_s);
    get("radius", config.radius);
    get("h0", config.h0);
    get("big_m", config.big_m);
    get("eps", config.eps);
    get("xi", config.xi);
    get("seed", config.seed);
    get("k_max", config.k_max);
    if (j.contains("out_dir")) {
        std::string dir;
        get("out_dir", dir);
        config.out_dir = dir;
    }
    get("formats", config.formats);
    if (j.contains("box")) {
        try {
            const auto& b = j.at("box");
            const int dim = b.at("dim").get<int>();
            Point lo{0.0, 0.0, 0.0}, hi{0.0, 0.0, 0.0};
            for (int a = 0; a < dim; ++a) {
                lo[a] = b.at("lower").at(a).get<double>();
                hi[a] = b.at("upper").at(a).get<double>();
            }
            config.box = SamplingBox(lo, hi, dim);
        } catch (const nlohmann::json::exception& e) {
            bad_field("box", e.what());
        } catch (const DomainError& e) {
            bad_field("box", e.what());
        }
    }
    config.validate();
    return config;
}

nlohmann::ordered_json config_to_json(const RunConfig& config)
{
    nlohmann::ordered_json j;
    j["phantom"] = config.phantom;
    j["k"] = config.k;
    j["n_i"] = config.n_i;
    j["n_s"] = config.n_s;
    j["radius"] = config.radius;
    if (config.box) {
        j["box"]["dim"] = config.box->dim;
        j["box"]["lower"] = {config.box->lower[0], config.box->lower[1], config.box->lower[2]};
        j["box"]["upper"] = {config.box->upper[0], config.box->upper[1], config.box->upper[2]};
    }
    j["h0"] = config.h0;
    j["big_m"] = config.big_m;
    j["eps"] = config.eps;
    j["xi"] = config.xi;
    j["seed"] = config.seed;
    j["k_max"] = config.k_max;
    j["out_dir"] = config.out_dir.generic_string();
    j["formats"] = config.formats;
    return j;
}

} // namespace wavesift
