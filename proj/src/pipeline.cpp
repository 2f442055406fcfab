#include "wavesift/pipeline.hpp"

#include "wavesift/io.hpp"
#include "wavesift/scenarios.hpp"

#include <chrono>
#include <fstream>

namespace wavesift {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Phantom resolve_phantom(const RunConfig& config)
{
    const bool file = config.phantom.size() > 5 &&
                      config.phantom.substr(config.phantom.size() - 5) == ".json";
    if (file) return load_phantom_json(config.phantom);
    return make_phantom(config.phantom, 2.0 * std::numbers::pi / config.k);
}

const char* format_name(ExportFormat f)
{
    switch (f) {
    case ExportFormat::csv: return "csv";
    case ExportFormat::vtk: return "vtk";
    default: return "json";
    }
}

// Everything except the timings object is a pure function of config + seed.
void write_manifest(const std::filesystem::path& path, const RunConfig& config,
                    const ForwardArtifacts& fwd, const ReconstructionResult& result,
                    const std::vector<std::filesystem::path>& grid_files,
                    const std::filesystem::path& data_csv, double inversion_seconds)
{
    nlohmann::ordered_json j;
    j["config"] = config_to_json(config);
    j["forward"]["grid_h"] = fwd.grid_h;
    j["forward"]["grid_cells"] = fwd.grid_cells;
    j["forward"]["data_file"] = data_csv.filename().generic_string();
    j["cutoffs"] = result.cutoffs;
    j["converged"] = result.converged;
    j["factorizations"] = result.factorizations;
    auto& iters = j["iterations"];
    iters = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < result.iterations.size(); ++i) {
        const IterationRecord& rec = result.iterations[i];
        nlohmann::ordered_json it;
        it["level"] = i + 1;
        it["h"] = rec.grid.h;
        it["cutoff"] = rec.cutoff;
        it["components"] = rec.components;
        it["active"] = rec.grid.active_count();
        it["applies"]["gd"] = rec.applies.gd;
        it["applies"]["gs"] = rec.applies.gs;
        it["applies"]["gs_adjoint"] = rec.applies.gs_adjoint;
        iters.push_back(std::move(it));
    }
    auto& files = j["files"];
    files = nlohmann::ordered_json::array();
    for (const auto& g : grid_files) files.push_back(g.filename().generic_string());
    auto& timings = j["timings"];
    timings["forward_seconds"] = fwd.seconds;
    timings["inversion_seconds"] = inversion_seconds;
    auto& per_it = timings["per_iteration_seconds"];
    per_it = nlohmann::ordered_json::array();
    for (const IterationRecord& rec : result.iterations) per_it.push_back(rec.seconds);

    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

PipelineArtifacts write_artifacts(const RunConfig& config, const ForwardArtifacts& fwd,
                                  ReconstructionResult result, double inversion_seconds)
{
    std::filesystem::create_directories(config.out_dir);

    PipelineArtifacts artifacts;
    artifacts.data_csv = config.out_dir / "data.csv";
    write_scatter(artifacts.data_csv, fwd.data);

    for (std::size_t i = 0; i < result.iterations.size(); ++i) {
        for (const std::string& fmt : config.formats) {
            const auto file =
                export_grid(result, i, parse_format(fmt), config.out_dir);
            artifacts.grid_files.push_back(file);
        }
    }

    artifacts.manifest = config.out_dir / "manifest.json";
    write_manifest(artifacts.manifest, config, fwd, result, artifacts.grid_files,
                   artifacts.data_csv, inversion_seconds);
    artifacts.result = std::move(result);
    return artifacts;
}

} // namespace

ExportFormat parse_format(const std::string& name)
{
    if (name == "csv") return ExportFormat::csv;
    if (name == "vtk") return ExportFormat::vtk;
    if (name == "json") return ExportFormat::json;
    throw UnknownFormat("unknown export format '" + name + "' (csv, vtk, json)");
}

ForwardArtifacts synthesize(const RunConfig& raw)
{
    RunConfig config = raw;
    resolve_scenario(config);
    const auto t0 = Clock::now();

    const Phantom phantom = resolve_phantom(config);
    const Wavenumber k(config.k);
    const SamplingGrid fgrid = make_forward_grid(phantom, k);
    const ReceiverSet receivers = receiver_positions(config.n_s, config.radius, phantom.dim);
    const IncidenceSet incidences = incidence_directions(config.n_i, phantom.dim);
    const OperatorSet ops = assemble_operators(fgrid, receivers, k);
    const auto w = solve_state(phantom, fgrid, ops, incidences);

    ForwardArtifacts fwd;
    fwd.data = add_noise(synth_scattered(w, ops, receivers, incidences), config.xi, config.seed);
    fwd.grid_h = fgrid.h;
    fwd.grid_cells = fgrid.active_count();
    check_inverse_crime(fgrid, *config.box, config.h0, config.k_max);
    fwd.seconds = seconds_since(t0);
    return fwd;
}

PipelineArtifacts run_pipeline(const RunConfig& raw)
{
    RunConfig config = raw;
    resolve_scenario(config);

    const ForwardArtifacts fwd = synthesize(config);
    const auto t0 = Clock::now();
    ReconstructionResult result = multilevel_run(fwd.data, *config.box, config.h0,
                                                 config.big_m, config.eps, config.k_max);
    return write_artifacts(config, fwd, std::move(result), seconds_since(t0));
}

PipelineArtifacts invert_from_file(const std::filesystem::path& data_csv, RunConfig config)
{
    ForwardArtifacts fwd;
    fwd.data = read_scatter(data_csv);
    config.k = fwd.data.k;
    config.xi = fwd.data.xi;
    config.seed = fwd.data.seed;
    config.n_i = fwd.data.n_i();
    config.n_s = fwd.data.n_s();
    resolve_scenario(config);

    const auto t0 = Clock::now();
    ReconstructionResult result = multilevel_run(fwd.data, *config.box, config.h0,
                                                 config.big_m, config.eps, config.k_max);
    return write_artifacts(config, fwd, std::move(result), seconds_since(t0));
}

std::filesystem::path export_grid(const ReconstructionResult& result, std::size_t iteration,
                                  ExportFormat format, const std::filesystem::path& out_dir)
{
    if (iteration >= result.iterations.size())
        throw IterationOutOfRange("iteration " + std::to_string(iteration) + " of " +
                                  std::to_string(result.iterations.size()));
    std::filesystem::create_directories(out_dir);
    const IterationRecord& rec = result.iterations[iteration];
    const auto path =
        out_dir / ("iteration_" + std::to_string(iteration) + "." + format_name(format));
    switch (format) {
    case ExportFormat::csv: write_grid_csv(path, rec.grid, rec.chi); break;
    case ExportFormat::vtk: write_vtk(path, rec.grid, rec.chi); break;
    case ExportFormat::json:
        write_grid_json(path, make_dump(rec.grid, rec.chi), iteration, rec.cutoff,
                        rec.components);
        break;
    }
    return path;
}

} // namespace wavesift
