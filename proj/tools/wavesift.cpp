#include <CLI11.hpp>
#include <json.hpp>

#include "wavesift/io.hpp"
#include "wavesift/kernels.hpp"
#include "wavesift/pipeline.hpp"
#include "wavesift/scenarios.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

using namespace wavesift;

// Exit codes: 0 success, 2 configuration, 3 file handling, 4 any other
// library error, 1 everything else. CLI11 usage errors keep its own codes.
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitDomain = 4;

// Flags shared by run/synthesize/invert; a flag given on the command line
// overrides the config file, which overrides the preset.
struct CommonFlags {
    CLI::App* sub = nullptr;
    std::string phantom;
    std::string config_file;
    std::string preset = "paper";
    double xi = 0.0;
    std::uint64_t seed = 0;
    double h0 = 0.0;
    double big_m = 0.0;
    double eps = 0.0;
    int k_max = 0;
    std::string out;
    std::vector<std::string> formats;

    void attach(CLI::App* s, bool with_phantom)
    {
        sub = s;
        if (with_phantom)
            s->add_option("--phantom", phantom, "built-in phantom name or geometry JSON file");
        auto* cfg = s->add_option("--config", config_file, "run configuration JSON file");
        s->add_option("--preset", preset, "named parameter baseline (paper)")->excludes(cfg);
        s->add_option("--xi", xi, "relative noise level");
        s->add_option("--seed", seed, "noise RNG seed");
        s->add_option("--h0", h0, "initial mesh size");
        s->add_option("--big-m", big_m, "gap index M");
        s->add_option("--eps", eps, "cut-off stagnation tolerance");
        s->add_option("--kmax", k_max, "maximum refinement level count");
        s->add_option("--out", out, "output directory");
        s->add_option("--format", formats, "grid dump formats: csv, vtk, json");
    }

    RunConfig build() const
    {
        RunConfig config =
            sub->count("--config") ? load_config_json(config_file) : preset_config(preset);
        if (sub->count("--phantom")) config.phantom = phantom;
        if (sub->count("--xi")) config.xi = xi;
        if (sub->count("--seed")) config.seed = seed;
        if (sub->count("--h0")) config.h0 = h0;
        if (sub->count("--big-m")) config.big_m = big_m;
        if (sub->count("--eps")) config.eps = eps;
        if (sub->count("--kmax")) config.k_max = k_max;
        if (sub->count("--out")) config.out_dir = out;
        if (sub->count("--format"))
            config.formats = formats;
        else if (!sub->count("--config") && phantom_dim(config) == 3 &&
                 std::find(config.formats.begin(), config.formats.end(), "vtk") ==
                     config.formats.end())
            config.formats.push_back("vtk");
        config.validate();
        return config;
    }

    static int phantom_dim(const RunConfig& config)
    {
        if (config.box) return config.box->dim;
        try {
            return make_phantom(config.phantom).dim;
        } catch (const UnknownPhantom&) {
            return 0;
        }
    }
};

void print_summary(const PipelineArtifacts& artifacts)
{
    const ReconstructionResult& r = artifacts.result;
    for (std::size_t i = 0; i < r.iterations.size(); ++i) {
        const IterationRecord& rec = r.iterations[i];
        std::printf("iteration %zu: h=%g cutoff=%g components=%zu active=%zu\n", i + 1,
                    rec.grid.h, rec.cutoff, rec.components, rec.grid.active_count());
    }
    std::printf("%s after %zu iterations, %llu factorizations\n",
                r.converged ? "converged" : "stopped at the level limit", r.iterations.size(),
                static_cast<unsigned long long>(r.factorizations));
    std::printf("manifest: %s\n", artifacts.manifest.string().c_str());
}

int cmd_run(const CommonFlags& flags)
{
    print_summary(run_pipeline(flags.build()));
    return 0;
}

int cmd_synthesize(const CommonFlags& flags)
{
    const RunConfig config = flags.build();
    const ForwardArtifacts fwd = synthesize(config);
    std::filesystem::create_directories(config.out_dir);
    const auto csv = config.out_dir / "data.csv";
    write_scatter(csv, fwd.data);
    std::printf("synthesized %zu x %zu measurements on a %zu-cell grid (h=%g)\n",
                fwd.data.n_i(), fwd.data.n_s(), fwd.grid_cells, fwd.grid_h);
    std::printf("data: %s\n", csv.string().c_str());
    return 0;
}

int cmd_invert(const std::string& data_file, const CommonFlags& flags)
{
    print_summary(invert_from_file(data_file, flags.build()));
    return 0;
}

int cmd_export(const std::string& run_dir, int iteration, const std::string& format,
               const std::string& out)
{
    namespace fs = std::filesystem;
    const fs::path dir(run_dir);
    nlohmann::json manifest;
    {
        std::ifstream in(dir / "manifest.json");
        if (!in) throw IoError("cannot open manifest: " + (dir / "manifest.json").string());
        try {
            manifest = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw IoError("bad manifest in " + run_dir + ": " + e.what());
        }
    }
    const auto& iters = manifest.at("iterations");
    if (iteration < 0) iteration = static_cast<int>(iters.size()) - 1;
    if (iteration < 0 || static_cast<std::size_t>(iteration) >= iters.size())
        throw IterationOutOfRange("iteration " + std::to_string(iteration) + " of " +
                                  std::to_string(iters.size()));

    const std::string name = "iteration_" + std::to_string(iteration);
    const GridDump dump = read_grid_csv(dir / (name + ".csv"));
    const fs::path out_dir = out.empty() ? dir : fs::path(out);
    fs::create_directories(out_dir);
    const fs::path target = out_dir / (name + "." + format);
    switch (parse_format(format)) {
    case ExportFormat::csv: fs::copy_file(dir / (name + ".csv"), target,
                                          fs::copy_options::overwrite_existing); break;
    case ExportFormat::vtk: write_vtk(target, dump); break;
    case ExportFormat::json:
        write_grid_json(target, dump, static_cast<std::size_t>(iteration),
                        iters.at(iteration).at("cutoff").get<double>(),
                        iters.at(iteration).at("components").get<std::size_t>());
        break;
    }
    std::printf("%s\n", target.string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"multilevel sampling reconstruction of scatterer locations\n"
                 "(set WAVESIFT_THREADS to cap the worker count)"};
    app.require_subcommand(1);

    CommonFlags run_flags, synth_flags, invert_flags;
    std::string data_file, run_dir, export_format = "csv", export_out;
    int export_iteration = -1;

    auto* run = app.add_subcommand("run", "synthesize data and reconstruct");
    run_flags.attach(run, true);

    auto* synth = app.add_subcommand("synthesize", "forward synthesis only");
    synth_flags.attach(synth, true);

    auto* invert = app.add_subcommand("invert", "reconstruct from a measurement file");
    invert->add_option("data", data_file, "measurement CSV (JSON sidecar alongside)")
        ->required();
    invert_flags.attach(invert, true);

    auto* exp = app.add_subcommand("export", "re-emit one iteration of a finished run");
    exp->add_option("run_dir", run_dir, "output directory of a previous run")->required();
    exp->add_option("--iteration", export_iteration, "0-based iteration (default: last)");
    exp->add_option("--format", export_format, "csv, vtk or json");
    exp->add_option("--out", export_out, "target directory (default: the run directory)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_flags);
        if (synth->parsed()) return cmd_synthesize(synth_flags);
        if (invert->parsed()) return cmd_invert(data_file, invert_flags);
        return cmd_export(run_dir, export_iteration, export_format, export_out);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const UnknownFormat& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDomain;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 1;
    }
}
