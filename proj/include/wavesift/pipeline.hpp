#pragma once

#include "wavesift/config.hpp"
#include "wavesift/forward.hpp"
#include "wavesift/inversion.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace wavesift {

enum class ExportFormat { csv, vtk, json };

// "csv", "vtk" or "json"; throws UnknownFormat.
ExportFormat parse_format(const std::string& name);

// Synthesized measurements plus the forward bookkeeping the manifest records.
struct ForwardArtifacts {
    ScatterData data;
    double grid_h = 0.0;
    std::size_t grid_cells = 0;
    double seconds = 0.0;
};

// Forward synthesis for a resolved config: phantom -> fine offset grid ->
// contrast sources -> scattered field, noise applied last. The synthesis
// lattice is checked against every inversion level before returning.
ForwardArtifacts synthesize(const RunConfig& config);

struct PipelineArtifacts {
    ReconstructionResult result;
    std::filesystem::path manifest;
    std::filesystem::path data_csv;
    std::vector<std::filesystem::path> grid_files;
};

// The full experiment: resolve the config, synthesize data, reconstruct, and
// write everything under config.out_dir: data.csv/.json, one grid dump per
// iteration in each requested format, and manifest.json. Two runs with the
// same config and seed write byte-identical manifests except for the
// "timings" object.
PipelineArtifacts run_pipeline(const RunConfig& config);

// As run_pipeline, but reconstructing from measurements already on disk.
PipelineArtifacts invert_from_file(const std::filesystem::path& data_csv, RunConfig config);

// One iteration of a result re-emitted under out_dir as iteration_<n>.<fmt>;
// n is 0-based. The json form carries the iteration's cut-off and component
// count next to the cell data. Throws IterationOutOfRange.
std::filesystem::path export_grid(const ReconstructionResult& result, std::size_t iteration,
                                  ExportFormat format, const std::filesystem::path& out_dir);

} // namespace wavesift
