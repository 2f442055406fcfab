#pragma once

#include "wavesift/forward.hpp"
#include "wavesift/mesh.hpp"

#include <filesystem>
#include <vector>

namespace wavesift {

// One grid level as written to disk: every element center with its activity
// flag and contrast estimate.
struct GridDump {
    int dim = 2;
    double h = 0.0;
    std::vector<Point> centers;
    std::vector<char> active;
    std::vector<Complex> chi;

    std::size_t size() const { return centers.size(); }
};

GridDump make_dump(const SamplingGrid& grid, const std::vector<Complex>& chi);

// CSV with header x,y[,z],h,active,chi_re,chi_im and one row per element
// center. Floats carry 17 significant digits, so reading a dump back
// reproduces every value exactly. chi must hold one value per grid cell.
void write_grid_csv(const std::filesystem::path& path, const SamplingGrid& grid,
                    const std::vector<Complex>& chi);
GridDump read_grid_csv(const std::filesystem::path& path);

// JSON form of one dump carrying the iteration's cut-off and component count
// next to the cell data.
void write_grid_json(const std::filesystem::path& path, const GridDump& dump,
                     std::size_t iteration, double cutoff, std::size_t components);

// Measurement CSV with header incidence,receiver,re,im (indices 0-based,
// receiver fastest) plus a JSON sidecar at the same path with extension
// ".json" carrying k, xi, seed and the receiver/incidence geometry. Reading
// needs both files.
void write_scatter(const std::filesystem::path& csv_path, const ScatterData& data);
ScatterData read_scatter(const std::filesystem::path& csv_path);

// Legacy-VTK STRUCTURED_POINTS dump of |chi| and the activity mask as point
// data on the cell-center lattice. Cells absent from the grid (pruned by
// refinement) read as 0/inactive.
void write_vtk(const std::filesystem::path& path, const SamplingGrid& grid,
               const std::vector<Complex>& chi);
void write_vtk(const std::filesystem::path& path, const GridDump& dump);

} // namespace wavesift
