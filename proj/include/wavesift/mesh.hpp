#pragma once

#include "wavesift/errors.hpp"
#include "wavesift/geometry.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace wavesift {

// Uniform rectangular/cubic mesh at one refinement level of the sampling box.
// Cells and vertices are kept as integer lattice coordinates so that
// deduplication and child/parent arithmetic are exact; physical positions are
// derived on demand. Grids are immutable values: selection and refinement
// return new grids.
struct SamplingGrid {
    using Coord = std::array<std::int64_t, 3>;

    SamplingBox box;
    int level = 0;
    double h = 0.0;
    // Lattice extent per axis at this level; 1 on the unused z axis in 2D.
    Coord cells_per_axis{1, 1, 1};
    // Cells present at this level (after refinement only children of selected
    // parents remain), in canonical z,y,x raster order.
    std::vector<Coord> cells;
    std::vector<char> active;
    // Deduplicated cell corners, canonically ordered, with the inverse of the
    // cell->corner map alongside.
    std::vector<Coord> vertices;
    std::vector<std::vector<std::int32_t>> vertex_cells;

    int dim() const { return box.dim; }
    std::size_t size() const { return cells.size(); }
    double cell_measure() const;
    Point center(std::size_t m) const;
    Point vertex_position(std::size_t v) const;
    std::size_t active_count() const;
    std::vector<std::size_t> active_cells() const;
    // The 2^d corner vertex ids of cell m.
    std::vector<std::size_t> cell_vertices(std::size_t m) const;
    std::size_t vertex_id(const Coord& c) const;
};

// Level-0 grid covering the box with all elements active. The box sides must
// be integer multiples of h to 1e-9 relative tolerance.
SamplingGrid create_uniform_grid(const SamplingBox& box, double h);

// Union of the elements incident to any flagged vertex, sorted. Empty input
// yields an empty selection.
std::vector<std::size_t> select_elements(const SamplingGrid& grid,
                                         const std::vector<std::size_t>& flagged_vertices);

// Copy of the grid whose active set is exactly `elements`.
SamplingGrid set_active(const SamplingGrid& grid, const std::vector<std::size_t>& elements);

// Next-level grid: every active element splits into 2^d children, all active;
// inactive elements produce nothing.
SamplingGrid refine(const SamplingGrid& grid);

// Partition of the active elements under face adjacency, components ordered
// by their smallest element index, indices ascending within each.
std::vector<std::vector<std::size_t>> connected_components(const SamplingGrid& grid);

} // namespace wavesift
