#include "wavesift/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <unordered_map>

namespace wavesift {

namespace {

// Canonical raster order: z slowest, x fastest.
bool coord_less(const SamplingGrid::Coord& a, const SamplingGrid::Coord& b)
{
    if (a[2] != b[2]) return a[2] < b[2];
    if (a[1] != b[1]) return a[1] < b[1];
    return a[0] < b[0];
}

struct CoordHash {
    std::size_t operator()(const SamplingGrid::Coord& c) const
    {
        std::size_t s = 0xcbf29ce484222325ull;
        for (auto v : c) {
            s ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull;
            s *= 0x100000001b3ull;
        }
        return s;
    }
};

// Rebuilds the vertex list and the vertex->cell incidence from scratch.
void build_vertices(SamplingGrid& g)
{
    const int d = g.dim();
    const int corners = 1 << d;
    std::vector<std::pair<SamplingGrid::Coord, std::int32_t>> pairs;
    pairs.reserve(g.cells.size() * corners);
    for (std::size_t m = 0; m < g.cells.size(); ++m) {
        for (int c = 0; c < corners; ++c) {
            SamplingGrid::Coord v = g.cells[m];
            for (int a = 0; a < d; ++a) v[a] += (c >> a) & 1;
            pairs.emplace_back(v, static_cast<std::int32_t>(m));
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& p, const auto& q) {
        if (p.first != q.first) return coord_less(p.first, q.first);
        return p.second < q.second;
    });

    g.vertices.clear();
    g.vertex_cells.clear();
    for (const auto& [v, m] : pairs) {
        if (g.vertices.empty() || g.vertices.back() != v) {
            g.vertices.push_back(v);
            g.vertex_cells.emplace_back();
        }
        g.vertex_cells.back().push_back(m);
    }
}

void sort_cells(SamplingGrid& g)
{
    std::sort(g.cells.begin(), g.cells.end(), coord_less);
}

} // namespace

double SamplingGrid::cell_measure() const
{
    double a = h;
    for (int i = 1; i < dim(); ++i) a *= h;
    return a;
}

Point SamplingGrid::center(std::size_t m) const
{
    Point p{0.0, 0.0, 0.0};
    for (int a = 0; a < dim(); ++a)
        p[a] = box.lower[a] + (static_cast<double>(cells[m][a]) + 0.5) * h;
    return p;
}

Point SamplingGrid::vertex_position(std::size_t v) const
{
    Point p{0.0, 0.0, 0.0};
    for (int a = 0; a < dim(); ++a)
        p[a] = box.lower[a] + static_cast<double>(vertices[v][a]) * h;
    return p;
}

std::size_t SamplingGrid::active_count() const
{
    std::size_t n = 0;
    for (char f : active) n += f != 0;
    return n;
}

std::vector<std::size_t> SamplingGrid::active_cells() const
{
    std::vector<std::size_t> out;
    out.reserve(active_count());
    for (std::size_t m = 0; m < cells.size(); ++m)
        if (active[m]) out.push_back(m);
    return out;
}

std::vector<std::size_t> SamplingGrid::cell_vertices(std::size_t m) const
{
    const int d = dim();
    std::vector<std::size_t> out;
    out.reserve(std::size_t{1} << d);
    for (int c = 0; c < (1 << d); ++c) {
        Coord v = cells[m];
        for (int a = 0; a < d; ++a) v[a] += (c >> a) & 1;
        out.push_back(vertex_id(v));
    }
    return out;
}

std::size_t SamplingGrid::vertex_id(const Coord& c) const
{
    auto it = std::lower_bound(vertices.begin(), vertices.end(), c, coord_less);
    if (it == vertices.end() || *it != c)
        throw DomainError("vertex_id: coordinate is not a vertex of this grid");
    return static_cast<std::size_t>(it - vertices.begin());
}

SamplingGrid create_uniform_grid(const SamplingBox& box, double h)
{
    if (!(h > 0.0)) throw NonConformingMesh("mesh size must be positive");

    SamplingGrid g;
    g.box = box;
    g.level = 0;
    g.h = h;
    std::int64_t n[3] = {1, 1, 1};
    for (int a = 0; a < box.dim; ++a) {
        const double ratio = box.side(a) / h;
        n[a] = std::llround(ratio);
        if (n[a] < 1 || std::abs(ratio - static_cast<double>(n[a])) > 1e-9 * ratio)
            throw NonConformingMesh("box side " + std::to_string(box.side(a)) +
                                    " is not an integer multiple of h = " + std::to_string(h));
        g.cells_per_axis[a] = n[a];
    }

    g.cells.reserve(static_cast<std::size_t>(n[0] * n[1] * n[2]));
    for (std::int64_t z = 0; z < n[2]; ++z)
        for (std::int64_t y = 0; y < n[1]; ++y)
            for (std::int64_t x = 0; x < n[0]; ++x)
                g.cells.push_back({x, y, z});
    g.active.assign(g.cells.size(), 1);
    build_vertices(g);
    return g;
}

std::vector<std::size_t> select_elements(const SamplingGrid& grid,
                                         const std::vector<std::size_t>& flagged_vertices)
{
    std::vector<std::size_t> out;
    for (std::size_t v : flagged_vertices) {
        if (v >= grid.vertices.size())
            throw DomainError("select_elements: vertex index out of range");
        for (std::int32_t m : grid.vertex_cells[v])
            out.push_back(static_cast<std::size_t>(m));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SamplingGrid set_active(const SamplingGrid& grid, const std::vector<std::size_t>& elements)
{
    SamplingGrid g = grid;
    g.active.assign(g.cells.size(), 0);
    for (std::size_t m : elements) {
        if (m >= g.cells.size())
            throw DomainError("set_active: element index out of range");
        g.active[m] = 1;
    }
    return g;
}

SamplingGrid refine(const SamplingGrid& grid)
{
    if (grid.active_count() == 0) throw EmptyActiveSet("refine: no active elements");

    SamplingGrid g;
    g.box = grid.box;
    g.level = grid.level + 1;
    g.h = grid.h / 2.0;
    const int d = grid.dim();
    for (int a = 0; a < d; ++a) g.cells_per_axis[a] = 2 * grid.cells_per_axis[a];

    g.cells.reserve(grid.active_count() << d);
    for (std::size_t m = 0; m < grid.cells.size(); ++m) {
        if (!grid.active[m]) continue;
        for (int c = 0; c < (1 << d); ++c) {
            SamplingGrid::Coord child = grid.cells[m];
            for (int a = 0; a < d; ++a) child[a] = 2 * child[a] + ((c >> a) & 1);
            g.cells.push_back(child);
        }
    }
    sort_cells(g);
    g.active.assign(g.cells.size(), 1);
    build_vertices(g);
    return g;
}

std::vector<std::vector<std::size_t>> connected_components(const SamplingGrid& grid)
{
    std::unordered_map<SamplingGrid::Coord, std::size_t, CoordHash> index;
    for (std::size_t m = 0; m < grid.cells.size(); ++m)
        if (grid.active[m]) index.emplace(grid.cells[m], m);

    std::vector<std::vector<std::size_t>> components;
    std::vector<char> seen(grid.cells.size(), 0);
    const int d = grid.dim();
    for (std::size_t m = 0; m < grid.cells.size(); ++m) {
        if (!grid.active[m] || seen[m]) continue;
        std::vector<std::size_t> comp, stack{m};
        seen[m] = 1;
        while (!stack.empty()) {
            const std::size_t cur = stack.back();
            stack.pop_back();
            comp.push_back(cur);
            for (int a = 0; a < d; ++a) {
                for (int s = -1; s <= 1; s += 2) {
                    SamplingGrid::Coord nb = grid.cells[cur];
                    nb[a] += s;
                    auto it = index.find(nb);
                    if (it != index.end() && !seen[it->second]) {
                        seen[it->second] = 1;
                        stack.push_back(it->second);
                    }
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
    }
    return components;
}

} // namespace wavesift
