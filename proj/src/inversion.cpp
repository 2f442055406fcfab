#include "wavesift/inversion.hpp"

#include "wavesift/kernels.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <tuple>
#include <utility>

namespace wavesift {

std::vector<Complex> backprop_source(const std::vector<Complex>& u_j, const OperatorSet& ops)
{
    const auto y = ops.apply(OperatorKind::GSAdjoint, u_j);
    const double ynorm2 = [&] {
        double s = 0.0;
        for (std::size_t m = 0; m < y.size(); ++m) s += ops.measures[m] * std::norm(y[m]);
        return s;
    }();
    const auto z = ops.apply(OperatorKind::GS, y);
    if (ynorm2 == 0.0) return std::vector<Complex>(ops.m(), 0.0);

    double znorm2 = 0.0;
    for (std::size_t q = 0; q < z.size(); ++q)
        znorm2 += ops.receiver_weights[q] * std::norm(z[q]);
    const double lambda = ynorm2 / znorm2;

    std::vector<Complex> w(y);
    for (Complex& c : w) c *= lambda;
    return w;
}

std::vector<Complex> estimate_contrast(const std::vector<std::vector<Complex>>& w,
                                       const IncidenceSet& incidences,
                                       const OperatorSet& ops)
{
    if (w.size() != incidences.size())
        throw DimensionMismatch("one contrast source per incidence required");
    const std::size_t M = ops.m();
    const Wavenumber k(ops.k);

    std::vector<Complex> num(M, 0.0);
    std::vector<double> den(M, 0.0);
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (w[j].size() != M)
            throw DimensionMismatch("contrast source length does not match operator size");
        const auto gdw = ops.apply(OperatorKind::GD, w[j]);
        for (std::size_t m = 0; m < M; ++m) {
            const Complex t =
                plane_wave(k, incidences.directions[j], ops.centers[m]) + gdw[m];
            num[m] += w[j][m] * std::conj(t);
            den[m] += std::norm(t);
        }
    }

    double den_max = 0.0;
    for (double d : den) den_max = std::max(den_max, d);

    std::vector<Complex> chi(M, 0.0);
    for (std::size_t m = 0; m < M; ++m)
        if (den[m] >= 1e-14 * den_max && den[m] > 0.0) chi[m] = num[m] / den[m];
    return chi;
}

double smallest_distance(const std::vector<double>& a)
{
    if (a.size() < 2) throw TooShort("smallest_distance needs at least two values");
    double best = -1.0;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        const double gap = a[i + 1] - a[i];
        if (gap < 0.0) throw DomainError("smallest_distance: sequence must be nondecreasing");
        if (gap > 0.0 && (best < 0.0 || gap < best)) best = gap;
    }
    if (best < 0.0) throw AllEqual("smallest_distance: all neighbor distances are zero");
    return best;
}

std::optional<std::pair<double, double>> first_gap_interval(const std::vector<double>& a,
                                                            double big_m)
{
    const std::size_t m = a.size();
    if (m < 3) throw TooShort("first_gap_interval needs at least three values");

    // Running smallest positive distance over the prefix a_1..a_j, checked
    // against the gap (a_j, a_{j+1}) for 1-based j = 2..m-1.
    double prefix_min = 0.0;
    bool have_prefix = false;
    {
        const double g = a[1] - a[0];
        if (g < 0.0) throw DomainError("first_gap_interval: sequence must be nondecreasing");
        if (g > 0.0) {
            prefix_min = g;
            have_prefix = true;
        }
    }
    for (std::size_t j = 2; j < m; ++j) {
        const double gap = a[j] - a[j - 1];
        if (gap < 0.0) throw DomainError("first_gap_interval: sequence must be nondecreasing");
        if (have_prefix && gap >= big_m * prefix_min) return std::make_pair(a[j - 1], a[j]);
        if (gap > 0.0 && (!have_prefix || gap < prefix_min)) {
            prefix_min = gap;
            have_prefix = true;
        }
    }
    return std::nullopt;
}

double next_cutoff(const std::vector<Complex>& chi, double c_prev, double big_m)
{
    std::vector<double> vals;
    vals.reserve(chi.size());
    for (const Complex& c : chi) {
        const double m = std::abs(c);
        if (m >= c_prev) vals.push_back(m);
    }
    if (vals.empty())
        throw EmptyThresholdSet("no contrast values at or above the previous cut-off");
    // Too few survivors to define a gap interval: repeat the cut-off and let
    // the tolerance test stop the loop.
    if (vals.size() < 3) return c_prev;
    std::sort(vals.begin(), vals.end());
    const auto gap = first_gap_interval(vals, big_m);
    return gap ? gap->second : c_prev;
}

namespace {

// A candidate cut-off opens a sorted-value gap at least this many times the
// smallest positive gap seen below it.
constexpr double kGapCandidateRatio = 3.0;

// Every retained component must keep a peak clear of the cut-off:
// c <= (1 - margin) * peak.
constexpr double kRetentionMargin = 0.08;

// A candidate is vetoed when a value above this fraction of it falls outside
// the selected elements.
constexpr double kAbandonFraction = 0.65;

// Climbing is only meaningful while the survivor values still split into two
// clusters with a real valley: the gap at the two-cluster boundary must be
// at least this many times the median positive neighbor gap.
constexpr double kValleyGapRatio = 3.0;

// Hard cap on the fixed-lattice size; stops runaway refinement before the
// scattered-field block stops fitting in memory.
constexpr std::size_t kMaxLatticeCells = std::size_t(1) << 21;

// Scattered-field block and on-demand domain kernel over the full lattice at
// one spacing. The domain operator is never materialised: lattice centers
// differ by integer multiples of h, so its entries live in a table indexed by
// the coordinate difference.
struct LatticeField {
    const SamplingGrid* lattice = nullptr; // borrowed for the level's lifetime
    const ReceiverSet* receivers = nullptr;
    Wavenumber k{1.0};
    double measure = 0.0;
    std::vector<Point> centers;
    std::vector<Complex> gs;      // Ns x M, scaled like assemble_operators
    std::vector<Complex> gd_diff; // k^2 A G at each coordinate difference

    std::size_t m() const { return centers.size(); }
};

LatticeField make_lattice_field(const SamplingGrid& lattice, const ReceiverSet& receivers,
                                Wavenumber k)
{
    LatticeField f;
    f.lattice = &lattice;
    f.receivers = &receivers;
    f.k = k;
    f.measure = lattice.cell_measure();

    const std::size_t M = lattice.size();
    f.centers.resize(M);
    for (std::size_t n = 0; n < M; ++n) f.centers[n] = lattice.center(n);

    const int dim = lattice.dim();
    const double k2 = k.k * k.k;
    const std::size_t Ns = receivers.size();
    f.gs.assign(Ns * M, Complex(0.0));
    kernels::for_each_row(Ns, [&](std::size_t q) {
        for (std::size_t n = 0; n < M; ++n)
            f.gs[q * M + n] =
                k2 * f.measure * green(k, receivers.points[q], f.centers[n], dim);
    });

    const auto& nax = lattice.cells_per_axis;
    f.gd_diff.assign(M, Complex(0.0));
    kernels::for_each_row(static_cast<std::size_t>(nax[2] * nax[1]), [&](std::size_t zy) {
        const auto dz = static_cast<std::int64_t>(zy) / nax[1];
        const auto dy = static_cast<std::int64_t>(zy) % nax[1];
        for (std::int64_t dx = 0; dx < nax[0]; ++dx) {
            if (dx == 0 && dy == 0 && dz == 0) continue; // self term is excluded
            const Point p{lattice.h * static_cast<double>(dx),
                          lattice.h * static_cast<double>(dy),
                          lattice.h * static_cast<double>(dz)};
            f.gd_diff[static_cast<std::size_t>((dz * nax[1] + dy) * nax[0] + dx)] =
                k2 * f.measure * green(k, Point{0.0, 0.0, 0.0}, p, dim);
        }
    });
    return f;
}

// One domain-operator row: (GD v)(x_r) summed over the whole lattice.
Complex gd_row(const LatticeField& f, std::size_t r, const std::vector<Complex>& v)
{
    const auto& cells = f.lattice->cells;
    const auto& nax = f.lattice->cells_per_axis;
    const SamplingGrid::Coord cr = cells[r];
    Complex acc = 0.0;
    for (std::size_t n = 0; n < cells.size(); ++n) {
        if (n == r) continue;
        const SamplingGrid::Coord& cn = cells[n];
        const std::int64_t dx = cr[0] > cn[0] ? cr[0] - cn[0] : cn[0] - cr[0];
        const std::int64_t dy = cr[1] > cn[1] ? cr[1] - cn[1] : cn[1] - cr[1];
        const std::int64_t dz = cr[2] > cn[2] ? cr[2] - cn[2] : cn[2] - cr[2];
        acc += f.gd_diff[static_cast<std::size_t>((dz * nax[1] + dy) * nax[0] + dx)] * v[n];
    }
    return acc;
}

// Backprojection of one data column onto the lattice; mirrors backprop_source
// on operators assembled over the full lattice.
std::vector<Complex> lattice_backprop(const LatticeField& f, const std::vector<Complex>& u,
                                      ApplyCounters& counters)
{
    const std::size_t M = f.m();
    const std::size_t Ns = f.receivers->size();
    std::vector<Complex> y(M);
    kernels::weighted_adjoint_matvec(f.gs.data(), Ns, M, f.receivers->weights.data(),
                                     u.data(), y.data());
    for (Complex& c : y) c /= f.measure;
    ++counters.gs_adjoint;

    double ynorm2 = 0.0;
    for (const Complex& c : y) ynorm2 += f.measure * std::norm(c);

    std::vector<Complex> z(Ns);
    kernels::matvec(f.gs.data(), Ns, M, y.data(), z.data());
    ++counters.gs;
    if (ynorm2 == 0.0) return std::vector<Complex>(M, 0.0);

    double znorm2 = 0.0;
    for (std::size_t q = 0; q < Ns; ++q)
        znorm2 += f.receivers->weights[q] * std::norm(z[q]);
    const double lambda = ynorm2 / znorm2;
    for (Complex& c : y) c *= lambda;
    return y;
}

// Contrast estimate restricted to the evaluation rows; the sources live on
// the full lattice. One domain application is charged per incidence.
std::vector<Complex> lattice_contrast(const LatticeField& f,
                                      const std::vector<std::vector<Complex>>& w,
                                      const IncidenceSet& incidences,
                                      const std::vector<std::size_t>& rows,
                                      ApplyCounters& counters)
{
    std::vector<Complex> num(rows.size(), 0.0);
    std::vector<double> den(rows.size(), 0.0);
    for (std::size_t j = 0; j < w.size(); ++j) {
        const std::vector<Complex>& wj = w[j];
        kernels::for_each_row(rows.size(), [&](std::size_t i) {
            const std::size_t r = rows[i];
            const Complex t = plane_wave(f.k, incidences.directions[j], f.centers[r]) +
                              gd_row(f, r, wj);
            num[i] += wj[r] * std::conj(t);
            den[i] += std::norm(t);
        });
        ++counters.gd;
    }

    double den_max = 0.0;
    for (double d : den) den_max = std::max(den_max, d);
    std::vector<Complex> chi(rows.size(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (den[i] >= 1e-14 * den_max && den[i] > 0.0) chi[i] = num[i] / den[i];
    return chi;
}

// Row of a level cell in the full lattice at the same spacing.
std::size_t lattice_row(const SamplingGrid& lattice, const SamplingGrid::Coord& c)
{
    const auto before = [](const SamplingGrid::Coord& a, const SamplingGrid::Coord& b) {
        return std::tie(a[2], a[1], a[0]) < std::tie(b[2], b[1], b[0]);
    };
    const auto it = std::lower_bound(lattice.cells.begin(), lattice.cells.end(), c, before);
    if (it == lattice.cells.end() || *it != c)
        throw DomainError("multilevel_run: cell missing from the lattice");
    return static_cast<std::size_t>(it - lattice.cells.begin());
}

// Moduli at or above the previous cut-off, ascending, with their cells.
struct SurvivorSet {
    std::vector<double> value;
    std::vector<std::size_t> cell;
};

SurvivorSet collect_survivors(const std::vector<std::size_t>& act,
                              const std::vector<Complex>& chi, double c_prev)
{
    std::vector<std::pair<double, std::size_t>> sv;
    for (std::size_t i = 0; i < act.size(); ++i) {
        const double v = std::abs(chi[i]);
        if (v >= c_prev) sv.emplace_back(v, act[i]);
    }
    std::sort(sv.begin(), sv.end());
    SurvivorSet out;
    out.value.reserve(sv.size());
    out.cell.reserve(sv.size());
    for (const auto& [v, c] : sv) {
        out.value.push_back(v);
        out.cell.push_back(c);
    }
    return out;
}

std::vector<std::size_t> cells_at_or_above(const SurvivorSet& sv, double c)
{
    const auto it = std::lower_bound(sv.value.begin(), sv.value.end(), c);
    return {sv.cell.begin() + (it - sv.value.begin()), sv.cell.end()};
}

// Index of the first upper-cluster value in the variance-minimising
// two-cluster split of a sorted sequence (exact scan over prefix sums).
std::size_t two_means_split(const std::vector<double>& a)
{
    const std::size_t m = a.size();
    std::vector<double> s1(m + 1, 0.0), s2(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        s1[i + 1] = s1[i] + a[i];
        s2[i + 1] = s2[i] + a[i] * a[i];
    }
    const auto scatter = [&](std::size_t lo, std::size_t hi) {
        const double s = s1[hi] - s1[lo];
        return (s2[hi] - s2[lo]) - s * s / static_cast<double>(hi - lo);
    };
    std::size_t best_k = 1;
    double best = scatter(0, 1) + scatter(1, m);
    for (std::size_t k = 2; k < m; ++k) {
        const double v = scatter(0, k) + scatter(k, m);
        if (v < best) {
            best = v;
            best_k = k;
        }
    }
    return best_k;
}

// Flagged cells keep every element sharing one of their corner vertices.
SamplingGrid apply_selection(const SamplingGrid& grid, const std::vector<std::size_t>& cells)
{
    std::vector<std::size_t> verts;
    for (std::size_t m : cells)
        for (std::size_t v : grid.cell_vertices(m)) verts.push_back(v);
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    return set_active(grid, select_elements(grid, verts));
}

// Climbs the sorted survivor values: accepts the largest gap candidate, no
// higher than the two-cluster split, whose selection keeps at least as many
// components as the entry set, leaves every retained component a peak clear
// of the cut-off, and strands no comparable value outside the selection.
// Climbing happens at all only while the two-cluster boundary is a real
// valley; once the survivors are quasi-continuous there the remaining spread
// is scatterer-internal variation and the cut-off must settle. With no
// acceptable candidate the previous cut-off repeats, which feeds the
// stopping test.
double choose_cutoff(const SamplingGrid& grid, const SurvivorSet& sv, double c_prev,
                     std::size_t entry_components)
{
    const std::vector<double>& a = sv.value;
    const std::size_t m = a.size();
    if (m < 3) return c_prev;

    std::vector<double> candidates;
    double base = 0.0;
    bool have_base = false;
    for (std::size_t j = 2; j < m; ++j) {
        const double prev_gap = a[j - 1] - a[j - 2];
        if (prev_gap > 0.0 && (!have_base || prev_gap < base)) {
            base = prev_gap;
            have_base = true;
        }
        if (have_base && a[j] - a[j - 1] >= kGapCandidateRatio * base)
            candidates.push_back(a[j]);
    }
    if (candidates.empty()) return c_prev;

    std::vector<double> gaps;
    for (std::size_t j = 1; j < m; ++j)
        if (a[j] > a[j - 1]) gaps.push_back(a[j] - a[j - 1]);
    if (gaps.empty()) return c_prev;
    const auto mid = gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2);
    std::nth_element(gaps.begin(), mid, gaps.end());

    const std::size_t split = two_means_split(a);
    if (a[split] - a[split - 1] < kValleyGapRatio * *mid) return c_prev;

    const double cap = a[split];
    for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
        const double c = *it;
        if (c > cap) continue;

        const SamplingGrid trial = apply_selection(grid, cells_at_or_above(sv, c));
        const auto comps = connected_components(trial);
        if (comps.size() < entry_components) continue;

        std::vector<std::int32_t> label(grid.size(), -1);
        for (std::size_t ci = 0; ci < comps.size(); ++ci)
            for (std::size_t cell : comps[ci]) label[cell] = static_cast<std::int32_t>(ci);

        std::vector<double> peak(comps.size(), 0.0);
        bool stranded = false;
        for (std::size_t i = 0; i < m; ++i) {
            const std::int32_t l = label[sv.cell[i]];
            if (l < 0) {
                if (sv.value[i] >= kAbandonFraction * c) {
                    stranded = true;
                    break;
                }
            } else if (sv.value[i] > peak[l]) {
                peak[l] = sv.value[i];
            }
        }
        if (stranded) continue;

        bool shaved = false;
        for (double p : peak)
            if (c > (1.0 - kRetentionMargin) * p) {
                shaved = true;
                break;
            }
        if (shaved) continue;

        return c;
    }
    return c_prev;
}

} // namespace

ReconstructionResult multilevel_run(const ScatterData& data, const SamplingBox& box,
                                    double h0, double big_m, double eps, int k_max)
{
    data.validate();
    if (!(h0 > 0.0)) throw DomainError("multilevel_run: h0 must be positive");
    if (!(big_m > 1.0)) throw DomainError("multilevel_run: the gap index must exceed 1");
    if (!(eps > 0.0)) throw DomainError("multilevel_run: eps must be positive");
    if (k_max < 1) throw DomainError("multilevel_run: k_max must be at least 1");

    const Wavenumber k(data.k);
    ReconstructionResult result;
    result.big_m = big_m;
    result.eps = eps;
    result.cutoffs = {0.0};

    const std::uint64_t factor_before = factorization_count();
    SamplingGrid grid = create_uniform_grid(box, h0);
    double c_prev = 0.0;
    ApplyCounters counters;

    for (int iter = 1; iter <= k_max; ++iter) {
        const auto t0 = std::chrono::steady_clock::now();
        const ApplyCounters before = counters;

        // Sources and norms live on the full lattice over the original box;
        // refinement only shrinks the set of cells where chi is evaluated.
        const SamplingGrid lattice = create_uniform_grid(box, grid.h);
        if (lattice.size() > kMaxLatticeCells)
            throw DomainError("multilevel_run: lattice exceeds the cell budget");
        const LatticeField field = make_lattice_field(lattice, data.receivers, k);

        const auto act = grid.active_cells();
        std::vector<std::size_t> rows(act.size());
        for (std::size_t i = 0; i < act.size(); ++i)
            rows[i] = lattice_row(lattice, grid.cells[act[i]]);

        std::vector<std::vector<Complex>> w;
        w.reserve(data.n_i());
        for (std::size_t j = 0; j < data.n_i(); ++j)
            w.push_back(lattice_backprop(field, data.u[j], counters));
        const auto chi = lattice_contrast(field, w, data.incidences, rows, counters);

        const SurvivorSet sv = collect_survivors(act, chi, c_prev);
        if (sv.value.empty())
            throw NoScattererDetected(
                "every contrast value fell below the previous cut-off");
        const std::size_t entry_components = connected_components(grid).size();
        const double c_k = choose_cutoff(grid, sv, c_prev, entry_components);

        const SamplingGrid survivors = apply_selection(grid, cells_at_or_above(sv, c_k));
        if (survivors.active_count() == 0)
            throw NoScattererDetected("selection emptied the sampling domain");

        IterationRecord rec;
        rec.grid = survivors;
        rec.chi = chi;
        rec.cutoff = c_k;
        rec.components = connected_components(survivors).size();
        rec.applies.gd = counters.gd - before.gd;
        rec.applies.gs = counters.gs - before.gs;
        rec.applies.gs_adjoint = counters.gs_adjoint - before.gs_adjoint;
        rec.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.iterations.push_back(std::move(rec));
        result.cutoffs.push_back(c_k);

        if (iter >= 2 && std::abs(c_k - c_prev) <= eps) {
            result.converged = true;
            break;
        }
        c_prev = c_k;
        if (iter < k_max) grid = refine(survivors);
    }

    result.factorizations = factorization_count() - factor_before;
    return result;
}

} // namespace wavesift
