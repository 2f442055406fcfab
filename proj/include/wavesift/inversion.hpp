#pragma once

#include "wavesift/forward.hpp"
#include "wavesift/mesh.hpp"
#include "wavesift/physics.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace wavesift {

// One pass of the reconstruction loop. `grid` holds every cell of the level
// with the post-selection survivors flagged active; `chi` is the contrast
// estimate per cell (all cells were active when it was computed).
struct IterationRecord {
    SamplingGrid grid;
    std::vector<Complex> chi;
    double cutoff = 0.0;
    std::size_t components = 0;
    double seconds = 0.0;
    ApplyCounters applies; // operator applications during this iteration
};

struct ReconstructionResult {
    std::vector<IterationRecord> iterations;
    std::vector<double> cutoffs; // c_0 = 0, then one value per iteration
    bool converged = false;
    std::uint64_t factorizations = 0; // dense factorizations during the loop
    double big_m = 0.0;
    double eps = 0.0;
};

// Backpropagated contrast source: w = lambda GS* u with
// lambda = |GS* u|^2_D / |GS GS* u|^2_S, the least-squares coefficient of the
// one-dimensional subspace spanned by GS* u. Zero data yields w = 0. Costs
// exactly one GS* and one GS application.
std::vector<Complex> backprop_source(const std::vector<Complex>& u_j, const OperatorSet& ops);

// Pointwise contrast estimate
//   chi(x_m) = sum_j w_j conj(t_j) / sum_j |t_j|^2,  t_j = u_inc_j + GD w_j,
// with chi = 0 wherever the denominator drops below 1e-14 of its maximum.
// Costs exactly one GD application per incidence.
std::vector<Complex> estimate_contrast(const std::vector<std::vector<Complex>>& w,
                                       const IncidenceSet& incidences,
                                       const OperatorSet& ops);

// Smallest strictly positive distance between neighbors of a nondecreasing
// sequence. Throws TooShort (length < 2) or AllEqual (every gap zero).
double smallest_distance(const std::vector<double>& a);

// First index j in [2, m-1] (1-based) whose gap a_{j+1} - a_j is at least
// big_m times the smallest positive neighbor distance of a_1..a_j; returns
// that interval or nothing. Indices j whose prefix has no positive distance
// are skipped. Throws TooShort when m < 3.
std::optional<std::pair<double, double>> first_gap_interval(const std::vector<double>& a,
                                                            double big_m);

// Next cut-off: sort the moduli not below c_prev and take the right endpoint
// of their first gap interval; where no gap interval exists (including fewer
// than 3 survivors) the cut-off repeats so the tolerance test terminates the
// loop. Throws EmptyThresholdSet when nothing survives c_prev.
double next_cutoff(const std::vector<Complex>& chi, double c_prev, double big_m);

// The complete multilevel loop. Per level every incidence is backpropagated
// over the full lattice covering the box at the current spacing; refinement
// only shrinks the set of cells where the contrast is evaluated, so norms and
// sources never lose the discarded background. The cut-off then climbs the
// sorted contrast moduli: values opening a gap well above the smallest one
// seen below them are candidates, and the largest candidate is accepted, up
// to the two-cluster split of the values, whose selection does not lose
// components, leaves every component a peak clearly above the cut-off, and
// strands no comparable value outside the kept elements. Climbing stops for
// good once the two-cluster boundary is no wider than the typical neighbor
// gap, i.e. the survivors have become one quasi-continuous band; from then
// on, and whenever no candidate is acceptable, the cut-off repeats. Elements sharing a vertex with an
// above-cut-off cell survive to the next, halved level, and the loop stops
// once |c_k - c_{k-1}| <= eps (tested from the second iteration) or after
// k_max levels. big_m is recorded on the result; the climb's gap sensitivity
// is fixed (see the constants in the implementation). The loop applies
// operators exactly 3 N_i times per iteration and never factorizes a matrix.
ReconstructionResult multilevel_run(const ScatterData& data, const SamplingBox& box,
                                    double h0, double big_m, double eps, int k_max);

} // namespace wavesift
