#pragma once

#include "wavesift/mesh.hpp"
#include "wavesift/physics.hpp"
#include "wavesift/scenarios.hpp"

#include <cstdint>
#include <vector>

namespace wavesift {

// Scattered-field measurements: one row per incidence, one column per
// receiver, with the geometry and noise metadata needed to reproduce them.
struct ScatterData {
    std::vector<std::vector<Complex>> u; // N_i x N_s
    ReceiverSet receivers;
    IncidenceSet incidences;
    double k = 0.0;
    double xi = 0.0;
    std::uint64_t seed = 0;

    std::size_t n_i() const { return u.size(); }
    std::size_t n_s() const { return u.empty() ? 0 : u[0].size(); }
    void validate() const;
};

// Number of dense factorizations performed since process start. The
// reconstruction loop is required to leave this untouched.
std::uint64_t factorization_count();

// Contrast sources w_j on the active cells of the grid: w_j solves
// (I - diag(chi) GD) w_j = diag(chi) u_inc_j with chi sampled at cell
// centers. Rows with chi = 0 are eliminated exactly (their w vanishes), one
// factorization is shared across incidences, and the residual of the full
// system is verified to 1e-10 relative. Warns once when h > lambda/10.
std::vector<std::vector<Complex>> solve_state(const Phantom& phantom,
                                              const SamplingGrid& grid,
                                              const OperatorSet& ops,
                                              const IncidenceSet& incidences);

// u_sca[j][q] = (GS w_j)_q.
ScatterData synth_scattered(const std::vector<std::vector<Complex>>& w,
                            const OperatorSet& ops, const ReceiverSet& receivers,
                            const IncidenceSet& incidences);

// Multiplies each entry by 1 + xi (r1 + i r2), r1, r2 uniform on [-1, 1] from
// a seeded 64-bit Mersenne Twister, entries visited row-major, r1 before r2.
ScatterData add_noise(const ScatterData& data, double xi, std::uint64_t seed);

// Synthesis grid: mesh size lambda/40 (2D) or lambda/16 (3D) on a box 10%
// larger than the phantom's bounding box, with the origin shifted by a fixed
// irrational-looking fraction of h so cell centers never coincide with any
// dyadic inversion lattice. Active set restricted to cells whose center
// carries nonzero contrast.
SamplingGrid make_forward_grid(const Phantom& phantom, Wavenumber k);

// Throws InverseCrime when the synthesis grid shares its cell-center lattice
// with any inversion level h0/2^k, k = 0..k_max.
void check_inverse_crime(const SamplingGrid& forward_grid, const SamplingBox& inversion_box,
                         double h0, int k_max);

} // namespace wavesift
