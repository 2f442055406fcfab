#pragma once

#include "wavesift/errors.hpp"
#include "wavesift/geometry.hpp"
#include "wavesift/mesh.hpp"

#include <cstdint>
#include <memory>
#include <numbers>
#include <vector>

namespace wavesift {

struct Wavenumber {
    double k;
    explicit Wavenumber(double k_) : k(k_)
    {
        if (!(k > 0.0)) throw DomainError("wavenumber must be positive");
    }
    double wavelength() const { return 2.0 * std::numbers::pi / k; }
};

// Measurement points on the surface S with their quadrature weights; the
// weights sum to the measure of S.
struct ReceiverSet {
    std::vector<Point> points;
    std::vector<double> weights;
    int dim = 2;

    std::size_t size() const { return points.size(); }
    void validate() const;
};

// Unit propagation directions of the incident plane waves.
struct IncidenceSet {
    std::vector<Point> directions;
    int dim = 2;

    std::size_t size() const { return directions.size(); }
    void validate() const;
};

// Free-space outgoing Green's function: (i/4) H0^(1)(k r) in 2D,
// exp(ikr)/(4 pi r) in 3D. Throws SingularPoint when r < 1e-12 wavelengths.
Complex green(Wavenumber k, const Point& x, const Point& xp, int dim);

// Incident plane wave exp(i k d.x) for a unit direction d.
Complex plane_wave(Wavenumber k, const Point& direction, const Point& x);

enum class OperatorKind { GD, GS, GSAdjoint };

struct ApplyCounters {
    std::uint64_t gd = 0;
    std::uint64_t gs = 0;
    std::uint64_t gs_adjoint = 0;
    std::uint64_t total() const { return gd + gs + gs_adjoint; }
};

// Dense discrete operators for one (grid, receiver set, wavenumber) triple,
// assembled over the active elements only. Immutable after assembly; apply()
// only reads matrix data, so sharing across threads is safe. The counters are
// shared between copies so a pipeline can account for every application.
struct OperatorSet {
    std::vector<Complex> gd; // M x M, zero diagonal
    std::vector<Complex> gs; // Ns x M
    std::vector<Point> centers;          // active element centers x_m
    std::vector<double> measures;        // element measures A_m
    std::vector<double> receiver_weights; // quadrature weights s_q
    double k = 0.0;
    int dim = 2;
    std::shared_ptr<ApplyCounters> counters = std::make_shared<ApplyCounters>();

    std::size_t m() const { return centers.size(); }
    std::size_t ns() const { return receiver_weights.size(); }

    // GD: M->M, GS: M->Ns, GSAdjoint: Ns->M with the weighted conjugate
    // transpose, so <GS w, v>_S = <w, GS* v>_D holds exactly as a sum.
    std::vector<Complex> apply(OperatorKind kind, const std::vector<Complex>& v) const;
};

OperatorSet assemble_operators(const SamplingGrid& grid, const ReceiverSet& receivers,
                               Wavenumber k);

// Weighted inner products <a,b> = sum_i w_i a_i conj(b_i) and their norms;
// the domain version weights by element measures, the surface version by
// receiver quadrature weights.
Complex weighted_inner(const std::vector<Complex>& a, const std::vector<Complex>& b,
                       const std::vector<double>& w);
double weighted_norm(const std::vector<Complex>& a, const std::vector<double>& w);

} // namespace wavesift
