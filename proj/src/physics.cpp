#include "wavesift/physics.hpp"

#include "wavesift/kernels.hpp"
#include "wavesift/special.hpp"

#include <cmath>
#include <string>

namespace wavesift {

void ReceiverSet::validate() const
{
    if (points.empty()) throw DomainError("receiver set is empty");
    if (points.size() != weights.size())
        throw DimensionMismatch("receiver points and weights differ in length");
    if (dim != 2 && dim != 3) throw DomainError("receiver set dimension must be 2 or 3");
    for (double w : weights)
        if (!(w > 0.0)) throw DomainError("receiver weights must be positive");
}

void IncidenceSet::validate() const
{
    if (directions.empty()) throw DomainError("incidence set is empty");
    if (dim != 2 && dim != 3) throw DomainError("incidence set dimension must be 2 or 3");
    for (const Point& d : directions)
        if (std::abs(norm(d) - 1.0) > 1e-12)
            throw DomainError("incidence directions must be unit vectors");
}

Complex green(Wavenumber k, const Point& x, const Point& xp, int dim)
{
    const double r = distance(x, xp);
    if (r < 1e-12 * k.wavelength())
        throw SingularPoint("green: evaluation points coincide");
    if (dim == 2) {
        const Complex h = special::hankel0_first_kind(k.k * r);
        return Complex(0.0, 0.25) * h;
    }
    if (dim == 3) {
        const double kr = k.k * r;
        return std::polar(1.0 / (4.0 * std::numbers::pi * r), kr);
    }
    throw DomainError("green: dimension must be 2 or 3");
}

Complex plane_wave(Wavenumber k, const Point& direction, const Point& x)
{
    return std::polar(1.0, k.k * dot(direction, x));
}

std::vector<Complex> OperatorSet::apply(OperatorKind kind, const std::vector<Complex>& v) const
{
    const std::size_t M = m(), Ns = ns();
    switch (kind) {
    case OperatorKind::GD: {
        if (v.size() != M) throw DimensionMismatch("apply GD: expected length M");
        std::vector<Complex> y(M);
        kernels::matvec(gd.data(), M, M, v.data(), y.data());
        ++counters->gd;
        return y;
    }
    case OperatorKind::GS: {
        if (v.size() != M) throw DimensionMismatch("apply GS: expected length M");
        std::vector<Complex> y(Ns);
        kernels::matvec(gs.data(), Ns, M, v.data(), y.data());
        ++counters->gs;
        return y;
    }
    case OperatorKind::GSAdjoint: {
        if (v.size() != Ns) throw DimensionMismatch("apply GS*: expected length Ns");
        std::vector<Complex> y(M);
        kernels::weighted_adjoint_matvec(gs.data(), Ns, M, receiver_weights.data(),
                                         v.data(), y.data());
        for (std::size_t n = 0; n < M; ++n) y[n] /= measures[n];
        ++counters->gs_adjoint;
        return y;
    }
    }
    throw DomainError("apply: unknown operator kind");
}

OperatorSet assemble_operators(const SamplingGrid& grid, const ReceiverSet& receivers,
                               Wavenumber k)
{
    receivers.validate();
    if (receivers.dim != grid.dim())
        throw DimensionMismatch("receiver set and grid dimensions differ");
    for (const Point& p : receivers.points)
        if (grid.box.contains(p))
            throw ReceiverInsideDomain("receiver lies inside the sampling box");

    OperatorSet op;
    op.k = k.k;
    op.dim = grid.dim();
    op.receiver_weights = receivers.weights;

    const auto act = grid.active_cells();
    const std::size_t M = act.size();
    op.centers.resize(M);
    op.measures.assign(M, grid.cell_measure());
    for (std::size_t i = 0; i < M; ++i) op.centers[i] = grid.center(act[i]);

    const double k2 = k.k * k.k;
    op.gd.assign(M * M, Complex(0.0));
    kernels::for_each_row(M, [&](std::size_t mrow) {
        for (std::size_t n = 0; n < M; ++n) {
            if (n == mrow) continue; // DDA self term is excluded
            op.gd[mrow * M + n] =
                k2 * op.measures[n] * green(k, op.centers[mrow], op.centers[n], op.dim);
        }
    });

    const std::size_t Ns = receivers.size();
    op.gs.assign(Ns * M, Complex(0.0));
    kernels::for_each_row(Ns, [&](std::size_t q) {
        for (std::size_t n = 0; n < M; ++n)
            op.gs[q * M + n] =
                k2 * op.measures[n] * green(k, receivers.points[q], op.centers[n], op.dim);
    });

    return op;
}

Complex weighted_inner(const std::vector<Complex>& a, const std::vector<Complex>& b,
                       const std::vector<double>& w)
{
    if (a.size() != b.size() || a.size() != w.size())
        throw DimensionMismatch("weighted_inner: length mismatch");
    Complex acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += w[i] * a[i] * std::conj(b[i]);
    return acc;
}

double weighted_norm(const std::vector<Complex>& a, const std::vector<double>& w)
{
    if (a.size() != w.size()) throw DimensionMismatch("weighted_norm: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += w[i] * std::norm(a[i]);
    return std::sqrt(acc);
}

} // namespace wavesift
