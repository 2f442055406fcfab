#include "wavesift/forward.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <random>

namespace wavesift {

namespace {

std::atomic<std::uint64_t> g_factorizations{0};

// Uniform draw on [-1, 1] with an explicit bit mapping so streams are
// identical across platforms.
double symmetric_uniform(std::mt19937_64& rng)
{
    const double u01 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return 2.0 * u01 - 1.0;
}

} // namespace

void ScatterData::validate() const
{
    receivers.validate();
    incidences.validate();
    if (u.size() != incidences.size())
        throw DimensionMismatch("scatter data rows do not match incidence count");
    for (const auto& row : u) {
        if (row.size() != receivers.size())
            throw DimensionMismatch("scatter data columns do not match receiver count");
        for (const Complex& c : row)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw DomainError("scatter data contains non-finite entries");
    }
    if (!(k > 0.0)) throw DomainError("scatter data wavenumber must be positive");
    if (xi < 0.0) throw DomainError("scatter data noise level must be nonnegative");
}

std::uint64_t factorization_count() { return g_factorizations.load(); }

std::vector<std::vector<Complex>> solve_state(const Phantom& phantom,
                                              const SamplingGrid& grid,
                                              const OperatorSet& ops,
                                              const IncidenceSet& incidences)
{
    incidences.validate();
    const Wavenumber k(ops.k);
    const std::size_t M = ops.m();

    std::vector<Complex> chi(M);
    bool support_hit = false;
    for (std::size_t m = 0; m < M; ++m) {
        chi[m] = phantom.contrast(ops.centers[m]);
        support_hit = support_hit || chi[m] != Complex(0.0);
    }
    if (support_hit && grid.h > k.wavelength() / 10.0 + 1e-15)
        std::fprintf(stderr,
                     "warning: forward mesh h = %g exceeds lambda/10 = %g over the scatterer; "
                     "state solutions may be inaccurate\n",
                     grid.h, k.wavelength() / 10.0);

    // Rows with chi = 0 force w = 0, so the dense solve runs on the support
    // block only; the residual below still covers every row.
    std::vector<std::size_t> sup;
    for (std::size_t m = 0; m < M; ++m)
        if (chi[m] != Complex(0.0)) sup.push_back(m);
    const std::size_t S = sup.size();

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
    if (S > 0) {
        Eigen::MatrixXcd a(S, S);
        for (std::size_t r = 0; r < S; ++r)
            for (std::size_t c = 0; c < S; ++c) {
                const Complex gd = ops.gd[sup[r] * M + sup[c]];
                a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    (r == c ? Complex(1.0) : Complex(0.0)) - chi[sup[r]] * gd;
            }
        lu.compute(a);
        ++g_factorizations;

        const auto diag = lu.matrixLU().diagonal();
        double dmin = 1e300, dmax = 0.0;
        for (Eigen::Index i = 0; i < diag.size(); ++i) {
            dmin = std::min(dmin, std::abs(diag[i]));
            dmax = std::max(dmax, std::abs(diag[i]));
        }
        if (!(dmax > 0.0) || dmin <= 1e-14 * dmax)
            throw SingularSystem("state equation is rank deficient (resonant contrast)");
    }

    std::vector<std::vector<Complex>> w(incidences.size(), std::vector<Complex>(M, 0.0));
    for (std::size_t j = 0; j < incidences.size(); ++j) {
        std::vector<Complex> uinc(M);
        for (std::size_t m = 0; m < M; ++m)
            uinc[m] = plane_wave(k, incidences.directions[j], ops.centers[m]);

        if (S > 0) {
            Eigen::VectorXcd rhs(S);
            for (std::size_t r = 0; r < S; ++r)
                rhs[static_cast<Eigen::Index>(r)] = chi[sup[r]] * uinc[sup[r]];
            const Eigen::VectorXcd x = lu.solve(rhs);
            for (std::size_t r = 0; r < S; ++r) {
                const Complex v = x[static_cast<Eigen::Index>(r)];
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    throw SingularSystem("state solve produced non-finite values");
                w[j][sup[r]] = v;
            }
        }

        // Residual of the full system: w - diag(chi)(u_inc + GD w).
        const auto gdw = ops.apply(OperatorKind::GD, w[j]);
        double rnorm = 0.0, bnorm = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            const Complex r = w[j][m] - chi[m] * (uinc[m] + gdw[m]);
            rnorm += std::norm(r);
            bnorm += std::norm(chi[m] * uinc[m]);
        }
        if (bnorm > 0.0 && std::sqrt(rnorm) > 1e-10 * std::sqrt(bnorm))
            throw SingularSystem("state solve residual exceeds 1e-10 relative");
    }
    return w;
}

ScatterData synth_scattered(const std::vector<std::vector<Complex>>& w,
                            const OperatorSet& ops, const ReceiverSet& receivers,
                            const IncidenceSet& incidences)
{
    if (w.size() != incidences.size())
        throw DimensionMismatch("one contrast source per incidence required");
    ScatterData data;
    data.receivers = receivers;
    data.incidences = incidences;
    data.k = ops.k;
    data.u.reserve(w.size());
    for (const auto& wj : w) {
        if (wj.size() != ops.m())
            throw DimensionMismatch("contrast source length does not match operator size");
        data.u.push_back(ops.apply(OperatorKind::GS, wj));
    }
    return data;
}

ScatterData add_noise(const ScatterData& data, double xi, std::uint64_t seed)
{
    if (xi < 0.0) throw DomainError("noise level must be nonnegative");
    ScatterData out = data;
    out.xi = xi;
    out.seed = seed;
    std::mt19937_64 rng(seed);
    for (auto& row : out.u)
        for (Complex& c : row) {
            const double r1 = symmetric_uniform(rng);
            const double r2 = symmetric_uniform(rng);
            c *= Complex(1.0 + xi * r1, xi * r2);
        }
    return out;
}

SamplingGrid make_forward_grid(const Phantom& phantom, Wavenumber k)
{
    const double h = phantom.dim == 2 ? k.wavelength() / 40.0 : k.wavelength() / 16.0;
    const SamplingBox& bb = phantom.bounding_box;
    Point lower{0.0, 0.0, 0.0}, upper{0.0, 0.0, 0.0};
    for (int a = 0; a < phantom.dim; ++a) {
        const double mid = 0.5 * (bb.lower[a] + bb.upper[a]);
        const auto n = static_cast<std::int64_t>(std::ceil(1.1 * bb.side(a) / h)) + 1;
        lower[a] = mid - 0.5 * static_cast<double>(n) * h + 0.371 * h;
        upper[a] = lower[a] + static_cast<double>(n) * h;
    }
    const SamplingBox box(lower, upper, phantom.dim);

    SamplingGrid grid = create_uniform_grid(box, h);
    std::vector<std::size_t> support;
    for (std::size_t m = 0; m < grid.size(); ++m)
        if (phantom.contrast(grid.center(m)) != Complex(0.0)) support.push_back(m);
    return set_active(grid, support);
}

void check_inverse_crime(const SamplingGrid& forward_grid, const SamplingBox& inversion_box,
                         double h0, int k_max)
{
    for (int k = 0; k <= k_max; ++k) {
        const double hk = h0 / static_cast<double>(std::int64_t{1} << k);
        if (std::abs(forward_grid.h - hk) > 1e-9 * hk) continue;
        bool aligned = true;
        for (int a = 0; a < forward_grid.dim(); ++a) {
            const double offset = (forward_grid.box.lower[a] - inversion_box.lower[a]) / hk;
            if (std::abs(offset - std::round(offset)) > 1e-9) {
                aligned = false;
                break;
            }
        }
        if (aligned)
            throw InverseCrime("synthesis grid coincides with inversion level " +
                               std::to_string(k));
    }
}

} // namespace wavesift
