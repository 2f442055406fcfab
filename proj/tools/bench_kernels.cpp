// Times the serial reference kernels against their OpenMP forms on the
// shapes the reconstruction actually uses: short-and-wide surface operators,
// their weighted adjoints, and row-parallel lattice sweeps. The two forms
// must agree bitwise; any nonzero difference is reported and fails the run.

#include "wavesift/kernels.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

namespace {

using wavesift::Complex;
namespace kernels = wavesift::kernels;

std::vector<Complex> deterministic_fill(std::size_t n, double phase)
{
    std::vector<Complex> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = phase + 0.618033 * static_cast<double>(i);
        v[i] = Complex(std::sin(t), std::cos(1.7 * t));
    }
    return v;
}

template <class Fn> double time_best_of(int reps, Fn&& fn)
{
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                             .count();
        best = std::min(best, s);
    }
    return best;
}

int g_failures = 0;

void report(const char* name, std::size_t rows, std::size_t cols, int reps, double serial,
            double parallel, double maxdiff)
{
    std::printf("%-24s %6zu x %-6zu reps=%-3d serial %.4fs  parallel %.4fs  speedup %.2fx"
                "  maxdiff %g\n",
                name, rows, cols, reps, serial, parallel, serial / parallel, maxdiff);
    if (maxdiff != 0.0) {
        std::printf("  MISMATCH: parallel form diverged from the serial reference\n");
        ++g_failures;
    }
}

double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

void bench_matvec(std::size_t rows, std::size_t cols, int reps)
{
    const auto a = deterministic_fill(rows * cols, 0.1);
    const auto x = deterministic_fill(cols, 0.7);
    std::vector<Complex> ys(rows), yp(rows);
    const double ts = time_best_of(reps, [&] {
        kernels::serial::matvec(a.data(), rows, cols, x.data(), ys.data());
    });
    const double tp = time_best_of(reps, [&] {
        kernels::par::matvec(a.data(), rows, cols, x.data(), yp.data());
    });
    report("matvec", rows, cols, reps, ts, tp, max_abs_diff(ys, yp));
}

void bench_weighted_adjoint(std::size_t rows, std::size_t cols, int reps)
{
    const auto a = deterministic_fill(rows * cols, 0.3);
    const auto x = deterministic_fill(rows, 0.9);
    std::vector<double> w(rows);
    for (std::size_t i = 0; i < rows; ++i) w[i] = 1.0 + 0.01 * static_cast<double>(i);
    std::vector<Complex> ys(cols), yp(cols);
    const double ts = time_best_of(reps, [&] {
        kernels::serial::weighted_adjoint_matvec(a.data(), rows, cols, w.data(), x.data(),
                                                 ys.data());
    });
    const double tp = time_best_of(reps, [&] {
        kernels::par::weighted_adjoint_matvec(a.data(), rows, cols, w.data(), x.data(),
                                              yp.data());
    });
    report("weighted_adjoint_matvec", rows, cols, reps, ts, tp, max_abs_diff(ys, yp));
}

// The lattice sweep pattern of the contrast estimate: each row accumulates a
// translation-invariant kernel against a source vector.
void bench_row_sweep(std::size_t n, int reps)
{
    const auto kernel = deterministic_fill(n, 0.2);
    const auto src = deterministic_fill(n, 1.3);
    std::vector<Complex> ys(n), yp(n);
    const auto sweep = [&](std::vector<Complex>& y, auto&& for_each_row) {
        for_each_row(n, [&](std::size_t r) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                acc += kernel[r > j ? r - j : j - r] * src[j];
            y[r] = acc;
        });
    };
    const double ts = time_best_of(reps, [&] { sweep(ys, kernels::serial::for_each_row); });
    const double tp = time_best_of(reps, [&] { sweep(yp, kernels::par::for_each_row); });
    report("row_sweep", n, n, reps, ts, tp, max_abs_diff(ys, yp));
}

} // namespace

int main(int argc, char** argv)
{
    const bool smoke = argc > 1 && std::strcmp(argv[1], "--smoke") == 0;
    std::printf("workers: %d%s\n", kernels::worker_count(), smoke ? " (smoke sizes)" : "");

    if (smoke) {
        bench_matvec(30, 500, 3);
        bench_weighted_adjoint(30, 500, 3);
        bench_row_sweep(400, 3);
    } else {
        bench_matvec(30, 200000, 5);
        bench_matvec(2000, 2000, 5);
        bench_weighted_adjoint(30, 200000, 5);
        bench_row_sweep(12544, 3);
    }
    if (g_failures) {
        std::printf("%d kernel(s) diverged\n", g_failures);
        return 1;
    }
    return 0;
}
