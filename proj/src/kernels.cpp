#include "wavesift/kernels.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wavesift::kernels {

int worker_count()
{
    if (const char* env = std::getenv("WAVESIFT_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace serial {

void for_each_row(std::size_t rows, const RowFn& f)
{
    for (std::size_t i = 0; i < rows; ++i) f(i);
}

void matvec(const Complex* a, std::size_t rows, std::size_t cols,
            const Complex* x, Complex* y)
{
    for (std::size_t i = 0; i < rows; ++i) {
        Complex acc = 0.0;
        const Complex* row = a + i * cols;
        for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

void weighted_adjoint_matvec(const Complex* a, std::size_t rows, std::size_t cols,
                             const double* w, const Complex* x, Complex* y)
{
    for (std::size_t j = 0; j < cols; ++j) {
        Complex acc = 0.0;
        for (std::size_t i = 0; i < rows; ++i)
            acc += std::conj(a[i * cols + j]) * (w[i] * x[i]);
        y[j] = acc;
    }
}

} // namespace serial

namespace par {

#ifdef _OPENMP

void for_each_row(std::size_t rows, const RowFn& f)
{
    const std::int64_t n = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (std::int64_t i = 0; i < n; ++i) f(static_cast<std::size_t>(i));
}

void matvec(const Complex* a, std::size_t rows, std::size_t cols,
            const Complex* x, Complex* y)
{
    const std::int64_t n = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (std::int64_t i = 0; i < n; ++i) {
        Complex acc = 0.0;
        const Complex* row = a + static_cast<std::size_t>(i) * cols;
        for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

void weighted_adjoint_matvec(const Complex* a, std::size_t rows, std::size_t cols,
                             const double* w, const Complex* x, Complex* y)
{
    const std::int64_t n = static_cast<std::int64_t>(cols);
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (std::int64_t j = 0; j < n; ++j) {
        Complex acc = 0.0;
        for (std::size_t i = 0; i < rows; ++i)
            acc += std::conj(a[i * cols + static_cast<std::size_t>(j)]) * (w[i] * x[i]);
        y[j] = acc;
    }
}

#else

void for_each_row(std::size_t rows, const RowFn& f) { serial::for_each_row(rows, f); }

void matvec(const Complex* a, std::size_t rows, std::size_t cols,
            const Complex* x, Complex* y)
{
    serial::matvec(a, rows, cols, x, y);
}

void weighted_adjoint_matvec(const Complex* a, std::size_t rows, std::size_t cols,
                             const double* w, const Complex* x, Complex* y)
{
    serial::weighted_adjoint_matvec(a, rows, cols, w, x, y);
}

#endif

} // namespace par

void for_each_row(std::size_t rows, const RowFn& f)
{
    if (worker_count() > 1)
        par::for_each_row(rows, f);
    else
        serial::for_each_row(rows, f);
}

void matvec(const Complex* a, std::size_t rows, std::size_t cols,
            const Complex* x, Complex* y)
{
    if (worker_count() > 1)
        par::matvec(a, rows, cols, x, y);
    else
        serial::matvec(a, rows, cols, x, y);
}

void weighted_adjoint_matvec(const Complex* a, std::size_t rows, std::size_t cols,
                             const double* w, const Complex* x, Complex* y)
{
    if (worker_count() > 1)
        par::weighted_adjoint_matvec(a, rows, cols, w, x, y);
    else
        serial::weighted_adjoint_matvec(a, rows, cols, w, x, y);
}

} // namespace wavesift::kernels
