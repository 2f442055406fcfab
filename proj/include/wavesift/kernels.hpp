#pragma once

#include "wavesift/geometry.hpp"

#include <cstddef>
#include <functional>

namespace wavesift::kernels {

// Number of workers the parallel kernels may use: the WAVESIFT_THREADS
// environment variable if set to a positive integer, otherwise the OpenMP
// default (1 when built without OpenMP).
int worker_count();

using RowFn = std::function<void(std::size_t)>;

// Each kernel exists in a serial reference form and an OpenMP form. Both
// traverse inner sums in identical ascending order and parallelize only
// across independent outputs, so their results are bitwise equal; the serial
// variants stay the ground truth for tests and benchmarks.
namespace serial {

void for_each_row(std::size_t rows, const RowFn& f);

// y[i] = sum_j a[i*cols+j] x[j] on a dense row-major matrix.
void matvec(const Complex* a, std::size_t rows, std::size_t cols,
            const Complex* x, Complex* y);

// y[j] = sum_i conj(a[i*cols+j]) w[i] x[i]: the weighted conjugate-transpose
// product used by the backpropagation operator.
void weighted_adjoint_matvec(const Complex* a, std::size_t rows, std::size_t cols,
                             const double* w, const Complex* x, Complex* y);

} // namespace serial

namespace par {

void for_each_row(std::size_t rows, const RowFn& f);
void matvec(const Complex* a, std::size_t rows, std::size_t cols,
            const Complex* x, Complex* y);
void weighted_adjoint_matvec(const Complex* a, std::size_t rows, std::size_t cols,
                             const double* w, const Complex* x, Complex* y);

} // namespace par

// Runtime dispatch: the OpenMP form when more than one worker is available.
void for_each_row(std::size_t rows, const RowFn& f);
void matvec(const Complex* a, std::size_t rows, std::size_t cols,
            const Complex* x, Complex* y);
void weighted_adjoint_matvec(const Complex* a, std::size_t rows, std::size_t cols,
                             const double* w, const Complex* x, Complex* y);

} // namespace wavesift::kernels
