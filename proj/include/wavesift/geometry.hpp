#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

#include "wavesift/errors.hpp"

namespace wavesift {

using Complex = std::complex<double>;

/// Cartesian point. The third component is fixed at zero for planar problems.
using Point = std::array<double, 3>;

inline double dot(const Point& a, const Point& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double distance(const Point& a, const Point& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    const double dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

/// Axis-aligned sampling box covering the region to be probed.
struct SamplingBox {
    Point lower{0.0, 0.0, 0.0};
    Point upper{0.0, 0.0, 0.0};
    int dim = 2;

    SamplingBox() = default;

    SamplingBox(const Point& lo, const Point& hi, int d) : lower(lo), upper(hi), dim(d) {
        if (d != 2 && d != 3) throw DomainError("SamplingBox: dimension must be 2 or 3");
        for (int a = 0; a < d; ++a) {
            if (!(upper[a] > lower[a]))
                throw DomainError("SamplingBox: upper must exceed lower on every axis");
        }
        if (d == 2) { lower[2] = 0.0; upper[2] = 0.0; }
    }

    static SamplingBox square(double lo, double hi) {
        return SamplingBox({lo, lo, 0.0}, {hi, hi, 0.0}, 2);
    }
    static SamplingBox cube(double lo, double hi) {
        return SamplingBox({lo, lo, lo}, {hi, hi, hi}, 3);
    }

    double side(int axis) const { return upper[axis] - lower[axis]; }

    /// Closed-box membership over the first `dim` axes.
    bool contains(const Point& p) const {
        for (int a = 0; a < dim; ++a)
            if (p[a] < lower[a] || p[a] > upper[a]) return false;
        return true;
    }

    Point center() const {
        return {0.5 * (lower[0] + upper[0]), 0.5 * (lower[1] + upper[1]),
                0.5 * (lower[2] + upper[2])};
    }
};

} // namespace wavesift
