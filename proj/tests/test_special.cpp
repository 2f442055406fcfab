#include <doctest.h>

#include "wavesift/special.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace wavesift;
using namespace wavesift::special;

namespace {

// Log-spaced grid on [lo, hi], endpoints included.
std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> z(n);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i)
        z[i] = std::exp(a + (b - a) * i / (n - 1));
    return z;
}

} // namespace

TEST_CASE("oracle sanity against textbook values at x = 1")
{
    // Guards the oracle itself: classic tabulated values, 16 digits.
    CHECK(oracle::j0(1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-14));
    CHECK(oracle::y0(1.0) == doctest::Approx(0.0882569642156770).epsilon(1e-13));
    CHECK(oracle::j1(1.0) == doctest::Approx(0.4400505857449335).epsilon(1e-14));
    CHECK(oracle::y1(1.0) == doctest::Approx(-0.7812128213002887).epsilon(1e-14));
}

TEST_CASE("J0, J1, Y0, Y1 match the arbitrary-precision oracle")
{
    auto zs = log_grid(1e-3, 1e2, 1000);
    // Branch joins and a stretch beyond the sweep range.
    for (double extra : {1e-8, 1e-5, 4.0 - 1e-12, 4.0, 4.0 + 1e-12,
                         8.0 - 1e-12, 8.0, 8.0 + 1e-12, 2.0 * std::numbers::pi,
                         2.5e2, 1e3})
        zs.push_back(extra);

    // 1e-10 absolute everywhere; the relative term only matters for
    // |Y1| ~ 1e7 near z = 1e-8, where 1e-10 absolute is below one ulp.
    auto tol = [](double ref) { return 1e-10 + 1e-13 * std::abs(ref); };

    double worst = 0.0;
    for (double z : zs) {
        const double rj0 = oracle::j0(z), rj1 = oracle::j1(z);
        const double ry0 = oracle::y0(z), ry1 = oracle::y1(z);
        const double dj0 = std::abs(bessel_j0(z) - rj0);
        const double dj1 = std::abs(bessel_j1(z) - rj1);
        const double dy0 = std::abs(bessel_y0(z) - ry0);
        const double dy1 = std::abs(bessel_y1(z) - ry1);
        if (z >= 1e-3 && z <= 1e2)
            worst = std::max({worst, dj0, dj1, dy0, dy1});
        CHECK(dj0 <= tol(rj0));
        CHECK(dj1 <= tol(rj1));
        CHECK(dy0 <= tol(ry0));
        CHECK(dy1 <= tol(ry1));
    }
    CHECK(worst <= 1e-10);
    MESSAGE("worst absolute deviation on [1e-3, 1e2]: ", worst);
}

TEST_CASE("Hankel function combines J0 and Y0 exactly")
{
    for (double z : log_grid(1e-3, 1e2, 50)) {
        const auto h = hankel0_first_kind(z);
        CHECK(h.real() == bessel_j0(z));
        CHECK(h.imag() == bessel_y0(z));
        CHECK(std::abs(h - oracle::hankel0(z)) <= 1e-10);
    }
}

TEST_CASE("Wronskian J1 Y0 - J0 Y1 = 2 / (pi z)")
{
    for (double z : log_grid(1e-3, 1e2, 1000)) {
        const double w = bessel_j1(z) * bessel_y0(z) - bessel_j0(z) * bessel_y1(z);
        const double exact = 2.0 / (std::numbers::pi * z);
        CHECK(std::abs(w - exact) <= 1e-8 * std::abs(exact));
    }
}

TEST_CASE("small-argument behaviour")
{
    // J0 -> 1 - z^2/4, J1 -> z/2, Y0 has the (2/pi) log z singularity.
    CHECK(bessel_j0(1e-9) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bessel_j1(1e-9) == doctest::Approx(0.5e-9).epsilon(1e-12));
    const double z = 1e-6;
    const double euler = 0.57721566490153286;
    const double y0_small = (2.0 / std::numbers::pi) * (std::log(z / 2) + euler);
    CHECK(bessel_y0(z) == doctest::Approx(y0_small).epsilon(1e-10));
}

TEST_CASE("domain errors outside the supported range")
{
    CHECK_THROWS_AS(bessel_j0(-1.0), DomainError);
    CHECK_THROWS_AS(bessel_j1(-0.5), DomainError);
    CHECK_THROWS_AS(bessel_y0(0.0), DomainError);
    CHECK_THROWS_AS(bessel_y0(-2.0), DomainError);
    CHECK_THROWS_AS(bessel_y1(0.0), DomainError);
    CHECK_THROWS_AS(hankel0_first_kind(0.0), DomainError);
    CHECK_THROWS_AS(hankel0_first_kind(-3.0), DomainError);
}
