#include "impscat/special.hpp"

#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>

using namespace impscat::special;
namespace bm = boost::math;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("cylinder functions agree with boost over the working range")
{
    for (double x = 1e-4; x < 500.0; x *= 1.0173) {
        CHECK(rel(bessel_j0(x), bm::cyl_bessel_j(0, x)) < 5e-15);
        CHECK(rel(bessel_j1(x), bm::cyl_bessel_j(1, x)) < 5e-15);
        CHECK(rel(bessel_y0(x), bm::cyl_neumann(0, x)) < 5e-15);
        CHECK(rel(bessel_y1(x), bm::cyl_neumann(1, x)) / std::max(1.0, 1.0 / x) < 5e-15);
        CHECK(std::abs(bessel_k0(x) / bm::cyl_bessel_k(0, x) - 1.0) < 2e-14);
        CHECK(std::abs(bessel_k1(x) / bm::cyl_bessel_k(1, x) - 1.0) < 2e-14);
    }
}

TEST_CASE("switchover radii are continuous")
{
    for (double x : {2.0, 25.0}) {
        const double lo = std::nextafter(x, 0.0), hi = std::nextafter(x, 100.0);
        CHECK(std::abs(bessel_y0(lo) - bessel_y0(hi)) < 1e-14);
        CHECK(std::abs(bessel_y1(lo) - bessel_y1(hi)) < 1e-14);
        CHECK(std::abs(bessel_k1(lo) - bessel_k1(hi)) < 1e-14);
    }
}

TEST_CASE("regular parts remove the pole exactly")
{
    for (double x : {1e-8, 1e-3, 0.3, 1.9, 2.1, 7.0, 30.0}) {
        const double y1r = bm::cyl_neumann(1, x) + 2.0 / (std::numbers::pi * x);
        const double k1r = bm::cyl_bessel_k(1, x) - 1.0 / x;
        const double scale = x < 1.0 ? 1.0 / x : 1.0;
        CHECK(std::abs(bessel_y1_regular(x) - y1r) < 1e-14 * scale);
        CHECK(std::abs(bessel_k1_regular(x) - k1r) < 1e-14 * scale);
    }
    // Near zero the regular parts behave like (x/pi) log(x / 2) and (x/2) log(x / 2).
    const double x = 1e-6;
    CHECK(bessel_y1_regular(x) == doctest::Approx((x / std::numbers::pi) * std::log(x / 2)).epsilon(1e-4));
    CHECK(bessel_k1_regular(x) == doctest::Approx(0.5 * x * std::log(x / 2)).epsilon(1e-4));
}

TEST_CASE("integer orders")
{
    for (int n : {2, 3, 7, 15, 30}) {
        for (double x : {0.5, 3.0, 12.0, 40.0}) {
            CHECK(rel(bessel_jn(n, x), bm::cyl_bessel_j(n, x)) < 1e-14);
            const double y = bm::cyl_neumann(n, x);
            CHECK(std::abs(bessel_yn(n, x) - y) < 1e-13 * std::max(1.0, std::abs(y)));
        }
    }
    CHECK(bessel_jn(-3, 2.0) == doctest::Approx(-bessel_jn(3, 2.0)));
}

TEST_CASE("documented reference values")
{
    CHECK(bessel_k0(1.0) == doctest::Approx(0.4210244382407083).epsilon(1e-14));
    const cplx h = hankel1_0(1.0);
    CHECK(h.real() == doctest::Approx(0.7651976865579666).epsilon(1e-14));
    CHECK(h.imag() == doctest::Approx(0.08825696421567696).epsilon(1e-14));
}

TEST_CASE("Hankel modulus decays like the inverse square root")
{
    for (double r : {50.0, 100.0, 400.0}) {
        const double ratio = std::abs(hankel1_0(2.0 * r)) / std::abs(hankel1_0(r));
        CHECK(ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));
    }
}

TEST_CASE("nonpositive arguments are rejected")
{
    CHECK_THROWS(bessel_j0(0.0));
    CHECK_THROWS(bessel_k1(-1.0));
}
