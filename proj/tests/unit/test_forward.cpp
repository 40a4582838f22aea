#include "impscat/error.hpp"
#include "impscat/forward.hpp"

#include <doctest.h>

#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace impscat;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

Curve circle(double R, int n) { return from_radial(TrigSeries(R, {}, {}), n); }

Curve star(int n) { return from_radial(TrigSeries(1.0, {0.0, 0.0, 0.2, 0.02, 0.0, 0.1, 0.0, 0.1}, {}), n); }

double series_error(const MeasurementSet& m, double R, oracle::Boundary bc, double lambda)
{
    double num = 0.0, den = 0.0;
    for (int l = 0; l < static_cast<int>(m.directions.size()); ++l) {
        const double alpha = std::atan2(m.directions[l][1], m.directions[l][0]);
        for (int r = 0; r < static_cast<int>(m.receivers.size()); ++r) {
            const cplx want =
                oracle::circle_scattered(m.k, R, bc, lambda, alpha, m.receivers[r][0], m.receivers[r][1]);
            num += std::norm(m.data(r, l) - want);
            den += std::norm(want);
        }
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("sensor configuration")
{
    const auto s = SensorConfig::circular(2.0, 4, 8, 10.0);
    CHECK(s.num_directions() == 4);
    CHECK(s.num_receivers() == 8);
    CHECK(std::abs(s.directions[1][1] - 1.0) < 1e-15);
    CHECK(std::abs(std::hypot(s.receivers[3][0], s.receivers[3][1]) - 10.0) < 1e-13);
    s.check_outside(circle(1.0, 64));
    CHECK_THROWS_AS(SensorConfig::circular(2.0, 4, 8, 0.5).check_outside(circle(1.0, 64)), SpecError);
    CHECK_THROWS_AS(SensorConfig::circular(-1.0, 4, 8, 10.0).validate(), SpecError);
    CHECK_THROWS_AS(SensorConfig::circular(1.0, 0, 8, 10.0).validate(), SpecError);
}

TEST_CASE("impedance data on the circle matches the series solution")
{
    for (double k : {1.0, 5.0}) {
        for (double lambda : {0.0, 1.0, 2.5}) {
            const auto sensors = SensorConfig::circular(k, 8, 32, 10.0);
            const Curve c = circle(1.0, points_for(two_pi, k, 40.0));
            const auto m = forward_operator(c, std::vector<double>(c.n(), lambda), sensors);
            CAPTURE(k);
            CAPTURE(lambda);
            CHECK(series_error(m, 1.0, oracle::Boundary::impedance, lambda) < 1e-7);
        }
    }
}

TEST_CASE("sound-soft and sound-hard data match the series solution")
{
    const double k = 3.0;
    const auto sensors = SensorConfig::circular(k, 6, 24, 8.0);
    const Curve c = circle(1.3, points_for(two_pi * 1.3, k, 40.0));
    CHECK(series_error(dirichlet_data(c, sensors), 1.3, oracle::Boundary::dirichlet, 0.0) < 1e-7);
    CHECK(series_error(neumann_data(c, sensors), 1.3, oracle::Boundary::neumann, 0.0) < 1e-7);
    // the total field vanishes on a sound-soft boundary
    const Curve s = star(256);
    CHECK(dirichlet_boundary_trace(s, sensors).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("total field satisfies the impedance condition")
{
    const double k = 2.0;
    const Curve c = star(320);
    std::vector<double> lambda(c.n());
    for (int j = 0; j < c.n(); ++j) lambda[j] = 1.0 + 0.3 * std::cos(c.theta(j));
    const auto sensors = SensorConfig::circular(k, 4, 16, 10.0);
    const auto sys = build_system(c, lambda, k);
    const auto sol = solve_plane_waves(sys, c, sensors);
    const CMatrix dudn = operator_normal_derivative(sys, c, sensors, sol.sigma);
    CMatrix bc = dudn;
    for (int j = 0; j < c.n(); ++j) bc.row(j) += cplx(0.0, k * lambda[j]) * sol.u_bdry.row(j);
    CHECK(bc.cwiseAbs().maxCoeff() < 1e-7 * dudn.cwiseAbs().maxCoeff());
    CHECK((sol.dudN - dudn).cwiseAbs().maxCoeff() < 1e-7 * dudn.cwiseAbs().maxCoeff());
}

TEST_CASE("rotating the scene rotates the data")
{
    // circle with constant impedance: rotating directions and receivers by
    // one receiver step shifts the data matrix
    const double k = 2.0;
    const int nd = 4, nr = 16;
    const Curve c = circle(1.0, 128);
    const auto s = SensorConfig::circular(k, nd, nr, 10.0);
    SensorConfig t = s;
    const double a = two_pi / nr * (nr / nd);
    for (auto* pts : {&t.directions, &t.receivers}) {
        for (auto& p : *pts) {
            p = {std::cos(a) * p[0] - std::sin(a) * p[1], std::sin(a) * p[0] + std::cos(a) * p[1]};
        }
    }
    const auto m1 = forward_operator(c, std::vector<double>(c.n(), 0.7), s);
    const auto m2 = forward_operator(c, std::vector<double>(c.n(), 0.7), t);
    double worst = 0.0;
    for (int l = 0; l < nd; ++l) {
        for (int r = 0; r < nr; ++r) {
            worst = std::max(worst, std::abs(m2.data(r, l) - m1.data((r + nr / nd) % nr, (l + 1) % nd)));
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("scattered field decays like r^{-1/2}")
{
    const double k = 3.0;
    const Curve c = star(256);
    auto at = [&](double R) {
        SensorConfig s = SensorConfig::circular(k, 1, 1, R);
        return std::abs(forward_operator(c, std::vector<double>(c.n(), 1.0), s).data(0, 0));
    };
    CHECK(std::abs(at(2000.0) / at(4000.0) - std::sqrt(2.0)) < 2e-3);
}

TEST_CASE("data depends continuously on the impedance")
{
    const double k = 2.0;
    const Curve c = star(256);
    const auto s = SensorConfig::circular(k, 4, 16, 10.0);
    const auto base = forward_operator(c, std::vector<double>(c.n(), 1.0), s);
    double prev = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const auto m = forward_operator(c, std::vector<double>(c.n(), 1.0 + eps), s);
        const double d = (m.data - base.data).norm();
        CHECK(d > 0.0);
        if (prev > 0.0) CHECK(std::abs(prev / d - 10.0) < 0.5);
        prev = d;
    }
}

TEST_CASE("zero impedance reproduces the sound-hard data")
{
    const Curve c = star(200);
    const auto s = SensorConfig::circular(2.5, 3, 10, 10.0);
    CHECK(forward_operator(c, std::vector<double>(c.n(), 0.0), s).data == neumann_data(c, s).data);
    const Impedance imp = Impedance::constant(0.0, c.length());
    CHECK((forward_operator(c, imp, s).data - neumann_data(c, s).data).norm() == 0.0);
}

TEST_CASE("reusing operators for a new impedance")
{
    const double k = 2.0;
    const Curve c = star(200);
    const auto s = SensorConfig::circular(k, 3, 10, 10.0);
    const auto base = build_system(c, std::vector<double>(c.n(), 1.0), k);
    const auto other = with_impedance(base, std::vector<double>(c.n(), 0.4));
    const auto fresh = build_system(c, std::vector<double>(c.n(), 0.4), k);
    CHECK(solve_plane_waves(other, c, s).u_scat == solve_plane_waves(fresh, c, s).u_scat);
}

TEST_CASE("operation counters")
{
    const Curve c = star(128);
    const auto s = SensorConfig::circular(2.0, 5, 10, 10.0);
    counters().reset();
    const auto sys = build_system(c, std::vector<double>(c.n(), 1.0), 2.0);
    CHECK(counters().factorizations == 1);
    (void)solve_plane_waves(sys, c, s);
    CHECK(counters().factorizations == 1);
    CHECK(counters().rhs_solves == 5);
}

TEST_CASE("stacked data is direction-major")
{
    MeasurementSet m;
    m.data = CMatrix(2, 2);
    m.data << cplx(1, 0), cplx(2, 0), cplx(3, 0), cplx(4, 0);
    const CVector v = m.stacked();
    CHECK(v(0) == cplx(1, 0));
    CHECK(v(1) == cplx(3, 0));
    CHECK(v(2) == cplx(2, 0));
}

TEST_CASE("input checks")
{
    const Curve c = circle(1.0, 64);
    CHECK_THROWS_AS(build_system(c, std::vector<double>(10, 1.0), 1.0), SpecError);
    CHECK_THROWS_AS(build_system(c, std::vector<double>(64, 1.0), -1.0), SpecError);
}
