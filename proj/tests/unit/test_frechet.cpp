#include "impscat/error.hpp"
#include "impscat/frechet.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace impscat;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

const TrigSeries star_radius(1.0, {0.0, 0.0, 0.2, 0.02, 0.0, 0.1, 0.0, 0.1}, {});

Eigen::VectorXd flat(const CMatrix& m) { return stack_real(Eigen::Map<const CVector>(m.data(), m.size())); }

// Forward data after moving every node by eps h along the normal and adding
// eps dlambda to the nodal impedance.
Eigen::VectorXd perturbed(const Curve& c, const std::vector<double>& lambda, const SensorConfig& s,
                          const TrigSeries& h, const TrigSeries& dl, double eps)
{
    std::vector<double> x = c.x(), y = c.y(), ln = lambda;
    for (int j = 0; j < c.n(); ++j) {
        const double hj = h(c.theta(j));
        x[j] += eps * hj * c.nx()[j];
        y[j] += eps * hj * c.ny()[j];
        ln[j] += eps * dl(c.theta(j));
    }
    return stack_real(forward_operator(Curve::from_samples(x, y), ln, s).stacked());
}

struct Setup {
    Curve curve;
    std::vector<double> lambda;
    SensorConfig sensors;
    ForwardSystem system;
    ForwardSolution solution;

    Setup(Curve c, std::vector<double> l, SensorConfig s)
        : curve(std::move(c)), lambda(std::move(l)), sensors(std::move(s)),
          system(build_system(curve, lambda, sensors.k)),
          solution(solve_plane_waves(system, curve, sensors))
    {
    }
};

}  // namespace

TEST_CASE("basis functions and sizes")
{
    CHECK(basis_function(0, 0.3) == 1.0);
    CHECK(basis_function(1, 0.3) == std::cos(0.3));
    CHECK(basis_function(2, 0.3) == std::sin(0.3));
    CHECK(basis_function(5, 0.3) == doctest::Approx(std::cos(0.9)).epsilon(1e-15));
    const auto b = BasisSpec::for_wavenumber(10.0, 3.0, 0.5, two_pi);
    CHECK(b.N_gamma == 30);
    CHECK(b.N_lambda == 5);
    CHECK(b.size() == 61 + 11);
    for (auto v : {LemmaVariant::as_printed, LemmaVariant::ik_scaled, LemmaVariant::ik_scaled_convex_H}) {
        CHECK(lemma_variant_from_string(to_string(v)) == v);
    }
    CHECK_THROWS_AS(lemma_variant_from_string("nope"), SpecError);
}

TEST_CASE("linearization error is second order")
{
    const double k = 2.0;
    const int n = 400;
    const Curve c = from_radial(star_radius, n);
    const Impedance lam(two_pi, TrigSeries(1.0, {0.1, 0, 0, 0, 0, 0, 0, 0, 0.02}, {}));
    Setup st(c, lam.at_nodes(n), SensorConfig::circular(k, 16, 100, 10.0));
    const BasisSpec b = BasisSpec::for_wavenumber(k, 3.0, 0.5, c.length());
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    std::vector<double> v(b.size());
    for (auto& x : v) x = 0.1 * nd(rng);
    const auto h = TrigSeries::unflatten({v.begin(), v.begin() + b.shape_count()});
    const auto dl = TrigSeries::unflatten({v.begin() + b.shape_count(), v.end()});
    const auto jac = assemble_jacobian(st.system, st.solution, c, k, b);
    const Eigen::VectorXd jv = jac.J * Eigen::Map<Eigen::VectorXd>(v.data(), v.size());
    const Eigen::VectorXd f0 = flat(st.solution.u_scat);
    std::vector<double> err;
    for (double eps : {1e-2, 1e-3}) err.push_back((perturbed(c, st.lambda, st.sensors, h, dl, eps) - f0 - eps * jv).norm());
    const double slope = std::log10(err[0] / err[1]);
    CHECK(slope > 1.9);
    CHECK(slope < 2.1);
}

TEST_CASE("shape derivative of a circle under uniform dilation")
{
    const double k = 1.5;
    const Curve c = from_radial(TrigSeries(1.0, {}, {}), 256);
    Setup st(c, std::vector<double>(c.n(), 0.8), SensorConfig::circular(k, 4, 20, 10.0));
    const BasisSpec b{0, 0, c.length(), true, false};
    const auto jac = assemble_jacobian(st.system, st.solution, c, k, b);
    const double eps = 1e-4;
    const TrigSeries h(1.0, {}, {});
    const Eigen::VectorXd cd =
        (perturbed(c, st.lambda, st.sensors, h, {}, eps) - perturbed(c, st.lambda, st.sensors, h, {}, -eps)) /
        (2 * eps);
    CHECK((jac.J.col(0) - cd).norm() < 1e-6 * cd.norm());
}

TEST_CASE("impedance derivative matches a central difference")
{
    const double k = 2.0;
    const Curve c = from_radial(star_radius, 256);
    const Impedance lam(c.length(), TrigSeries(1.0, {0.1}, {}));
    Setup st(c, lam.at_nodes(c.n()), SensorConfig::circular(k, 4, 20, 10.0));
    const BasisSpec b{0, 2, c.length(), false, true};
    const auto jac = assemble_jacobian(st.system, st.solution, c, k, b);
    CHECK(jac.shape_columns == 0);
    CHECK(jac.J.cols() == 5);
    const double eps = 1e-4;
    for (int p = 0; p < 5; ++p) {
        std::vector<double> plus = st.lambda, minus = st.lambda;
        for (int j = 0; j < c.n(); ++j) {
            const double phi = basis_function(p, c.theta(j));
            plus[j] += eps * phi;
            minus[j] -= eps * phi;
        }
        const Eigen::VectorXd cd = (stack_real(forward_operator(c, plus, st.sensors).stacked()) -
                                    stack_real(forward_operator(c, minus, st.sensors).stacked())) /
                                   (2 * eps);
        CAPTURE(p);
        CHECK((jac.J.col(p) - cd).norm() < 1e-6 * cd.norm());
    }
}

TEST_CASE("derivative fields are linear in the boundary data")
{
    const double k = 2.0;
    const Curve c = from_radial(star_radius, 200);
    Setup st(c, std::vector<double>(c.n(), 1.0), SensorConfig::circular(k, 3, 12, 10.0));
    std::vector<double> h1(c.n()), h2(c.n()), h12(c.n());
    for (int j = 0; j < c.n(); ++j) {
        h1[j] = std::cos(2 * c.theta(j));
        h2[j] = 0.3 * std::sin(5 * c.theta(j)) + 0.1;
        h12[j] = 2.0 * h1[j] - 3.0 * h2[j];
    }
    const auto f = [&](const std::vector<double>& h) {
        return derivative_fields(st.system, st.solution, shape_rhs(st.solution, c, st.lambda, k, h));
    };
    const CMatrix lhs = f(h12);
    const CMatrix rhs = 2.0 * f(h1) - 3.0 * f(h2);
    CHECK((lhs - rhs).norm() < 1e-12 * lhs.norm());
    std::vector<double> dl(c.n(), 0.0);
    CHECK(derivative_fields(st.system, st.solution, impedance_rhs(st.solution, k, dl)).norm() == 0.0);
}

TEST_CASE("circle Jacobian treats cosine and sine alike")
{
    const double k = 2.0;
    const Curve c = from_radial(TrigSeries(1.0, {}, {}), 256);
    Setup st(c, std::vector<double>(c.n(), 0.5), SensorConfig::circular(k, 16, 64, 10.0));
    const auto b = BasisSpec::for_wavenumber(k, 3.0, 0.5, c.length());
    const auto jac = assemble_jacobian(st.system, st.solution, c, k, b);
    for (int l = 1; l <= b.N_gamma; ++l) {
        const double nc = jac.J.col(2 * l - 1).norm(), ns = jac.J.col(2 * l).norm();
        CAPTURE(l);
        CHECK(std::abs(nc - ns) < 1e-8 * nc);
    }
    for (std::size_t p = 0; p < jac.labels.size(); ++p) CHECK(jac.labels[p].shape == (static_cast<int>(p) < jac.shape_columns));
}

TEST_CASE("Jacobian reuses the factorization")
{
    const double k = 2.0;
    const Curve c = from_radial(star_radius, 160);
    const auto s = SensorConfig::circular(k, 5, 20, 10.0);
    Setup st(c, std::vector<double>(c.n(), 1.0), s);
    const auto b = BasisSpec::for_wavenumber(k, 3.0, 0.5, c.length());
    counters().reset();
    const auto jac = assemble_jacobian(st.system, st.solution, c, k, b);
    CHECK(counters().factorizations == 0);
    CHECK(counters().rhs_solves == static_cast<long>(b.size()) * s.num_directions());
    CHECK(jac.J.rows() == 2 * s.num_directions() * s.num_receivers());
    CHECK(jac.J.allFinite());
}

TEST_CASE("tangential motion does not change the data")
{
    // the shape derivative only sees the normal component: a rigid rotation
    // of a circle is invisible to first order and its normal part is zero
    const double k = 2.0;
    const Curve c = from_radial(TrigSeries(1.0, {}, {}), 200);
    Setup st(c, std::vector<double>(c.n(), 1.0), SensorConfig::circular(k, 4, 16, 10.0));
    std::vector<double> x = c.x(), y = c.y();
    const double a = 1e-4;
    for (int j = 0; j < c.n(); ++j) {
        x[j] = std::cos(a) * c.x()[j] - std::sin(a) * c.y()[j];
        y[j] = std::sin(a) * c.x()[j] + std::cos(a) * c.y()[j];
    }
    const Eigen::VectorXd f1 = stack_real(forward_operator(Curve::from_samples(x, y), st.lambda, st.sensors).stacked());
    const Eigen::VectorXd f0 = flat(st.solution.u_scat);
    CHECK((f1 - f0).norm() < 1e-7 * f0.norm());
}
