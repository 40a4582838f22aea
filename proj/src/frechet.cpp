#include "impscat/frechet.hpp"

#include "impscat/error.hpp"

#include <cmath>

namespace impscat {

namespace {

constexpr cplx I(0.0, 1.0);

std::vector<double> basis_samples(int p, int n)
{
    std::vector<double> v(n);
    for (int j = 0; j < n; ++j) v[j] = basis_function(p, 2.0 * 3.14159265358979323846 * j / n);
    return v;
}

}  // namespace

std::string to_string(LemmaVariant v)
{
    switch (v) {
    case LemmaVariant::as_printed: return "as_printed";
    case LemmaVariant::ik_scaled: return "ik_scaled";
    case LemmaVariant::ik_scaled_convex_H: return "ik_scaled_convex_H";
    }
    return "unknown";
}

LemmaVariant lemma_variant_from_string(const std::string& s)
{
    for (auto v : {LemmaVariant::as_printed, LemmaVariant::ik_scaled, LemmaVariant::ik_scaled_convex_H}) {
        if (to_string(v) == s) return v;
    }
    throw SpecError("unknown shape derivative variant '" + s + "'");
}

BasisSpec BasisSpec::for_wavenumber(double k, double c_gamma, double c_lambda, double length)
{
    BasisSpec b;
    b.N_gamma = static_cast<int>(std::floor(c_gamma * k));
    b.N_lambda = static_cast<int>(std::floor(c_lambda * k));
    b.L = length;
    return b;
}

double basis_function(int p, double x)
{
    if (p == 0) return 1.0;
    const int l = (p + 1) / 2;
    return (p % 2 == 1) ? std::cos(l * x) : std::sin(l * x);
}

CMatrix shape_rhs(const ForwardSolution& sol, const Curve& curve, const std::vector<double>& lambda,
                  double k, const std::vector<double>& h, LemmaVariant variant)
{
    const int n = curve.n();
    const auto nd = sol.u_bdry.cols();
    CMatrix f(n, nd);
    std::vector<cplx> flux(n);
    for (Eigen::Index l = 0; l < nd; ++l) {
        for (int j = 0; j < n; ++j) flux[j] = h[j] * sol.dudS(j, l);
        const auto dflux = fourier::derivative(std::span<const cplx>(flux));
        for (int j = 0; j < n; ++j) {
            const cplx u = sol.u_bdry(j, l);
            const cplx un = sol.dudN(j, l);
            const double H = curve.curvature()[j];
            cplx term;
            switch (variant) {
            case LemmaVariant::as_printed: term = -lambda[j] * h[j] * (un - H * u); break;
            case LemmaVariant::ik_scaled: term = -I * k * lambda[j] * h[j] * (un - H * u); break;
            case LemmaVariant::ik_scaled_convex_H: term = -I * k * lambda[j] * h[j] * (un + H * u); break;
            }
            f(j, l) = k * k * h[j] * u + dflux[j] / curve.speed()[j] + term;
        }
    }
    return f;
}

CMatrix impedance_rhs(const ForwardSolution& sol, double k, const std::vector<double>& dlambda)
{
    CMatrix f(sol.u_bdry.rows(), sol.u_bdry.cols());
    for (Eigen::Index j = 0; j < f.rows(); ++j) f.row(j) = (-I * k * dlambda[j]) * sol.u_bdry.row(j);
    return f;
}

CMatrix derivative_fields(const ForwardSystem& system, const ForwardSolution& sol,
                          const CMatrix& boundary_data)
{
    return sol.receiver_op * solve(system, boundary_data);
}

Eigen::VectorXd stack_real(const CVector& v)
{
    Eigen::VectorXd out(2 * v.size());
    out.head(v.size()) = v.real();
    out.tail(v.size()) = v.imag();
    return out;
}

Jacobian assemble_jacobian(const ForwardSystem& system, const ForwardSolution& sol,
                           const Curve& curve, double k, const BasisSpec& basis,
                           LemmaVariant variant)
{
    const int n = curve.n();
    const int nd = static_cast<int>(sol.u_bdry.cols());
    const int nr = static_cast<int>(sol.receiver_op.rows());
    const int cols = basis.size();
    Jacobian jac;
    jac.shape_columns = basis.shape_count();
    CMatrix data(n, static_cast<Eigen::Index>(cols) * nd);
    int c = 0;
    for (int p = 0; p < basis.shape_count(); ++p, ++c) {
        data.middleCols(c * nd, nd) = shape_rhs(sol, curve, system.lambda, k, basis_samples(p, n), variant);
        jac.labels.push_back({true, (p + 1) / 2, p > 0 && p % 2 == 0});
    }
    for (int p = 0; p < basis.impedance_count(); ++p, ++c) {
        data.middleCols(c * nd, nd) = impedance_rhs(sol, k, basis_samples(p, n));
        jac.labels.push_back({false, (p + 1) / 2, p > 0 && p % 2 == 0});
    }
    const CMatrix w = derivative_fields(system, sol, data);
    const int rows = nr * nd;
    jac.J.resize(2 * rows, cols);
    for (int p = 0; p < cols; ++p) {
        const CMatrix block = w.middleCols(p * nd, nd);
        const Eigen::Map<const CVector> v(block.data(), rows);
        jac.J.col(p).head(rows) = v.real();
        jac.J.col(p).tail(rows) = v.imag();
    }
    return jac;
}

}  // namespace impscat
