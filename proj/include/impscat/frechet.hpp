#pragma once

#include "impscat/forward.hpp"

#include <string>
#include <vector>

namespace impscat {

/// Form of the curvature term in the shape-derivative boundary data
///   k^2 h u + d/ds(h du/ds) + <term>,
/// with H > 0 on convex arcs and the outward normal:
///   as_printed:          -lambda h (du/dn - H u)
///   ik_scaled:           -i k lambda h (du/dn - H u)
///   ik_scaled_convex_H:  -i k lambda h (du/dn + H u)
enum class LemmaVariant { as_printed, ik_scaled, ik_scaled_convex_H };

/// The form selected by the finite-difference slope test.
inline constexpr LemmaVariant default_lemma_variant = LemmaVariant::ik_scaled_convex_H;

std::string to_string(LemmaVariant v);
LemmaVariant lemma_variant_from_string(const std::string& s);

struct BasisSpec {
    int N_gamma = 0;
    int N_lambda = 0;
    double L = 0.0;
    bool shape = true;
    bool impedance = true;

    static BasisSpec for_wavenumber(double k, double c_gamma, double c_lambda, double length);
    int shape_count() const { return shape ? 2 * N_gamma + 1 : 0; }
    int impedance_count() const { return impedance ? 2 * N_lambda + 1 : 0; }
    int size() const { return shape_count() + impedance_count(); }
};

struct ColumnLabel {
    bool shape = true;
    int mode = 0;
    bool sine = false;
};

struct Jacobian {
    Eigen::MatrixXd J;  // rows: Re of stacked data, then Im
    std::vector<ColumnLabel> labels;
    int shape_columns = 0;
};

/// Basis function for flattened index p: 1, cos(x), sin(x), cos(2x), ...
double basis_function(int p, double x);

/// Boundary data for the shape derivative in direction h (node samples).
CMatrix shape_rhs(const ForwardSolution& sol, const Curve& curve, const std::vector<double>& lambda,
                  double k, const std::vector<double>& h,
                  LemmaVariant variant = default_lemma_variant);

/// Boundary data -i k dlambda u for the impedance derivative.
CMatrix impedance_rhs(const ForwardSolution& sol, double k, const std::vector<double>& dlambda);

/// Receiver values of the derivative fields for boundary data blocks
/// (one block of N_d columns per perturbation), using the cached LU.
CMatrix derivative_fields(const ForwardSystem& system, const ForwardSolution& sol,
                          const CMatrix& boundary_data);

Jacobian assemble_jacobian(const ForwardSystem& system, const ForwardSolution& sol,
                           const Curve& curve, double k, const BasisSpec& basis,
                           LemmaVariant variant = default_lemma_variant);

/// Stacks complex values as [Re; Im].
Eigen::VectorXd stack_real(const CVector& v);

}  // namespace impscat
