#pragma once

#include "impscat/curve.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace impscat {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Boundary operators of the regularized combined-field formulation.  The
/// "_imk" members use the modified kernel with wavenumber i|k|.
enum class KernelId { S_k, Dpv_k, Spv_prime_k, Tdiff, S_imk, Dpv_imk, Spv_prime_imk };

inline constexpr std::array<KernelId, 7> all_kernels{
    KernelId::S_k,   KernelId::Dpv_k,   KernelId::Spv_prime_k,  KernelId::Tdiff,
    KernelId::S_imk, KernelId::Dpv_imk, KernelId::Spv_prime_imk};

std::string to_string(KernelId id);
bool on_imaginary_axis(KernelId id);

/// Green's function G(r) and its radial derivative dG/dr.
struct GreenValue {
    cplx value;
    cplx radial_derivative;
};

/// G_k(r) = (i/4) H0(k r) for real k; with imaginary = true, G(r) = K0(|k| r) / (2 pi).
GreenValue greens(double k, double r, bool imaginary = false);

struct BoundaryOperatorMatrix {
    KernelId kernel{};
    double k = 0.0;
    CMatrix values;
};

/// All seven operators on one curve, sharing the special-function evaluations.
struct OperatorSet {
    double k = 0.0;
    CMatrix S, Dpv, Spv_prime, Tdiff;
    Eigen::MatrixXd S_mod, Dpv_mod, Spv_prime_mod;
};

/// Nystrom matrices with hybrid Gauss-trapezoidal corrections.  Assembly is
/// row-parallel and deterministic.
OperatorSet assemble_all(const Curve& curve, double k);
BoundaryOperatorMatrix assemble(KernelId kernel, const Curve& curve, double k);

/// Smallest ratio |c_m| / max |c_m| over the top eighth of the coordinate
/// spectrum; values above ~1e-10 mean the curve is under-resolved.
double resolution_estimate(const Curve& curve);

enum class LayerKind { single, double_layer };

/// Trapezoidal evaluation of S or D potentials at points off the curve.
/// Returns a (targets x n) matrix mapping nodal densities to values.
CMatrix target_matrix(LayerKind kind, double k, const Curve& curve,
                      const std::vector<std::array<double, 2>>& targets);

std::vector<cplx> eval_targets(LayerKind kind, double k, const Curve& curve,
                               const std::vector<cplx>& density,
                               const std::vector<std::array<double, 2>>& targets);

}  // namespace impscat
