#pragma once

#include "impscat/curve.hpp"
#include "impscat/impedance.hpp"
#include "impscat/potentials.hpp"

#include <array>
#include <atomic>
#include <string>
#include <vector>

namespace impscat {

using Point = std::array<double, 2>;

struct SensorConfig {
    double k = 1.0;
    std::vector<Point> directions;  // unit vectors
    std::vector<Point> receivers;

    int num_directions() const { return static_cast<int>(directions.size()); }
    int num_receivers() const { return static_cast<int>(receivers.size()); }
    void validate() const;
    /// Throws SpecError if a receiver is within the curve's bounding circle.
    void check_outside(const Curve& curve) const;

    /// Directions at angles 2 pi j / nd and receivers on a circle at angles 2 pi m / nr.
    static SensorConfig circular(double k, int nd, int nr, double radius);
};

/// Scattered field at the receivers; data(m, l) is receiver m, direction l.
struct MeasurementSet {
    double k = 1.0;
    std::vector<Point> directions;
    std::vector<Point> receivers;
    CMatrix data;
    std::string provenance = "synthetic";
    double noise_level = 0.0;

    SensorConfig sensors() const { return {k, directions, receivers}; }
    /// Data stacked column by column (direction-major) into one vector.
    CVector stacked() const;
};

/// Dense system of the regularized combined-field equation for one
/// (curve, lambda, k), LU factorized.
struct ForwardSystem {
    double k = 0.0;
    int n = 0;
    std::vector<double> lambda;     // impedance at the nodes
    OperatorSet ops;
    CMatrix normal_part;            // maps sigma to the normal derivative of u^scat
    CMatrix trace_part;             // maps sigma to the boundary trace of u^scat
    Eigen::PartialPivLU<CMatrix> lu;
    double rcond = 0.0;
};

struct ForwardSolution {
    double k = 0.0;
    CMatrix sigma;        // n x N_d densities
    CMatrix u_bdry;       // total field on the boundary
    CMatrix dudS;         // arclength derivative of the total field
    CMatrix dudN;         // normal derivative from the impedance condition
    CMatrix u_scat;       // N_r x N_d receiver values
    CMatrix receiver_op;  // N_r x n map from density to receiver values
};

/// Counts factorizations and right-hand-side solves.
struct OpCounters {
    std::atomic<long> factorizations{0};
    std::atomic<long> rhs_solves{0};
    void reset()
    {
        factorizations = 0;
        rhs_solves = 0;
    }
};
OpCounters& counters();

ForwardSystem build_system(const Curve& curve, const std::vector<double>& lambda_nodes, double k);
ForwardSystem build_system(const Curve& curve, const Impedance& imp, double k);
/// Same curve and k with another impedance; reuses the assembled operators.
ForwardSystem with_impedance(const ForwardSystem& base, const std::vector<double>& lambda_nodes);

/// Solves with the shared factorization (counts one solve per column).
CMatrix solve(const ForwardSystem& system, const CMatrix& rhs);

/// Maps densities to receiver values: E_S + i k E_D S_{i|k|}.
CMatrix receiver_operator(const ForwardSystem& system, const Curve& curve,
                          const std::vector<Point>& receivers);

ForwardSolution solve_plane_waves(const ForwardSystem& system, const Curve& curve,
                                  const SensorConfig& sensors);

/// F_k(curve, lambda) stacked over directions.
MeasurementSet forward_operator(const Curve& curve, const std::vector<double>& lambda_nodes,
                                const SensorConfig& sensors);
MeasurementSet forward_operator(const Curve& curve, const Impedance& imp,
                                const SensorConfig& sensors);

/// Normal derivative of the total field from the layer operators, for
/// checking the boundary condition independently of the impedance relation.
CMatrix operator_normal_derivative(const ForwardSystem& system, const Curve& curve,
                                   const SensorConfig& sensors, const CMatrix& sigma);

/// Sound-soft data from u = D_k sigma - i k S_k sigma.
MeasurementSet dirichlet_data(const Curve& curve, const SensorConfig& sensors);
/// Sound-hard data: the impedance problem with lambda = 0.
MeasurementSet neumann_data(const Curve& curve, const SensorConfig& sensors);

/// Boundary trace of the total Dirichlet field (for checking u = 0).
CMatrix dirichlet_boundary_trace(const Curve& curve, const SensorConfig& sensors);

/// Plane wave exp(i k x . d) and its normal derivative at the nodes.
void incident_field(const Curve& curve, const SensorConfig& sensors, CMatrix& u, CMatrix& dudn);

}  // namespace impscat
