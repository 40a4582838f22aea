#include "impscat/forward.hpp"

#include "impscat/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace impscat {

namespace {

constexpr cplx I(0.0, 1.0);

// complex * real without promoting the real factor
CMatrix mul(const CMatrix& a, const Eigen::MatrixXd& b)
{
    const Eigen::MatrixXd re = a.real() * b;
    const Eigen::MatrixXd im = a.imag() * b;
    CMatrix out(re.rows(), re.cols());
    out.real() = re;
    out.imag() = im;
    return out;
}

CMatrix tangential_derivative(const Curve& curve, const CMatrix& u)
{
    const int n = curve.n();
    CMatrix out(u.rows(), u.cols());
    std::vector<cplx> col(n);
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        for (int j = 0; j < n; ++j) col[j] = u(j, c);
        const auto d = fourier::derivative(std::span<const cplx>(col));
        for (int j = 0; j < n; ++j) out(j, c) = d[j] / curve.speed()[j];
    }
    return out;
}

std::string describe_k(double k)
{
    std::ostringstream os;
    os << "k = " << k;
    return os.str();
}

}  // namespace

void SensorConfig::validate() const
{
    if (!(k > 0.0)) throw SpecError("sensor wavenumber must be positive");
    if (directions.empty() || receivers.empty()) throw SpecError("sensor layout needs directions and receivers");
    for (const auto& d : directions) {
        if (std::abs(std::hypot(d[0], d[1]) - 1.0) > 1e-12) throw SpecError("incident direction is not a unit vector");
    }
}

void SensorConfig::check_outside(const Curve& curve) const
{
    const double r = curve.bounding_radius();
    for (const auto& p : receivers) {
        if (!(std::hypot(p[0], p[1]) > r)) throw SpecError("receiver inside the obstacle's bounding circle");
    }
}

SensorConfig SensorConfig::circular(double k, int nd, int nr, double radius)
{
    SensorConfig s;
    s.k = k;
    for (int j = 0; j < nd; ++j) {
        const double a = 2.0 * std::numbers::pi * j / nd;
        s.directions.push_back({std::cos(a), std::sin(a)});
    }
    for (int m = 0; m < nr; ++m) {
        const double a = 2.0 * std::numbers::pi * m / nr;
        s.receivers.push_back({radius * std::cos(a), radius * std::sin(a)});
    }
    return s;
}

CVector MeasurementSet::stacked() const
{
    return Eigen::Map<const CVector>(data.data(), data.size());
}

OpCounters& counters()
{
    static OpCounters c;
    return c;
}

void incident_field(const Curve& curve, const SensorConfig& sensors, CMatrix& u, CMatrix& dudn)
{
    const int n = curve.n();
    const int nd = sensors.num_directions();
    u.resize(n, nd);
    dudn.resize(n, nd);
    for (int l = 0; l < nd; ++l) {
        const auto& d = sensors.directions[l];
        for (int j = 0; j < n; ++j) {
            const cplx e = std::polar(1.0, sensors.k * (curve.x()[j] * d[0] + curve.y()[j] * d[1]));
            u(j, l) = e;
            dudn(j, l) = I * sensors.k * (d[0] * curve.nx()[j] + d[1] * curve.ny()[j]) * e;
        }
    }
}

static void factorize(ForwardSystem& sys, const std::vector<double>& lambda_nodes)
{
    const cplx ik = I * sys.k;
    sys.lambda = lambda_nodes;
    CMatrix A = sys.normal_part;
    for (int i = 0; i < sys.n; ++i) A.row(i) += (ik * lambda_nodes[i]) * sys.trace_part.row(i);
    sys.lu.compute(A);
    ++counters().factorizations;
    sys.rcond = sys.lu.rcond();
    if (!(sys.rcond > 1e-14)) {
        throw NumericalError("system matrix is numerically singular at " + describe_k(sys.k));
    }
}

ForwardSystem build_system(const Curve& curve, const std::vector<double>& lambda_nodes, double k)
{
    const int n = curve.n();
    if (static_cast<int>(lambda_nodes.size()) != n) throw SpecError("impedance samples do not match the curve");
    ForwardSystem sys;
    sys.k = k;
    sys.n = n;
    sys.ops = assemble_all(curve, k);
    const auto& o = sys.ops;
    const cplx ik = I * k;

    const Eigen::MatrixXd sp2 = o.Spv_prime_mod * o.Spv_prime_mod;
    sys.normal_part = ik * mul(o.Tdiff, o.S_mod);
    sys.normal_part += o.Spv_prime + ik * sp2.cast<cplx>();
    sys.normal_part.diagonal().array() -= (2.0 + ik) / 4.0;

    sys.trace_part = ik * mul(o.Dpv, o.S_mod);
    sys.trace_part += o.S + (0.5 * ik) * o.S_mod.cast<cplx>();

    factorize(sys, lambda_nodes);
    return sys;
}

ForwardSystem with_impedance(const ForwardSystem& base, const std::vector<double>& lambda_nodes)
{
    if (static_cast<int>(lambda_nodes.size()) != base.n) throw SpecError("impedance samples do not match the curve");
    ForwardSystem sys;
    sys.k = base.k;
    sys.n = base.n;
    sys.ops = base.ops;
    sys.normal_part = base.normal_part;
    sys.trace_part = base.trace_part;
    factorize(sys, lambda_nodes);
    return sys;
}

ForwardSystem build_system(const Curve& curve, const Impedance& imp, double k)
{
    return build_system(curve, imp.at_nodes(curve.n()), k);
}

CMatrix solve(const ForwardSystem& system, const CMatrix& rhs)
{
    counters().rhs_solves += rhs.cols();
    return system.lu.solve(rhs);
}

CMatrix receiver_operator(const ForwardSystem& system, const Curve& curve,
                          const std::vector<Point>& receivers)
{
    const double k = system.k;
    CMatrix R = target_matrix(LayerKind::single, k, curve, receivers);
    const CMatrix ED = target_matrix(LayerKind::double_layer, k, curve, receivers);
    R += (I * k) * mul(ED, system.ops.S_mod);
    return R;
}

ForwardSolution solve_plane_waves(const ForwardSystem& system, const Curve& curve,
                                  const SensorConfig& sensors)
{
    sensors.validate();
    if (std::abs(sensors.k - system.k) > 1e-12 * system.k) throw SpecError("sensor wavenumber differs from system");
    CMatrix uinc, dinc;
    incident_field(curve, sensors, uinc, dinc);
    const cplx ik = I * system.k;
    CMatrix rhs = -dinc;
    for (int j = 0; j < system.n; ++j) rhs.row(j) -= (ik * system.lambda[j]) * uinc.row(j);

    ForwardSolution sol;
    sol.k = system.k;
    sol.sigma = solve(system, rhs);
    sol.u_bdry = system.trace_part * sol.sigma + uinc;
    sol.dudS = tangential_derivative(curve, sol.u_bdry);
    sol.dudN.resize(system.n, sol.u_bdry.cols());
    for (int j = 0; j < system.n; ++j) sol.dudN.row(j) = (-ik * system.lambda[j]) * sol.u_bdry.row(j);
    sol.receiver_op = receiver_operator(system, curve, sensors.receivers);
    sol.u_scat = sol.receiver_op * sol.sigma;
    return sol;
}

MeasurementSet forward_operator(const Curve& curve, const std::vector<double>& lambda_nodes,
                                const SensorConfig& sensors)
{
    const auto sys = build_system(curve, lambda_nodes, sensors.k);
    const auto sol = solve_plane_waves(sys, curve, sensors);
    MeasurementSet m;
    m.k = sensors.k;
    m.directions = sensors.directions;
    m.receivers = sensors.receivers;
    m.data = sol.u_scat;
    return m;
}

MeasurementSet forward_operator(const Curve& curve, const Impedance& imp, const SensorConfig& sensors)
{
    return forward_operator(curve, imp.at_nodes(curve.n()), sensors);
}

CMatrix operator_normal_derivative(const ForwardSystem& system, const Curve& curve,
                                   const SensorConfig& sensors, const CMatrix& sigma)
{
    CMatrix uinc, dinc;
    incident_field(curve, sensors, uinc, dinc);
    return system.normal_part * sigma + dinc;
}

namespace {

struct DirichletSolve {
    OperatorSet ops;
    CMatrix sigma;
    CMatrix uinc;
};

DirichletSolve dirichlet_solve(const Curve& curve, const SensorConfig& sensors)
{
    sensors.validate();
    const double k = sensors.k;
    DirichletSolve d;
    d.ops = assemble_all(curve, k);
    CMatrix A = d.ops.Dpv - (I * k) * d.ops.S;
    A.diagonal().array() += 0.5;
    Eigen::PartialPivLU<CMatrix> lu(A);
    ++counters().factorizations;
    if (!(lu.rcond() > 1e-14)) throw NumericalError("Dirichlet system is numerically singular at " + describe_k(k));
    CMatrix dinc;
    incident_field(curve, sensors, d.uinc, dinc);
    d.sigma = lu.solve(-d.uinc);
    counters().rhs_solves += d.sigma.cols();
    return d;
}

}  // namespace

MeasurementSet dirichlet_data(const Curve& curve, const SensorConfig& sensors)
{
    const auto d = dirichlet_solve(curve, sensors);
    const double k = sensors.k;
    const CMatrix R = target_matrix(LayerKind::double_layer, k, curve, sensors.receivers) -
                      (I * k) * target_matrix(LayerKind::single, k, curve, sensors.receivers);
    MeasurementSet m;
    m.k = k;
    m.directions = sensors.directions;
    m.receivers = sensors.receivers;
    m.data = R * d.sigma;
    return m;
}

CMatrix dirichlet_boundary_trace(const Curve& curve, const SensorConfig& sensors)
{
    const auto d = dirichlet_solve(curve, sensors);
    CMatrix trace = d.ops.Dpv - (I * sensors.k) * d.ops.S;
    trace.diagonal().array() += 0.5;
    return trace * d.sigma + d.uinc;
}

MeasurementSet neumann_data(const Curve& curve, const SensorConfig& sensors)
{
    return forward_operator(curve, std::vector<double>(curve.n(), 0.0), sensors);
}

}  // namespace impscat
