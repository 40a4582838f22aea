#include "impscat/potentials.hpp"

#include "impscat/alpert.hpp"
#include "impscat/error.hpp"
#include "impscat/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace impscat {

namespace {

constexpr double pi = std::numbers::pi;

struct KernelEval {
    cplx S, D, Sp, Td;
    double Sm, Dm, Spm;
};

// d = target - source; nt, ns are the target and source normals.
inline KernelEval eval_kernels(double k, double dx, double dy, double ntx, double nty, double nsx,
                               double nsy)
{
    const double r = std::hypot(dx, dy);
    const double kappa = std::abs(k);
    const auto c = special::cylinder01(k * r);
    const auto m = special::modified01(kappa * r);

    const cplx g(-0.25 * c.y0, 0.25 * c.j0);
    const cplx gp(0.25 * k * c.y1, -0.25 * k * c.j1);
    const double gm = m.k0 / (2.0 * pi);
    const double gpm = -kappa * m.k1 / (2.0 * pi);
    // difference of radial derivatives without the common -1/(2 pi r) pole
    const cplx dgp(0.25 * k * c.y1r + kappa * m.k1r / (2.0 * pi), -0.25 * k * c.j1);

    const double dnt = dx * ntx + dy * nty;
    const double dns = dx * nsx + dy * nsy;
    const double q = ntx * nsx + nty * nsy;
    const double p = dnt * dns;
    const double r2 = r * r;

    KernelEval e;
    e.S = g;
    e.D = -gp * dns / r;
    e.Sp = gp * dnt / r;
    e.Sm = gm;
    e.Dm = -gpm * dns / r;
    e.Spm = gpm * dnt / r;
    e.Td = (k * k * g + kappa * kappa * gm) * (p / r2) + 2.0 * dgp * p / (r2 * r) - dgp * q / r;
    return e;
}

struct ShiftedGeometry {
    double weight;                        // h * w_k
    std::vector<double> x, y, nx, ny, speed;
    std::vector<double> ddx, ddy;         // y(theta_i + s) - x(theta_i)
    std::vector<double> interp;           // periodic sinc weights by column offset
};

std::vector<ShiftedGeometry> shifted_geometry(const Curve& curve)
{
    const int n = curve.n();
    const double h = 2.0 * pi / n;
    std::vector<ShiftedGeometry> out;
    out.reserve(2 * alpert::count);
    for (const auto& node : alpert::nodes()) {
        for (int sign : {1, -1}) {
            const double s = sign * node.x * h;
            ShiftedGeometry g;
            g.weight = h * node.w;
            g.x = fourier::shifted(curve.xhat(), s);
            g.y = fourier::shifted(curve.yhat(), s);
            const auto dx = fourier::shifted(curve.xhat(), s, 1);
            const auto dy = fourier::shifted(curve.yhat(), s, 1);
            g.ddx = fourier::shifted_difference(curve.xhat(), s);
            g.ddy = fourier::shifted_difference(curve.yhat(), s);
            g.nx.resize(n);
            g.ny.resize(n);
            g.speed.resize(n);
            for (int i = 0; i < n; ++i) {
                const double sp = std::hypot(dx[i], dy[i]);
                g.speed[i] = sp;
                g.nx[i] = dy[i] / sp;
                g.ny[i] = -dx[i] / sp;
            }
            g.interp.resize(n);
            for (int m = 0; m < n; ++m) g.interp[m] = fourier::interpolation_kernel(n, s - h * m);
            out.push_back(std::move(g));
        }
    }
    return out;
}

}  // namespace

std::string to_string(KernelId id)
{
    switch (id) {
    case KernelId::S_k: return "S_k";
    case KernelId::Dpv_k: return "Dpv_k";
    case KernelId::Spv_prime_k: return "Spv_prime_k";
    case KernelId::Tdiff: return "Tdiff";
    case KernelId::S_imk: return "S_imk";
    case KernelId::Dpv_imk: return "Dpv_imk";
    case KernelId::Spv_prime_imk: return "Spv_prime_imk";
    }
    return "unknown";
}

bool on_imaginary_axis(KernelId id)
{
    return id == KernelId::S_imk || id == KernelId::Dpv_imk || id == KernelId::Spv_prime_imk;
}

GreenValue greens(double k, double r, bool imaginary)
{
    if (!(r > 0.0)) throw SpecError("Green's function needs a positive distance");
    if (imaginary) {
        const double kappa = std::abs(k);
        const auto m = special::modified01(kappa * r);
        return {m.k0 / (2.0 * pi), -kappa * m.k1 / (2.0 * pi)};
    }
    const auto c = special::cylinder01(k * r);
    return {cplx(-0.25 * c.y0, 0.25 * c.j0), cplx(0.25 * k * c.y1, -0.25 * k * c.j1)};
}

OperatorSet assemble_all(const Curve& curve, double k)
{
    if (!(k > 0.0)) throw SpecError("wavenumber must be positive");
    const int n = curve.n();
    alpert::require_points(n);
    const double h = 2.0 * pi / n;
    const int a = alpert::skip;
    const auto shifts = shifted_geometry(curve);
    const auto& X = curve.x();
    const auto& Y = curve.y();
    const auto& NX = curve.nx();
    const auto& NY = curve.ny();
    const auto& SP = curve.speed();

    OperatorSet ops;
    ops.k = k;
    ops.S = CMatrix::Zero(n, n);
    ops.Dpv = CMatrix::Zero(n, n);
    ops.Spv_prime = CMatrix::Zero(n, n);
    ops.Tdiff = CMatrix::Zero(n, n);
    ops.S_mod = Eigen::MatrixXd::Zero(n, n);
    ops.Dpv_mod = Eigen::MatrixXd::Zero(n, n);
    ops.Spv_prime_mod = Eigen::MatrixXd::Zero(n, n);

#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        for (int l = a; l <= n - a; ++l) {
            const int j = (i + l) % n;
            const auto e = eval_kernels(k, X[i] - X[j], Y[i] - Y[j], NX[i], NY[i], NX[j], NY[j]);
            const double w = h * SP[j];
            ops.S(i, j) = w * e.S;
            ops.Dpv(i, j) = w * e.D;
            ops.Spv_prime(i, j) = w * e.Sp;
            ops.Tdiff(i, j) = w * e.Td;
            ops.S_mod(i, j) = w * e.Sm;
            ops.Dpv_mod(i, j) = w * e.Dm;
            ops.Spv_prime_mod(i, j) = w * e.Spm;
        }
        for (const auto& g : shifts) {
            const auto e = eval_kernels(k, -g.ddx[i], -g.ddy[i], NX[i], NY[i], g.nx[i], g.ny[i]);
            const double w = g.weight * g.speed[i];
            for (int m = 0; m < n; ++m) {
                const int j = (i + m) % n;
                const double c = w * g.interp[m];
                ops.S(i, j) += c * e.S;
                ops.Dpv(i, j) += c * e.D;
                ops.Spv_prime(i, j) += c * e.Sp;
                ops.Tdiff(i, j) += c * e.Td;
                ops.S_mod(i, j) += c * e.Sm;
                ops.Dpv_mod(i, j) += c * e.Dm;
                ops.Spv_prime_mod(i, j) += c * e.Spm;
            }
        }
    }
    return ops;
}

BoundaryOperatorMatrix assemble(KernelId kernel, const Curve& curve, double k)
{
    auto ops = assemble_all(curve, k);
    BoundaryOperatorMatrix out;
    out.kernel = kernel;
    out.k = k;
    switch (kernel) {
    case KernelId::S_k: out.values = std::move(ops.S); break;
    case KernelId::Dpv_k: out.values = std::move(ops.Dpv); break;
    case KernelId::Spv_prime_k: out.values = std::move(ops.Spv_prime); break;
    case KernelId::Tdiff: out.values = std::move(ops.Tdiff); break;
    case KernelId::S_imk: out.values = ops.S_mod.cast<cplx>(); break;
    case KernelId::Dpv_imk: out.values = ops.Dpv_mod.cast<cplx>(); break;
    case KernelId::Spv_prime_imk: out.values = ops.Spv_prime_mod.cast<cplx>(); break;
    }
    return out;
}

double resolution_estimate(const Curve& curve)
{
    const int n = curve.n();
    double top = 0.0, tail = 0.0;
    for (int q = 0; q < n; ++q) {
        const double mag = std::hypot(std::abs(curve.xhat()[q]), std::abs(curve.yhat()[q]));
        top = std::max(top, mag);
        if (8 * std::abs(fourier::frequency(q, n)) >= 3 * n) tail = std::max(tail, mag);
    }
    return top > 0.0 ? tail / top : 0.0;
}

CMatrix target_matrix(LayerKind kind, double k, const Curve& curve,
                      const std::vector<std::array<double, 2>>& targets)
{
    const int n = curve.n();
    const double h = 2.0 * pi / n;
    for (const auto& p : targets) {
        for (int j = 0; j < n; ++j) {
            if (p[0] == curve.x()[j] && p[1] == curve.y()[j]) throw SpecError("target point lies on the curve");
        }
    }
    CMatrix E(static_cast<Eigen::Index>(targets.size()), n);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < static_cast<int>(targets.size()); ++t) {
        for (int j = 0; j < n; ++j) {
            const double dx = targets[t][0] - curve.x()[j];
            const double dy = targets[t][1] - curve.y()[j];
            const double r = std::hypot(dx, dy);
            const auto g = greens(k, r);
            const double w = h * curve.speed()[j];
            if (kind == LayerKind::single) {
                E(t, j) = w * g.value;
            } else {
                E(t, j) = -w * g.radial_derivative * (dx * curve.nx()[j] + dy * curve.ny()[j]) / r;
            }
        }
    }
    return E;
}

std::vector<cplx> eval_targets(LayerKind kind, double k, const Curve& curve,
                               const std::vector<cplx>& density,
                               const std::vector<std::array<double, 2>>& targets)
{
    if (static_cast<int>(density.size()) != curve.n()) throw SpecError("density size mismatch");
    const CMatrix E = target_matrix(kind, k, curve, targets);
    const Eigen::Map<const CVector> sigma(density.data(), curve.n());
    const CVector v = E * sigma;
    return {v.data(), v.data() + v.size()};
}

}  // namespace impscat
