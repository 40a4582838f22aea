#include "impscat/curve.hpp"

#include "impscat/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace impscat {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Parameters theta_j with arclength(theta_j) = j L / n, given speed samples
// on a fine equispaced grid.
std::vector<double> invert_arclength(const std::vector<double>& speed_fine, int n, double& length)
{
    const int m = static_cast<int>(speed_fine.size());
    const auto sc = fourier::coefficients(speed_fine);
    const double mean = sc[0].real();
    length = two_pi * mean;
    const auto anti = fourier::periodic_antiderivative(sc);
    const double p0 = fourier::evaluate(anti, 0.0);

    auto arclength = [&](double th, double* speed) {
        double v[2];
        fourier::evaluate_upto(anti, th, 1, v);
        if (speed) *speed = mean + v[1];
        return mean * th + v[0] - p0;
    };

    std::vector<double> theta(n, 0.0);
    for (int j = 1; j < n; ++j) {
        const double target = length * j / n;
        double th = theta[j - 1] + two_pi / n;
        bool converged = false;
        for (int it = 0; it < 50; ++it) {
            double sp;
            const double g = arclength(th, &sp) - target;
            if (!(sp > 0.0)) break;
            const double step = g / sp;
            th -= step;
            if (std::abs(step) < 1e-12) {
                // quadratic convergence: one more step reaches rounding level
                const double g2 = arclength(th, &sp) - target;
                if (sp > 0.0) th -= g2 / sp;
                converged = true;
                break;
            }
        }
        if (!converged || !(th > theta[j - 1]) || !(th < two_pi)) {
            double lo = theta[j - 1], hi = two_pi;
            for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
                const double mid = 0.5 * (lo + hi);
                (arclength(mid, nullptr) < target ? lo : hi) = mid;
            }
            th = 0.5 * (lo + hi);
            if (!(arclength(th, nullptr) - target < 1e-9 * length)) {
                throw NumericalError("arclength inversion failed to converge");
            }
        }
        theta[j] = th;
    }
    (void)m;
    return theta;
}

int fine_count(int a, int b)
{
    int m = std::max(4 * std::max(a, b), 256);
    return m + (m % 2);
}

double orient(double ax, double ay, double bx, double by, double cx, double cy)
{
    const double l = (bx - ax) * (cy - ay);
    const double r = (by - ay) * (cx - ax);
    const double det = l - r;
    const double bound = 3.3306690738754716e-16 * (std::abs(l) + std::abs(r));
    if (std::abs(det) > bound) return det;
    const long double le = (static_cast<long double>(bx) - ax) * (static_cast<long double>(cy) - ay);
    const long double re = (static_cast<long double>(by) - ay) * (static_cast<long double>(cx) - ax);
    return static_cast<double>(le - re);
}

bool on_segment(double ax, double ay, double bx, double by, double px, double py)
{
    return std::min(ax, bx) <= px && px <= std::max(ax, bx) && std::min(ay, by) <= py &&
           py <= std::max(ay, by);
}

bool segments_cross(double ax, double ay, double bx, double by, double cx, double cy, double dx,
                    double dy)
{
    const double d1 = orient(cx, cy, dx, dy, ax, ay);
    const double d2 = orient(cx, cy, dx, dy, bx, by);
    const double d3 = orient(ax, ay, bx, by, cx, cy);
    const double d4 = orient(ax, ay, bx, by, dx, dy);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    if (d1 == 0 && on_segment(cx, cy, dx, dy, ax, ay)) return true;
    if (d2 == 0 && on_segment(cx, cy, dx, dy, bx, by)) return true;
    if (d3 == 0 && on_segment(ax, ay, bx, by, cx, cy)) return true;
    if (d4 == 0 && on_segment(ax, ay, bx, by, dx, dy)) return true;
    return false;
}

}  // namespace

Curve Curve::from_samples(std::vector<double> x, std::vector<double> y)
{
    const int n = static_cast<int>(x.size());
    if (n < 8 || y.size() != x.size()) throw SpecError("curve needs at least 8 matching x/y samples");
    Curve c;
    c.x_ = std::move(x);
    c.y_ = std::move(y);
    for (int pass = 0; pass < 2; ++pass) {
        c.xhat_ = fourier::coefficients(c.x_);
        c.yhat_ = fourier::coefficients(c.y_);
        c.dx_ = fourier::shifted(c.xhat_, 0.0, 1);
        c.dy_ = fourier::shifted(c.yhat_, 0.0, 1);
        if (pass == 0 && c.signed_area() < 0.0) {
            std::reverse(c.x_.begin() + 1, c.x_.end());
            std::reverse(c.y_.begin() + 1, c.y_.end());
            continue;
        }
        break;
    }
    const auto ddx = fourier::shifted(c.xhat_, 0.0, 2);
    const auto ddy = fourier::shifted(c.yhat_, 0.0, 2);
    c.speed_.resize(n);
    c.nx_.resize(n);
    c.ny_.resize(n);
    c.tx_.resize(n);
    c.ty_.resize(n);
    c.curvature_.resize(n);
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        const double sp = std::hypot(c.dx_[j], c.dy_[j]);
        if (!(sp > 0.0)) throw NumericalError("curve has a singular point (zero speed)");
        c.speed_[j] = sp;
        c.tx_[j] = c.dx_[j] / sp;
        c.ty_[j] = c.dy_[j] / sp;
        c.nx_[j] = c.ty_[j];
        c.ny_[j] = -c.tx_[j];
        c.curvature_[j] = (c.dx_[j] * ddy[j] - c.dy_[j] * ddx[j]) / (sp * sp * sp);
        total += sp;
    }
    c.length_ = two_pi * total / n;
    return c;
}

double Curve::theta(int j) const { return two_pi * j / n(); }

double Curve::signed_area() const
{
    double a = 0.0;
    for (int j = 0; j < n(); ++j) a += x_[j] * dy_[j] - y_[j] * dx_[j];
    return 0.5 * a * two_pi / n();
}

double Curve::arclength_defect() const
{
    const double ref = length_ / two_pi;
    double worst = 0.0;
    for (double s : speed_) worst = std::max(worst, std::abs(s / ref - 1.0));
    return worst;
}

double Curve::bounding_radius() const
{
    double r = 0.0;
    for (int j = 0; j < n(); ++j) r = std::max(r, std::hypot(x_[j], y_[j]));
    return r;
}

std::pair<double, double> Curve::point(double th) const
{
    return {fourier::evaluate(xhat_, th), fourier::evaluate(yhat_, th)};
}

void AdmissibilityParams::validate() const
{
    if (!(c_gamma > 0.0)) throw SpecError("c_gamma must be positive");
    if (!(eps_H > 0.0 && eps_H < 1.0)) throw SpecError("eps_H must lie in (0, 1)");
}

int points_for(double length, double k, double ppw)
{
    const double want = ppw * length * k / two_pi;
    int n = static_cast<int>(std::ceil(want - 1e-9));
    n += n % 2;
    return std::max(64, n);
}

Curve from_radial(const TrigSeries& radius, int n)
{
    if (n < 8) throw SpecError("from_radial needs n >= 8");
    const int m = fine_count(n, 4 * radius.bandlimit() + 16);
    std::vector<double> speed(m);
    for (int i = 0; i < m; ++i) {
        const double th = two_pi * i / m;
        const double r = radius(th);
        if (!(r > 0.0)) {
            throw SpecError("radial function must be positive, r(" + std::to_string(th) +
                            ") = " + std::to_string(r));
        }
        speed[i] = std::hypot(r, radius(th, 1));
    }
    double length = 0.0;
    const auto theta = invert_arclength(speed, n, length);
    std::vector<double> x(n), y(n);
    for (int j = 0; j < n; ++j) {
        const double r = radius(theta[j]);
        if (!(r > 0.0)) throw SpecError("radial function must be positive");
        x[j] = r * std::cos(theta[j]);
        y[j] = r * std::sin(theta[j]);
    }
    return Curve::from_samples(std::move(x), std::move(y));
}

Curve reparametrize_arclength(const Curve& curve, int n)
{
    if (n < 8) throw SpecError("reparametrization needs n >= 8");
    const int m = fine_count(curve.n(), n);
    const auto dx = fourier::resample(curve.dx(), m);
    const auto dy = fourier::resample(curve.dy(), m);
    std::vector<double> speed(m);
    for (int i = 0; i < m; ++i) speed[i] = std::hypot(dx[i], dy[i]);
    double length = 0.0;
    const auto theta = invert_arclength(speed, n, length);
    std::vector<double> x(n), y(n);
    for (int j = 0; j < n; ++j) {
        x[j] = fourier::evaluate(curve.xhat(), theta[j]);
        y[j] = fourier::evaluate(curve.yhat(), theta[j]);
    }
    return Curve::from_samples(std::move(x), std::move(y));
}

fourier::CVec curvature_spectrum(const Curve& curve)
{
    return fourier::coefficients(curve.curvature());
}

bool self_intersects(const Curve& curve)
{
    const int n = curve.n();
    const auto& x = curve.x();
    const auto& y = curve.y();
    for (int i = 0; i < n; ++i) {
        const int i1 = (i + 1) % n;
        const double xmin = std::min(x[i], x[i1]), xmax = std::max(x[i], x[i1]);
        const double ymin = std::min(y[i], y[i1]), ymax = std::max(y[i], y[i1]);
        for (int j = i + 2; j < n; ++j) {
            const int j1 = (j + 1) % n;
            if (j1 == i) continue;
            if (std::max(x[j], x[j1]) < xmin || std::min(x[j], x[j1]) > xmax ||
                std::max(y[j], y[j1]) < ymin || std::min(y[j], y[j1]) > ymax) {
                continue;
            }
            if (segments_cross(x[i], y[i], x[i1], y[i1], x[j], y[j], x[j1], y[j1])) return true;
        }
    }
    return false;
}

Admissibility is_admissible(const Curve& curve, double k, const AdmissibilityParams& params)
{
    params.validate();
    Admissibility out;
    out.bandlimit = static_cast<int>(std::floor(params.c_gamma * k));
    const auto spec = curvature_spectrum(curve);
    const int n = static_cast<int>(spec.size());
    double total = 0.0, tail = 0.0;
    for (int q = 0; q < n; ++q) {
        const double e = std::norm(spec[q]);
        total += e;
        if (std::abs(fourier::frequency(q, n)) > out.bandlimit) tail += e;
    }
    out.tail_ratio = total > 0.0 ? std::sqrt(tail / total) : 0.0;
    out.self_intersecting = self_intersects(curve);
    out.admissible = !out.self_intersecting && out.tail_ratio < params.eps_H;
    if (out.self_intersecting) {
        out.diagnostic = "self-intersection";
    } else if (!out.admissible) {
        out.diagnostic = "curvature tail ratio " + std::to_string(out.tail_ratio) + " beyond mode " +
                         std::to_string(out.bandlimit);
    }
    return out;
}

Curve apply_normal_update(const Curve& curve, const TrigSeries& h, int n_out)
{
    const int n = curve.n();
    std::vector<double> x(curve.x()), y(curve.y());
    for (int j = 0; j < n; ++j) {
        const double v = h(curve.theta(j));
        x[j] += v * curve.nx()[j];
        y[j] += v * curve.ny()[j];
    }
    const auto moved = Curve::from_samples(std::move(x), std::move(y));
    return reparametrize_arclength(moved, n_out > 0 ? n_out : n);
}

TrigSeries gaussian_filter(const TrigSeries& h, int bandlimit, double sigma)
{
    if (!(sigma > 0.0)) throw SpecError("filter width must be positive");
    TrigSeries out(h);
    const double nn = std::max(bandlimit, 1);
    for (int l = 1; l <= out.bandlimit(); ++l) {
        const double f = std::exp(-static_cast<double>(l) * l / (nn * nn * sigma * sigma));
        out.c[l - 1] *= f;
        out.s[l - 1] *= f;
    }
    return out;
}

}  // namespace impscat
