#include "impscat/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace impscat::special {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double euler_gamma = std::numbers::egamma;
constexpr double series_limit = 2.0;
constexpr double asymptotic_limit = 25.0;

// Terms of the power series shared by the small-argument forms.
struct SmallSeries {
    double j0, j1, y0, y1_tail;   // y1_tail excludes -2/(pi x)
    double i0, i1, k0, k1_tail;   // k1_tail excludes 1/x
};

SmallSeries small_series(double x)
{
    const double q = 0.25 * x * x;
    const double lg = std::log(0.5 * x);
    double t0 = 1.0;        // q^k / (k!)^2
    double t1 = 1.0;        // q^k / (k! (k+1)!)
    double hk = 0.0;        // harmonic number H_k
    double j0 = 0.0, j1 = 0.0, i0 = 0.0, i1 = 0.0;
    double sy0 = 0.0, sk0 = 0.0, sy1 = 0.0, sk1 = 0.0;
    double sign = 1.0;
    for (int k = 0; k < 60; ++k) {
        if (k > 0) {
            t0 *= q / (double(k) * k);
            t1 *= q / (double(k) * (k + 1));
            hk += 1.0 / k;
            sign = -sign;
        }
        const double hk1 = hk + 1.0 / (k + 1);
        const double psi_sum = -2.0 * euler_gamma + hk + hk1;
        j0 += sign * t0;
        j1 += sign * t1;
        i0 += t0;
        i1 += t1;
        sy0 += -sign * hk * t0;
        sk0 += hk * t0;
        sy1 += sign * psi_sum * t1;
        sk1 += psi_sum * t1;
        if (t0 < 1e-18 * std::abs(i0) && k > 2) break;
    }
    const double hx = 0.5 * x;
    j1 *= hx;
    i1 *= hx;
    SmallSeries s{};
    s.j0 = j0;
    s.j1 = j1;
    s.i0 = i0;
    s.i1 = i1;
    s.y0 = (2.0 / pi) * ((lg + euler_gamma) * j0 + sy0);
    s.y1_tail = (2.0 / pi) * lg * j1 - (1.0 / pi) * hx * sy1;
    s.k0 = -(lg + euler_gamma) * i0 + sk0;
    s.k1_tail = lg * i1 - 0.5 * hx * sk1;
    return s;
}

// Normalized J_0..J_m by backward recurrence; m must be even.
std::vector<double> miller(double x, int m)
{
    std::vector<double> j(static_cast<std::size_t>(m) + 2, 0.0);
    j[m + 1] = 0.0;
    j[m] = 1e-300;
    for (int n = m; n >= 1; --n) {
        j[n - 1] = (2.0 * n / x) * j[n] - j[n + 1];
        if (std::abs(j[n - 1]) > 1e250) {
            for (int i = n - 1; i <= m; ++i) j[i] *= 1e-250;
        }
    }
    double norm = j[0];
    for (int n = 2; n <= m; n += 2) norm += 2.0 * j[n];
    for (auto& v : j) v /= norm;
    return j;
}

int miller_start(double x, int n)
{
    const double top = std::max(x, static_cast<double>(n));
    const int m = static_cast<int>(top + 20.0 + 6.0 * std::cbrt(top) + 0.25 * x);
    return m + (m % 2);
}

struct Hankel01 {
    double j0, j1, y0, y1;
};

Hankel01 middle_range(double x)
{
    const auto j = miller(x, miller_start(x, 1));
    const double lg = std::log(0.5 * x) + euler_gamma;
    double s0 = 0.0, s1 = 0.0;
    const int m = static_cast<int>(j.size()) - 2;
    for (int k = 1; 2 * k + 1 <= m; ++k) {
        const double sg = (k % 2 == 0) ? 1.0 : -1.0;
        s0 += sg * j[2 * k] / k;
        s1 += sg * (j[2 * k - 1] - j[2 * k + 1]) / k;
    }
    Hankel01 h{};
    h.j0 = j[0];
    h.j1 = j[1];
    h.y0 = (2.0 / pi) * lg * j[0] - (4.0 / pi) * s0;
    h.y1 = (2.0 / pi) * (-j[0] / x + lg * j[1]) + (2.0 / pi) * s1;
    return h;
}

// Hankel asymptotic P and Q for order nu.
void asymptotic_pq(int nu, double x, double& p, double& q)
{
    const double mu = 4.0 * nu * nu;
    const double z8 = 8.0 * x;
    p = 1.0;
    q = 0.0;
    double term = 1.0;
    double last = std::numeric_limits<double>::infinity();
    for (int m = 1; m < 200; ++m) {
        const double odd = 2.0 * m - 1.0;
        term *= (mu - odd * odd) / (m * z8);
        const double mag = std::abs(term);
        if (mag > last) break;
        last = mag;
        // m = 1, 2, 3, 4 -> +Q, -P, -Q, +P
        switch (m % 4) {
        case 1: q += term; break;
        case 2: p -= term; break;
        case 3: q -= term; break;
        default: p += term; break;
        }
        if (mag < 1e-17) break;
    }
}

Hankel01 large_range(double x)
{
    const double amp = std::sqrt(2.0 / (pi * x));
    Hankel01 h{};
    for (int nu = 0; nu <= 1; ++nu) {
        double p, q;
        asymptotic_pq(nu, x, p, q);
        const double chi = x - (0.5 * nu + 0.25) * pi;
        const double c = std::cos(chi), s = std::sin(chi);
        const double jv = amp * (p * c - q * s);
        const double yv = amp * (p * s + q * c);
        if (nu == 0) {
            h.j0 = jv;
            h.y0 = yv;
        } else {
            h.j1 = jv;
            h.y1 = yv;
        }
    }
    return h;
}

Hankel01 hankel_parts(double x)
{
    if (!(x > 0.0)) throw std::domain_error("Bessel argument must be positive");
    if (x <= series_limit) {
        const auto s = small_series(x);
        return {s.j0, s.j1, s.y0, s.y1_tail - 2.0 / (pi * x)};
    }
    if (x < asymptotic_limit) return middle_range(x);
    return large_range(x);
}

// exp(x) K_nu(x) for nu = 0, 1 and x > 2.
Pair scaled_k01(double x)
{
    if (x >= asymptotic_limit) {
        Pair out{};
        for (int nu = 0; nu <= 1; ++nu) {
            const double mu = 4.0 * nu * nu;
            double sum = 1.0, term = 1.0;
            double last = std::numeric_limits<double>::infinity();
            for (int m = 1; m < 200; ++m) {
                const double odd = 2.0 * m - 1.0;
                term *= (mu - odd * odd) / (m * 8.0 * x);
                if (std::abs(term) > last) break;
                last = std::abs(term);
                sum += term;
                if (last < 1e-17) break;
            }
            (nu == 0 ? out.f0 : out.f1) = std::sqrt(pi / (2.0 * x)) * sum;
        }
        return out;
    }
    // K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt, trapezoid in t.
    const double h = x <= 5.0 ? 0.15 : 0.07;
    double s0 = 0.5, s1 = 0.5;
    for (int i = 1; i < 2000; ++i) {
        const double t = i * h;
        const double e = std::exp(-x * (std::cosh(t) - 1.0));
        s0 += e;
        s1 += e * std::cosh(t);
        if (e < 1e-19) break;
    }
    return {h * s0, h * s1};
}

}  // namespace

Pair bessel_j01(double x)
{
    const auto h = hankel_parts(x);
    return {h.j0, h.j1};
}

Pair bessel_y01(double x)
{
    const auto h = hankel_parts(x);
    return {h.y0, h.y1};
}

Pair bessel_k01(double x)
{
    if (!(x > 0.0)) throw std::domain_error("Bessel argument must be positive");
    if (x <= series_limit) {
        const auto s = small_series(x);
        return {s.k0, s.k1_tail + 1.0 / x};
    }
    if (x > 700.0) return {0.0, 0.0};
    const auto k = scaled_k01(x);
    const double e = std::exp(-x);
    return {k.f0 * e, k.f1 * e};
}

double bessel_j0(double x) { return bessel_j01(x).f0; }
double bessel_j1(double x) { return bessel_j01(x).f1; }
double bessel_y0(double x) { return bessel_y01(x).f0; }
double bessel_y1(double x) { return bessel_y01(x).f1; }
double bessel_k0(double x) { return bessel_k01(x).f0; }
double bessel_k1(double x) { return bessel_k01(x).f1; }

double bessel_y1_regular(double x)
{
    if (x <= series_limit) {
        if (x == 0.0) return 0.0;
        return small_series(x).y1_tail;
    }
    return hankel_parts(x).y1 + 2.0 / (pi * x);
}

double bessel_k1_regular(double x)
{
    if (x <= series_limit) {
        if (x == 0.0) return 0.0;
        return small_series(x).k1_tail;
    }
    return bessel_k01(x).f1 - 1.0 / x;
}

Cylinder01 cylinder01(double x)
{
    if (!(x > 0.0)) throw std::domain_error("Bessel argument must be positive");
    if (x <= series_limit) {
        const auto s = small_series(x);
        return {s.j0, s.j1, s.y0, s.y1_tail - 2.0 / (pi * x), s.y1_tail};
    }
    const auto h = x < asymptotic_limit ? middle_range(x) : large_range(x);
    return {h.j0, h.j1, h.y0, h.y1, h.y1 + 2.0 / (pi * x)};
}

Modified01 modified01(double x)
{
    if (!(x > 0.0)) throw std::domain_error("Bessel argument must be positive");
    if (x <= series_limit) {
        const auto s = small_series(x);
        return {s.k0, s.k1_tail + 1.0 / x, s.k1_tail};
    }
    if (x > 700.0) return {0.0, 0.0, -1.0 / x};
    const auto k = scaled_k01(x);
    const double e = std::exp(-x);
    return {k.f0 * e, k.f1 * e, k.f1 * e - 1.0 / x};
}

cplx hankel1_0(double x)
{
    const auto h = hankel_parts(x);
    return {h.j0, h.y0};
}

cplx hankel1_1(double x)
{
    const auto h = hankel_parts(x);
    return {h.j1, h.y1};
}

double bessel_jn(int n, double x)
{
    if (n < 0) return (n % 2 == 0 ? 1.0 : -1.0) * bessel_jn(-n, x);
    if (n <= 1) return n == 0 ? bessel_j0(x) : bessel_j1(x);
    if (!(x > 0.0)) throw std::domain_error("Bessel argument must be positive");
    return miller(x, miller_start(x, n))[n];
}

double bessel_yn(int n, double x)
{
    if (n < 0) return (n % 2 == 0 ? 1.0 : -1.0) * bessel_yn(-n, x);
    const auto y = bessel_y01(x);
    if (n == 0) return y.f0;
    double prev = y.f0, cur = y.f1;
    for (int m = 1; m < n; ++m) {
        const double next = (2.0 * m / x) * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace impscat::special
