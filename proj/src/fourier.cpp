#include "impscat/fourier.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>

namespace impscat::fourier {

namespace {

thread_local Eigen::FFT<double> fft_engine;

// Multiplier applied to slot idx for the p-th derivative evaluated at shift s.
cplx slot_multiplier(int idx, int n, double shift, int order)
{
    const int m = frequency(idx, n);
    if (n % 2 == 0 && idx == n / 2) {
        const cplx w = std::pow(cplx(0.0, m), order) * std::polar(1.0, m * shift);
        return {w.real(), 0.0};
    }
    return std::pow(cplx(0.0, m), order) * std::polar(1.0, m * shift);
}

std::vector<double> real_part(const std::vector<cplx>& v)
{
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
    return out;
}

}  // namespace

CVec coefficients(std::span<const double> samples)
{
    std::vector<cplx> in(samples.begin(), samples.end());
    return coefficients(std::span<const cplx>(in));
}

CVec coefficients(std::span<const cplx> samples)
{
    std::vector<cplx> in(samples.begin(), samples.end());
    CVec out;
    fft_engine.fwd(out, in);
    const double scale = 1.0 / static_cast<double>(samples.size());
    for (auto& c : out) c *= scale;
    return out;
}

std::vector<cplx> synthesize(const CVec& coeffs)
{
    CVec in(coeffs);
    std::vector<cplx> out;
    fft_engine.inv(out, in);
    const double n = static_cast<double>(coeffs.size());
    for (auto& v : out) v *= n;
    return out;
}

std::vector<double> shifted(const CVec& coeffs, double shift, int order)
{
    const int n = static_cast<int>(coeffs.size());
    CVec c(coeffs);
    for (int q = 0; q < n; ++q) c[q] *= slot_multiplier(q, n, shift, order);
    return real_part(synthesize(c));
}

std::vector<double> shifted_difference(const CVec& coeffs, double shift)
{
    const int n = static_cast<int>(coeffs.size());
    CVec c(coeffs);
    for (int q = 0; q < n; ++q) {
        const int m = frequency(q, n);
        if (n % 2 == 0 && q == n / 2) {
            const double s = std::sin(0.5 * m * shift);
            c[q] *= -2.0 * s * s;
        } else {
            // exp(i m s) - 1 = 2 i sin(m s / 2) exp(i m s / 2)
            c[q] *= cplx(0.0, 2.0 * std::sin(0.5 * m * shift)) * std::polar(1.0, 0.5 * m * shift);
        }
    }
    return real_part(synthesize(c));
}

double evaluate(const CVec& coeffs, double theta, int order)
{
    double out[4];
    if (order < 0 || order > 3) {
        const int n = static_cast<int>(coeffs.size());
        cplx sum = 0.0;
        for (int q = 0; q < n; ++q) sum += coeffs[q] * slot_multiplier(q, n, theta, order);
        return sum.real();
    }
    evaluate_upto(coeffs, theta, order, out);
    return out[order];
}

void evaluate_upto(const CVec& coeffs, double theta, int max_order, double* out)
{
    const int n = static_cast<int>(coeffs.size());
    cplx acc[4] = {};
    const cplx z = std::polar(1.0, theta);
    cplx w = 1.0;
    for (int m = 0; m <= n / 2; ++m) {
        if (m % 64 == 0) w = std::polar(1.0, m * theta);
        const bool nyquist = (n % 2 == 0 && m == n / 2);
        const cplx* slots[2] = {&coeffs[m], (m > 0 && !nyquist) ? &coeffs[n - m] : nullptr};
        for (int side = 0; side < 2; ++side) {
            if (!slots[side]) continue;
            const double f = side == 0 ? m : -m;
            const cplx e = side == 0 ? w : std::conj(w);
            cplx mult = e;
            for (int p = 0; p <= max_order; ++p) {
                acc[p] += *slots[side] * (nyquist ? cplx(mult.real(), 0.0) : mult);
                mult *= cplx(0.0, f);
            }
        }
        w *= z;
    }
    for (int p = 0; p <= max_order; ++p) out[p] = acc[p].real();
}

std::vector<double> derivative(std::span<const double> samples, int order)
{
    return shifted(coefficients(samples), 0.0, order);
}

std::vector<cplx> derivative(std::span<const cplx> samples, int order)
{
    const int n = static_cast<int>(samples.size());
    CVec c = coefficients(samples);
    for (int q = 0; q < n; ++q) {
        if (n % 2 == 0 && q == n / 2) {
            // d/dtheta cos(N theta) vanishes on the grid; even orders keep (iN)^p
            c[q] *= (order % 2 == 0) ? std::pow(cplx(0.0, frequency(q, n)), order) : cplx(0.0);
        } else {
            c[q] *= std::pow(cplx(0.0, frequency(q, n)), order);
        }
    }
    return synthesize(c);
}

std::vector<double> resample(std::span<const double> samples, int m)
{
    const int n = static_cast<int>(samples.size());
    if (m == n) return {samples.begin(), samples.end()};
    const CVec c = coefficients(samples);
    CVec out(static_cast<std::size_t>(m), cplx(0.0));
    auto slot = [m](int f) { return f >= 0 ? f : f + m; };
    if (m > n) {
        for (int q = 0; q < n; ++q) {
            const int f = frequency(q, n);
            if (n % 2 == 0 && q == n / 2) {
                out[slot(f)] += 0.5 * c[q];
                out[slot(-f)] += 0.5 * c[q];
            } else {
                out[slot(f)] += c[q];
            }
        }
    } else {
        for (int q = 0; q < n; ++q) {
            const int f = frequency(q, n);
            if (2 * std::abs(f) < m) {
                out[slot(f)] += c[q];
            } else if (m % 2 == 0 && std::abs(f) == m / 2) {
                out[m / 2] += c[q];
            }
        }
    }
    return real_part(synthesize(out));
}

CVec periodic_antiderivative(const CVec& coeffs)
{
    const int n = static_cast<int>(coeffs.size());
    CVec out(coeffs.size(), cplx(0.0));
    for (int q = 1; q < n; ++q) {
        if (n % 2 == 0 && q == n / 2) continue;
        out[q] = coeffs[q] / cplx(0.0, frequency(q, n));
    }
    return out;
}

double interpolation_kernel(int n, double x)
{
    const double half = 0.5 * x;
    const double s = std::sin(half);
    if (std::abs(s) < 1e-15) return 1.0;
    if (n % 2 == 0) {
        return std::sin(0.5 * n * x) * std::cos(half) / (s * n);
    }
    return std::sin(0.5 * n * x) / (s * n);
}

}  // namespace impscat::fourier
