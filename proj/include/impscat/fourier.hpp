#pragma once

#include <complex>
#include <span>
#include <vector>

// Spectral tools for samples of smooth 2*pi-periodic functions on the grid
// theta_j = 2*pi*j/n.  Coefficients are stored in FFT order and normalized so
// that f(theta_j) = sum_m c_m exp(i m theta_j).  For even n the Nyquist mode is
// interpreted as c_{n/2} cos(n theta / 2), which keeps interpolants real.
namespace impscat::fourier {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

/// Signed frequency of FFT slot `idx` for length n.
inline int frequency(int idx, int n) { return idx <= n / 2 ? idx : idx - n; }

CVec coefficients(std::span<const double> samples);
CVec coefficients(std::span<const cplx> samples);
std::vector<cplx> synthesize(const CVec& coeffs);

/// p-th derivative of the trigonometric interpolant, sampled at theta_j + shift.
std::vector<double> shifted(const CVec& coeffs, double shift, int order = 0);

/// f(theta_j + shift) - f(theta_j) without cancellation for small shifts.
std::vector<double> shifted_difference(const CVec& coeffs, double shift);

/// p-th derivative of the interpolant at an arbitrary point.
double evaluate(const CVec& coeffs, double theta, int order = 0);

/// Value and derivatives up to max_order (at most 3) at one point, into out[0..max_order].
void evaluate_upto(const CVec& coeffs, double theta, int max_order, double* out);

/// d^p/dtheta^p on the grid.
std::vector<double> derivative(std::span<const double> samples, int order = 1);
std::vector<cplx> derivative(std::span<const cplx> samples, int order = 1);

/// Band-limited resampling onto m equispaced points.
std::vector<double> resample(std::span<const double> samples, int m);

/// Antiderivative of the interpolant minus its mean slope, i.e. the periodic
/// part P with f = mean + P'.  Returned as coefficients (mean slot zeroed).
CVec periodic_antiderivative(const CVec& coeffs);

/// Periodic sinc: weight w such that f(theta_i + x) = sum_m D(x - theta_m) f_{i+m}.
double interpolation_kernel(int n, double x);

}  // namespace impscat::fourier
