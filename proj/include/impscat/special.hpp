#pragma once

#include <complex>

// Cylinder functions of integer order for real positive arguments.
// Power series near the origin, Miller recurrence with Neumann series in the
// middle range and Hankel asymptotics for large arguments.
namespace impscat::special {

using cplx = std::complex<double>;

struct Pair {
    double f0;
    double f1;
};

Pair bessel_j01(double x);
Pair bessel_y01(double x);
Pair bessel_k01(double x);

double bessel_j0(double x);
double bessel_j1(double x);
double bessel_y0(double x);
double bessel_y1(double x);
double bessel_k0(double x);
double bessel_k1(double x);

/// Y1(x) + 2/(pi x), bounded at the origin.
double bessel_y1_regular(double x);
/// K1(x) - 1/x, bounded at the origin.
double bessel_k1_regular(double x);

/// J0, J1, Y0, Y1 and the regular part of Y1 in one evaluation.
struct Cylinder01 {
    double j0, j1, y0, y1, y1r;
};
Cylinder01 cylinder01(double x);

/// K0, K1 and the regular part of K1 in one evaluation.
struct Modified01 {
    double k0, k1, k1r;
};
Modified01 modified01(double x);

cplx hankel1_0(double x);
cplx hankel1_1(double x);

double bessel_jn(int n, double x);
double bessel_yn(int n, double x);

}  // namespace impscat::special
