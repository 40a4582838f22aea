#pragma once

#include <array>

// Hybrid Gauss-trapezoidal rule of order 16 for periodic integrands with a
// logarithmic singularity at one grid node.  With h = 2 pi / n,
//
//   int_0^{2pi} f = h sum_{l=a}^{n-a} f(l h) + h sum_k w_k (f(x_k h) + f(-x_k h))
//
// for f(t) = phi(t) + psi(t) log|t| locally, phi and psi smooth.
namespace impscat::alpert {

inline constexpr int order = 16;
inline constexpr int skip = 10;     // a: trapezoid nodes replaced on each side
inline constexpr int count = 15;    // j: correction nodes on each side

struct Node {
    double x;
    double w;
};

const std::array<Node, count>& nodes();

/// Throws SpecError when n leaves no room for the regular trapezoid part.
void require_points(int n);

/// Applies the rule to f on [0, 2 pi) with the singularity at t = 0.
template <class F>
auto integrate(int n, F&& f)
{
    require_points(n);
    const double h = 2.0 * 3.14159265358979323846 / n;
    decltype(f(0.5)) sum{};
    for (int l = skip; l <= n - skip; ++l) sum += f(l * h);
    for (const auto& node : nodes()) sum += node.w * (f(node.x * h) + f(-node.x * h));
    return h * sum;
}

}  // namespace impscat::alpert
