#pragma once

#include <vector>

namespace impscat {

/// Real trigonometric polynomial c0 + sum_l c_l cos(l x) + s_l sin(l x), l = 1..N.
struct TrigSeries {
    double c0 = 0.0;
    std::vector<double> c;
    std::vector<double> s;

    TrigSeries() = default;
    explicit TrigSeries(int bandlimit) : c(bandlimit, 0.0), s(bandlimit, 0.0) {}
    TrigSeries(double constant, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

    int bandlimit() const { return static_cast<int>(c.size()); }
    /// Number of real coefficients, 2N + 1.
    int size() const { return 2 * bandlimit() + 1; }

    /// Value (order 0) or derivative in x.
    double operator()(double x, int order = 0) const;

    /// Samples at x_j = 2 pi j / n.
    std::vector<double> sample(int n) const;

    /// Same polynomial with bandlimit N (truncating or zero-padding).
    TrigSeries padded(int bandlimit) const;

    /// Coefficients as [c0, c1, s1, c2, s2, ...].
    std::vector<double> flatten() const;
    static TrigSeries unflatten(const std::vector<double>& v);

    TrigSeries& operator+=(const TrigSeries& other);
    TrigSeries& operator*=(double factor);
};

TrigSeries operator+(TrigSeries a, const TrigSeries& b);
TrigSeries operator*(double factor, TrigSeries a);

}  // namespace impscat
