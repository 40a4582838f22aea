#include "impscat/trig.hpp"

#include "impscat/error.hpp"

#include <cmath>
#include <numbers>

namespace impscat {

TrigSeries::TrigSeries(double constant, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
    : c0(constant), c(std::move(cos_coeffs)), s(std::move(sin_coeffs))
{
    if (s.size() < c.size()) s.resize(c.size(), 0.0);
    if (c.size() < s.size()) c.resize(s.size(), 0.0);
}

double TrigSeries::operator()(double x, int order) const
{
    double sum = order == 0 ? c0 : 0.0;
    for (int l = 1; l <= bandlimit(); ++l) {
        const double a = c[l - 1], b = s[l - 1];
        if (a == 0.0 && b == 0.0) continue;
        // d^p/dx^p of cos and sin is a phase shift by p pi / 2
        const double phase = l * x + 0.5 * order * std::numbers::pi;
        sum += std::pow(static_cast<double>(l), order) * (a * std::cos(phase) + b * std::sin(phase));
    }
    return sum;
}

std::vector<double> TrigSeries::sample(int n) const
{
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) out[j] = (*this)(2.0 * std::numbers::pi * j / n);
    return out;
}

TrigSeries TrigSeries::padded(int bandlimit) const
{
    TrigSeries out(*this);
    out.c.resize(bandlimit, 0.0);
    out.s.resize(bandlimit, 0.0);
    return out;
}

std::vector<double> TrigSeries::flatten() const
{
    std::vector<double> v;
    v.reserve(size());
    v.push_back(c0);
    for (int l = 0; l < bandlimit(); ++l) {
        v.push_back(c[l]);
        v.push_back(s[l]);
    }
    return v;
}

TrigSeries TrigSeries::unflatten(const std::vector<double>& v)
{
    if (v.empty() || v.size() % 2 == 0) throw SpecError("trigonometric coefficient vector must have odd length");
    TrigSeries out((static_cast<int>(v.size()) - 1) / 2);
    out.c0 = v[0];
    for (int l = 0; l < out.bandlimit(); ++l) {
        out.c[l] = v[1 + 2 * l];
        out.s[l] = v[2 + 2 * l];
    }
    return out;
}

TrigSeries& TrigSeries::operator+=(const TrigSeries& other)
{
    if (other.bandlimit() > bandlimit()) *this = padded(other.bandlimit());
    c0 += other.c0;
    for (int l = 0; l < other.bandlimit(); ++l) {
        c[l] += other.c[l];
        s[l] += other.s[l];
    }
    return *this;
}

TrigSeries& TrigSeries::operator*=(double factor)
{
    c0 *= factor;
    for (auto& v : c) v *= factor;
    for (auto& v : s) v *= factor;
    return *this;
}

TrigSeries operator+(TrigSeries a, const TrigSeries& b) { return a += b; }
TrigSeries operator*(double factor, TrigSeries a) { return a *= factor; }

}  // namespace impscat
