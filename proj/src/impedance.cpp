#include "impscat/impedance.hpp"

#include "impscat/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace impscat {

Impedance::Impedance(double period, TrigSeries series) : L_ref(period), coeffs(std::move(series))
{
    if (!(L_ref > 0.0)) throw SpecError("impedance period must be positive");
}

Impedance Impedance::constant(double value, double period, int bandlimit)
{
    TrigSeries s(bandlimit);
    s.c0 = value;
    return {period, s};
}

double Impedance::operator()(double t) const
{
    return coeffs(2.0 * std::numbers::pi * t / L_ref);
}

std::vector<double> Impedance::eval(const std::vector<double>& t) const
{
    std::vector<double> out(t.size());
    std::transform(t.begin(), t.end(), out.begin(), [this](double v) { return (*this)(v); });
    return out;
}

std::vector<double> Impedance::at_nodes(int n) const { return coeffs.sample(n); }

Impedance Impedance::rescaled(double period) const { return {period, coeffs}; }

Impedance Impedance::padded(int bandlimit) const { return {L_ref, coeffs.padded(bandlimit)}; }

double Impedance::max_abs(int samples) const
{
    double m = 0.0;
    for (double v : coeffs.sample(samples)) m = std::max(m, std::abs(v));
    return m;
}

Impedance add_update(const Impedance& imp, const TrigSeries& delta)
{
    if (delta.bandlimit() != imp.bandlimit()) throw SpecError("impedance update bandlimit mismatch");
    return {imp.L_ref, imp.coeffs + delta};
}

Impedance add_update(const Impedance& imp, const Impedance& delta)
{
    if (std::abs(delta.L_ref - imp.L_ref) > 1e-12 * std::max(imp.L_ref, delta.L_ref)) {
        throw SpecError("impedance update has a different period");
    }
    return add_update(imp, delta.coeffs);
}

}  // namespace impscat
