#pragma once

#include "impscat/trig.hpp"

#include <vector>

namespace impscat {

/// lambda(t) = c0 + sum_l c_l cos(2 pi l t / L_ref) + s_l sin(2 pi l t / L_ref).
/// The coefficients are tied to the parameter fraction t / L_ref, so a change
/// of curve length only rescales L_ref.
struct Impedance {
    double L_ref = 2.0 * 3.14159265358979323846;
    TrigSeries coeffs;

    Impedance() = default;
    Impedance(double period, TrigSeries series);
    static Impedance constant(double value, double period, int bandlimit = 0);

    int bandlimit() const { return coeffs.bandlimit(); }
    double operator()(double t) const;
    std::vector<double> eval(const std::vector<double>& t) const;
    /// Values at the curve nodes t_j = j L_ref / n.
    std::vector<double> at_nodes(int n) const;

    Impedance rescaled(double period) const;
    Impedance padded(int bandlimit) const;
    double max_abs(int samples = 1024) const;
};

/// Adds delta (same L_ref and bandlimit) mode by mode.
Impedance add_update(const Impedance& imp, const TrigSeries& delta);
Impedance add_update(const Impedance& imp, const Impedance& delta);

}  // namespace impscat
