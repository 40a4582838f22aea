#pragma once

#include "impscat/fourier.hpp"
#include "impscat/trig.hpp"

#include <string>
#include <vector>

namespace impscat {

/// Closed counter-clockwise planar curve sampled at theta_j = 2 pi j / n.
/// After reparametrization the samples are equispaced in arclength, so the
/// arclength parameter is t_j = j L / n and theta = 2 pi t / L.
class Curve {
public:
    Curve() = default;

    /// Builds a curve from samples of any smooth periodic parametrization.
    /// Clockwise input is reversed (keeping the first sample in place).
    static Curve from_samples(std::vector<double> x, std::vector<double> y);

    int n() const { return static_cast<int>(x_.size()); }
    double length() const { return length_; }
    double theta(int j) const;
    /// Arclength parameter of node j, assuming an arclength parametrization.
    double t(int j) const { return length_ * j / n(); }

    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& y() const { return y_; }
    const fourier::CVec& xhat() const { return xhat_; }
    const fourier::CVec& yhat() const { return yhat_; }

    // Derivatives with respect to theta.
    const std::vector<double>& dx() const { return dx_; }
    const std::vector<double>& dy() const { return dy_; }
    const std::vector<double>& speed() const { return speed_; }

    const std::vector<double>& nx() const { return nx_; }
    const std::vector<double>& ny() const { return ny_; }
    const std::vector<double>& tx() const { return tx_; }
    const std::vector<double>& ty() const { return ty_; }
    const std::vector<double>& curvature() const { return curvature_; }

    double signed_area() const;
    /// max_j | |gamma'(theta_j)| / (L / 2 pi) - 1 |.
    double arclength_defect() const;
    /// Radius of the smallest origin-centred disc containing the samples.
    double bounding_radius() const;

    /// Position at an arbitrary parameter theta (trigonometric interpolation).
    std::pair<double, double> point(double theta) const;

private:
    std::vector<double> x_, y_;
    fourier::CVec xhat_, yhat_;
    std::vector<double> dx_, dy_, speed_;
    std::vector<double> nx_, ny_, tx_, ty_, curvature_;
    double length_ = 0.0;
};

struct AdmissibilityParams {
    double c_gamma = 3.0;
    double eps_H = 1e-3;
    void validate() const;
};

struct Admissibility {
    bool admissible = false;
    bool self_intersecting = false;
    double tail_ratio = 0.0;
    int bandlimit = 0;
    std::string diagnostic;
};

/// Node count n = max(64, smallest even integer >= ppw * L * k / (2 pi)).
int points_for(double length, double k, double ppw);

/// Star-shaped curve (r(theta) cos theta, r(theta) sin theta), reparametrized
/// by arclength on n points.
Curve from_radial(const TrigSeries& radius, int n);

Curve reparametrize_arclength(const Curve& curve, int n);

/// Normalized Fourier coefficients of the curvature, FFT order.
fourier::CVec curvature_spectrum(const Curve& curve);

bool self_intersects(const Curve& curve);

Admissibility is_admissible(const Curve& curve, double k, const AdmissibilityParams& params);

/// Offsets every node along the outward normal by h(theta_j), then
/// reparametrizes onto n_out points (n_out <= 0 keeps the current count).
Curve apply_normal_update(const Curve& curve, const TrigSeries& h, int n_out = 0);

/// Multiplies mode l by exp(-l^2 / (N^2 sigma^2)).
TrigSeries gaussian_filter(const TrigSeries& h, int bandlimit, double sigma);

}  // namespace impscat
