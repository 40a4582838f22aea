#pragma once

#include "impscat/optimize.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace impscat {

enum class DataModel { impedance, dirichlet, neumann };
std::string to_string(DataModel m);
DataModel data_model_from_string(const std::string& s);

/// Truth boundary: star-shaped radial series or a curve file.
struct TruthCurve {
    enum class Kind { radial, file };
    Kind kind = Kind::radial;
    TrigSeries radius{1.0, {}, {}};
    std::string path;

    void validate() const;
    /// Finely resolved truth curve.
    Curve reference() const;
    /// Truth sampled for wavenumber k at ppw points per wavelength.
    Curve at(double k, double ppw) const;
};

/// Truth impedance as a function of the parameter fraction angle in [0, 2 pi):
/// trigonometric coefficients or a continuous piecewise-linear profile.
struct TruthImpedance {
    enum class Kind { coefficients, piecewise };
    Kind kind = Kind::coefficients;
    TrigSeries coeffs{1.0, {}, {}};
    std::vector<std::array<double, 2>> knots;  // (angle, value), angles increasing in [0, 2 pi]

    void validate() const;
    double operator()(double angle) const;
    std::vector<double> at_nodes(int n) const;
    /// Trigonometric projection with the given bandlimit, on period L.
    Impedance projected(int bandlimit, double period) const;
};

struct SensorTemplate {
    int n_directions = 16;
    int n_receivers = 100;
    double radius = 10.0;

    void validate() const;
    SensorConfig at(double k) const { return SensorConfig::circular(k, n_directions, n_receivers, radius); }
};

/// Objective scan over circles of radius gamma0 with constant impedance lambda0.
struct LandscapeSpec {
    double k = 1.0;
    double gamma_min = 0.5, gamma_max = 1.5;
    int gamma_count = 21;
    double lambda_min = 0.0, lambda_max = 1.0;
    int lambda_count = 21;
    double gamma_true = 1.0, lambda_true = 0.5;

    void validate() const;
    std::vector<double> gamma_axis() const;
    std::vector<double> lambda_axis() const;
};

struct ExperimentSpec {
    std::string name = "custom";
    TruthCurve truth_curve;
    TruthImpedance truth_impedance;
    RLASchedule schedule;
    SensorTemplate sensors;
    double noise = 0.02;
    DataModel data_model = DataModel::impedance;
    GNConfig gn;
    std::uint64_t seed = 1;
    double data_ppw = 50.0;
    double init_radius = 1.0;
    double init_lambda = 1.0;
    std::optional<LandscapeSpec> landscape;

    void validate() const;
    /// File-backed truth curves must exist; radial ones always do.
    void require_inputs() const;
};

/// Entrywise noise u += eta |u| Phi / |Phi| with Phi = phi1 + i phi2 standard
/// normals.  The generator is mt19937_64 seeded with seed_seq{seed lo, seed hi, stream}.
void add_noise(MeasurementSet& m, double eta, std::uint64_t seed, int stream);

/// Data for schedule entry j (noise stream j).
MeasurementSet synthesize_frequency(const ExperimentSpec& spec, int j);
std::vector<MeasurementSet> synthesize(const ExperimentSpec& spec);

struct Metrics {
    double eps_r = 0.0;
    std::optional<double> eps_lambda;
};

/// sqrt(int_0^{2 pi} |lambda(L t / 2 pi) - lambda~(L~ t / 2 pi)|^2 dt), trapezoid.
double impedance_error(const TruthImpedance& truth, const Impedance& rec, int samples = 1024);

/// Symmetric Hausdorff distance between the two curves, each resampled by
/// arclength on the given number of points.
double sample_distance(const Curve& a, const Curve& b, int samples = 1024);

Metrics compute_metrics(const Curve& curve, const Impedance& imp, const MeasurementSet& meas,
                        const TruthImpedance* truth);

/// Known impedance or shape for partial recoveries, initial guess otherwise.
Curve initial_curve(const ExperimentSpec& spec);
Impedance initial_impedance(const ExperimentSpec& spec, const Curve& curve);

std::vector<FrequencyData> frequency_data(const std::vector<MeasurementSet>& data);

struct LandscapeGrid {
    std::vector<double> gamma_axis;
    std::vector<double> lambda_axis;
    std::vector<std::vector<double>> values;  // values[i][j] at (gamma_i, lambda_j)

    std::array<int, 2> argmin() const;
};

LandscapeGrid landscape_scan(const LandscapeSpec& spec, const SensorTemplate& sensors,
                             double data_ppw = 50.0, double ppw = 40.0);

/// Interior samples strictly below both neighbours.
int count_local_minima(const std::vector<double>& v);

namespace registry {

ExperimentSpec ex_5_1(Unknowns unknowns = Unknowns::both, double c_gamma = 3.0, double c_lambda = 0.5,
                      double k_max = 10.0);
ExperimentSpec ex_5_2(DataModel model, double k_max = 10.0);
ExperimentSpec ex_5_3(const std::string& curve_path, double k_max = 80.0);
ExperimentSpec openprob_6(int step_control, bool cumulative, double k_max = 15.0);
ExperimentSpec landscape(double k);

std::vector<std::string> names();
/// Looks up an entry by name with a variant string ("both", "neumann", a curve path, ...).
ExperimentSpec lookup(const std::string& name, const std::string& variant = "");

}  // namespace registry

/// Run directory: manifest.json, data/k_<v>.json, records/k_<v>.json, metrics.csv.
class RunDirectory {
public:
    explicit RunDirectory(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }
    static std::string k_label(double k);
    std::filesystem::path data_path(double k) const;
    std::filesystem::path record_path(double k) const;

    void write_data(const MeasurementSet& m) const;
    MeasurementSet read_data(double k) const;
    void write_record(const RunRecord& r) const;
    std::optional<RunRecord> read_record(double k) const;
    void write_metrics(const std::vector<RunRecord>& records) const;
    void write_manifest(const ExperimentSpec& spec, const std::string& kind, int completed) const;

private:
    std::filesystem::path root_;
};

}  // namespace impscat
