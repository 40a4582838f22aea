#pragma once

#include "impscat/frechet.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace impscat {

enum class Termination {
    max_iter,
    residual_tol,
    step_tol_lambda,
    step_tol_gamma,
    residual_increase,
    inadmissible_final
};

std::string to_string(Termination t);
Termination termination_from_string(const std::string& s);

enum class Unknowns { shape_only, impedance_only, both };
std::string to_string(Unknowns u);
Unknowns unknowns_from_string(const std::string& s);

struct GNConfig {
    int max_iter = 200;
    double eps_r = 1e-3;            // relative residual
    double eps_s_lambda = 1e-3;
    double eps_s_gamma = 0.0;       // <= 0 disables the shape step test
    AdmissibilityParams admissibility{3.0, 1e-3};
    double c_lambda = 0.5;
    int step_control = 0;           // c_s in {0, 1, 2}; 0 means undamped
    double filter_shrink = 10.0;
    int filter_tries = 6;           // sigma = 1, 1/10, ..., 1e-5
    bool revert_on_increase = true; // false keeps the higher-residual iterate when stopping
    double ppw = 40.0;
    Unknowns unknowns = Unknowns::both;
    LemmaVariant variant = default_lemma_variant;

    void validate() const;
    double damping(double k) const;
};

/// Measurements at one frequency with their sensor layout.
struct FrequencyData {
    SensorConfig sensors;
    MeasurementSet measurements;
};

struct GNStep {
    TrigSeries dgamma;
    TrigSeries dlambda;
    double residual = 0.0;       // ||u_meas - F|| before the update
    double rel_residual = 0.0;
    int rank = 0;
    int columns = 0;
    double impedance_sv_ratio = 0.0;  // smallest / largest singular value of the impedance block
};

struct GNReport {
    int iterations = 0;
    Termination reason = Termination::max_iter;
    std::vector<double> history;        // relative residual of each evaluated iterate
    int filter_count = 0;
    std::vector<double> filter_sigmas;  // every filter width tried, in order
    std::vector<double> raw_step_norms;
    std::vector<double> applied_step_norms;
    std::vector<int> ranks;
    double impedance_sv_ratio = 0.0;
};

/// Current iterate's forward fields for every stacked frequency.
struct StackEvaluation {
    std::vector<ForwardSystem> systems;
    std::vector<ForwardSolution> solutions;
    Eigen::VectorXd residual;  // stacked [Re; Im] of u_meas - F per frequency
    double norm_meas = 0.0;
};

StackEvaluation evaluate_stack(const Curve& curve, const Impedance& imp,
                               const std::vector<FrequencyData>& data);

/// One Gauss-Newton step for the stacked frequencies; bandlimits from k.
GNStep gauss_newton_step(const Curve& curve, const Impedance& imp,
                         const std::vector<FrequencyData>& data, double k, const GNConfig& config,
                         const StackEvaluation* evaluated = nullptr);

struct SingleFrequencyResult {
    Curve curve;
    Impedance imp;
    GNReport report;
};

SingleFrequencyResult run_single_frequency(const Curve& curve, const Impedance& imp,
                                           const std::vector<FrequencyData>& data, double k,
                                           const GNConfig& config);

struct RLASchedule {
    double k0 = 1.0;
    double delta_k = 0.25;
    int M = 37;
    bool cumulative = false;
    double k_c = 10.0;

    double k(int j) const { return k0 + j * delta_k; }  // j = 0 .. M-1
    std::vector<double> wavenumbers() const;
    void validate() const;
};

struct RunRecord {
    double k = 0.0;
    Curve curve;
    Impedance imp;
    double eps_r = 0.0;
    std::optional<double> eps_lambda;
    int iterations = 0;
    Termination termination = Termination::max_iter;
    int filter_count = 0;
    double jacobian_rank_monitor = 0.0;
    std::vector<double> residual_history;
};

using RecordCallback = std::function<void(RunRecord&)>;

/// Frequency continuation over the schedule.  data[j] holds the
/// measurements for schedule.k(j).  Records are passed to on_record as they
/// are produced; start_index and the initial iterate allow resuming.
std::vector<RunRecord> run_rla(const RLASchedule& schedule, const std::vector<FrequencyData>& data,
                               const Curve& init_curve, const Impedance& init_imp,
                               const GNConfig& config, const RecordCallback& on_record = {},
                               int start_index = 0);

}  // namespace impscat
