#include "impscat/optimize.hpp"

#include "impscat/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace impscat {

namespace {

double series_norm(const TrigSeries& s)
{
    double sum = s.c0 * s.c0;
    for (double v : s.c) sum += v * v;
    for (double v : s.s) sum += v * v;
    return std::sqrt(sum);
}

Curve resized_for(const Curve& curve, double k, double ppw)
{
    const int n = points_for(curve.length(), k, ppw);
    return n == curve.n() ? curve : reparametrize_arclength(curve, n);
}

BasisSpec basis_for(double k, const GNConfig& config, double length)
{
    BasisSpec b = BasisSpec::for_wavenumber(k, config.admissibility.c_gamma, config.c_lambda, length);
    b.shape = config.unknowns != Unknowns::impedance_only;
    b.impedance = config.unknowns != Unknowns::shape_only;
    return b;
}

double relative(const StackEvaluation& e)
{
    return e.norm_meas > 0.0 ? e.residual.norm() / e.norm_meas : e.residual.norm();
}

// Smallest over largest singular value of the impedance columns.
double impedance_ratio(const Eigen::MatrixXd& J, int first, int count)
{
    if (count <= 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J.middleCols(first, count));
    const auto& s = svd.singularValues();
    if (s(0) <= 0.0) return 0.0;
    return s(s.size() - 1) / s(0);
}

}  // namespace

std::string to_string(Termination t)
{
    switch (t) {
    case Termination::max_iter: return "max_iter";
    case Termination::residual_tol: return "residual_tol";
    case Termination::step_tol_lambda: return "step_tol_lambda";
    case Termination::step_tol_gamma: return "step_tol_gamma";
    case Termination::residual_increase: return "residual_increase";
    case Termination::inadmissible_final: return "inadmissible_final";
    }
    return "unknown";
}

Termination termination_from_string(const std::string& s)
{
    for (auto t : {Termination::max_iter, Termination::residual_tol, Termination::step_tol_lambda,
                   Termination::step_tol_gamma, Termination::residual_increase,
                   Termination::inadmissible_final}) {
        if (to_string(t) == s) return t;
    }
    throw DataError("unknown termination reason '" + s + "'");
}

std::string to_string(Unknowns u)
{
    switch (u) {
    case Unknowns::shape_only: return "shape_only";
    case Unknowns::impedance_only: return "impedance_only";
    case Unknowns::both: return "both";
    }
    return "unknown";
}

Unknowns unknowns_from_string(const std::string& s)
{
    for (auto u : {Unknowns::shape_only, Unknowns::impedance_only, Unknowns::both}) {
        if (to_string(u) == s) return u;
    }
    throw SpecError("unknown unknowns selection '" + s + "'");
}

void GNConfig::validate() const
{
    if (max_iter < 1) throw SpecError("max_iter must be positive");
    if (!(eps_r > 0.0)) throw SpecError("eps_r must be positive");
    if (!(eps_s_lambda > 0.0)) throw SpecError("eps_s_lambda must be positive");
    if (eps_s_gamma < 0.0) throw SpecError("eps_s_gamma must be positive (or 0 to disable)");
    if (step_control < 0 || step_control > 2) throw SpecError("step_control must be 0, 1 or 2");
    if (!(filter_shrink > 1.0)) throw SpecError("filter_shrink must exceed 1");
    if (filter_tries < 1) throw SpecError("filter_tries must be positive");
    if (!(c_lambda >= 0.0)) throw SpecError("c_lambda must be nonnegative");
    if (!(ppw > 0.0)) throw SpecError("ppw must be positive");
    admissibility.validate();
}

double GNConfig::damping(double k) const
{
    if (step_control == 0) return 1.0;
    return std::min(step_control * std::numbers::pi / k, 1.0);
}

StackEvaluation evaluate_stack(const Curve& curve, const Impedance& imp,
                               const std::vector<FrequencyData>& data)
{
    StackEvaluation out;
    std::vector<Eigen::VectorXd> parts;
    double meas2 = 0.0;
    for (const auto& fd : data) {
        fd.sensors.check_outside(curve);
        out.systems.push_back(build_system(curve, imp, fd.sensors.k));
        out.solutions.push_back(solve_plane_waves(out.systems.back(), curve, fd.sensors));
        const CMatrix diff = fd.measurements.data - out.solutions.back().u_scat;
        const Eigen::Map<const CVector> v(diff.data(), diff.size());
        parts.push_back(stack_real(v));
        meas2 += fd.measurements.data.squaredNorm();
    }
    Eigen::Index rows = 0;
    for (const auto& p : parts) rows += p.size();
    out.residual.resize(rows);
    Eigen::Index at = 0;
    for (const auto& p : parts) {
        out.residual.segment(at, p.size()) = p;
        at += p.size();
    }
    out.norm_meas = std::sqrt(meas2);
    return out;
}

GNStep gauss_newton_step(const Curve& curve, const Impedance& imp,
                         const std::vector<FrequencyData>& data, double k, const GNConfig& config,
                         const StackEvaluation* evaluated)
{
    if (data.empty()) throw SpecError("no measurements for the Gauss-Newton step");
    StackEvaluation local;
    if (!evaluated) {
        local = evaluate_stack(curve, imp, data);
        evaluated = &local;
    }
    const BasisSpec basis = basis_for(k, config, curve.length());
    if (basis.size() == 0) throw SpecError("no unknowns selected");

    std::vector<Jacobian> blocks;
    Eigen::Index rows = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        blocks.push_back(assemble_jacobian(evaluated->systems[i], evaluated->solutions[i], curve,
                                           data[i].sensors.k, basis, config.variant));
        rows += blocks.back().J.rows();
    }
    Eigen::MatrixXd J(rows, basis.size());
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        J.middleRows(at, b.J.rows()) = b.J;
        at += b.J.rows();
    }

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    cod.setThreshold(1e-10);
    cod.compute(J);
    const Eigen::VectorXd x = cod.solve(evaluated->residual);

    GNStep step;
    step.residual = evaluated->residual.norm();
    step.rel_residual = relative(*evaluated);
    step.rank = static_cast<int>(cod.rank());
    step.columns = basis.size();
    step.impedance_sv_ratio = impedance_ratio(J, basis.shape_count(), basis.impedance_count());

    std::vector<double> g(x.data(), x.data() + basis.shape_count());
    std::vector<double> l(x.data() + basis.shape_count(), x.data() + basis.size());
    step.dgamma = basis.shape ? TrigSeries::unflatten(g) : TrigSeries(basis.N_gamma);
    step.dlambda = basis.impedance ? TrigSeries::unflatten(l) : TrigSeries(basis.N_lambda);
    return step;
}

SingleFrequencyResult run_single_frequency(const Curve& curve, const Impedance& imp,
                                           const std::vector<FrequencyData>& data, double k,
                                           const GNConfig& config)
{
    config.validate();
    if (data.empty()) throw SpecError("no measurements for frequency " + std::to_string(k));
    const int n_lambda = static_cast<int>(std::floor(config.c_lambda * k));
    const int n_gamma = static_cast<int>(std::floor(config.admissibility.c_gamma * k));

    SingleFrequencyResult res{resized_for(curve, k, config.ppw), imp, {}};
    res.imp = res.imp.padded(std::max(n_lambda, res.imp.bandlimit())).rescaled(res.curve.length());
    // A known shape is not an iterate, so only a shape unknown must start admissible.
    const Admissibility start = config.unknowns == Unknowns::impedance_only
                                    ? Admissibility{true, false, 0.0, 0, {}}
                                    : is_admissible(res.curve, k, config.admissibility);
    if (!start.admissible) {
        throw SpecError("initial iterate is not admissible at k = " + std::to_string(k) + ": " +
                        start.diagnostic);
    }

    GNReport& rep = res.report;
    const double alpha = config.damping(k);
    StackEvaluation eval = evaluate_stack(res.curve, res.imp, data);
    double rel = relative(eval);
    rep.history.push_back(rel);
    int steps = 0;

    while (true) {
        if (rel <= config.eps_r) {
            rep.reason = Termination::residual_tol;
            break;
        }
        if (steps >= config.max_iter) {
            rep.reason = Termination::max_iter;
            break;
        }
        ++steps;
        GNStep step = gauss_newton_step(res.curve, res.imp, data, k, config, &eval);
        rep.ranks.push_back(step.rank);
        rep.impedance_sv_ratio = step.impedance_sv_ratio;

        const double raw = std::hypot(series_norm(step.dgamma), series_norm(step.dlambda));
        TrigSeries dgamma = alpha * step.dgamma;
        TrigSeries dlambda = alpha * step.dlambda;
        Impedance next_imp = add_update(res.imp, dlambda.padded(res.imp.bandlimit()));

        auto try_update = [&](const TrigSeries& h, Curve& out) {
            try {
                Curve c = resized_for(apply_normal_update(res.curve, h), k, config.ppw);
                if (!is_admissible(c, k, config.admissibility).admissible) return false;
                out = std::move(c);
                return true;
            } catch (const Error&) {
                return false;
            }
        };

        Curve next_curve;
        TrigSeries applied = dgamma;
        bool ok = config.unknowns == Unknowns::impedance_only ? (next_curve = res.curve, true)
                                                               : try_update(dgamma, next_curve);
        double sigma = 1.0;
        for (int t = 0; !ok && t < config.filter_tries; ++t, sigma /= config.filter_shrink) {
            applied = gaussian_filter(dgamma, n_gamma, sigma);
            ++rep.filter_count;
            rep.filter_sigmas.push_back(sigma);
            ok = try_update(applied, next_curve);
        }
        if (!ok) {
            rep.reason = Termination::inadmissible_final;
            break;
        }
        rep.raw_step_norms.push_back(raw);
        rep.applied_step_norms.push_back(std::hypot(series_norm(applied), series_norm(dlambda)));

        next_imp = next_imp.rescaled(next_curve.length());
        StackEvaluation next_eval = evaluate_stack(next_curve, next_imp, data);
        const double next_rel = relative(next_eval);
        if (next_rel > rel) {
            rep.reason = Termination::residual_increase;
            if (!config.revert_on_increase) {
                res.curve = std::move(next_curve);
                res.imp = std::move(next_imp);
                rep.history.push_back(next_rel);
            }
            break;
        }
        res.curve = std::move(next_curve);
        res.imp = std::move(next_imp);
        eval = std::move(next_eval);
        rel = next_rel;
        rep.history.push_back(rel);

        if (config.unknowns != Unknowns::shape_only && series_norm(dlambda) < config.eps_s_lambda) {
            rep.reason = Termination::step_tol_lambda;
            break;
        }
        if (config.unknowns != Unknowns::impedance_only && config.eps_s_gamma > 0.0 &&
            series_norm(applied) < config.eps_s_gamma) {
            rep.reason = Termination::step_tol_gamma;
            break;
        }
    }
    rep.iterations = static_cast<int>(rep.history.size());
    return res;
}

std::vector<double> RLASchedule::wavenumbers() const
{
    std::vector<double> ks(M);
    for (int j = 0; j < M; ++j) ks[j] = k(j);
    return ks;
}

void RLASchedule::validate() const
{
    if (!(k0 > 0.0)) throw SpecError("schedule k0 must be positive");
    if (M < 1) throw SpecError("schedule M must be positive");
    if (M > 1 && !(delta_k > 0.0)) throw SpecError("schedule delta_k must be positive");
    if (cumulative && !(k_c > 0.0)) throw SpecError("schedule k_c must be positive");
}

std::vector<RunRecord> run_rla(const RLASchedule& schedule, const std::vector<FrequencyData>& data,
                               const Curve& init_curve, const Impedance& init_imp,
                               const GNConfig& config, const RecordCallback& on_record,
                               int start_index)
{
    schedule.validate();
    config.validate();
    if (static_cast<int>(data.size()) != schedule.M) {
        throw DataError("expected measurements for " + std::to_string(schedule.M) +
                        " frequencies, got " + std::to_string(data.size()));
    }
    for (int j = 0; j < schedule.M; ++j) {
        if (std::abs(data[j].sensors.k - schedule.k(j)) > 1e-12 * schedule.k(j)) {
            throw DataError("measurement " + std::to_string(j) + " is at k = " +
                            std::to_string(data[j].sensors.k) + ", schedule expects " +
                            std::to_string(schedule.k(j)));
        }
    }

    std::vector<RunRecord> records;
    Curve curve = init_curve;
    Impedance imp = init_imp;
    for (int j = start_index; j < schedule.M; ++j) {
        const double k = schedule.k(j);
        std::vector<FrequencyData> stack;
        if (schedule.cumulative && k <= schedule.k_c) {
            stack.assign(data.begin(), data.begin() + j + 1);
        } else {
            stack.push_back(data[j]);
        }
        const int n_lambda = static_cast<int>(std::floor(config.c_lambda * k));
        imp = imp.padded(std::max(n_lambda, imp.bandlimit()));

        SingleFrequencyResult res = run_single_frequency(curve, imp, stack, k, config);
        curve = res.curve;
        imp = res.imp;

        RunRecord rec;
        rec.k = k;
        rec.curve = curve;
        rec.imp = imp;
        rec.eps_r = res.report.history.back();
        if (stack.size() > 1) {
            const StackEvaluation e = evaluate_stack(curve, imp, {data[j]});
            rec.eps_r = relative(e);
        }
        rec.iterations = res.report.iterations;
        rec.termination = res.report.reason;
        rec.filter_count = res.report.filter_count;
        rec.jacobian_rank_monitor = res.report.impedance_sv_ratio;
        rec.residual_history = res.report.history;
        if (on_record) on_record(rec);
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace impscat
