// Acceptance checks 1-9.  Prints one PASS/FAIL line per criterion; exits
// nonzero on failure only with --strict.  --diagnose reruns 5-7 with a
// different curvature tail bound and reports INFO lines only.

#include "impscat/error.hpp"
#include "impscat/harness.hpp"
#include "impscat/serialize.hpp"

#include "oracles.hpp"

#include <CLI11.hpp>
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace impscat;
namespace fs = std::filesystem;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Timer {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void progress(const std::string& s) { std::fprintf(stderr, "  %s\n", s.c_str()); }

// Runs the continuation for a registered experiment, logging each record.
std::vector<RunRecord> run_experiment(const ExperimentSpec& spec)
{
    const auto meas = synthesize(spec);
    const Curve c = initial_curve(spec);
    const bool has_lambda = spec.data_model != DataModel::dirichlet;
    return run_rla(spec.schedule, frequency_data(meas), c, initial_impedance(spec, c), spec.gn,
                   [&](RunRecord& r) {
                       if (has_lambda) r.eps_lambda = impedance_error(spec.truth_impedance, r.imp);
                       progress(fmt("k=%.2f eps_r=%.4f eps_lambda=%.4f max|lambda|=%.4f iters=%d %s filters=%d "
                                    "sv_ratio=%.3g",
                                    r.k, r.eps_r, r.eps_lambda.value_or(NAN), r.imp.max_abs(), r.iterations,
                                    to_string(r.termination).c_str(), r.filter_count, r.jacobian_rank_monitor));
                   });
}

Outcome forward_accuracy()
{
    Timer t;
    double worst = 0.0;
    const SensorTemplate sensors;
    for (double k : {1.0, 5.0, 10.0}) {
        const Curve c = from_radial(TrigSeries(1.0, {}, {}), points_for(two_pi, k, 40.0));
        const auto s = sensors.at(k);
        const auto m = forward_operator(c, std::vector<double>(c.n(), 1.0), s);
        std::vector<oracle::cplx> got, want;
        for (int l = 0; l < s.num_directions(); ++l) {
            const double alpha = std::atan2(s.directions[l][1], s.directions[l][0]);
            for (int r = 0; r < s.num_receivers(); ++r) {
                got.push_back(m.data(r, l));
                want.push_back(oracle::circle_scattered(k, 1.0, oracle::Boundary::impedance, 1.0, alpha,
                                                        s.receivers[r][0], s.receivers[r][1]));
            }
        }
        const double e = oracle::rel_l2(got, want);
        progress(fmt("k=%g n=%d relative error %.3e", k, c.n(), e));
        worst = std::max(worst, e);
    }
    const double secs = t.seconds();
    return {worst <= 1e-7 && secs < 30.0, fmt("max relative error %.3e (<= 1e-7), %.1f s (< 30 s)", worst, secs)};
}

Outcome inverse_crime_guard()
{
    const auto spec = registry::ex_5_1();
    const double k = 5.0;
    const auto s = spec.sensors.at(k);
    auto data = [&](double ppw) {
        const Curve c = spec.truth_curve.at(k, ppw);
        progress(fmt("%g ppw: n=%d", ppw, c.n()));
        return forward_operator(c, spec.truth_impedance.at_nodes(c.n()), s).data;
    };
    const CMatrix a = data(50.0);
    const CMatrix b = data(40.0);
    const double d = (a - b).norm() / a.norm();
    return {d <= 1e-6, fmt("relative difference %.3e (<= 1e-6)", d)};
}

Outcome frechet_slope()
{
    Timer t;
    const auto spec = registry::ex_5_1();
    const double k = 2.0;
    // the 40 ppw node count (64) does not resolve the star's curvature, so
    // the check runs on a resolved discretization
    const int n = 400;
    const Curve c = from_radial(spec.truth_curve.radius, n);
    const Impedance lam = spec.truth_impedance.projected(9, c.length());
    const auto lambda = lam.at_nodes(n);
    const auto s = spec.sensors.at(k);
    const auto sys = build_system(c, lambda, k);
    const auto sol = solve_plane_waves(sys, c, s);
    const auto basis = BasisSpec::for_wavenumber(k, spec.gn.admissibility.c_gamma, spec.gn.c_lambda, c.length());
    const auto jac = assemble_jacobian(sys, sol, c, k, basis);

    std::mt19937_64 rng(20240611);
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(basis.size());
    for (auto& x : v) x = 0.1 * normal(rng);
    const auto h = TrigSeries::unflatten({v.data(), v.data() + basis.shape_count()});
    const auto dl = TrigSeries::unflatten({v.data() + basis.shape_count(), v.data() + v.size()});
    const Eigen::VectorXd jv = jac.J * v;
    const Eigen::VectorXd f0 = stack_real(Eigen::Map<const CVector>(sol.u_scat.data(), sol.u_scat.size()));

    std::vector<double> lx, ly;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        std::vector<double> x = c.x(), y = c.y(), ln = lambda;
        for (int j = 0; j < n; ++j) {
            const double hj = h(c.theta(j));
            x[j] += eps * hj * c.nx()[j];
            y[j] += eps * hj * c.ny()[j];
            ln[j] += eps * dl(c.theta(j));
        }
        const auto m = forward_operator(Curve::from_samples(x, y), ln, s);
        const double err = (stack_real(m.stacked()) - f0 - eps * jv).norm();
        progress(fmt("eps=%g error %.3e", eps, err));
        lx.push_back(std::log10(eps));
        ly.push_back(std::log10(err));
    }
    // least-squares slope through the three points
    const double mx = (lx[0] + lx[1] + lx[2]) / 3.0, my = (ly[0] + ly[1] + ly[2]) / 3.0;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 3; ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = num / den;
    const double secs = t.seconds();
    return {std::abs(slope - 2.0) <= 0.1 && secs < 120.0,
            fmt("slope %.4f (2 +- 0.1), variant %s, n=%d, %.1f s (< 120 s)", slope,
                to_string(default_lemma_variant).c_str(), n, secs)};
}

Outcome landscape()
{
    Timer t;
    const SensorTemplate sensors;
    auto slice_minima = [&](double k) {
        LandscapeSpec ls;
        ls.k = k;
        ls.gamma_count = 401;
        ls.lambda_min = ls.lambda_max = 0.5;
        ls.lambda_count = 1;
        const auto g = landscape_scan(ls, sensors);
        std::vector<double> v;
        for (const auto& row : g.values) v.push_back(row[0]);
        const int m = count_local_minima(v);
        progress(fmt("k=%g slice: %d local minima (%.0f s)", k, m, t.seconds()));
        return m;
    };
    auto grid_offset = [&](double k) {
        const LandscapeSpec ls = *registry::landscape(k).landscape;
        const auto g = landscape_scan(ls, sensors);
        const auto am = g.argmin();
        const double dg = (ls.gamma_max - ls.gamma_min) / (ls.gamma_count - 1);
        const double dl = (ls.lambda_max - ls.lambda_min) / (ls.lambda_count - 1);
        const double off = std::max(std::abs(g.gamma_axis[am[0]] - ls.gamma_true) / dg,
                                    std::abs(g.lambda_axis[am[1]] - ls.lambda_true) / dl);
        progress(fmt("k=%g grid argmin (%.3f, %.3f), %.2g cells from the truth (%.0f s)", k, g.gamma_axis[am[0]],
                     g.lambda_axis[am[1]], off, t.seconds()));
        return off;
    };
    const int m1 = slice_minima(1.0);
    const int m15 = slice_minima(15.0);
    const double off1 = grid_offset(1.0);
    const double off15 = grid_offset(15.0);
    const double secs = t.seconds();
    const bool pass = m1 == 1 && m15 >= 3 && off1 <= 1.0 + 1e-9 && off15 <= 1.0 + 1e-9 && secs < 1200.0;
    return {pass, fmt("slice minima %d at k=1 (== 1), %d at k=15 (>= 3); grid argmin %.2g / %.2g cells from "
                      "(1, 0.5) at k=1 / 15 (<= 1); %.0f s (< 1200 s)",
                      m1, m15, off1, off15, secs)};
}

// Loose curvature threshold for --diagnose runs.
double diagnose_eps_H = 0.0;

ExperimentSpec diagnosed(ExperimentSpec spec)
{
    if (diagnose_eps_H > 0.0) spec.gn.admissibility.eps_H = diagnose_eps_H;
    return spec;
}

Outcome joint_reconstruction()
{
    Timer t;
    const auto recs = run_experiment(diagnosed(registry::ex_5_1()));
    const auto& last = recs.back();
    const double secs = t.seconds();
    const double el = last.eps_lambda.value_or(INFINITY);
    return {last.eps_r <= 0.05 && el <= 0.05 && secs < 1800.0,
            fmt("final k=%g eps_r %.4f (<= 0.05), eps_lambda %.4f (<= 0.05), %.0f s (< 1800 s)", last.k,
                last.eps_r, el, secs)};
}

Outcome sound_hard()
{
    const auto recs = run_experiment(diagnosed(registry::ex_5_2(DataModel::neumann)));
    const std::size_t first = recs.size() >= 10 ? recs.size() - 10 : 0;
    bool decreasing = true;
    for (std::size_t i = first + 1; i < recs.size(); ++i) {
        if (!(recs[i].imp.max_abs() < recs[i - 1].imp.max_abs())) decreasing = false;
    }
    const double final_max = recs.back().imp.max_abs();
    return {decreasing && final_max <= 0.1,
            fmt("max|lambda| over last 10 frequencies %s, final %.4f (<= 0.1)",
                decreasing ? "strictly decreasing" : "not strictly decreasing", final_max)};
}

Outcome sound_soft()
{
    const auto spec = diagnosed(registry::ex_5_2(DataModel::dirichlet));
    const auto recs = run_experiment(spec);
    const double r0 = recs.front().jacobian_rank_monitor;
    const double r1 = recs.back().jacobian_rank_monitor;
    const double dist = sample_distance(recs.back().curve, spec.truth_curve.reference());
    return {r1 * 100.0 <= r0 && dist <= 0.02,
            fmt("singular value ratio %.3g at k0, %.3g at k_max (>= 100x drop: %.3gx); shape distance %.4f (<= 0.02)",
                r0, r1, r0 / r1, dist)};
}

Outcome filter_mechanics()
{
    // A circle fitted to star data at k = 1: the raw shape update carries
    // curvature far beyond the k = 1 bandlimit.
    const auto spec = registry::ex_5_1();
    const double k = 1.0;
    const auto s = spec.sensors.at(k);
    const Curve truth = spec.truth_curve.at(k, spec.data_ppw);
    const auto meas = forward_operator(truth, spec.truth_impedance.at_nodes(truth.n()), s);
    const Curve start = from_radial(TrigSeries(1.0, {}, {}), points_for(two_pi, k, spec.gn.ppw));
    GNConfig cfg = spec.gn;
    cfg.max_iter = 1;

    // the unfiltered update must violate the tail bound for the test to mean anything
    const GNStep step = gauss_newton_step(start, Impedance::constant(1.0, start.length()), {{s, meas}}, k, cfg);
    double tail = 1.0;
    try {
        tail = is_admissible(apply_normal_update(start, step.dgamma), k, cfg.admissibility).tail_ratio;
    } catch (const Error&) {
    }

    const auto res = run_single_frequency(start, Impedance::constant(1.0, start.length()), {{s, meas}}, k, cfg);
    const auto& sig = res.report.filter_sigmas;
    bool exact = !sig.empty() && sig.front() == 1.0;
    for (std::size_t i = 1; i < sig.size(); ++i) exact = exact && sig[i] == sig[i - 1] / 10.0;
    const bool admissible = is_admissible(res.curve, k, cfg.admissibility).admissible;
    std::string list;
    for (double v : sig) list += fmt("%s%g", list.empty() ? "" : ", ", v);
    return {tail > cfg.admissibility.eps_H && res.report.filter_count >= 2 &&
                res.report.filter_count == static_cast<int>(sig.size()) && exact && admissible,
            fmt("raw update tail %.3g (> %g), filter tries %d, sigmas [%s], factor-10 sequence %s, accepted curve "
                "%s",
                tail, cfg.admissibility.eps_H, res.report.filter_count, list.c_str(), exact ? "exact" : "broken",
                admissible ? "admissible" : "inadmissible")};
}

int shell(const std::string& cmd)
{
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Outcome determinism(const fs::path& work)
{
    fs::remove_all(work);
    fs::create_directories(work);
    const std::string cli = IMPSCAT_CLI;
    auto q = [](const fs::path& p) { return "'" + p.string() + "'"; };
    // Example 5.1 at full sensor count, first nine frequencies
    const fs::path spec = work / "spec.json";
    if (shell(cli + " registry ex_5_1 --out " + q(spec)) != 0) return {false, "registry failed"};
    auto j = io::read_json(spec);
    j["schedule"]["M"] = 9;
    io::write_json(spec, j);
    std::string m[2];
    for (int run = 0; run < 2; ++run) {
        const fs::path d = work / ("data" + std::to_string(run));
        const fs::path r = work / ("run" + std::to_string(run));
        if (shell(cli + " synth --seed 7 --spec " + q(spec) + " --out " + q(d)) != 0) return {false, "synth failed"};
        if (shell(cli + " invert --spec " + q(spec) + " --data " + q(d) + " --out " + q(r)) != 0) {
            return {false, "invert failed"};
        }
        m[run] = slurp(r / "metrics.csv");
    }
    const bool same = !m[0].empty() && m[0] == m[1];
    return {same, fmt("metrics.csv (%zu bytes) %s across two synth + invert runs", m[0].size(),
                      same ? "bitwise identical" : "differs")};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance checks"};
    bool strict = false;
    std::set<int> only;
    std::string work = (fs::temp_directory_path() / "impscat_acceptance").string();
    app.add_flag("--strict", strict, "Exit with status 1 if any check fails");
    app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 9));
    app.add_option("--workdir", work, "Scratch directory for the determinism check");
    app.add_option("--diagnose", diagnose_eps_H,
                   "Rerun checks 5-7 with this curvature tail bound and print INFO lines instead")
        ->check(CLI::Range(0.0, 1.0));
    CLI11_PARSE(app, argc, argv);
    if (diagnose_eps_H > 0.0) {
        if (only.empty()) only = {5, 6, 7};
        for (int id : only) {
            if (id < 5 || id > 7) {
                std::fprintf(stderr, "--diagnose only applies to checks 5-7\n");
                return 2;
            }
        }
    }

    const std::map<int, std::pair<std::string, std::function<Outcome()>>> checks{
        {1, {"forward accuracy", forward_accuracy}},
        {2, {"inverse-crime guard", inverse_crime_guard}},
        {3, {"Frechet derivative", frechet_slope}},
        {4, {"objective landscape", landscape}},
        {5, {"joint reconstruction", joint_reconstruction}},
        {6, {"sound-hard data", sound_hard}},
        {7, {"sound-soft data", sound_soft}},
        {8, {"filter mechanics", filter_mechanics}},
        {9, {"determinism", [&] { return determinism(work); }}},
    };
    int failed = 0;
    for (const auto& [id, check] : checks) {
        if (!only.empty() && !only.count(id)) continue;
        std::fprintf(stderr, "C%d %s\n", id, check.first.c_str());
        Outcome o;
        try {
            o = check.second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        if (diagnose_eps_H > 0.0) {
            std::printf("C%d INFO %s with eps_H = %g (%s): %s\n", id, check.first.c_str(), diagnose_eps_H,
                        o.pass ? "would pass" : "would fail", o.detail.c_str());
            std::fflush(stdout);
            continue;
        }
        if (!o.pass) ++failed;
        std::printf("C%d %s %s: %s\n", id, o.pass ? "PASS" : "FAIL", check.first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d check(s) failed\n", failed);
    return strict && failed > 0 ? 1 : 0;
}
