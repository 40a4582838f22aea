#include "impscat/harness.hpp"

#include "impscat/error.hpp"
#include "impscat/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

namespace impscat {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

TrigSeries star_radius()
{
    TrigSeries r(8);
    r.c0 = 1.0;
    r.c[2] = 0.2;
    r.c[3] = 0.02;
    r.c[5] = 0.1;
    r.c[7] = 0.1;
    return r;
}

TrigSeries star_impedance()
{
    TrigSeries l(9);
    l.c0 = 1.0;
    l.c[0] = 0.1;
    l.c[8] = 0.02;
    return l;
}

int schedule_length(double k0, double dk, double k_max)
{
    return static_cast<int>(std::lround((k_max - k0) / dk)) + 1;
}

ExperimentSpec paper_defaults(const std::string& name, double k_max)
{
    ExperimentSpec s;
    s.name = name;
    s.truth_curve.kind = TruthCurve::Kind::radial;
    s.truth_curve.radius = star_radius();
    s.truth_impedance.kind = TruthImpedance::Kind::coefficients;
    s.truth_impedance.coeffs = star_impedance();
    s.schedule.k0 = 1.0;
    s.schedule.delta_k = 0.25;
    s.schedule.M = schedule_length(1.0, 0.25, k_max);
    s.sensors = {16, 100, 10.0};
    s.noise = 0.02;
    s.gn.max_iter = 200;
    s.gn.eps_r = 1e-3;
    s.gn.eps_s_lambda = 1e-3;
    s.gn.admissibility = {3.0, 1e-3};
    s.gn.c_lambda = 0.5;
    s.seed = 1;
    return s;
}

}  // namespace

std::string to_string(DataModel m)
{
    switch (m) {
    case DataModel::impedance: return "impedance";
    case DataModel::dirichlet: return "dirichlet";
    case DataModel::neumann: return "neumann";
    }
    return "unknown";
}

DataModel data_model_from_string(const std::string& s)
{
    for (auto m : {DataModel::impedance, DataModel::dirichlet, DataModel::neumann}) {
        if (to_string(m) == s) return m;
    }
    throw SpecError("unknown data model '" + s + "'");
}

void TruthCurve::validate() const
{
    if (kind == Kind::file && path.empty()) throw SpecError("truth curve file path is empty");
    if (kind == Kind::radial && radius.c.size() != radius.s.size()) {
        throw SpecError("truth radius: cosine and sine coefficient counts differ");
    }
}

Curve TruthCurve::reference() const
{
    validate();
    if (kind == Kind::radial) {
        const Curve c = from_radial(radius, 1024);
        if (self_intersects(c) || c.signed_area() <= 0.0) throw SpecError("truth radius does not define a simple curve");
        return c;
    }
    if (!std::filesystem::exists(path)) throw SpecError("truth curve file not found: " + path);
    return io::curve_from_json(io::read_json(path), path);
}

Curve TruthCurve::at(double k, double ppw) const
{
    const Curve ref = reference();
    const int n = points_for(ref.length(), k, ppw);
    if (kind == Kind::radial) return from_radial(radius, n);
    return reparametrize_arclength(ref, n);
}

void TruthImpedance::validate() const
{
    if (kind == Kind::coefficients) {
        if (coeffs.c.size() != coeffs.s.size()) throw SpecError("truth impedance: cosine and sine counts differ");
        return;
    }
    if (knots.size() < 2) throw SpecError("piecewise impedance needs at least two knots");
    if (knots.front()[0] != 0.0 || std::abs(knots.back()[0] - two_pi) > 1e-12) {
        throw SpecError("piecewise impedance knots must span [0, 2 pi]");
    }
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!(knots[i][0] > knots[i - 1][0])) throw SpecError("piecewise impedance knots must increase");
    }
}

double TruthImpedance::operator()(double angle) const
{
    if (kind == Kind::coefficients) return coeffs(angle);
    double t = std::fmod(angle, two_pi);
    if (t < 0.0) t += two_pi;
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (t <= knots[i][0]) {
            const auto& a = knots[i - 1];
            const auto& b = knots[i];
            return a[1] + (b[1] - a[1]) * (t - a[0]) / (b[0] - a[0]);
        }
    }
    return knots.back()[1];
}

std::vector<double> TruthImpedance::at_nodes(int n) const
{
    std::vector<double> v(n);
    for (int j = 0; j < n; ++j) v[j] = (*this)(two_pi * j / n);
    return v;
}

Impedance TruthImpedance::projected(int bandlimit, double period) const
{
    if (kind == Kind::coefficients) return Impedance(period, coeffs.padded(bandlimit));
    const int m = 8192;
    const auto v = at_nodes(m);
    TrigSeries s(bandlimit);
    for (int j = 0; j < m; ++j) s.c0 += v[j] / m;
    for (int l = 1; l <= bandlimit; ++l) {
        for (int j = 0; j < m; ++j) {
            const double a = two_pi * l * j / m;
            s.c[l - 1] += 2.0 * v[j] * std::cos(a) / m;
            s.s[l - 1] += 2.0 * v[j] * std::sin(a) / m;
        }
    }
    return Impedance(period, s);
}

void SensorTemplate::validate() const
{
    if (n_directions < 1 || n_receivers < 1) throw SpecError("sensor counts must be positive");
    if (!(radius > 0.0)) throw SpecError("receiver radius must be positive");
}

void LandscapeSpec::validate() const
{
    if (!(k > 0.0)) throw SpecError("landscape k must be positive");
    if (!(gamma_min > 0.0) || !(gamma_max >= gamma_min) || gamma_count < 1) {
        throw SpecError("landscape gamma0 range is invalid");
    }
    if (!(lambda_max >= lambda_min) || lambda_count < 1) throw SpecError("landscape lambda0 range is invalid");
    if (!(gamma_true > 0.0)) throw SpecError("landscape truth radius must be positive");
}

static std::vector<double> axis(double lo, double hi, int count)
{
    std::vector<double> a(count);
    for (int i = 0; i < count; ++i) a[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    return a;
}

std::vector<double> LandscapeSpec::gamma_axis() const { return axis(gamma_min, gamma_max, gamma_count); }
std::vector<double> LandscapeSpec::lambda_axis() const { return axis(lambda_min, lambda_max, lambda_count); }

void ExperimentSpec::validate() const
{
    truth_curve.validate();
    truth_impedance.validate();
    schedule.validate();
    sensors.validate();
    gn.validate();
    if (!(noise >= 0.0)) throw SpecError("noise level must be nonnegative");
    if (!(data_ppw > 0.0)) throw SpecError("data_ppw must be positive");
    if (!(init_radius > 0.0)) throw SpecError("initial radius must be positive");
    if (landscape) landscape->validate();
}

void ExperimentSpec::require_inputs() const
{
    validate();
    if (truth_curve.kind == TruthCurve::Kind::file && !std::filesystem::exists(truth_curve.path)) {
        throw SpecError("truth curve file not found: " + truth_curve.path);
    }
}

void add_noise(MeasurementSet& m, double eta, std::uint64_t seed, int stream)
{
    if (eta == 0.0) return;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    std::mt19937_64 gen(seq);
    std::normal_distribution<double> normal;
    for (Eigen::Index l = 0; l < m.data.cols(); ++l) {
        for (Eigen::Index r = 0; r < m.data.rows(); ++r) {
            cplx phi;
            do {
                const double a = normal(gen);
                const double b = normal(gen);
                phi = {a, b};
            } while (std::abs(phi) == 0.0);
            m.data(r, l) += eta * std::abs(m.data(r, l)) * phi / std::abs(phi);
        }
    }
    m.noise_level = eta;
}

MeasurementSet synthesize_frequency(const ExperimentSpec& spec, int j)
{
    const double k = spec.schedule.k(j);
    const SensorConfig sensors = spec.sensors.at(k);
    const Curve truth = spec.truth_curve.at(k, spec.data_ppw);
    sensors.check_outside(truth);
    MeasurementSet m;
    switch (spec.data_model) {
    case DataModel::impedance:
        m = forward_operator(truth, spec.truth_impedance.at_nodes(truth.n()), sensors);
        break;
    case DataModel::dirichlet: m = dirichlet_data(truth, sensors); break;
    case DataModel::neumann: m = neumann_data(truth, sensors); break;
    }
    m.provenance = "synthetic " + spec.name + " " + to_string(spec.data_model) + " n=" + std::to_string(truth.n());
    add_noise(m, spec.noise, spec.seed, j);
    return m;
}

std::vector<MeasurementSet> synthesize(const ExperimentSpec& spec)
{
    spec.require_inputs();
    std::vector<MeasurementSet> out;
    for (int j = 0; j < spec.schedule.M; ++j) out.push_back(synthesize_frequency(spec, j));
    return out;
}

double sample_distance(const Curve& a, const Curve& b, int samples)
{
    const Curve p = a.n() == samples ? a : reparametrize_arclength(a, samples);
    const Curve q = b.n() == samples ? b : reparametrize_arclength(b, samples);
    auto one_way = [](const Curve& u, const Curve& v) {
        double worst = 0.0;
        for (int i = 0; i < u.n(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < v.n(); ++j) {
                best = std::min(best, std::hypot(u.x()[i] - v.x()[j], u.y()[i] - v.y()[j]));
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_way(p, q), one_way(q, p));
}

double impedance_error(const TruthImpedance& truth, const Impedance& rec, int samples)
{
    double sum = 0.0;
    for (int q = 0; q < samples; ++q) {
        const double t = two_pi * q / samples;
        const double d = truth(t) - rec.coeffs(t);
        sum += d * d;
    }
    return std::sqrt(sum * two_pi / samples);
}

Metrics compute_metrics(const Curve& curve, const Impedance& imp, const MeasurementSet& meas,
                        const TruthImpedance* truth)
{
    Metrics m;
    // same stacking as the optimizer, so recomputed values match the run bitwise
    const StackEvaluation e = evaluate_stack(curve, imp, {FrequencyData{meas.sensors(), meas}});
    const double num = e.residual.norm();
    m.eps_r = e.norm_meas > 0.0 ? num / e.norm_meas : num;
    if (truth) m.eps_lambda = impedance_error(*truth, imp);
    return m;
}

Curve initial_curve(const ExperimentSpec& spec)
{
    const double k0 = spec.schedule.k0;
    if (spec.gn.unknowns == Unknowns::impedance_only) return spec.truth_curve.at(k0, spec.gn.ppw);
    const double L = two_pi * spec.init_radius;
    return from_radial(TrigSeries(spec.init_radius, {}, {}), points_for(L, k0, spec.gn.ppw));
}

Impedance initial_impedance(const ExperimentSpec& spec, const Curve& curve)
{
    if (spec.gn.unknowns == Unknowns::shape_only) {
        if (spec.data_model == DataModel::neumann) return Impedance::constant(0.0, curve.length());
        const int N = spec.truth_impedance.kind == TruthImpedance::Kind::coefficients
                          ? spec.truth_impedance.coeffs.bandlimit()
                          : 64;
        return spec.truth_impedance.projected(N, curve.length());
    }
    const int N = static_cast<int>(std::floor(spec.gn.c_lambda * spec.schedule.k0));
    return Impedance::constant(spec.init_lambda, curve.length(), N);
}

std::vector<FrequencyData> frequency_data(const std::vector<MeasurementSet>& data)
{
    std::vector<FrequencyData> out;
    for (const auto& m : data) out.push_back({m.sensors(), m});
    return out;
}

std::array<int, 2> LandscapeGrid::argmin() const
{
    std::array<int, 2> best{0, 0};
    double v = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = 0; j < values[i].size(); ++j) {
            if (values[i][j] < v) {
                v = values[i][j];
                best = {static_cast<int>(i), static_cast<int>(j)};
            }
        }
    }
    return best;
}

LandscapeGrid landscape_scan(const LandscapeSpec& spec, const SensorTemplate& sensors_tpl,
                             double data_ppw, double ppw)
{
    spec.validate();
    const SensorConfig sensors = sensors_tpl.at(spec.k);
    auto circle = [&](double radius, double density) {
        return from_radial(TrigSeries(radius, {}, {}), points_for(two_pi * radius, spec.k, density));
    };
    const Curve truth = circle(spec.gamma_true, data_ppw);
    const MeasurementSet meas =
        forward_operator(truth, std::vector<double>(truth.n(), spec.lambda_true), sensors);

    LandscapeGrid g;
    g.gamma_axis = spec.gamma_axis();
    g.lambda_axis = spec.lambda_axis();
    g.values.assign(g.gamma_axis.size(), std::vector<double>(g.lambda_axis.size(), 0.0));
    for (std::size_t i = 0; i < g.gamma_axis.size(); ++i) {
        const Curve c = circle(g.gamma_axis[i], ppw);
        sensors.check_outside(c);
        const ForwardSystem base = build_system(c, std::vector<double>(c.n(), g.lambda_axis[0]), spec.k);
        g.values[i][0] = (meas.data - solve_plane_waves(base, c, sensors).u_scat).norm();
        for (std::size_t j = 1; j < g.lambda_axis.size(); ++j) {
            const ForwardSystem sys = with_impedance(base, std::vector<double>(c.n(), g.lambda_axis[j]));
            g.values[i][j] = (meas.data - solve_plane_waves(sys, c, sensors).u_scat).norm();
        }
    }
    return g;
}

int count_local_minima(const std::vector<double>& v)
{
    int count = 0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i] < v[i - 1] && v[i] < v[i + 1]) ++count;
    }
    return count;
}

namespace registry {

ExperimentSpec ex_5_1(Unknowns unknowns, double c_gamma, double c_lambda, double k_max)
{
    ExperimentSpec s = paper_defaults("ex_5_1_" + to_string(unknowns), k_max);
    s.gn.unknowns = unknowns;
    s.gn.admissibility.c_gamma = c_gamma;
    s.gn.c_lambda = c_lambda;
    return s;
}

ExperimentSpec ex_5_2(DataModel model, double k_max)
{
    if (model == DataModel::impedance) throw SpecError("ex_5_2 takes dirichlet or neumann data");
    ExperimentSpec s = paper_defaults("ex_5_2_" + to_string(model), k_max);
    s.data_model = model;
    if (model == DataModel::neumann) s.truth_impedance.coeffs = TrigSeries(0.0, {}, {});
    return s;
}

ExperimentSpec ex_5_3(const std::string& curve_path, double k_max)
{
    if (curve_path.empty()) {
        throw SpecError("ex_5_3 needs a truth curve file: its plane geometries are not given in parametric form");
    }
    ExperimentSpec s = paper_defaults("ex_5_3", k_max);
    s.truth_curve.kind = TruthCurve::Kind::file;
    s.truth_curve.path = curve_path;
    s.truth_impedance.kind = TruthImpedance::Kind::piecewise;
    s.truth_impedance.knots = {{0.0, 0.6}, {std::numbers::pi, 0.5}, {two_pi, 0.6}};
    return s;
}

ExperimentSpec openprob_6(int step_control, bool cumulative, double k_max)
{
    ExperimentSpec s = paper_defaults(std::string("openprob_6_cs") + std::to_string(step_control) +
                                          (cumulative ? "_cumulative" : "_single"),
                                      k_max);
    s.gn.unknowns = Unknowns::shape_only;
    s.gn.admissibility.c_gamma = 2.0;
    s.gn.step_control = step_control;
    s.schedule.cumulative = cumulative;
    s.schedule.k_c = 10.0;
    s.validate();
    return s;
}

ExperimentSpec landscape(double k)
{
    ExperimentSpec s = paper_defaults("landscape_k" + RunDirectory::k_label(k), 1.0);
    s.noise = 0.0;
    LandscapeSpec l;
    l.k = k;
    s.landscape = l;
    return s;
}

std::vector<std::string> names()
{
    return {"ex_5_1", "ex_5_2", "ex_5_3", "openprob_6", "landscape"};
}

ExperimentSpec lookup(const std::string& name, const std::string& variant)
{
    if (name == "ex_5_1") return ex_5_1(variant.empty() ? Unknowns::both : unknowns_from_string(variant));
    if (name == "ex_5_2") return ex_5_2(data_model_from_string(variant.empty() ? "neumann" : variant));
    if (name == "ex_5_3") return ex_5_3(variant);
    if (name == "openprob_6") {
        // variant "<c_s>" or "<c_s>:cumulative"
        const auto colon = variant.find(':');
        const std::string cs = variant.substr(0, colon);
        int c = 0;
        try {
            c = cs.empty() ? 0 : std::stoi(cs);
        } catch (const std::exception&) {
            throw SpecError("openprob_6 variant must be <c_s>[:cumulative]");
        }
        const bool cum = colon != std::string::npos;
        if (cum && variant.substr(colon + 1) != "cumulative") {
            throw SpecError("openprob_6 variant must be <c_s>[:cumulative]");
        }
        return openprob_6(c, cum);
    }
    if (name == "landscape") {
        try {
            return landscape(variant.empty() ? 1.0 : std::stod(variant));
        } catch (const std::invalid_argument&) {
            throw SpecError("landscape variant must be a wavenumber");
        }
    }
    throw SpecError("unknown registry entry '" + name + "'");
}

}  // namespace registry

RunDirectory::RunDirectory(std::filesystem::path root) : root_(std::move(root)) {}

std::string RunDirectory::k_label(double k)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", k);
    return buf;
}

std::filesystem::path RunDirectory::data_path(double k) const
{
    return root_ / "data" / ("k_" + k_label(k) + ".json");
}

std::filesystem::path RunDirectory::record_path(double k) const
{
    return root_ / "records" / ("k_" + k_label(k) + ".json");
}

void RunDirectory::write_data(const MeasurementSet& m) const { io::write_json(data_path(m.k), io::to_json(m)); }

MeasurementSet RunDirectory::read_data(double k) const
{
    const auto p = data_path(k);
    if (!std::filesystem::exists(p)) throw DataError("missing data file for k = " + k_label(k) + ": " + p.string());
    return io::measurements_from_json(io::read_json(p, true), p.string());
}

void RunDirectory::write_record(const RunRecord& r) const { io::write_json(record_path(r.k), io::to_json(r)); }

std::optional<RunRecord> RunDirectory::read_record(double k) const
{
    const auto p = record_path(k);
    if (!std::filesystem::exists(p)) return std::nullopt;
    return io::record_from_json(io::read_json(p, true), p.string());
}

void RunDirectory::write_metrics(const std::vector<RunRecord>& records) const
{
    std::filesystem::create_directories(root_);
    const auto path = root_ / "metrics.csv";
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << "k,eps_r,eps_lambda,iterations,termination\n";
        char buf[64];
        for (const auto& r : records) {
            out << k_label(r.k) << ',';
            std::snprintf(buf, sizeof buf, "%.17g", r.eps_r);
            out << buf << ',';
            if (r.eps_lambda) {
                std::snprintf(buf, sizeof buf, "%.17g", *r.eps_lambda);
                out << buf;
            }
            out << ',' << r.iterations << ',' << to_string(r.termination) << '\n';
        }
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void RunDirectory::write_manifest(const ExperimentSpec& spec, const std::string& kind, int completed) const
{
    io::json files = io::json::array();
    for (int j = 0; j < completed; ++j) {
        const double k = spec.schedule.k(j);
        files.push_back(kind == "data" ? "data/k_" + k_label(k) + ".json" : "records/k_" + k_label(k) + ".json");
    }
    io::json ks = io::json::array();
    for (double k : spec.schedule.wavenumbers()) ks.push_back(k);
    io::write_json(root_ / "manifest.json", {{"kind", kind},
                                             {"spec", io::to_json(spec)},
                                             {"wavenumbers", ks},
                                             {"completed", completed},
                                             {"files", files}});
}

}  // namespace impscat
