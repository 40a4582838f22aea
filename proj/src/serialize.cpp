#include "impscat/serialize.hpp"

#include "impscat/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace impscat::io {

namespace {

const json& field(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object()) throw SpecError(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SpecError(where + "." + key + ": missing field");
    return *it;
}

template <class T>
T get(const json& j, const char* key, const std::string& where)
{
    const json& v = field(j, key, where);
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw SpecError(where + "." + key + ": wrong type (" + v.type_name() + ")");
    }
}

template <class T>
T get_or(const json& j, const char* key, const std::string& where, T fallback)
{
    if (!j.is_object()) throw SpecError(where + ": expected an object");
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return get<T>(j, key, where);
}

json complex_array(const fourier::CVec& v)
{
    json out = json::array();
    for (const auto& c : v) out.push_back({c.real(), c.imag()});
    return out;
}

fourier::CVec complex_from(const json& j, const std::string& where)
{
    if (!j.is_array()) throw SpecError(where + ": expected an array of [re, im] pairs");
    fourier::CVec out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& e = j[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            throw SpecError(where + "[" + std::to_string(i) + "]: expected [re, im]");
        }
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

json points(const std::vector<Point>& p)
{
    json out = json::array();
    for (const auto& q : p) out.push_back({q[0], q[1]});
    return out;
}

std::vector<Point> points_from(const json& j, const std::string& where)
{
    std::vector<Point> out;
    try {
        for (const auto& e : j) {
            const auto v = e.get<std::vector<double>>();
            if (v.size() != 2) throw SpecError(where + ": points must have two coordinates");
            out.push_back({v[0], v[1]});
        }
    } catch (const json::exception&) {
        throw SpecError(where + ": expected an array of [x, y] points");
    }
    return out;
}

std::vector<double> real_parts(const fourier::CVec& v)
{
    const auto s = fourier::synthesize(v);
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i].real();
    return out;
}

}  // namespace

json to_json(const TrigSeries& s)
{
    return {{"c0", s.c0}, {"c", s.c}, {"s", s.s}};
}

TrigSeries trig_from_json(const json& j, const std::string& where)
{
    TrigSeries s(get<double>(j, "c0", where), get_or<std::vector<double>>(j, "c", where, {}),
                 get_or<std::vector<double>>(j, "s", where, {}));
    return s;
}

json to_json(const Curve& c)
{
    return {{"n", c.n()},          {"L", c.length()}, {"xhat", complex_array(c.xhat())},
            {"yhat", complex_array(c.yhat())}, {"x", c.x()},      {"y", c.y()}};
}

Curve curve_from_json(const json& j, const std::string& where)
{
    const int n = get<int>(j, "n", where);
    const double L = get<double>(j, "L", where);
    std::vector<double> x, y;
    if (j.contains("x") && j.contains("y")) {
        x = get<std::vector<double>>(j, "x", where);
        y = get<std::vector<double>>(j, "y", where);
    } else {
        const auto xh = complex_from(field(j, "xhat", where), where + ".xhat");
        const auto yh = complex_from(field(j, "yhat", where), where + ".yhat");
        if (xh.size() != yh.size()) throw SpecError(where + ": xhat and yhat differ in length");
        x = real_parts(xh);
        y = real_parts(yh);
    }
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n) {
        throw SpecError(where + ": sample count does not match n = " + std::to_string(n));
    }
    if (n < 8) throw SpecError(where + ": too few samples");
    Curve c = Curve::from_samples(std::move(x), std::move(y));
    if (!(L > 0.0) || std::abs(c.length() - L) > 1e-8 * L) {
        throw SpecError(where + ".L: stored length " + std::to_string(L) + " does not match samples (" +
                        std::to_string(c.length()) + ")");
    }
    return c;
}

json to_json(const Impedance& imp)
{
    return {{"L_ref", imp.L_ref}, {"c0", imp.coeffs.c0}, {"c", imp.coeffs.c}, {"s", imp.coeffs.s}};
}

Impedance impedance_from_json(const json& j, const std::string& where)
{
    const double L = get<double>(j, "L_ref", where);
    if (!(L > 0.0)) throw SpecError(where + ".L_ref: must be positive");
    TrigSeries s = trig_from_json(j, where);
    if (s.c.size() != s.s.size()) throw SpecError(where + ": c and s differ in length");
    return Impedance(L, std::move(s));
}

json to_json(const MeasurementSet& m)
{
    // one [re, im] pair per entry, receiver-major: index = receiver * N_d + direction
    json data = json::array();
    for (Eigen::Index r = 0; r < m.data.rows(); ++r) {
        for (Eigen::Index l = 0; l < m.data.cols(); ++l) data.push_back({m.data(r, l).real(), m.data(r, l).imag()});
    }
    return {{"k", m.k},
            {"directions", points(m.directions)},
            {"receivers", points(m.receivers)},
            {"layout", "receiver-major"},
            {"data", std::move(data)},
            {"provenance", m.provenance},
            {"noise_level", m.noise_level}};
}

MeasurementSet measurements_from_json(const json& j, const std::string& where)
{
    try {
        MeasurementSet m;
        m.k = get<double>(j, "k", where);
        m.directions = points_from(field(j, "directions", where), where + ".directions");
        m.receivers = points_from(field(j, "receivers", where), where + ".receivers");
        m.provenance = get_or<std::string>(j, "provenance", where, "loaded");
        m.noise_level = get_or<double>(j, "noise_level", where, 0.0);
        const auto layout = get_or<std::string>(j, "layout", where, "receiver-major");
        if (layout != "receiver-major") throw SpecError(where + ".layout: only receiver-major is supported");
        const auto values = complex_from(field(j, "data", where), where + ".data");
        const auto nr = static_cast<Eigen::Index>(m.receivers.size());
        const auto nd = static_cast<Eigen::Index>(m.directions.size());
        if (static_cast<Eigen::Index>(values.size()) != nr * nd) {
            throw SpecError(where + ".data: expected " + std::to_string(nr * nd) + " entries, found " +
                            std::to_string(values.size()));
        }
        m.data.resize(nr, nd);
        for (Eigen::Index r = 0; r < nr; ++r) {
            for (Eigen::Index l = 0; l < nd; ++l) m.data(r, l) = values[static_cast<std::size_t>(r * nd + l)];
        }
        m.sensors().validate();
        return m;
    } catch (const SpecError& e) {
        throw DataError(e.what());
    }
}

json to_json(const RunRecord& r)
{
    json j = {{"k", r.k},
              {"curve", to_json(r.curve)},
              {"impedance", to_json(r.imp)},
              {"eps_r", r.eps_r},
              {"eps_lambda", nullptr},
              {"iterations", r.iterations},
              {"termination", to_string(r.termination)},
              {"filter_count", r.filter_count},
              {"jacobian_rank_monitor", r.jacobian_rank_monitor},
              {"residual_history", r.residual_history}};
    if (r.eps_lambda) j["eps_lambda"] = *r.eps_lambda;
    return j;
}

RunRecord record_from_json(const json& j, const std::string& where)
{
    try {
        RunRecord r;
        r.k = get<double>(j, "k", where);
        r.curve = curve_from_json(field(j, "curve", where), where + ".curve");
        r.imp = impedance_from_json(field(j, "impedance", where), where + ".impedance");
        r.eps_r = get<double>(j, "eps_r", where);
        if (j.contains("eps_lambda") && !j["eps_lambda"].is_null()) r.eps_lambda = get<double>(j, "eps_lambda", where);
        r.iterations = get<int>(j, "iterations", where);
        r.termination = termination_from_string(get<std::string>(j, "termination", where));
        r.filter_count = get<int>(j, "filter_count", where);
        r.jacobian_rank_monitor = get<double>(j, "jacobian_rank_monitor", where);
        r.residual_history = get_or<std::vector<double>>(j, "residual_history", where, {});
        return r;
    } catch (const SpecError& e) {
        throw DataError(e.what());
    }
}

json to_json(const GNConfig& c)
{
    return {{"max_iter", c.max_iter},
            {"eps_r", c.eps_r},
            {"eps_s_lambda", c.eps_s_lambda},
            {"eps_s_gamma", c.eps_s_gamma},
            {"c_gamma", c.admissibility.c_gamma},
            {"eps_H", c.admissibility.eps_H},
            {"c_lambda", c.c_lambda},
            {"step_control", c.step_control},
            {"filter_shrink", c.filter_shrink},
            {"filter_tries", c.filter_tries},
            {"revert_on_increase", c.revert_on_increase},
            {"ppw", c.ppw},
            {"unknowns", to_string(c.unknowns)},
            {"shape_derivative", to_string(c.variant)}};
}

GNConfig gn_config_from_json(const json& j, const std::string& where)
{
    GNConfig c;
    c.max_iter = get_or(j, "max_iter", where, c.max_iter);
    c.eps_r = get_or(j, "eps_r", where, c.eps_r);
    c.eps_s_lambda = get_or(j, "eps_s_lambda", where, c.eps_s_lambda);
    c.eps_s_gamma = get_or(j, "eps_s_gamma", where, c.eps_s_gamma);
    c.admissibility.c_gamma = get_or(j, "c_gamma", where, c.admissibility.c_gamma);
    c.admissibility.eps_H = get_or(j, "eps_H", where, c.admissibility.eps_H);
    c.c_lambda = get_or(j, "c_lambda", where, c.c_lambda);
    c.step_control = get_or(j, "step_control", where, c.step_control);
    c.filter_shrink = get_or(j, "filter_shrink", where, c.filter_shrink);
    c.filter_tries = get_or(j, "filter_tries", where, c.filter_tries);
    c.revert_on_increase = get_or(j, "revert_on_increase", where, c.revert_on_increase);
    c.ppw = get_or(j, "ppw", where, c.ppw);
    c.unknowns = unknowns_from_string(get_or<std::string>(j, "unknowns", where, to_string(c.unknowns)));
    c.variant = lemma_variant_from_string(
        get_or<std::string>(j, "shape_derivative", where, to_string(c.variant)));
    try {
        c.validate();
    } catch (const SpecError& e) {
        throw SpecError(where + ": " + e.what());
    }
    return c;
}

json to_json(const RLASchedule& s)
{
    return {{"k0", s.k0},
            {"delta_k", s.delta_k},
            {"M", s.M},
            {"mode", s.cumulative ? "cumulative" : "single_frequency"},
            {"k_c", s.k_c}};
}

RLASchedule schedule_from_json(const json& j, const std::string& where)
{
    RLASchedule s;
    s.k0 = get<double>(j, "k0", where);
    s.delta_k = get<double>(j, "delta_k", where);
    s.M = get<int>(j, "M", where);
    const auto mode = get_or<std::string>(j, "mode", where, "single_frequency");
    if (mode != "single_frequency" && mode != "cumulative") {
        throw SpecError(where + ".mode: expected single_frequency or cumulative");
    }
    s.cumulative = mode == "cumulative";
    s.k_c = get_or(j, "k_c", where, s.k_c);
    try {
        s.validate();
    } catch (const SpecError& e) {
        throw SpecError(where + ": " + e.what());
    }
    return s;
}

json to_json(const LandscapeSpec& s)
{
    return {{"k", s.k},
            {"gamma0", {{"min", s.gamma_min}, {"max", s.gamma_max}, {"count", s.gamma_count}}},
            {"lambda0", {{"min", s.lambda_min}, {"max", s.lambda_max}, {"count", s.lambda_count}}},
            {"truth", {{"gamma0", s.gamma_true}, {"lambda0", s.lambda_true}}}};
}

LandscapeSpec landscape_from_json(const json& j, const std::string& where)
{
    LandscapeSpec s;
    s.k = get<double>(j, "k", where);
    const json& g = field(j, "gamma0", where);
    s.gamma_min = get<double>(g, "min", where + ".gamma0");
    s.gamma_max = get<double>(g, "max", where + ".gamma0");
    s.gamma_count = get<int>(g, "count", where + ".gamma0");
    const json& l = field(j, "lambda0", where);
    s.lambda_min = get<double>(l, "min", where + ".lambda0");
    s.lambda_max = get<double>(l, "max", where + ".lambda0");
    s.lambda_count = get<int>(l, "count", where + ".lambda0");
    if (j.contains("truth")) {
        s.gamma_true = get_or(j["truth"], "gamma0", where + ".truth", s.gamma_true);
        s.lambda_true = get_or(j["truth"], "lambda0", where + ".truth", s.lambda_true);
    }
    try {
        s.validate();
    } catch (const SpecError& e) {
        throw SpecError(where + ": " + e.what());
    }
    return s;
}

json to_json(const ExperimentSpec& s)
{
    json curve;
    if (s.truth_curve.kind == TruthCurve::Kind::radial) {
        curve = {{"kind", "radial"}, {"radius", to_json(s.truth_curve.radius)}};
    } else {
        curve = {{"kind", "file"}, {"path", s.truth_curve.path}};
    }
    json imp;
    if (s.truth_impedance.kind == TruthImpedance::Kind::coefficients) {
        imp = {{"kind", "coefficients"}, {"coeffs", to_json(s.truth_impedance.coeffs)}};
    } else {
        json knots = json::array();
        for (const auto& k : s.truth_impedance.knots) knots.push_back({k[0], k[1]});
        imp = {{"kind", "piecewise"}, {"knots", knots}};
    }
    json j = {{"name", s.name},
              {"truth", {{"curve", curve}, {"impedance", imp}}},
              {"schedule", to_json(s.schedule)},
              {"sensors",
               {{"n_directions", s.sensors.n_directions},
                {"n_receivers", s.sensors.n_receivers},
                {"radius", s.sensors.radius}}},
              {"noise", s.noise},
              {"data_model", to_string(s.data_model)},
              {"gn", to_json(s.gn)},
              {"seed", s.seed},
              {"data_ppw", s.data_ppw},
              {"init", {{"radius", s.init_radius}, {"lambda", s.init_lambda}}}};
    if (s.landscape) j["landscape"] = to_json(*s.landscape);
    return j;
}

ExperimentSpec spec_from_json(const json& j)
{
    ExperimentSpec s;
    s.name = get_or<std::string>(j, "name", "spec", "custom");
    const json& truth = field(j, "truth", "spec");
    const json& curve = field(truth, "curve", "spec.truth");
    const auto ck = get<std::string>(curve, "kind", "spec.truth.curve");
    if (ck == "radial") {
        s.truth_curve.kind = TruthCurve::Kind::radial;
        s.truth_curve.radius = trig_from_json(field(curve, "radius", "spec.truth.curve"), "spec.truth.curve.radius");
    } else if (ck == "file") {
        s.truth_curve.kind = TruthCurve::Kind::file;
        s.truth_curve.path = get<std::string>(curve, "path", "spec.truth.curve");
    } else {
        throw SpecError("spec.truth.curve.kind: expected radial or file");
    }
    const json& imp = field(truth, "impedance", "spec.truth");
    const auto ik = get<std::string>(imp, "kind", "spec.truth.impedance");
    if (ik == "coefficients") {
        s.truth_impedance.kind = TruthImpedance::Kind::coefficients;
        s.truth_impedance.coeffs = trig_from_json(field(imp, "coeffs", "spec.truth.impedance"), "spec.truth.impedance.coeffs");
    } else if (ik == "piecewise") {
        s.truth_impedance.kind = TruthImpedance::Kind::piecewise;
        for (const auto& p : points_from(field(imp, "knots", "spec.truth.impedance"), "spec.truth.impedance.knots")) {
            s.truth_impedance.knots.push_back(p);
        }
    } else {
        throw SpecError("spec.truth.impedance.kind: expected coefficients or piecewise");
    }
    s.schedule = schedule_from_json(field(j, "schedule", "spec"), "spec.schedule");
    const json& sens = field(j, "sensors", "spec");
    s.sensors.n_directions = get<int>(sens, "n_directions", "spec.sensors");
    s.sensors.n_receivers = get<int>(sens, "n_receivers", "spec.sensors");
    s.sensors.radius = get<double>(sens, "radius", "spec.sensors");
    s.noise = get_or(j, "noise", "spec", s.noise);
    s.data_model = data_model_from_string(get_or<std::string>(j, "data_model", "spec", "impedance"));
    if (j.contains("gn")) s.gn = gn_config_from_json(j["gn"], "spec.gn");
    s.seed = get_or<std::uint64_t>(j, "seed", "spec", s.seed);
    s.data_ppw = get_or(j, "data_ppw", "spec", s.data_ppw);
    if (j.contains("init")) {
        s.init_radius = get_or(j["init"], "radius", "spec.init", s.init_radius);
        s.init_lambda = get_or(j["init"], "lambda", "spec.init", s.init_lambda);
    }
    if (j.contains("landscape") && !j["landscape"].is_null()) {
        s.landscape = landscape_from_json(j["landscape"], "spec.landscape");
    }
    s.validate();
    return s;
}

json to_json(const LandscapeGrid& g)
{
    return {{"gamma0_axis", g.gamma_axis}, {"lambda0_axis", g.lambda_axis}, {"values", g.values}};
}

LandscapeGrid grid_from_json(const json& j, const std::string& where)
{
    LandscapeGrid g;
    g.gamma_axis = get<std::vector<double>>(j, "gamma0_axis", where);
    g.lambda_axis = get<std::vector<double>>(j, "lambda0_axis", where);
    g.values = get<std::vector<std::vector<double>>>(j, "values", where);
    return g;
}

json read_json(const std::filesystem::path& path, bool data_file)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        const std::string msg = "cannot open " + path.string();
        if (data_file) throw DataError(msg);
        throw SpecError(msg);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const long line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
        const std::string msg = path.string() + ":" + std::to_string(line) + ": invalid JSON";
        if (data_file) throw DataError(msg);
        throw SpecError(msg);
    }
}

void write_json(const std::filesystem::path& path, const json& j)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << j.dump(2) << '\n';
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

ExperimentSpec read_spec(const std::filesystem::path& path)
{
    const json j = read_json(path);
    try {
        return spec_from_json(j);
    } catch (const SpecError& e) {
        throw SpecError(path.string() + ": " + e.what());
    }
}

}  // namespace impscat::io
