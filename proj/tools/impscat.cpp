// Batch command-line front end: synth, invert, forward, landscape, metrics, registry.

#include "impscat/error.hpp"
#include "impscat/harness.hpp"
#include "impscat/serialize.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace impscat;

namespace {

int log_level()
{
    const char* v = std::getenv("IMPSCAT_LOG");
    if (!v) return 0;
    const std::string s(v);
    if (s == "debug" || s == "2") return 2;
    if (s == "info" || s == "1") return 1;
    return 0;
}

void log(int level, const std::string& msg)
{
    if (log_level() >= level) std::cerr << "impscat: " << msg << '\n';
}

std::string one_line(std::string s)
{
    for (auto& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

int fail(const char* kind, int code, const std::string& msg)
{
    std::cerr << "error " << kind << ": " << one_line(msg) << '\n';
    return code;
}

void set_threads(int threads)
{
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

ExperimentSpec load_spec(const std::string& path, std::optional<std::uint64_t> seed)
{
    ExperimentSpec spec = io::read_spec(path);
    if (seed) spec.seed = *seed;
    spec.require_inputs();
    return spec;
}

void check_same_sensors(const ExperimentSpec& spec, const MeasurementSet& m, int j)
{
    const SensorConfig want = spec.sensors.at(spec.schedule.k(j));
    auto close = [](const std::vector<Point>& a, const std::vector<Point>& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (std::abs(a[i][0] - b[i][0]) > 1e-9 || std::abs(a[i][1] - b[i][1]) > 1e-9) return false;
        }
        return true;
    };
    if (std::abs(m.k - want.k) > 1e-12 * want.k) {
        throw DataError("data file for k = " + RunDirectory::k_label(want.k) + " holds k = " + std::to_string(m.k));
    }
    if (!close(m.directions, want.directions) || !close(m.receivers, want.receivers)) {
        throw DataError("sensors in data for k = " + RunDirectory::k_label(want.k) + " do not match the spec");
    }
}

std::vector<MeasurementSet> load_data(const ExperimentSpec& spec, const RunDirectory& dir)
{
    const auto manifest_path = dir.root() / "manifest.json";
    if (!fs::exists(manifest_path)) throw DataError("no manifest in data directory " + dir.root().string());
    const auto manifest = io::read_json(manifest_path, true);
    std::vector<double> ks;
    try {
        ks = manifest.at("wavenumbers").get<std::vector<double>>();
    } catch (const std::exception&) {
        throw DataError(manifest_path.string() + ": wavenumbers missing");
    }
    const auto want = spec.schedule.wavenumbers();
    bool match = ks.size() == want.size();
    for (std::size_t i = 0; match && i < ks.size(); ++i) match = std::abs(ks[i] - want[i]) <= 1e-12 * want[i];
    if (!match) throw DataError("data manifest schedule does not match the spec schedule");
    std::vector<MeasurementSet> data;
    for (int j = 0; j < spec.schedule.M; ++j) {
        data.push_back(dir.read_data(spec.schedule.k(j)));
        check_same_sensors(spec, data.back(), j);
    }
    return data;
}

const TruthImpedance* truth_for_metrics(const ExperimentSpec& spec)
{
    return spec.data_model == DataModel::dirichlet ? nullptr : &spec.truth_impedance;
}

int cmd_synth(const std::string& spec_path, const std::string& out, std::optional<std::uint64_t> seed)
{
    const ExperimentSpec spec = load_spec(spec_path, seed);
    const RunDirectory dir(out);
    for (int j = 0; j < spec.schedule.M; ++j) {
        const MeasurementSet m = synthesize_frequency(spec, j);
        dir.write_data(m);
        log(1, "synthesized k = " + RunDirectory::k_label(m.k));
    }
    dir.write_manifest(spec, "data", spec.schedule.M);
    return 0;
}

int cmd_forward(const std::string& spec_path, const std::string& out, const std::string& curve_path,
                const std::string& imp_path)
{
    const ExperimentSpec spec = load_spec(spec_path, std::nullopt);
    std::optional<Curve> curve;
    std::optional<Impedance> imp;
    if (!curve_path.empty()) curve = io::curve_from_json(io::read_json(curve_path), curve_path);
    if (!imp_path.empty()) imp = io::impedance_from_json(io::read_json(imp_path), imp_path);
    const RunDirectory dir(out);
    for (int j = 0; j < spec.schedule.M; ++j) {
        const double k = spec.schedule.k(j);
        const SensorConfig sensors = spec.sensors.at(k);
        MeasurementSet m;
        if (curve || imp) {
            const Curve base = curve ? *curve : spec.truth_curve.reference();
            const Curve c = reparametrize_arclength(base, points_for(base.length(), k, spec.data_ppw));
            const auto lambda = imp ? imp->at_nodes(c.n()) : spec.truth_impedance.at_nodes(c.n());
            m = forward_operator(c, lambda, sensors);
        } else {
            ExperimentSpec clean = spec;
            clean.noise = 0.0;
            m = synthesize_frequency(clean, j);
        }
        m.provenance = "forward";
        dir.write_data(m);
        log(1, "forward k = " + RunDirectory::k_label(k));
    }
    dir.write_manifest(spec, "data", spec.schedule.M);
    return 0;
}

int cmd_invert(const std::string& spec_path, const std::string& data_dir, const std::string& out, bool resume,
               std::optional<std::uint64_t> seed)
{
    const ExperimentSpec spec = load_spec(spec_path, seed);
    const RunDirectory in(data_dir);
    const std::vector<MeasurementSet> data = load_data(spec, in);
    const RunDirectory dir(out);
    const TruthImpedance* truth = truth_for_metrics(spec);

    std::vector<RunRecord> records;
    Curve curve = initial_curve(spec);
    Impedance imp = initial_impedance(spec, curve);
    if (resume) {
        for (int j = 0; j < spec.schedule.M; ++j) {
            auto r = dir.read_record(spec.schedule.k(j));
            if (!r) break;
            records.push_back(std::move(*r));
        }
        if (!records.empty()) {
            curve = records.back().curve;
            imp = records.back().imp;
            log(1, "resuming after k = " + RunDirectory::k_label(records.back().k));
        }
    }
    const int start = static_cast<int>(records.size());
    dir.write_manifest(spec, "run", start);
    run_rla(spec.schedule, frequency_data(data), curve, imp, spec.gn,
            [&](RunRecord& r) {
                if (truth) r.eps_lambda = impedance_error(*truth, r.imp);
                dir.write_record(r);
                records.push_back(r);
                dir.write_metrics(records);
                dir.write_manifest(spec, "run", static_cast<int>(records.size()));
                log(1, "k = " + RunDirectory::k_label(r.k) + " eps_r = " + std::to_string(r.eps_r) + " " +
                           to_string(r.termination));
            },
            start);
    dir.write_metrics(records);
    if (!records.empty()) {
        io::write_json(dir.root() / "final.json",
                       {{"curve", io::to_json(records.back().curve)}, {"impedance", io::to_json(records.back().imp)}});
    }
    dir.write_manifest(spec, "run", static_cast<int>(records.size()));
    return 0;
}

int cmd_metrics(const std::string& spec_path, const std::string& data_dir, const std::string& out)
{
    const ExperimentSpec spec = load_spec(spec_path, std::nullopt);
    const std::vector<MeasurementSet> data = load_data(spec, RunDirectory(data_dir));
    const RunDirectory dir(out);
    const TruthImpedance* truth = truth_for_metrics(spec);
    std::vector<RunRecord> records;
    for (int j = 0; j < spec.schedule.M; ++j) {
        auto r = dir.read_record(spec.schedule.k(j));
        if (!r) break;
        const Metrics m = compute_metrics(r->curve, r->imp, data[j], truth);
        r->eps_r = m.eps_r;
        r->eps_lambda = m.eps_lambda;
        records.push_back(std::move(*r));
    }
    if (records.empty()) throw DataError("no run records in " + out);
    dir.write_metrics(records);
    return 0;
}

int cmd_landscape(const std::string& spec_path, const std::string& out)
{
    const ExperimentSpec spec = load_spec(spec_path, std::nullopt);
    if (!spec.landscape) throw SpecError("spec has no landscape section");
    const LandscapeGrid g = landscape_scan(*spec.landscape, spec.sensors, spec.data_ppw, spec.gn.ppw);
    io::write_json(fs::path(out) / "landscape.json", io::to_json(g));
    return 0;
}

int cmd_registry(const std::string& name, const std::string& variant, const std::string& out, bool list)
{
    if (list || name.empty()) {
        for (const auto& n : registry::names()) std::cout << n << '\n';
        return 0;
    }
    const ExperimentSpec spec = registry::lookup(name, variant);
    const auto j = io::to_json(spec);
    if (out.empty() || out == "-") {
        std::cout << j.dump(2) << '\n';
    } else {
        io::write_json(out, j);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Impedance obstacle reconstruction by recursive linearization"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: all cores)");

    std::string spec, data, out, curve_file, imp_file, name, variant;
    std::optional<std::uint64_t> seed;
    bool resume = false, list = false;

    auto* synth = app.add_subcommand("synth", "Synthesize measurement data for every frequency");
    synth->add_option("--spec", spec)->required();
    synth->add_option("--out", out)->required();
    synth->add_option("--seed", seed, "Override the spec seed");

    auto* forward = app.add_subcommand("forward", "Noiseless forward data for a curve and impedance");
    forward->add_option("--spec", spec)->required();
    forward->add_option("--out", out)->required();
    forward->add_option("--curve", curve_file, "Curve JSON (default: spec truth)");
    forward->add_option("--impedance", imp_file, "Impedance JSON (default: spec truth)");

    auto* invert = app.add_subcommand("invert", "Run the frequency continuation on a data directory");
    invert->add_option("--spec", spec)->required();
    invert->add_option("--data", data)->required();
    invert->add_option("--out", out)->required();
    invert->add_option("--seed", seed, "Override the spec seed");
    invert->add_flag("--resume", resume, "Continue after the last complete record");

    auto* landscape = app.add_subcommand("landscape", "Objective scan over circles");
    landscape->add_option("--spec", spec)->required();
    landscape->add_option("--out", out)->required();

    auto* metrics = app.add_subcommand("metrics", "Recompute metrics.csv for a run directory");
    metrics->add_option("--spec", spec)->required();
    metrics->add_option("--data", data)->required();
    metrics->add_option("--out", out)->required();

    auto* reg = app.add_subcommand("registry", "Emit a registered experiment spec");
    reg->add_option("name", name, "Entry name");
    reg->add_option("--variant", variant, "Entry variant");
    reg->add_option("--out", out, "Output file (default: stdout)");
    reg->add_flag("--list", list, "List entries");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", 2, e.what());
    }
    set_threads(threads);

    try {
        if (*synth) return cmd_synth(spec, out, seed);
        if (*forward) return cmd_forward(spec, out, curve_file, imp_file);
        if (*invert) return cmd_invert(spec, data, out, resume, seed);
        if (*landscape) return cmd_landscape(spec, out);
        if (*metrics) return cmd_metrics(spec, data, out);
        if (*reg) return cmd_registry(name, variant, out, list);
    } catch (const SpecError& e) {
        return fail("spec", 2, e.what());
    } catch (const DataError& e) {
        return fail("data", 3, e.what());
    } catch (const NumericalError& e) {
        return fail("numerical", 4, e.what());
    } catch (const std::exception& e) {
        return fail("internal", 1, e.what());
    }
    return 0;
}
