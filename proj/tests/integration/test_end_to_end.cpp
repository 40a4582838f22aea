#include "impscat/harness.hpp"

#include <doctest.h>

#include <cmath>

using namespace impscat;

namespace {

ExperimentSpec short_sweep(Unknowns unknowns, double k_max)
{
    ExperimentSpec spec = registry::ex_5_1(unknowns, 3.0, 0.5, k_max);
    spec.sensors = {8, 40, 10.0};
    spec.noise = 0.0;
    spec.gn.max_iter = 20;
    return spec;
}

std::vector<RunRecord> run(const ExperimentSpec& spec)
{
    const auto meas = synthesize(spec);
    const Curve c = initial_curve(spec);
    return run_rla(spec.schedule, frequency_data(meas), c, initial_impedance(spec, c), spec.gn,
                   [&](RunRecord& r) { r.eps_lambda = impedance_error(spec.truth_impedance, r.imp); });
}

}  // namespace

TEST_CASE("impedance recovery on the known star")
{
    const auto spec = short_sweep(Unknowns::impedance_only, 5.0);
    const auto recs = run(spec);
    REQUIRE(recs.size() == static_cast<std::size_t>(spec.schedule.M));
    const auto& last = recs.back();
    // at k = 5 the bandlimit is 2, so the cos 9t mode is out of reach:
    // its share of the error is 0.02 sqrt(pi)
    CHECK(*last.eps_lambda < 0.05);
    CHECK(*last.eps_lambda < *recs.front().eps_lambda);
    CHECK(last.imp.bandlimit() == 2);
    CHECK(std::abs(last.imp.coeffs.c0 - 1.0) < 5e-3);
    CHECK(std::abs(last.imp.coeffs.c[0] - 0.1) < 5e-3);
    for (const auto& r : recs) {
        CHECK(r.termination != Termination::inadmissible_final);
        for (std::size_t i = 1; i < r.residual_history.size(); ++i) {
            CHECK(r.residual_history[i] <= r.residual_history[i - 1]);
        }
    }
}

TEST_CASE("shape recovery of a smooth perturbation")
{
    ExperimentSpec spec = short_sweep(Unknowns::shape_only, 3.0);
    spec.truth_curve.radius = TrigSeries(1.0, {0.0, 0.1}, {0.0, 0.0, 0.05});
    spec.truth_impedance.coeffs = TrigSeries(0.5, {}, {});
    const Curve ref = spec.truth_curve.reference();

    SUBCASE("loose curvature threshold")
    {
        // the truth itself has curvature tail 0.09 at k = 1
        spec.gn.admissibility.eps_H = 0.5;
        const auto recs = run(spec);
        const auto& last = recs.back();
        CHECK(last.eps_r < 1e-3);
        CHECK(std::abs(last.curve.length() - ref.length()) < 1e-3);
        CHECK(std::abs(last.curve.signed_area() - ref.signed_area()) < 1e-3);
    }
    SUBCASE("default threshold keeps every iterate admissible")
    {
        spec.schedule.M = 3;
        const auto recs = run(spec);
        for (const auto& r : recs) {
            CHECK(is_admissible(r.curve, r.k, spec.gn.admissibility).admissible);
            CHECK(r.eps_r <= r.residual_history.front());
        }
    }
}
