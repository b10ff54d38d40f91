// Inequality reports, the falsification search, the reflection identity, the
// directional decomposition of the planar seminorm, the assembled sigma
// bound, and the JSON/CSV report layer.

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fraclab/core.hpp"
#include "fraclab/geometry.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/report.hpp"
#include "fraclab/seminorm.hpp"
#include "fraclab/verify.hpp"

using namespace fraclab;

namespace {
GridFunction ball_bump(double cx, double cy, double radius, int resolution) {
    const Domain ball = Domain::unit_ball(2);
    const TrialFunction f = make_mollifier(2, Point{cx, cy, 0}, radius);
    return sample(f, ball, resolution);
}
} // namespace

TEST(HsmReport, BasicContract) {
    QuadratureSpec quad;
    quad.resolution = 48;
    const FracParams params{2, 2.0, 0.75};
    const GridFunction u = ball_bump(0.1, -0.1, 0.4, 48);
    const InequalityReport rep =
        hsm_report(u, params, WeightMode::pseudodistance, quad, -1.0, 128);
    EXPECT_NEAR(rep.q, 8.0, 1e-12);
    EXPECT_NEAR(rep.D, hardy_constant(2, 2.0, 0.75), 1e-14);
    EXPECT_GT(rep.seminorm, 0.0);
    EXPECT_GT(rep.hardy, 0.0);
    EXPECT_GT(rep.lq, 0.0);
    EXPECT_GT(rep.remainder, 0.0);
    EXPECT_GT(rep.sigma_emp, 0.0);
    EXPECT_NEAR(rep.sigma_emp, rep.remainder / rep.lq, 1e-15);
    EXPECT_EQ(rep.domain, "ball");
    EXPECT_EQ(rep.weight_mode, "pseudodistance");

    // q override is honored
    const InequalityReport rep4 =
        hsm_report(u, params, WeightMode::pseudodistance, quad, 4.0, 128);
    EXPECT_NEAR(rep4.q, 4.0, 1e-12);
    EXPECT_NE(rep4.lq, rep.lq);

    // m <= d pointwise, so the negative power makes the pseudodistance Hardy
    // integral the larger one and its remainder the smaller one
    const InequalityReport repd =
        hsm_report(u, params, WeightMode::boundary_distance, quad, -1.0, 128);
    EXPECT_GE(rep.hardy, repd.hardy * (1.0 - 1e-9));
    EXPECT_LE(rep.remainder, repd.remainder + 1e-12);
}

TEST(HsmReport, Preconditions) {
    QuadratureSpec quad;
    quad.resolution = 32;
    const GridFunction u = ball_bump(0.0, 0.0, 0.4, 32);
    // ps >= N leaves the HSM regime
    EXPECT_THROW(
        (void)hsm_report(u, FracParams{1, 2.0, 0.75}, WeightMode::pseudodistance, quad),
        domain_error);
    // zero function
    GridFunction z = u;
    for (auto& v : z.values) v = 0.0;
    EXPECT_THROW(
        (void)hsm_report(z, FracParams{2, 2.0, 0.75}, WeightMode::pseudodistance, quad),
        domain_error);
}

TEST(MinimizeSigma, BudgetOneEvaluatesInitialTrial) {
    const Domain ball = Domain::unit_ball(2);
    const TrialFamily fam = make_ball_bump_family(ball);
    QuadratureSpec quad;
    quad.resolution = 24;
    SigmaSearchOptions opts;
    opts.budget = 1;
    const SigmaSearchResult r = minimize_sigma(fam, ball, FracParams{2, 2.0, 0.75},
                                               WeightMode::pseudodistance, quad, opts);
    EXPECT_EQ(r.evals, 1);
    EXPECT_GT(r.sigma, 0.0);

    // the reported sigma matches a direct evaluation of the same trial
    const GridFunction u = sample(fam.make(fam.init), ball, quad.resolution);
    const InequalityReport rep =
        hsm_report(u, FracParams{2, 2.0, 0.75}, WeightMode::pseudodistance, quad);
    EXPECT_NEAR(r.sigma, rep.sigma_emp, 1e-14);
}

TEST(MinimizeSigma, SearchImprovesAndIsDeterministic) {
    const Domain ball = Domain::unit_ball(2);
    const TrialFamily fam = make_ball_bump_family(ball);
    QuadratureSpec quad;
    quad.resolution = 24;
    SigmaSearchOptions opts;
    opts.restarts = 2;
    opts.iters = 20;
    const SigmaSearchResult a = minimize_sigma(fam, ball, FracParams{2, 2.0, 0.75},
                                               WeightMode::pseudodistance, quad, opts);
    const SigmaSearchResult b = minimize_sigma(fam, ball, FracParams{2, 2.0, 0.75},
                                               WeightMode::pseudodistance, quad, opts);
    EXPECT_GT(a.sigma, 0.0);
    EXPECT_EQ(a.sigma, b.sigma);
    EXPECT_EQ(a.evals, b.evals);

    // the search result is no worse than the initial trial
    SigmaSearchOptions one;
    one.budget = 1;
    const SigmaSearchResult init = minimize_sigma(fam, ball, FracParams{2, 2.0, 0.75},
                                                  WeightMode::pseudodistance, quad, one);
    EXPECT_LE(a.sigma, init.sigma + 1e-14);
}

TEST(MinimizeSigma, AllFlaggedThrows) {
    const Domain ball = Domain::unit_ball(2);
    TrialFamily fam;
    fam.dim = 1;
    fam.init = {0.0};
    fam.step = {0.1};
    // every trial is the zero function -> every iterate flagged
    fam.make = [](const std::vector<double>&) {
        return make_mollifier(2, Point{0, 0, 0}, 0.3, 0.0);
    };
    QuadratureSpec quad;
    quad.resolution = 16;
    SigmaSearchOptions opts;
    opts.restarts = 1;
    opts.iters = 3;
    EXPECT_THROW((void)minimize_sigma(fam, ball, FracParams{2, 2.0, 0.75},
                                      WeightMode::pseudodistance, quad, opts),
                 convergence_error);
}

TEST(Reflection, RatioWindowAndExactIdentity) {
    const Domain hs = Domain::upper_half_space(2);
    const FracParams params{2, 2.0, 0.75};
    QuadratureSpec quad;
    quad.resolution = 32;
    SplitMix64 rng(5);
    for (int t = 0; t < 5; ++t) {
        // box symmetric in the last axis: center the bump on the boundary
        const double cx = rng.next_in(-0.3, 0.3);
        const double r = rng.next_in(0.2, 0.5);
        const TrialFunction f = make_mollifier(2, Point{cx, 0.0, 0}, r);
        const GridFunction u = sample(f, hs, 32);
        const ReflectionResult rr = sobolev_reflection_ratio(u, params, quad);
        EXPECT_GE(rr.ratio, 2.0 - 1e-9);
        EXPECT_LE(rr.ratio, 4.0 + 1e-3);
        EXPECT_LE(rr.identity_gap, 1e-12);  // discrete identity is exact
        EXPECT_GT(rr.cross, 0.0);
    }
}

TEST(Reflection, RequiresSymmetricBox) {
    const Domain hs = Domain::upper_half_space(2);
    const TrialFunction f = make_mollifier(2, Point{0.0, 0.5, 0}, 0.3);
    const GridFunction u = sample(f, hs, 32);
    const FracParams params{2, 2.0, 0.75};
    QuadratureSpec quad;
    quad.resolution = 32;
    // the sampled box's geometry is input data, so a non-symmetric box is a
    // domain error (as opposed to a bad QuadratureSpec)
    EXPECT_THROW((void)sobolev_reflection_ratio(u, params, quad), domain_error);
}

TEST(Decomposition, DirectionalAverageMatchesDirectSum) {
    const GridFunction u = ball_bump(0.1, 0.0, 0.5, 64);
    const FracParams params{2, 2.0, 0.75};
    QuadratureSpec quad;
    quad.resolution = 64;
    const DecompositionResult d = directional_decomposition_check(u, params, 128, quad);
    EXPECT_GT(d.direct, 0.0);
    EXPECT_GT(d.averaged, 0.0);
    EXPECT_LT(d.rel_gap, 0.03) << "direct " << d.direct << " averaged " << d.averaged;
    // too few angles is a configuration error
    EXPECT_THROW((void)directional_decomposition_check(u, params, 4, quad),
                 config_error);
}

TEST(SigmaBound, ClosedFormAssembly) {
    // at (N,p,s) = (2,2,0.75): q = 8, the two exponents are both 6, so the
    // bound collapses to |S^1| / (2 c_1d) = pi / c_1d
    const FracParams params{2, 2.0, 0.75};
    EXPECT_NEAR(assemble_sigma_bound(2.0, params), pi / 2.0, 1e-12);
    EXPECT_NEAR(assemble_sigma_bound(10.0, params), pi / 10.0, 1e-12);
    EXPECT_THROW((void)assemble_sigma_bound(-1.0, params), domain_error);
    // ps >= N leaves the regime
    EXPECT_THROW((void)assemble_sigma_bound(1.0, FracParams{1, 2.0, 0.75}),
                 domain_error);
}

TEST(Report, InequalityRoundTrip) {
    QuadratureSpec quad;
    quad.resolution = 32;
    const GridFunction u = ball_bump(0.0, 0.2, 0.4, 32);
    const InequalityReport rep =
        hsm_report(u, FracParams{2, 2.0, 0.75}, WeightMode::pseudodistance, quad);
    const json j = to_json(rep);
    const InequalityReport back = inequality_report_from_json(j);
    EXPECT_EQ(back.seminorm, rep.seminorm);
    EXPECT_EQ(back.hardy, rep.hardy);
    EXPECT_EQ(back.D, rep.D);
    EXPECT_EQ(back.remainder, rep.remainder);
    EXPECT_EQ(back.lq, rep.lq);
    EXPECT_EQ(back.sigma_emp, rep.sigma_emp);
    EXPECT_EQ(back.params.N, rep.params.N);
    EXPECT_EQ(back.weight_mode, rep.weight_mode);
    EXPECT_EQ(back.converged, rep.converged);
}

TEST(Report, DomainJsonRoundTrip) {
    const Domain domains[] = {
        Domain::unit_ball(2), Domain::upper_half_space(2), Domain::interval(-1.0, 1.0),
        Domain::interval_union({{0.0, 1.0}, {2.0, 3.0}}),
        Domain::convex_polygon({{0, 0}, {1, 0}, {0, 1}})};
    for (const Domain& d : domains) {
        const Domain back = parse_domain(domain_to_json(d));
        EXPECT_EQ(back.kind(), d.kind());
        EXPECT_EQ(back.dim(), d.dim());
    }
}

TEST(Report, ConfigParsingAndHash) {
    json j;
    j["command"] = "verify-hsm";
    j["params"] = {{"N", 2}, {"p", 2.0}, {"s", 0.75}};
    j["quad"] = {{"resolution", 48}};
    j["trials"] = {{"count", 5}, {"seed", 11}};
    const RunConfig cfg = parse_run_config(j);
    EXPECT_EQ(cfg.params.N, 2);
    EXPECT_EQ(cfg.quad.resolution, 48);
    EXPECT_EQ(cfg.trial_count, 5);
    EXPECT_EQ(cfg.seed, 11u);

    // unknown keys are rejected, not ignored
    json bad = j;
    bad["paramz"] = 1;
    EXPECT_THROW((void)parse_run_config(bad), config_error);
    json badfmt = j;
    badfmt["output"] = {{"format", "xml"}};
    EXPECT_THROW((void)parse_run_config(badfmt), config_error);

    // the provenance hash ignores workers, but tracks physics parameters
    RunConfig a = cfg;
    RunConfig b = cfg;
    b.workers = 8;
    EXPECT_EQ(provenance(a)["config_hash"], provenance(b)["config_hash"]);
    RunConfig c = cfg;
    c.params.s = 0.8;
    EXPECT_NE(provenance(a)["config_hash"], provenance(c)["config_hash"]);

    // externally supplied Sobolev constants: parsed, validated, echoed, and
    // folded into the hash (they are scientific inputs, not execution detail)
    json ext = j;
    ext["external_constants"] = {{"sobolev_whole_space", 3.5}, {"sobolev_ball", 1.25}};
    const RunConfig ecfg = parse_run_config(ext);
    EXPECT_DOUBLE_EQ(ecfg.sobolev_whole_space, 3.5);
    EXPECT_DOUBLE_EQ(ecfg.sobolev_ball, 1.25);
    EXPECT_NE(provenance(ecfg)["config_hash"], provenance(cfg)["config_hash"]);
    EXPECT_EQ(config_to_json(ecfg)["external_constants"]["sobolev_ball"], 1.25);
    EXPECT_FALSE(config_to_json(cfg).contains("external_constants"));
    json bad_ext = j;
    bad_ext["external_constants"] = {{"sobolev_whole_space", -1.0}};
    EXPECT_THROW((void)parse_run_config(bad_ext), config_error);
    json unk_ext = j;
    unk_ext["external_constants"] = {{"sobolev_corner", 2.0}};
    EXPECT_THROW((void)parse_run_config(unk_ext), config_error);
}

TEST(Report, CsvFormatting) {
    EXPECT_EQ(csv_num(0.5), "0.5");
    EXPECT_EQ(csv_num(-3.0), "-3");
    // 15 significant digits survive a reread
    const double v = 0.72492031530494809;
    const double back = std::stod(csv_num(v));
    EXPECT_NEAR(back, v, 1e-15);

    std::ostringstream os;
    write_csv(os, {"a", "b"}, {{"1", "2"}, {"3", "4"}});
    EXPECT_EQ(os.str(), "a,b\n1,2\n3,4\n");
}
