// fraclab: batch driver for the fractional Hardy / HSM verification suites.
//
// Exit codes: 0 = all asserted contracts passed, 1 = at least one contract
// violation (the report is still written with failure details), 2 = bad
// configuration or unusable input.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fraclab/core.hpp"
#include "fraclab/geometry.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/gsr.hpp"
#include "fraclab/nelder_mead.hpp"
#include "fraclab/onedim.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/pv.hpp"
#include "fraclab/report.hpp"
#include "fraclab/seminorm.hpp"
#include "fraclab/special.hpp"
#include "fraclab/verify.hpp"

namespace {

using fraclab::json;

// ---------------------------------------------------------------------------
// output plumbing
// ---------------------------------------------------------------------------

void emit_text(const fraclab::RunConfig& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(cfg.out_path, std::ios::binary);
    if (!os) throw fraclab::config_error("cannot open output file: " + cfg.out_path);
    os << text;
}

void emit_json(const fraclab::RunConfig& cfg, json j) {
    j["provenance"] = fraclab::provenance(cfg);
    emit_text(cfg, j.dump(2) + "\n");
}

std::string csv_text(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    fraclab::write_csv(os, header, rows);
    return os.str();
}

// ---------------------------------------------------------------------------
// trial generation
// ---------------------------------------------------------------------------

// Random bump placed inside the domain; half-spaces get a reference box one
// unit deep above the boundary since they have no bounding box of their own.
fraclab::TrialFunction random_trial(const fraclab::Domain& domain,
                                    fraclab::SplitMix64& rng) {
    using namespace fraclab;
    if (domain.kind() != Domain::Kind::half_space)
        return random_mollifier_in(domain, rng);
    const int N = domain.dim();
    const Point n = domain.hs_normal();
    for (int attempt = 0; attempt < 4096; ++attempt) {
        const double height = rng.next_in(0.25, 0.85);
        double lateral = N >= 2 ? rng.next_in(-0.5, 0.5) : 0.0;
        Point c{0, 0, 0};
        for (int k = 0; k < N; ++k) c[k] = n[k] * (domain.hs_offset() + height);
        if (N >= 2) {
            c[0] += -n[1] * lateral;
            c[1] += n[0] * lateral;
        }
        const double radius = rng.next_in(0.08, 0.20);
        if (height - radius < 0.03) continue;
        const double amplitude = rng.next_in(0.5, 2.0);
        return make_mollifier(N, c, radius, amplitude);
    }
    throw convergence_error("random_trial: no admissible half-space bump found");
}

// ---------------------------------------------------------------------------
// subcommand implementations (each returns the process exit code)
// ---------------------------------------------------------------------------

int run_constants(const fraclab::RunConfig& cfg) {
    using namespace fraclab;
    const ConstantBundle c = make_constants(cfg.params);
    if (cfg.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        const json j = to_json(c);
        for (const auto& item : j.items()) {
            if (item.value().is_number())
                rows.push_back({item.key(), csv_num(item.value().get<double>())});
        }
        emit_text(cfg, csv_text({"constant", "value"}, rows));
        return 0;
    }
    emit_json(cfg, to_json(c));
    return 0;
}

int run_mdist(const fraclab::RunConfig& cfg) {
    using namespace fraclab;
    const Domain domain =
        cfg.domain.is_null() ? Domain::unit_ball(cfg.params.N) : parse_domain(cfg.domain);
    const double alpha = cfg.params.ps();
    SplitMix64 rng(cfg.seed);

    Box bb;
    const bool bounded = domain.bounding_box(bb);
    if (!bounded) {
        const Point n = domain.hs_normal();
        for (int k = 0; k < domain.dim(); ++k) {
            bb.lo[k] = n[k] * domain.hs_offset() - 1.0;
            bb.hi[k] = n[k] * domain.hs_offset() + (n[k] > 0 ? 2.0 : 1.0);
        }
    }

    json rows = json::array();
    bool violation = false;
    for (long t = 0; t < cfg.trial_count; ++t) {
        Point x{0, 0, 0};
        bool found = false;
        for (int attempt = 0; attempt < 4096 && !found; ++attempt) {
            for (int k = 0; k < domain.dim(); ++k) x[k] = rng.next_in(bb.lo[k], bb.hi[k]);
            found = domain.contains(x);
        }
        if (!found) throw config_error("mdist: could not sample a point in the domain");
        const double m = domain.pseudodistance(x, alpha, cfg.angular_nodes);
        const double d = domain.dist_to_complement(x);
        json row;
        json pt = json::array();
        for (int k = 0; k < domain.dim(); ++k) pt.push_back(x[k]);
        row["point"] = pt;
        row["m"] = m;
        row["d"] = d;
        row["m_le_d"] = m <= d + 1e-9;
        if (!(m <= d + 1e-9)) violation = true;
        rows.push_back(row);
    }

    if (cfg.format == "csv") {
        std::vector<std::vector<std::string>> csv;
        for (const auto& r : rows)
            csv.push_back({csv_num(r["point"][0].get<double>()),
                           csv_num(domain.dim() >= 2 ? r["point"][1].get<double>() : 0.0),
                           csv_num(r["m"].get<double>()), csv_num(r["d"].get<double>())});
        emit_text(cfg, csv_text({"x0", "x1", "m_alpha", "dist"}, csv));
        return violation ? 1 : 0;
    }
    json out;
    out["alpha"] = alpha;
    out["domain"] = domain_to_json(domain);
    out["points"] = rows;
    out["all_m_le_d"] = !violation;
    emit_json(cfg, out);
    return violation ? 1 : 0;
}

int run_seminorm(const fraclab::RunConfig& cfg) {
    using namespace fraclab;
    const Domain domain =
        cfg.domain.is_null() ? Domain::unit_ball(cfg.params.N) : parse_domain(cfg.domain);
    cfg.params.validate_hardy();
    const WeightMode mode = parse_weight_mode(cfg.weight_mode);

    json trials = json::array();
    for (long t = 0; t < cfg.trial_count; ++t) {
        SplitMix64 rng(trial_seed(cfg.seed, static_cast<std::uint64_t>(t)));
        const TrialFunction tf = random_trial(domain, rng);
        const GridFunction u = sample(tf, domain, cfg.quad.resolution);
        const SeminormResult sem = gagliardo_seminorm(u, cfg.params, cfg.quad);
        const double hardy = hardy_term(u, cfg.params, mode, cfg.angular_nodes);
        json row;
        row["trial"] = t;
        row["seminorm"] = sem.value;
        row["seminorm_error"] = sem.error;
        row["hardy_integral"] = hardy;
        row["converged"] = sem.converged;
        trials.push_back(row);
    }
    if (cfg.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : trials)
            rows.push_back({std::to_string(r["trial"].get<long>()),
                            csv_num(r["seminorm"].get<double>()),
                            csv_num(r["seminorm_error"].get<double>()),
                            csv_num(r["hardy_integral"].get<double>())});
        emit_text(cfg, csv_text({"trial", "seminorm", "seminorm_error", "hardy_integral"},
                                rows));
        return 0;
    }
    json out;
    out["trials"] = trials;
    emit_json(cfg, out);
    return 0;
}

int run_gsr_check(const fraclab::RunConfig& cfg) {
    using namespace fraclab;
    json out;
    json trials = json::array();
    bool violation = false;

    if (cfg.params.N == 1) {
        const Domain hs = Domain::upper_half_space(1);
        for (long t = 0; t < cfg.trial_count; ++t) {
            SplitMix64 rng(trial_seed(cfg.seed, static_cast<std::uint64_t>(t)));
            const TrialFunction tf = random_trial(hs, rng);
            const GridFunction u = sample(tf, hs, cfg.quad.resolution);
            const GsrDecomposition g = gsr_halfspace(u, cfg.params, cfg.quad, cfg.cp);
            json row = to_json(g);
            row["trial"] = t;
            const bool ok = cfg.params.p == 2.0
                                ? g.rel_gap < 0.02
                                : g.margin >= -3.0 * (g.seminorm_error + g.gsr_error);
            row["pass"] = ok;
            violation = violation || !ok;
            trials.push_back(row);
        }
        out["mode"] = "half_space";
    } else {
        const Domain ball = Domain::unit_ball(cfg.params.N);
        for (long t = 0; t < cfg.trial_count; ++t) {
            SplitMix64 rng(trial_seed(cfg.seed, static_cast<std::uint64_t>(t)));
            const TrialFunction tf = random_mollifier_in(ball, rng, 0.10);
            const GridFunction u = sample(tf, ball, cfg.quad.resolution);
            const GsrDecomposition g = gsr_ball(u, cfg.params.s, cfg.quad);
            json row = to_json(g);
            row["trial"] = t;
            const bool ok = g.margin >= -3.0 * (g.seminorm_error + g.hardy_error +
                                                g.gsr_error);
            row["pass"] = ok;
            violation = violation || !ok;
            trials.push_back(row);
        }
        out["mode"] = "ball";
    }

    out["trials"] = trials;
    out["all_pass"] = !violation;
    emit_json(cfg, out);
    return violation ? 1 : 0;
}

int run_onedim(const fraclab::RunConfig& cfg) {
    using namespace fraclab;
    FracParams params = cfg.params;
    params.N = 1;
    params.validate_hardy();

    // randomized GRR suite on piecewise-linear trials
    json grr_rows = json::array();
    long violations = 0;
    double min_ratio = inf;
    for (long t = 0; t < cfg.trial_count; ++t) {
        SplitMix64 rng(trial_seed(cfg.seed, static_cast<std::uint64_t>(t)));
        std::vector<double> knots(16);
        for (auto& k : knots) k = rng.next_in(-1.0, 1.0);
        const TrialFunction tf = make_pwl(knots);
        auto f = tf.eval;
        const GrrResult g = grr_lower_bound(
            [f](double x) { return f(Point{x, 0, 0}); }, 0.0, 1.0, params.p, params.s,
            cfg.quad);
        const bool ok = g.grr_rhs == 0.0 ||
                        g.double_integral >= g.grr_rhs * (1.0 - 1e-9) - g.error;
        if (!ok) ++violations;
        if (g.grr_rhs > 0.0) min_ratio = std::min(min_ratio, g.ratio);
        json row;
        row["trial"] = t;
        row["lhs"] = g.double_integral;
        row["rhs"] = g.grr_rhs;
        row["ratio"] = g.ratio;
        grr_rows.push_back(row);
    }

    // interval Hardy-with-remainder for the canonical boundary-power bump
    const double theta = (params.ps() - 1.0) / params.p;
    IntervalTrial bump{[theta](double x) {
                           return x <= 0.0 ? 0.0 : std::pow(x, theta) * std::sin(pi * x);
                       },
                       0.0, 1.0};
    const IntervalRemainderReport rep =
        interval_remainder_check(bump, params, cfg.quad, cfg.cp);
    const bool interval_ok =
        rep.margin >= -3.0 * (rep.lhs_error + rep.gsr_error);

    // key-inequality ratio for a centered bump
    const double q = cfg.q_override >= 1.0 ? cfg.q_override : 8.0;
    IntervalTrial key_bump{[](double x) {
                               const double t = 1.0 - 4.0 * x * x;
                               return t > 0.0 ? std::exp(1.0 - 1.0 / t) : 0.0;
                           },
                           -1.0, 1.0};
    const KeyRatioResult key = key_inequality_ratio(key_bump, params, q, cfg.quad);

    if (cfg.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : grr_rows)
            rows.push_back({std::to_string(r["trial"].get<long>()),
                            csv_num(r["lhs"].get<double>()),
                            csv_num(r["rhs"].get<double>()),
                            csv_num(r["ratio"].get<double>())});
        emit_text(cfg, csv_text({"trial", "lhs", "rhs", "ratio"}, rows));
        return (violations > 0 || !interval_ok) ? 1 : 0;
    }

    json out;
    out["grr_trials"] = grr_rows;
    out["grr_violations"] = violations;
    out["grr_min_ratio"] = min_ratio;
    out["interval_check"] = to_json(rep);
    out["interval_check"]["pass"] = interval_ok;
    json kj;
    kj["ratio"] = key.ratio;
    kj["remainder"] = key.remainder;
    kj["sup_norm"] = key.sup_norm;
    kj["lq"] = key.lq;
    kj["skipped"] = key.skipped;
    out["key_ratio"] = kj;
    emit_json(cfg, out);
    return (violations > 0 || !interval_ok) ? 1 : 0;
}

int run_verify_hardy(const fraclab::RunConfig& cfg) {
    using namespace fraclab;
    const Domain domain =
        cfg.domain.is_null() ? Domain::unit_ball(cfg.params.N) : parse_domain(cfg.domain);
    cfg.params.validate_hardy();
    const WeightMode mode = parse_weight_mode(cfg.weight_mode);
    const double D = hardy_constant(cfg.params.N, cfg.params.p, cfg.params.s);

    json trials = json::array();
    bool violation = false;
    for (long t = 0; t < cfg.trial_count; ++t) {
        SplitMix64 rng(trial_seed(cfg.seed, static_cast<std::uint64_t>(t)));
        const TrialFunction tf = random_trial(domain, rng);
        const GridFunction u = sample(tf, domain, cfg.quad.resolution);
        const SeminormResult sem = gagliardo_seminorm(u, cfg.params, cfg.quad);
        const double hardy = hardy_term(u, cfg.params, mode, cfg.angular_nodes);
        double hardy_err = 0.0;
        if (u.resolution % 2 == 0) {
            const GridFunction uc = coarsen(u);
            hardy_err = std::abs(hardy - hardy_term(uc, cfg.params, mode,
                                                    cfg.angular_nodes)) / 3.0;
        }
        const double remainder = sem.value - D * hardy;
        const double budget = 3.0 * (sem.error + D * hardy_err);
        const bool ok = remainder >= -budget;
        violation = violation || !ok;
        json row;
        row["trial"] = t;
        row["seminorm"] = sem.value;
        row["hardy"] = hardy;
        row["remainder"] = remainder;
        row["error_budget"] = budget;
        row["pass"] = ok;
        trials.push_back(row);
    }
    json out;
    out["D"] = D;
    out["domain"] = domain_to_json(domain);
    out["weight_mode"] = cfg.weight_mode;
    out["trials"] = trials;
    out["all_pass"] = !violation;
    emit_json(cfg, out);
    return violation ? 1 : 0;
}

int run_verify_hsm(const fraclab::RunConfig& cfg) {
    using namespace fraclab;
    const Domain domain =
        cfg.domain.is_null() ? Domain::unit_ball(cfg.params.N) : parse_domain(cfg.domain);
    const WeightMode mode = parse_weight_mode(cfg.weight_mode);

    json trials = json::array();
    bool violation = false;
    double min_sigma = inf;
    long flagged = 0;
    for (long t = 0; t < cfg.trial_count; ++t) {
        SplitMix64 rng(trial_seed(cfg.seed, static_cast<std::uint64_t>(t)));
        const TrialFunction tf = random_trial(domain, rng);
        const GridFunction u = sample(tf, domain, cfg.quad.resolution);
        const InequalityReport rep =
            hsm_report(u, cfg.params, mode, cfg.quad, cfg.q_override, cfg.angular_nodes);
        json row = to_json(rep);
        row["trial"] = t;
        if (!(rep.remainder > 0.0)) {
            // nonpositive remainder is flagged, never silently dropped
            row["flagged"] = true;
            ++flagged;
            violation = true;
        } else {
            row["flagged"] = false;
            min_sigma = std::min(min_sigma, rep.sigma_emp);
            if (!(rep.sigma_emp > 0.0)) violation = true;
        }
        trials.push_back(row);
    }
    if (cfg.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : trials)
            rows.push_back({std::to_string(r["trial"].get<long>()),
                            csv_num(r["seminorm"].get<double>()),
                            csv_num(r["remainder"].get<double>()),
                            csv_num(r["sigma_emp"].get<double>())});
        emit_text(cfg, csv_text({"trial", "seminorm", "remainder", "sigma_emp"}, rows));
        return violation ? 1 : 0;
    }
    json out;
    out["trials"] = trials;
    out["min_sigma_emp"] = min_sigma;
    out["flagged_count"] = flagged;
    out["all_positive"] = !violation;
    emit_json(cfg, out);
    return violation ? 1 : 0;
}

int run_estimate_sigma(const fraclab::RunConfig& cfg) {
    using namespace fraclab;
    const Domain domain =
        cfg.domain.is_null() ? Domain::unit_ball(cfg.params.N) : parse_domain(cfg.domain);
    const WeightMode mode = parse_weight_mode(cfg.weight_mode);

    SigmaSearchOptions opts;
    opts.seed = cfg.seed;
    opts.restarts = 3;
    opts.iters = static_cast<int>(std::max<long>(10, cfg.trial_count));
    const TrialFamily family = make_ball_bump_family(domain);
    const SigmaSearchResult sr =
        minimize_sigma(family, domain, cfg.params, mode, cfg.quad, opts);

    json out;
    out["min_sigma_emp"] = sr.sigma;
    out["theta"] = sr.theta;
    out["evals"] = sr.evals;
    out["flagged"] = sr.flagged;

    // constant-chain sigma bound: from the configured c_1d, or from a fresh
    // one-dimensional key-constant maximization when none is given
    double c1d = cfg.c1d;
    if (!(c1d > 0.0)) {
        FracParams p1 = cfg.params;
        p1.N = 1;
        QuadratureSpec q1 = cfg.quad;
        q1.resolution = std::min(q1.resolution, 128);
        const double q = cfg.q_override >= 1.0 ? cfg.q_override : cfg.params.q();
        const KeyRatioSearch ks = maximize_key_ratio(p1, q, q1, cfg.seed, 3, 60);
        c1d = ks.best_ratio;
        out["c1d_source"] = "maximize_key_ratio";
    } else {
        out["c1d_source"] = "config";
    }
    out["c1d"] = c1d;
    const double bound = assemble_sigma_bound(c1d, cfg.params);
    out["sigma_bound"] = bound;
    // logged, not asserted: both sides are estimates
    out["bound_leq_empirical"] = bound <= sr.sigma;

    emit_json(cfg, out);
    return sr.sigma > 0.0 ? 0 : 1;
}

int run_decomposition_check(const fraclab::RunConfig& cfg) {
    using namespace fraclab;
    if (cfg.params.N != 2)
        throw config_error("decomposition-check: N = 2 required");
    const Domain ball = Domain::unit_ball(2);
    json trials = json::array();
    bool violation = false;
    const int angles = cfg.angular_nodes;
    for (long t = 0; t < cfg.trial_count; ++t) {
        SplitMix64 rng(trial_seed(cfg.seed, static_cast<std::uint64_t>(t)));
        const TrialFunction tf = random_mollifier_in(ball, rng, 0.10);
        const GridFunction u = sample(tf, ball, cfg.quad.resolution);
        const DecompositionResult d =
            directional_decomposition_check(u, cfg.params, angles, cfg.quad);
        const bool ok = d.rel_gap <= 0.02;
        violation = violation || !ok;
        json row;
        row["trial"] = t;
        row["direct"] = d.direct;
        row["averaged"] = d.averaged;
        row["rel_gap"] = d.rel_gap;
        row["pass"] = ok;
        trials.push_back(row);
    }
    json out;
    out["angular_nodes"] = angles;
    out["trials"] = trials;
    out["all_pass"] = !violation;
    emit_json(cfg, out);
    return violation ? 1 : 0;
}

int run_plot_data(const fraclab::RunConfig& cfg, const std::string& figure) {
    using namespace fraclab;
    if (figure == "w-sweep") {
        FracParams p = cfg.params;
        p.N = 1;
        p.validate_hardy();
        std::vector<std::vector<std::string>> rows;
        const int K = static_cast<int>(std::max<long>(cfg.trial_count, 2));
        for (int i = 0; i < K; ++i) {
            // log-spaced abscissae covering both endpoint regimes
            const double t = static_cast<double>(i) / (K - 1);
            const double x = std::pow(10.0, -4.0 + t * (std::log10(1.0 - 1e-4) + 4.0));
            rows.push_back(
                {csv_num(x), csv_num(remainder_potential_W(x, p.p, p.s, cfg.quad))});
        }
        emit_text(cfg, csv_text({"x", "W"}, rows));
        return 0;
    }
    if (figure == "sigma-sweep") {
        if (cfg.trial_count < 1) throw config_error("plot-data: empty trial set");
        const Domain ball = Domain::unit_ball(2);
        std::vector<std::vector<std::string>> rows;
        for (double s : {0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9}) {
            FracParams p{2, 2.0, s};
            SplitMix64 rng(cfg.seed);
            const TrialFunction tf = random_mollifier_in(ball, rng, 0.10);
            const GridFunction u = sample(tf, ball, cfg.quad.resolution);
            const InequalityReport rep =
                hsm_report(u, p, WeightMode::pseudodistance, cfg.quad, cfg.q_override,
                           cfg.angular_nodes);
            rows.push_back({csv_num(s), csv_num(rep.sigma_emp),
                            csv_num(rep.remainder_error / rep.lq)});
        }
        emit_text(cfg, csv_text({"s", "sigma_emp", "error"}, rows));
        return 0;
    }
    if (figure == "constants-table") {
        std::vector<std::vector<std::string>> rows;
        for (double s : {0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95}) {
            FracParams p{cfg.params.N, cfg.params.p, s};
            const ConstantBundle c = make_constants(p);
            rows.push_back({csv_num(s), csv_num(c.hardy), csv_num(c.c1), csv_num(c.c2),
                            csv_num(c.grr)});
        }
        emit_text(cfg, csv_text({"s", "D", "c1", "c2", "grr"}, rows));
        return 0;
    }
    throw config_error("plot-data: unknown figure '" + figure + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical verification toolkit for fractional Hardy and "
                 "Hardy-Sobolev-Maz'ya inequalities"};
    app.require_subcommand(1);
    app.fallthrough(true);

    std::string config_path, out_path, format, weight_mode, figure = "w-sweep";
    int N = 0, resolution = 0, workers = -1, angular = 0;
    double p = 0.0, s = 0.0, q = 0.0, c1d = 0.0, cp = -1.0;
    long trials = -1;
    std::uint64_t seed = 0;
    bool seed_given = false;

    app.add_option("--config", config_path, "JSON run-configuration file");
    app.add_option("--N", N, "dimension (1, 2 or 3)");
    app.add_option("--p", p, "integrability exponent p");
    app.add_option("--s", s, "differentiability order s in (0,1)");
    app.add_option("--resolution", resolution, "grid cells per axis");
    auto* seed_opt = app.add_option("--seed", seed, "64-bit master seed");
    app.add_option("--trials", trials, "number of trials / sweep points");
    app.add_option("--out", out_path, "output path (default: stdout)");
    app.add_option("--format", format, "output format: json | csv");
    app.add_option("--workers", workers, "worker thread count (0 = serial default)");
    app.add_option("--q", q, "L^q exponent override");
    app.add_option("--weight", weight_mode,
                   "weight mode: pseudodistance | boundary_distance | coordinate | "
                   "ball_proxy");
    app.add_option("--angular-nodes", angular, "angular quadrature nodes");
    app.add_option("--c1d", c1d, "one-dimensional key constant for estimate-sigma");
    app.add_option("--cp", cp, "GSR constant c_p for p > 2");

    auto* cmd_constants = app.add_subcommand("constants", "closed-form constant bundle");
    auto* cmd_mdist = app.add_subcommand("mdist", "pseudodistance table m_alpha vs d");
    auto* cmd_seminorm = app.add_subcommand("seminorm", "Gagliardo seminorm trials");
    auto* cmd_gsr = app.add_subcommand("gsr-check", "ground-state decompositions");
    auto* cmd_onedim = app.add_subcommand("onedim", "1D suite: GRR, interval, key ratio");
    auto* cmd_vhardy = app.add_subcommand("verify-hardy", "Hardy remainder positivity");
    auto* cmd_vhsm = app.add_subcommand("verify-hsm", "HSM sigma positivity");
    auto* cmd_sigma = app.add_subcommand("estimate-sigma", "minimize sigma + bound chain");
    auto* cmd_decomp = app.add_subcommand("decomposition-check", "line-average identity");
    auto* cmd_plot = app.add_subcommand("plot-data", "plot-ready CSV series");
    cmd_plot->add_option("--figure", figure,
                         "figure: w-sweep | sigma-sweep | constants-table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }
    seed_given = seed_opt->count() > 0;

    try {
        fraclab::RunConfig cfg;
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is)
                throw fraclab::config_error("cannot read config file: " + config_path);
            json j;
            try {
                j = json::parse(is);
            } catch (const json::exception& e) {
                throw fraclab::config_error(std::string("config parse error: ") +
                                            e.what());
            }
            cfg = fraclab::parse_run_config(j);
        }
        // command-line flags override file values
        if (N > 0) cfg.params.N = N;
        if (p > 0.0) cfg.params.p = p;
        if (s > 0.0) cfg.params.s = s;
        if (resolution > 0) cfg.quad.resolution = resolution;
        if (seed_given) cfg.seed = seed;
        if (trials >= 0) cfg.trial_count = trials;
        if (!out_path.empty()) cfg.out_path = out_path;
        if (!format.empty()) {
            if (format != "json" && format != "csv")
                throw fraclab::config_error("--format must be json or csv");
            cfg.format = format;
        }
        if (workers >= 0) cfg.workers = workers;
        if (q > 0.0) cfg.q_override = q;
        if (!weight_mode.empty()) cfg.weight_mode = weight_mode;
        if (angular > 0) cfg.angular_nodes = angular;
        if (c1d > 0.0) cfg.c1d = c1d;
        if (cp >= 0.0) cfg.cp = cp;

        cfg.params.validate_basic();
        cfg.quad.validate();
        (void)fraclab::parse_weight_mode(cfg.weight_mode);
        if (cfg.workers > 0) fraclab::set_workers(cfg.workers);

        if (cmd_constants->parsed()) {
            cfg.command = "constants";
            return run_constants(cfg);
        }
        if (cmd_mdist->parsed()) {
            cfg.command = "mdist";
            return run_mdist(cfg);
        }
        if (cmd_seminorm->parsed()) {
            cfg.command = "seminorm";
            return run_seminorm(cfg);
        }
        if (cmd_gsr->parsed()) {
            cfg.command = "gsr-check";
            return run_gsr_check(cfg);
        }
        if (cmd_onedim->parsed()) {
            cfg.command = "onedim";
            return run_onedim(cfg);
        }
        if (cmd_vhardy->parsed()) {
            cfg.command = "verify-hardy";
            return run_verify_hardy(cfg);
        }
        if (cmd_vhsm->parsed()) {
            cfg.command = "verify-hsm";
            return run_verify_hsm(cfg);
        }
        if (cmd_sigma->parsed()) {
            cfg.command = "estimate-sigma";
            return run_estimate_sigma(cfg);
        }
        if (cmd_decomp->parsed()) {
            cfg.command = "decomposition-check";
            return run_decomposition_check(cfg);
        }
        if (cmd_plot->parsed()) {
            cfg.command = "plot-data";
            return run_plot_data(cfg, figure);
        }
        throw fraclab::config_error("no subcommand selected");
    } catch (const fraclab::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const fraclab::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const fraclab::convergence_error& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
