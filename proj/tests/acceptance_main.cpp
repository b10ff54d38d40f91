// Acceptance gate: one line per criterion, PASS/FAIL/XFAIL, with the measured
// numbers inline.  Exit code 0 iff every counted criterion passes; XFAIL
// entries document known-defective claims (measured value reported alongside
// the claimed one) and are not counted.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fraclab/core.hpp"
#include "fraclab/geometry.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/gsr.hpp"
#include "fraclab/onedim.hpp"
#include "fraclab/pv.hpp"
#include "fraclab/seminorm.hpp"
#include "fraclab/special.hpp"
#include "fraclab/verify.hpp"

using namespace fraclab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// Regression baselines frozen from the first full acceptance run of this
// implementation (they are implementation anchors, not external values).
constexpr double kMinSigmaTrials = 40.73006796;  // criterion 13, 50-trial min
constexpr double kMinSigmaSearch = 40.62720458;  // criterion 13, search min

// --- criterion 1 -----------------------------------------------------------
Outcome c1_constants_closed_form() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int N = 1; N <= 3; ++N)
        for (int k = 0; k < 9; ++k) {
            const double s = 0.55 + 0.05 * k;
            const double a = hardy_constant(N, 2.0, s);
            const double b = hardy_constant_closed_p2(N, s);
            worst = std::max(worst, std::abs(a - b) / std::abs(b));
        }
    const double dt = seconds_since(t0);
    return {worst <= 1e-8 && dt < 1.0,
            "max rel dev " + fmt(worst) + ", " + fmt(dt) + " s (cap 1 s)"};
}

// --- criterion 2 -----------------------------------------------------------
Outcome c2_product_structure() {
    double worst_prod = 0.0, worst_c1 = 0.0;
    for (int k = 0; k < 9; ++k) {
        const double s = 0.55 + 0.05 * k;
        const double d1 = hardy_constant(1, 2.0, s);
        for (int N = 1; N <= 3; ++N) {
            const double dn = hardy_constant(N, 2.0, s);
            const double prod = d1 * 0.5 * sphere_moment(N, 2.0 * s);
            worst_prod = std::max(worst_prod, std::abs(dn - prod) / std::abs(dn));
        }
        const IntervalConstants ic = interval_constants(s);
        const double want = std::pow(2.0, 2.0 * s - 1.0) * hardy_constant_closed_p2(1, s);
        worst_c1 = std::max(worst_c1, std::abs(ic.c1 - want) / std::abs(want));
    }
    return {worst_prod <= 1e-8 && worst_c1 <= 1e-10,
            "product dev " + fmt(worst_prod) + ", c1 identity dev " + fmt(worst_c1)};
}

// --- criterion 3 -----------------------------------------------------------
Outcome c3_pseudodistance() {
    const Domain hs = Domain::upper_half_space(2);
    SplitMix64 rng(31);
    double worst_hs = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double hgt = rng.next_in(0.05, 2.0);
        const Point x{rng.next_in(-2.0, 2.0), hgt, 0};
        const double m = hs.pseudodistance(x, 1.5, 1024);
        worst_hs = std::max(worst_hs, std::abs(m - hgt) / hgt);
    }

    const Domain iv = Domain::interval(-1.0, 1.0);
    double worst_iv = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double x = rng.next_in(-0.999, 0.999);
        const double m = iv.pseudodistance(Point{x, 0, 0}, 1.5);
        worst_iv = std::max(worst_iv, std::abs(m - (1.0 - std::abs(x))));
    }

    const Domain convex[] = {
        Domain::unit_ball(2), Domain::interval(-1.0, 1.0),
        Domain::convex_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}),
        Domain::upper_half_space(2)};
    long violations = 0;
    for (const Domain& dom : convex) {
        Box bb;
        if (!dom.bounding_box(bb)) {
            bb.lo = {-2, 0, 0};
            bb.hi = {2, 2, 0};
        }
        int tested = 0;
        while (tested < 200) {
            Point x{0, 0, 0};
            for (int k = 0; k < dom.dim(); ++k) x[k] = rng.next_in(bb.lo[k], bb.hi[k]);
            if (!dom.contains(x)) continue;
            ++tested;
            if (dom.pseudodistance(x, 1.5) > dom.dist_to_complement(x) + 1e-9)
                ++violations;
        }
    }
    return {worst_hs <= 1e-6 && worst_iv <= 1e-9 && violations == 0,
            "half-space rel dev " + fmt(worst_hs) + ", interval dev " + fmt(worst_iv) +
                ", convexity violations " + std::to_string(violations) + "/800"};
}

// --- criterion 4 -----------------------------------------------------------
Outcome c4_ball_center() {
    const Domain ball = Domain::unit_ball(2);
    const double m = ball.pseudodistance(Point{0, 0, 0}, 1.5, 256);
    const double proxy = ball_proxy(1.0, Point{0, 0, 0}, 2);
    return {std::abs(m - 0.67648) <= 1e-4 && m > proxy,
            "m = " + fmt(m) + " (claimed 0.67648 +- 1e-4), proxy = " + fmt(proxy)};
}

// --- criterion 5 -----------------------------------------------------------
Outcome c5_halfline_gsr() {
    const auto t0 = Clock::now();
    const Domain hs = Domain::upper_half_space(1);
    const FracParams params{1, 2.0, 0.75};
    QuadratureSpec quad;
    quad.resolution = 256;
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        SplitMix64 rng(trial_seed(505, static_cast<std::uint64_t>(t)));
        const double c = rng.next_in(0.3, 0.7);
        const double r = rng.next_in(0.1, std::min(0.25, c - 0.05));
        const double amp = rng.next_in(0.5, 2.0);
        const GridFunction u = sample(make_mollifier(1, Point{c, 0, 0}, r, amp), hs, 256);
        const GsrDecomposition g = gsr_halfspace(u, params, quad);
        worst = std::max(worst, g.rel_gap);
    }
    const double dt = seconds_since(t0);
    return {worst < 0.02 && dt < 120.0,
            "max |remainder-J|/J = " + fmt(worst) + " over 20 trials, " + fmt(dt) +
                " s (cap 120 s)"};
}

// --- criterion 6 -----------------------------------------------------------
Outcome c6a_center_value_as_claimed() {
    // Claimed: -L w_1(0) = B(s+1/2, 1-s)/(2s).  The PV quadrature and the
    // closed form agree on (B - 2)/(2s) instead; the claim omits the "-2".
    const Domain iv = Domain::interval(-1.0, 1.0);
    QuadratureSpec quad;
    std::string detail;
    bool as_claimed = true;
    for (double s : {0.6, 0.75, 0.9}) {
        auto w = [s](const Point& x) {
            const double t = 1.0 - x[0] * x[0];
            return t > 0.0 ? std::pow(t, 0.5 * (2.0 * s - 1.0)) : 0.0;
        };
        const PvResult pv = pv_regional_laplacian(w, iv, Point{0, 0, 0}, s, quad);
        const double measured = -pv.value;
        const double claimed = beta_fn(s + 0.5, 1.0 - s) / (2.0 * s);
        const double actual = (beta_fn(s + 0.5, 1.0 - s) - 2.0) / (2.0 * s);
        if (std::abs(measured - claimed) > 1e-3 * claimed) as_claimed = false;
        detail += "s=" + fmt(s) + ": measured " + fmt(measured) + ", claimed " +
                  fmt(claimed) + ", (B-2)/(2s) " + fmt(actual) + "; ";
    }
    return {as_claimed, detail};
}

Outcome c6b_explicit_vs_pv() {
    const Domain iv = Domain::interval(-1.0, 1.0);
    QuadratureSpec quad;
    double worst = 0.0;
    for (double s : {0.6, 0.75, 0.9})
        for (double x : {-0.5, 0.5}) {
            auto w = [s](const Point& y) {
                const double t = 1.0 - y[0] * y[0];
                return t > 0.0 ? std::pow(t, 0.5 * (2.0 * s - 1.0)) : 0.0;
            };
            const PvResult pv =
                pv_regional_laplacian(w, iv, Point{x, 0, 0}, s, quad);
            const double want = regional_laplacian_w1_explicit(x, s);
            worst = std::max(worst, std::abs(-pv.value - want) / want);
        }
    return {worst <= 1e-3, "max rel dev explicit vs PV at x=+-0.5: " + fmt(worst)};
}

Outcome c6c_lower_bound_holds() {
    long violations = 0;
    for (double s : {0.6, 0.75, 0.9})
        for (int j = 0; j < 50; ++j) {
            const double x = -0.98 + j * (1.96 / 49.0);
            if (lw1_lower_bound(x, s) > regional_laplacian_w1_explicit(x, s) + 1e-12)
                ++violations;
        }
    return {violations == 0,
            "violations " + std::to_string(violations) + "/150 sample points"};
}

// --- criterion 7 -----------------------------------------------------------
Outcome c7_ball_lower_bound() {
    const auto t0 = Clock::now();
    QuadratureSpec quad;
    quad.resolution = 96;
    bool ok = true;
    std::string detail;
    for (double s : {0.6, 0.75})
        for (double r : {0.0, 0.25, 0.5, 0.75}) {
            const BallBoundResult b =
                ball_laplacian_lower_bound(Point{r, 0, 0}, s, 2, quad, 64);
            const bool here = b.pv_value >= b.bound_value - 3.0 * b.pv_error;
            ok = ok && here;
            if (!here)
                detail += "VIOLATION s=" + fmt(s) + " |x|=" + fmt(r) + " pv " +
                          fmt(b.pv_value) + " bound " + fmt(b.bound_value) + "; ";
        }
    const double dt = seconds_since(t0);
    detail += fmt(dt) + " s (cap 600 s)";
    return {ok && dt < 600.0, detail};
}

// --- criterion 8 -----------------------------------------------------------
Outcome c8_grr() {
    QuadratureSpec quad;
    quad.resolution = 128;
    long violations = 0;
    double min_ratio = inf;
    for (int t = 0; t < 1000; ++t) {
        SplitMix64 rng(trial_seed(808, static_cast<std::uint64_t>(t)));
        std::vector<double> knots(16);
        for (auto& k : knots) k = rng.next_in(-1.0, 1.0);
        const TrialFunction tf = make_pwl(knots);
        auto ev = tf.eval;
        const GrrResult g = grr_lower_bound(
            [ev](double x) { return ev(Point{x, 0, 0}); }, 0.0, 1.0, 2.0, 0.75, quad);
        if (g.grr_rhs > 0.0) {
            if (g.double_integral < g.grr_rhs * (1.0 - 1e-9)) ++violations;
            min_ratio = std::min(min_ratio, g.ratio);
        }
    }
    const GrrResult lin =
        grr_lower_bound([](double x) { return x; }, 0.0, 1.0, 2.0, 0.75, quad);
    const bool lin_ok = std::abs(lin.double_integral - 8.0 / 3.0) <= 5e-3 * (8.0 / 3.0) &&
                        std::abs(lin.grr_rhs - 1.5625e-4) <= 1e-15 &&
                        lin.double_integral > lin.grr_rhs;
    return {violations == 0 && lin_ok,
            "violations " + std::to_string(violations) + "/1000, min ratio " +
                fmt(min_ratio) + ", linear-f integral " + fmt(lin.double_integral) +
                " (exact 8/3)"};
}

// --- criterion 9 -----------------------------------------------------------
Outcome c9_potential_asymptotics() {
    QuadratureSpec quad;
    const double p = 2.0, s = 0.75;
    // Probe deep: the leading power at 0 carries a slowly decaying
    // correction (~x^{1/4} here) that still shifts the measured log-slope to
    // -0.295 across [1e-4, 1e-2]; across [1e-8, 1e-6] it has settled.
    const double a0 = remainder_potential_W(1e-8, p, s, quad);
    const double b0 = remainder_potential_W(1e-6, p, s, quad);
    const double slope0 =
        (std::log(b0) - std::log(a0)) / (std::log(1e-6) - std::log(1e-8));
    const double want0 = -(p - 1.0) * (p * s - 1.0) / p;

    const double a1 = remainder_potential_W(0.99, p, s, quad);
    const double b1 = remainder_potential_W(0.9999, p, s, quad);
    const double slope1 = (std::log(b1) - std::log(a1)) /
                          (std::log(1.0 - 0.9999) - std::log(1.0 - 0.99));
    const double want1 = -(1.0 + p * s - p);

    double worst_tail = 0.0;
    for (double ss : {0.6, 0.75, 0.9}) {
        auto g = [ss](double t) {
            const double y = 1.0 + t / (1.0 - t);
            return std::pow(y, -0.5 * (2.0 * ss + 3.0)) / ((1.0 - t) * (1.0 - t));
        };
        const QuadResult r = adaptive_gk15(g, 0.0, 1.0, 1e-12);
        worst_tail = std::max(worst_tail, std::abs(r.value - 2.0 / (2.0 * ss + 1.0)));
    }

    const bool ok = std::abs(slope0 - want0) <= 0.05 * std::abs(want0) &&
                    std::abs(slope1 - want1) <= 0.05 * std::abs(want1) &&
                    worst_tail <= 1e-6;
    return {ok, "slope near 0: " + fmt(slope0) + " (want " + fmt(want0) +
                    "), slope near 1: " + fmt(slope1) + " (want " + fmt(want1) +
                    "), tail-constant dev " + fmt(worst_tail)};
}

// --- criterion 10 ----------------------------------------------------------
Outcome c10_scale_invariance() {
    const FracParams params{1, 2.0, 0.75};
    QuadratureSpec quad;
    quad.resolution = 128;
    const double q = 8.0;
    long checked = 0, failed = 0;
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        SplitMix64 rng(trial_seed(1010, static_cast<std::uint64_t>(t)));
        const double w = rng.next_in(0.2, 0.7);
        const double c = rng.next_in(-(1.0 - w - 0.05), 1.0 - w - 0.05);
        const double kap = rng.next_in(1.5, 3.0);
        auto f = [c, w, kap](double x) {
            const double u = 1.0 - ((x - c) / w) * ((x - c) / w);
            return u > 0.0 ? std::pow(u, kap) : 0.0;
        };
        const KeyRatioResult r1 =
            key_inequality_ratio(IntervalTrial{f, -1.0, 1.0}, params, q, quad);
        if (r1.skipped) continue;
        for (double lam : {0.5, 2.0, 10.0}) {
            const KeyRatioResult rl = key_inequality_ratio(
                IntervalTrial{[f, lam](double x) { return f(lam * x); }, -1.0 / lam,
                              1.0 / lam},
                params, q, quad);
            if (rl.skipped) continue;
            ++checked;
            const double tol = 2.0 * (r1.error + rl.error) + 1e-9 * r1.ratio;
            const double dev = std::abs(rl.ratio - r1.ratio);
            worst = std::max(worst, dev / r1.ratio);
            if (dev > tol) ++failed;
        }
    }
    return {checked >= 25 && failed == 0,
            std::to_string(checked) + " scale pairs, " + std::to_string(failed) +
                " outside 2*error, worst rel dev " + fmt(worst)};
}

// --- criterion 11 ----------------------------------------------------------
Outcome c11_directional_decomposition() {
    const Domain ball = Domain::unit_ball(2);
    const FracParams params{2, 2.0, 0.75};
    QuadratureSpec quad;
    quad.resolution = 128;
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
        SplitMix64 rng(trial_seed(1111, static_cast<std::uint64_t>(t)));
        const TrialFunction tf = random_mollifier_in(ball, rng, 0.10);
        const GridFunction u = sample(tf, ball, 128);
        const DecompositionResult d =
            directional_decomposition_check(u, params, 256, quad);
        worst = std::max(worst, d.rel_gap);
    }
    return {worst <= 0.02, "max rel gap " + fmt(worst) + " over 5 trials (res 128, 256 "
                           "angles)"};
}

// --- criterion 12 ----------------------------------------------------------
Outcome c12_reflection() {
    const Domain hs = Domain::upper_half_space(2);
    const FracParams params{2, 2.0, 0.75};
    QuadratureSpec quad;
    quad.resolution = 48;
    double rmin = inf, rmax = -inf, gap = 0.0;
    for (int t = 0; t < 20; ++t) {
        SplitMix64 rng(trial_seed(1212, static_cast<std::uint64_t>(t)));
        // Two boundary-centered bumps per trial: a single translated/dilated
        // bump gives the exact same discrete ratio every time (the ratio is
        // scale- and translation-invariant), so vary the relative geometry
        // instead.  The box stays square and symmetric in the last axis.
        const double cx1 = rng.next_in(-0.4, 0.0);
        const double r1 = rng.next_in(0.2, 0.5);
        const double cx2 = rng.next_in(0.0, 0.4);
        const double r2 = rng.next_in(0.2, 0.5);
        const double a2 = rng.next_in(0.3, 1.5);
        const TrialFunction b1 = make_mollifier(2, Point{cx1, 0.0, 0}, r1);
        const TrialFunction b2 = make_mollifier(2, Point{cx2, 0.0, 0}, r2, a2);
        TrialFunction f;
        f.family = "two_bump";
        f.theta = {cx1, r1, cx2, r2, a2};
        f.N = 2;
        const double xlo = std::min(cx1 - r1, cx2 - r2);
        const double xhi = std::max(cx1 + r1, cx2 + r2);
        const double half = 0.5 * (xhi - xlo);
        f.box.lo[0] = xlo;
        f.box.hi[0] = xhi;
        f.box.lo[1] = -half;
        f.box.hi[1] = half;
        f.eval = [b1, b2](const Point& x) { return b1.eval(x) + b2.eval(x); };
        const GridFunction u = sample(f, hs, 48);
        const ReflectionResult rr = sobolev_reflection_ratio(u, params, quad);
        rmin = std::min(rmin, rr.ratio);
        rmax = std::max(rmax, rr.ratio);
        gap = std::max(gap, rr.identity_gap);
    }
    const bool ok = rmin >= 2.0 - 1e-9 && rmax <= 4.0 + 1e-3 && gap <= 0.01;
    return {ok, "ratio range [" + fmt(rmin) + ", " + fmt(rmax) + "], max identity gap " +
                    fmt(gap)};
}

// --- criterion 13 ----------------------------------------------------------
Outcome c13_hsm_positivity() {
    const Domain ball = Domain::unit_ball(2);
    const FracParams params{2, 2.0, 0.75};
    QuadratureSpec quad;
    quad.resolution = 48;
    double min_sigma = inf;
    long nonpositive = 0;
    for (int t = 0; t < 50; ++t) {
        SplitMix64 rng(trial_seed(1313, static_cast<std::uint64_t>(t)));
        const TrialFunction tf = random_mollifier_in(ball, rng, 0.08);
        const GridFunction u = sample(tf, ball, 48);
        const InequalityReport rep =
            hsm_report(u, params, WeightMode::pseudodistance, quad, 8.0, 128);
        if (!(rep.sigma_emp > 0.0)) ++nonpositive;
        min_sigma = std::min(min_sigma, rep.sigma_emp);
    }

    QuadratureSpec qsearch;
    qsearch.resolution = 32;
    SigmaSearchOptions opts;
    opts.seed = 13;
    opts.restarts = 2;
    opts.iters = 40;
    const SigmaSearchResult sr = minimize_sigma(make_ball_bump_family(ball), ball,
                                                params, WeightMode::pseudodistance,
                                                qsearch, opts);

    bool regression_ok = true;
    std::string reg;
    if (kMinSigmaTrials > 0.0) {
        regression_ok = std::abs(min_sigma - kMinSigmaTrials) <= 1e-6 * kMinSigmaTrials &&
                        std::abs(sr.sigma - kMinSigmaSearch) <= 1e-6 * kMinSigmaSearch;
        reg = " (baselines " + fmt(kMinSigmaTrials) + ", " + fmt(kMinSigmaSearch) + ")";
    } else {
        reg = " (baselines pending first freeze)";
    }
    const bool ok = nonpositive == 0 && sr.sigma > 0.0 && regression_ok;
    return {ok, "50-trial min sigma_emp " + fmt(min_sigma) + ", search min " +
                    fmt(sr.sigma) + ", nonpositive " + std::to_string(nonpositive) +
                    reg};
}

// --- criterion 14 ----------------------------------------------------------
std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

Outcome c14_determinism() {
    struct Cmd {
        std::string args, stem;
    };
    const Cmd cmds[] = {
        {"verify-hsm --N 2 --p 2 --s 0.75 --trials 3 --resolution 24 --seed 7 "
         "--format json",
         "accept_hsm"},
        {"onedim --p 2 --s 0.75 --trials 5 --resolution 64 --seed 3 --format csv",
         "accept_1d"}};
    bool ok = true;
    std::string detail;
    for (const Cmd& c : cmds) {
        std::vector<std::string> outs;
        for (int w : {1, 4, 8}) {
            const std::string path = c.stem + "_w" + std::to_string(w) + ".out";
            const std::string cmd = std::string(FRACLAB_BIN) + " " + c.args +
                                    " --workers " + std::to_string(w) + " --out " +
                                    path + " >/dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0) {
                ok = false;
                detail += c.stem + ": nonzero exit at workers " + std::to_string(w) +
                          "; ";
            }
            outs.push_back(slurp(path));
            std::remove(path.c_str());
        }
        // rerun at 4 workers to confirm self-reproducibility
        const std::string cmd = std::string(FRACLAB_BIN) + " " + c.args +
                                " --workers 4 --out " + c.stem +
                                "_rerun.out >/dev/null 2>&1";
        if (std::system(cmd.c_str()) != 0) ok = false;
        const std::string rerun = slurp(c.stem + "_rerun.out");
        std::remove((c.stem + "_rerun.out").c_str());

        const bool identical = !outs[0].empty() && outs[0] == outs[1] &&
                               outs[1] == outs[2] && outs[1] == rerun;
        ok = ok && identical;
        detail += c.stem + (identical ? ": byte-identical across 1/4/8 workers and "
                                        "rerun; "
                                      : ": MISMATCH; ");
    }
    return {ok, detail};
}

} // namespace

int main() {
    struct Entry {
        std::string label;
        std::function<Outcome()> fn;
        bool xfail = false;
    };
    const std::vector<Entry> entries = {
        {"criterion 1 (closed-form Hardy constants, N=1..3)", c1_constants_closed_form},
        {"criterion 2 (constant product structure)", c2_product_structure},
        {"criterion 3 (pseudodistance exactness and convexity)", c3_pseudodistance},
        {"criterion 4 (ball-center pseudodistance vs proxy)", c4_ball_center},
        {"criterion 5 (half-line ground-state identity, 20 trials)", c5_halfline_gsr},
        {"criterion 6a (interval Laplacian center value as claimed)",
         c6a_center_value_as_claimed, true},
        {"criterion 6b (explicit formula vs PV quadrature)", c6b_explicit_vs_pv},
        {"criterion 6c (interval Laplacian lower bound)", c6c_lower_bound_holds},
        {"criterion 7 (ball Laplacian lower bound, res 96)", c7_ball_lower_bound},
        {"criterion 8 (GRR randomized suite, 1000 trials)", c8_grr},
        {"criterion 9 (remainder potential asymptotics)", c9_potential_asymptotics},
        {"criterion 10 (key-ratio scale invariance)", c10_scale_invariance},
        {"criterion 11 (planar directional decomposition)",
         c11_directional_decomposition},
        {"criterion 12 (reflection ratio window)", c12_reflection},
        {"criterion 13 (HSM positivity and minimum search)", c13_hsm_positivity},
        {"criterion 14 (byte-identical seeded reruns)", c14_determinism},
    };

    int counted_failures = 0;
    for (const Entry& e : entries) {
        Outcome out;
        try {
            out = e.fn();
        } catch (const std::exception& ex) {
            out = {false, std::string("exception: ") + ex.what()};
        }
        const char* tag;
        if (e.xfail) {
            // documented defect in the claimed value: report the measurement,
            // expected to disagree with the claim; never counted
            tag = out.pass ? "XPASS" : "XFAIL";
        } else {
            tag = out.pass ? "PASS " : "FAIL ";
            if (!out.pass) ++counted_failures;
        }
        std::cout << tag << " " << e.label << ": " << out.detail << "\n";
        std::cout.flush();
    }
    std::cout << (counted_failures == 0 ? "ACCEPTANCE OVERALL: PASS"
                                        : "ACCEPTANCE OVERALL: FAIL")
              << " (" << (entries.size() - 1 - counted_failures) << "/"
              << entries.size() - 1 << " counted criteria passed, 1 expected-fail "
              << "documented)\n";
    return counted_failures == 0 ? 0 : 1;
}
