#pragma once

// One-dimensional machinery: the remainder potential W_{p,s}, the interval
// Hardy inequality with remainder, the Garsia-Rodemich-Rumsey pointwise
// bound, and the key sup-norm inequality ratio with its simplex search.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "adaptive.hpp"
#include "core.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "nelder_mead.hpp"
#include "parallel.hpp"
#include "seminorm.hpp"
#include "special.hpp"

namespace fraclab {

struct IntervalTrial {
    std::function<double(double)> f;
    double a = 0.0;
    double b = 1.0;
};

// W_{p,s}(x) = 2 w(x)^{1-p} int_1^inf (w(y) - w(x))^{p-1} (y-x)^{-1-ps} dy,
// w(t) = t^{(ps-1)/p}.  The tail is mapped to (0,1) by y = 1 + t/(1-t); the
// transformed integrand vanishes like (1-t)^{(ps-1)/p} at t = 1.
[[nodiscard]] inline double remainder_potential_W(double x, double p, double s,
                                                  const QuadratureSpec& quad) {
    FracParams params{1, p, s};
    params.validate_basic();
    params.validate_hardy();
    quad.validate();
    if (!(x > 0.0 && x < 1.0))
        throw domain_error("remainder_potential_W: need 0 < x < 1");
    const double ps = p * s;
    const double theta = (ps - 1.0) / p;
    const double wx = std::pow(x, theta);
    auto g = [&](double t) {
        const double y = 1.0 + t / (1.0 - t);
        const double jac = 1.0 / ((1.0 - t) * (1.0 - t));
        return std::pow(std::pow(y, theta) - wx, p - 1.0) *
               std::pow(y - x, -1.0 - ps) * jac;
    };
    const QuadResult tail = adaptive_gk15(g, 0.0, 1.0, 1e-11);
    return 2.0 * std::pow(wx, 1.0 - p) * tail.value;
}

struct IntervalRemainderReport {
    double lhs = 0.0;         // Gagliardo seminorm over (0,1)
    double hardy = 0.0;       // D_{1,p,s} * int |f|^p x^{-ps}
    double gsr_term = 0.0;    // J[v] with weight w(x) = x^{(ps-1)/p}
    double zero_order = 0.0;  // int W_{p,s} |v|^p w^p
    double margin = 0.0;      // lhs - hardy - cp*gsr_term - zero_order
    double cp_used = 1.0;
    double lhs_error = 0.0;
    double gsr_error = 0.0;
    bool converged = true;
};

// Hardy-with-remainder on (0,1) for f with f(0) = 0:
//   [f]^p >= D int |f|^p x^{-ps} + c_p J[v] + int W |v|^p w^p,   v = f / w.
[[nodiscard]] inline IntervalRemainderReport interval_remainder_check(
    const IntervalTrial& trial, const FracParams& params, const QuadratureSpec& quad,
    double cp = -1.0) {
    params.validate_basic();
    params.validate_hardy();
    quad.validate();
    if (params.N != 1)
        throw domain_error("interval_remainder_check: one-dimensional only");
    if (std::abs(trial.f(0.0)) > 1e-12)
        throw domain_error("interval_remainder_check: f(0) must vanish");
    const double p = params.p, ps = params.ps();
    const double theta = (ps - 1.0) / p;

    TrialFunction tf;
    tf.family = "interval-trial";
    tf.N = 1;
    tf.box = Box{{0, 0, 0}, {1, 0, 0}};
    auto f = trial.f;
    tf.eval = [f](const Point& x) { return f(x[0]); };

    const Domain dom = Domain::interval(0.0, 1.0);
    const GridFunction u = sample(tf, dom, quad.resolution);

    IntervalRemainderReport rep;
    rep.cp_used = cp >= 0.0 ? cp : (p == 2.0 ? 1.0 : 0.0);

    const SeminormResult sem = gagliardo_seminorm(u, params, quad);
    rep.lhs = sem.value;
    rep.lhs_error = sem.error;

    const double D = hardy_constant(1, p, params.s);
    rep.hardy = D * hardy_term(u, params, WeightMode::coordinate);

    GridFunction v = u;
    std::vector<double> w(static_cast<std::size_t>(u.size()), 0.0);
    for (long i = 0; i < u.size(); ++i) {
        const auto iu = static_cast<std::size_t>(i);
        const double xi = u.node(i)[0];
        w[iu] = std::pow(xi, theta);
        v.values[iu] = u.values[iu] != 0.0 ? u.values[iu] / w[iu] : 0.0;
    }
    if (u.evaluator) {
        auto ueval = u.evaluator;
        v.evaluator = [ueval, theta](const Point& x) {
            const double uu = ueval(x);
            if (uu == 0.0) return 0.0;
            return uu * std::pow(x[0], -theta);
        };
    }
    std::function<double(const Point&)> weval = [theta](const Point& x) {
        return x[0] > 0.0 ? std::pow(x[0], theta) : 0.0;
    };
    const SeminormResult jr = weighted_seminorm(v, w, params, quad, weval);
    rep.gsr_term = jr.value;
    rep.gsr_error = jr.error;

    // zero-order potential term, W evaluated once per node in parallel
    std::vector<double> Wvals(static_cast<std::size_t>(u.size()), 0.0);
    parallel_for(u.size(), [&](std::int64_t i) {
        const auto iu = static_cast<std::size_t>(i);
        if (v.values[iu] != 0.0)
            Wvals[iu] = remainder_potential_W(u.node(i)[0], p, params.s, quad);
    });
    {
        std::vector<double> terms;
        for (long i = 0; i < u.size(); ++i) {
            const auto iu = static_cast<std::size_t>(i);
            if (v.values[iu] == 0.0) continue;
            terms.push_back(Wvals[iu] * std::pow(std::abs(v.values[iu]), p) *
                            std::pow(w[iu], p));
        }
        rep.zero_order = pairwise_sum(std::move(terms)) * u.h;
    }

    rep.margin = rep.lhs - rep.hardy - rep.cp_used * rep.gsr_term - rep.zero_order;
    rep.converged = sem.converged && jr.converged;
    return rep;
}

struct SymmetricIntervalReport {
    IntervalRemainderReport left;   // f(t-1) on (0,1), vanishing endpoint at t=0
    IntervalRemainderReport right;  // f(1-t) on (0,1), vanishing endpoint at t=0
    double full_seminorm = 0.0;     // [f]^p over (-1,1)
    double full_seminorm_error = 0.0;
    double hardy_nearest = 0.0;     // D int |f|^p dist(x, {-1,1})^{-ps}
    double combined_margin = 0.0;
};

// Symmetric interval inequality on (-1,1) for f vanishing at both endpoints,
// assembled by adding the two one-sided inequalities: the full seminorm
// dominates the sum of the half seminorms (the dropped cross terms are
// nonnegative), and the two one-sided Hardy terms add up to the
// nearest-endpoint weight.
[[nodiscard]] inline SymmetricIntervalReport symmetric_interval_check(
    const IntervalTrial& trial, const FracParams& params, const QuadratureSpec& quad,
    double cp = -1.0) {
    if (std::abs(trial.f(-1.0)) > 1e-12 || std::abs(trial.f(1.0)) > 1e-12)
        throw domain_error("symmetric_interval_check: f must vanish at -1 and 1");
    auto f = trial.f;

    SymmetricIntervalReport rep;
    IntervalTrial left{[f](double t) { return f(t - 1.0); }, 0.0, 1.0};
    IntervalTrial right{[f](double t) { return f(1.0 - t); }, 0.0, 1.0};
    rep.left = interval_remainder_check(left, params, quad, cp);
    rep.right = interval_remainder_check(right, params, quad, cp);

    TrialFunction tf;
    tf.family = "interval-trial";
    tf.N = 1;
    tf.box = Box{{-1, 0, 0}, {1, 0, 0}};
    tf.eval = [f](const Point& x) { return f(x[0]); };
    const Domain dom = Domain::interval(-1.0, 1.0);
    const GridFunction u = sample(tf, dom, quad.resolution);

    const SeminormResult sem = gagliardo_seminorm(u, params, quad);
    rep.full_seminorm = sem.value;
    rep.full_seminorm_error = sem.error;
    const double D = hardy_constant(1, params.p, params.s);
    rep.hardy_nearest = D * hardy_term(u, params, WeightMode::boundary_distance);

    const double cpu = rep.left.cp_used;
    rep.combined_margin = rep.full_seminorm - rep.hardy_nearest -
                          cpu * (rep.left.gsr_term + rep.right.gsr_term) -
                          rep.left.zero_order - rep.right.zero_order;
    return rep;
}

struct GrrResult {
    double double_integral = 0.0;
    double grr_rhs = 0.0;
    double ratio = 0.0;  // double_integral / grr_rhs, inf when rhs = 0
    double error = 0.0;
};

// Garsia-Rodemich-Rumsey pointwise bound on [a,b]:
//   iint |f(x)-f(y)|^p |x-y|^{-1-ps} dx dy  >=  C(p,s) |f(b)-f(a)|^p (b-a)^{1-ps}
[[nodiscard]] inline GrrResult grr_lower_bound(const std::function<double(double)>& f,
                                               double a, double b, double p, double s,
                                               const QuadratureSpec& quad) {
    FracParams params{1, p, s};
    params.validate_basic();
    params.validate_hardy();
    quad.validate();
    if (!(b > a)) throw domain_error("grr_lower_bound: need b > a");

    TrialFunction tf;
    tf.family = "grr-trial";
    tf.N = 1;
    tf.box = Box{{a, 0, 0}, {b, 0, 0}};
    tf.eval = [f](const Point& x) { return f(x[0]); };
    const GridFunction u = sample(tf, Domain::interval(a, b), quad.resolution);

    const SeminormResult sem = gagliardo_seminorm(u, params, quad);
    GrrResult out;
    out.double_integral = sem.value;
    out.error = sem.error;
    out.grr_rhs = grr_constant(p, s) * std::pow(std::abs(f(b) - f(a)), p) *
                  std::pow(b - a, 1.0 - p * s);
    out.ratio = out.grr_rhs > 0.0 ? out.double_integral / out.grr_rhs : inf;
    return out;
}

struct KeyRatioResult {
    double ratio = 0.0;      // ||f||_inf^{p+q(ps-1)} / (remainder ||f||_q^{q(ps-1)})
    double remainder = 0.0;  // seminorm - D int |f|^p d(x)^{-ps}
    double sup_norm = 0.0;
    double lq = 0.0;         // ||f||_q
    double error = 0.0;      // first-order propagated quadrature error
    bool skipped = false;    // remainder nonpositive (quadrature artifact)
};

// Empirical constant of the key sup-norm inequality for one trial function on
// the interval (a,b), with d(x) the distance to the complement.
[[nodiscard]] inline KeyRatioResult key_inequality_ratio(const IntervalTrial& trial,
                                                         const FracParams& params,
                                                         double q,
                                                         const QuadratureSpec& quad) {
    params.validate_basic();
    params.validate_hardy();
    quad.validate();
    if (params.N != 1) throw domain_error("key_inequality_ratio: one-dimensional only");
    if (!(q >= 1.0)) throw domain_error("key_inequality_ratio: need q >= 1");
    const double p = params.p, ps = params.ps();

    TrialFunction tf;
    tf.family = "key-trial";
    tf.N = 1;
    tf.box = Box{{trial.a, 0, 0}, {trial.b, 0, 0}};
    auto f = trial.f;
    tf.eval = [f](const Point& x) { return f(x[0]); };
    const GridFunction u = sample(tf, Domain::interval(trial.a, trial.b), quad.resolution);

    double sup = 0.0;
    for (double vv : u.values) sup = std::max(sup, std::abs(vv));
    if (sup == 0.0) throw domain_error("key_inequality_ratio: zero function");

    const SeminormResult sem = gagliardo_seminorm(u, params, quad);
    const double D = hardy_constant(1, p, params.s);
    const double hardy = D * hardy_term(u, params, WeightMode::boundary_distance);

    KeyRatioResult out;
    out.sup_norm = sup;
    out.remainder = sem.value - hardy;
    out.lq = lq_norm(u, q);
    if (!(out.remainder > 0.0)) {
        out.skipped = true;
        return out;
    }
    const double expo = q * (ps - 1.0);
    out.ratio = std::pow(sup, p + expo) / (out.remainder * std::pow(out.lq, expo));
    out.error = out.ratio * sem.error / out.remainder;
    return out;
}

struct KeyRatioSearch {
    double best_ratio = 0.0;
    std::array<double, 3> best_theta{};  // (center raw, width raw, shape raw)
    int evals = 0;
};

// Maximize the empirical key-inequality constant over a three-parameter
// compactly supported bump family ((1-((x-c)/w)^2)_+)^kappa on (-1,1) with a
// deterministic simplex search: fixed seed, `restarts` seeded starting
// points, `iters` iterations each.
[[nodiscard]] inline KeyRatioSearch maximize_key_ratio(const FracParams& params, double q,
                                                       const QuadratureSpec& quad,
                                                       std::uint64_t seed,
                                                       int restarts = 5, int iters = 200) {
    auto family = [](const std::array<double, 3>& th) {
        const double w = 0.10 + 0.80 / (1.0 + std::exp(-th[1]));
        const double c = (1.0 - w - 0.02) * std::tanh(th[0]);
        const double kappa = 1.0 + 3.0 / (1.0 + std::exp(-th[2]));
        return [c, w, kappa](double x) {
            const double t = 1.0 - ((x - c) / w) * ((x - c) / w);
            return t > 0.0 ? std::pow(t, kappa) : 0.0;
        };
    };

    KeyRatioSearch out;
    auto objective = [&](const std::vector<double>& th) {
        IntervalTrial trial{family({th[0], th[1], th[2]}), -1.0, 1.0};
        const KeyRatioResult r = key_inequality_ratio(trial, params, q, quad);
        return r.skipped ? 1e9 : -r.ratio;
    };

    for (int r = 0; r < restarts; ++r) {
        SplitMix64 rng(trial_seed(seed, static_cast<std::uint64_t>(r)));
        std::vector<double> th0(3);
        for (auto& t : th0) t = 2.0 * rng.next_double() - 1.0;
        const NmResult nm = nelder_mead(objective, th0, {0.3, 0.3, 0.3}, iters);
        out.evals += nm.evals;
        if (-nm.fval > out.best_ratio) {
            out.best_ratio = -nm.fval;
            out.best_theta = {nm.x[0], nm.x[1], nm.x[2]};
        }
    }
    return out;
}

} // namespace fraclab
