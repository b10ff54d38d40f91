#pragma once

// Principal-value regional fractional Laplacian
//   L_Omega w(x) = lim_{eps->0} int_{Omega, |y-x|>eps} (w(y)-w(x)) |x-y|^{-N-2s} dy
// on bounded domains.  The integral is reduced to radial integrals along
// antipodal direction pairs; the pair-symmetrized integrand
// (w(x+t w) + w(x-t w) - 2 w(x)) t^{-1-2s} cancels the leading singularity,
// and the eps-truncated values are extrapolated in eps with the known leading
// power 2-2s (two Richardson stages).

#include <cmath>
#include <functional>
#include <vector>

#include "adaptive.hpp"
#include "core.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "parallel.hpp"

namespace fraclab {

struct PvResult {
    double value = 0.0;  // L_Omega w(x); negative where w peaks at x
    double error = 0.0;  // extrapolation residual + angular-refinement shift
    bool converged = true;
};

namespace detail {

// eps -> 0 extrapolation: I(eps) = L + C eps^gamma + D eps^{gamma+2} + ...
// with gamma = 2-2s, sampled at a geometric cutoff sequence of ratio rho.
[[nodiscard]] inline double pv_extrapolate(const std::vector<double>& vals, double rho,
                                           double gamma, double& residual) {
    std::vector<double> cur = vals;
    double g = gamma;
    double last_shift = 0.0;
    while (cur.size() > 1) {
        const double f = std::pow(rho, g) / (1.0 - std::pow(rho, g));
        std::vector<double> nxt(cur.size() - 1);
        for (std::size_t j = 0; j + 1 < cur.size(); ++j)
            nxt[j] = cur[j + 1] + (cur[j + 1] - cur[j]) * f;
        last_shift = std::abs(nxt.back() - cur.back());
        cur = std::move(nxt);
        g += 2.0;  // next term of the eps-power series
    }
    residual = last_shift;
    return cur[0];
}

struct PvDirection {
    Point omega;
    double weight;  // angular weight for the antipodal pair
};

// Antipodal direction pairs covering S^{N-1}: N=1 the single +/- pair, N=2
// M/2 shifted-midpoint pairs, N=3 half of a latitude-longitude product grid.
[[nodiscard]] inline std::vector<PvDirection> pv_directions(int N, int angular_nodes) {
    std::vector<PvDirection> dirs;
    if (N == 1) {
        dirs.push_back({{1, 0, 0}, 1.0});
        return dirs;
    }
    if (N == 2) {
        const int M = std::max(8, angular_nodes - angular_nodes % 8);
        for (int j = 0; j < M / 2; ++j) {
            const double th = 2.0 * pi * (j + 0.5) / M;
            dirs.push_back({{std::cos(th), std::sin(th), 0}, 2.0 * pi / M});
        }
        return dirs;
    }
    const int L = std::max(8, (angular_nodes / 4) & ~1);  // even latitude count
    const int K = std::max(8, (angular_nodes / 2) & ~1);
    for (int i = 0; i < L / 2; ++i) {  // upper hemisphere; antipode is paired
        const double th = pi * (i + 0.5) / L;
        const double st = std::sin(th), ct = std::cos(th);
        for (int j = 0; j < K; ++j) {
            const double ph = 2.0 * pi * (j + 0.5) / K;
            dirs.push_back(
                {{st * std::cos(ph), st * std::sin(ph), ct}, st * (pi / L) * (2.0 * pi / K)});
        }
    }
    return dirs;
}

} // namespace detail

// Evaluate L_Omega w at x.  `angular_nodes` controls the direction count for
// N >= 2 (rounded to a multiple of 8).  The grid-spacing reference for the
// cutoff schedule is (domain extent)/quad.resolution.
[[nodiscard]] inline PvResult pv_regional_laplacian(
    const std::function<double(const Point&)>& w, const Domain& domain, const Point& x,
    double s, const QuadratureSpec& quad, int angular_nodes = 64) {
    if (!(s > 0.0 && s < 1.0)) throw domain_error("pv: s must be in (0,1)");
    quad.validate();
    if (!domain.contains(x)) throw domain_error("pv: point is not inside the domain");
    Box bb;
    if (!domain.bounding_box(bb))
        throw config_error("pv: principal values require a bounded domain");
    const int N = domain.dim();
    double extent = 0.0;
    for (int k = 0; k < N; ++k) extent = std::max(extent, bb.hi[k] - bb.lo[k]);
    const double h = extent / quad.resolution;

    // the cutoff schedule must be geometric for power-law extrapolation
    const double rho = quad.pv_cutoffs[1] / quad.pv_cutoffs[0];
    for (std::size_t j = 1; j + 1 < quad.pv_cutoffs.size(); ++j)
        if (std::abs(quad.pv_cutoffs[j + 1] / quad.pv_cutoffs[j] - rho) > 1e-9)
            throw config_error("pv: cutoff schedule must be geometric");

    const double wx = w(x);
    const double m2s = -1.0 - 2.0 * s;

    const auto dirs = detail::pv_directions(N, angular_nodes);
    const double gamma = 2.0 - 2.0 * s;

    // per-pair truncated radial integrals at every cutoff, plus the
    // cutoff-independent leftover piece beyond the symmetric range
    auto accumulate = [&](const std::vector<detail::PvDirection>& dd,
                          const std::vector<double>& cutoffs,
                          std::vector<double>& per_eps) {
        per_eps.assign(cutoffs.size(), 0.0);
        std::vector<std::vector<double>> partial(dd.size(),
                                                 std::vector<double>(cutoffs.size(), 0.0));
        std::vector<double> leftover(dd.size(), 0.0);
        parallel_for(static_cast<std::int64_t>(dd.size()), [&](std::int64_t di) {
            const auto& d = dd[static_cast<std::size_t>(di)];
            Point neg{-d.omega[0], -d.omega[1], -d.omega[2]};
            const double ep = domain.one_sided_exit(x, d.omega);
            const double em = domain.one_sided_exit(x, neg);
            const double tsym = std::min(ep, em);
            auto along = [&](double t, const Point& o) {
                return w(Point{x[0] + t * o[0], x[1] + t * o[1], x[2] + t * o[2]});
            };
            auto sym = [&](double t) {
                return (along(t, d.omega) + along(t, neg) - 2.0 * wx) * std::pow(t, m2s);
            };
            for (std::size_t j = 0; j < cutoffs.size(); ++j) {
                const double eps = cutoffs[j] * h;
                if (eps < tsym)
                    partial[static_cast<std::size_t>(di)][j] =
                        adaptive_gk15(sym, eps, tsym, 1e-11).value;
            }
            if (ep != em) {
                const Point far = ep > em ? d.omega : neg;
                const double t0 = tsym, t1 = std::max(ep, em);
                auto one = [&](double t) {
                    return (along(t, far) - wx) * std::pow(t, m2s);
                };
                leftover[static_cast<std::size_t>(di)] =
                    adaptive_gk15(one, t0, t1, 1e-11).value;
            }
        });
        for (std::size_t j = 0; j < per_eps.size(); ++j) {
            std::vector<double> terms(dd.size());
            for (std::size_t di = 0; di < dd.size(); ++di)
                terms[di] = dd[di].weight * (partial[di][j] + leftover[di]);
            per_eps[j] = pairwise_sum(std::move(terms));
        }
    };

    // disconnected components of an interval union contribute a regular
    // (cutoff-independent) integral with |y-x| bounded away from zero
    double regular = 0.0;
    if (domain.kind() == Domain::Kind::interval_union) {
        for (const auto& [a, b] : domain.intervals()) {
            if (x[0] > a && x[0] < b) continue;
            auto far_part = [&](double y) {
                return (w(Point{y, 0, 0}) - wx) * std::pow(std::abs(y - x[0]), m2s);
            };
            regular += adaptive_gk15(far_part, a, b, 1e-11).value;
        }
    }

    std::vector<double> per_eps;
    accumulate(dirs, quad.pv_cutoffs, per_eps);
    double residual = 0.0;
    PvResult r;
    // Richardson stages are affine with unit coefficient sum, so the constant
    // regular part can be added after extrapolation
    r.value = detail::pv_extrapolate(per_eps, rho, gamma, residual) + regular;
    r.error = residual;

    if (N >= 2) {  // angular-refinement check at the finest cutoff
        const auto dirs2 = detail::pv_directions(N, 2 * angular_nodes);
        std::vector<double> tmp;
        accumulate(dirs2, {quad.pv_cutoffs.back()}, tmp);
        r.error += std::abs(tmp[0] - per_eps.back());
    }

    double scale = std::abs(r.value);
    for (double v : per_eps) scale = std::max(scale, std::abs(v));
    if (!(r.error <= 0.5 * std::abs(r.value) + 1e-6 * std::max(scale, 1.0)))
        throw convergence_error("pv: extrapolation did not converge");
    r.converged = true;
    return r;
}

} // namespace fraclab
