#pragma once

// Masked tensor grids (GridFunction), closed-form trial functions
// (TrialFunction) with seeded random families, and the shared quadrature
// configuration (QuadratureSpec).

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "geometry.hpp"

namespace fraclab {

// ---------------------------------------------------------------------------
// QuadratureSpec
// ---------------------------------------------------------------------------

enum class DiagonalStrategy { exclude_extrapolate, local_refine };

struct QuadratureSpec {
    int resolution = 64;                          // cells per axis
    DiagonalStrategy diagonal = DiagonalStrategy::exclude_extrapolate;
    std::vector<double> pv_cutoffs = {1.0, 0.5, 0.25};  // in units of grid spacing
    double error_budget = 0.05;                   // relative tolerance

    void validate() const {
        if (resolution < 8) throw config_error("quadrature: resolution must be >= 8");
        if (pv_cutoffs.size() < 2)
            throw config_error("quadrature: need at least two pv cutoffs");
        for (std::size_t i = 0; i < pv_cutoffs.size(); ++i) {
            if (!(pv_cutoffs[i] > 0.0))
                throw config_error("quadrature: pv cutoffs must be positive");
            if (i > 0 && !(pv_cutoffs[i] < pv_cutoffs[i - 1]))
                throw config_error("quadrature: pv cutoffs must be strictly decreasing");
        }
        if (!(error_budget > 0.0))
            throw config_error("quadrature: error budget must be positive");
    }

    [[nodiscard]] QuadratureSpec with_resolution(int n) const {
        QuadratureSpec q = *this;
        q.resolution = n;
        return q;
    }
};

// ---------------------------------------------------------------------------
// TrialFunction: closed-form evaluator plus the square box it is sampled on
// ---------------------------------------------------------------------------

struct TrialFunction {
    std::string family;
    std::vector<double> theta;  // family parameters, logged in reports
    Box box;                    // sampling box (equal extent per axis)
    int N = 1;
    std::function<double(const Point&)> eval;
};

// Smooth compactly supported bump: amplitude * exp(1 - 1/(1 - rho^2)) with
// rho = |x - center|/radius, zero for rho >= 1.
[[nodiscard]] inline TrialFunction make_mollifier(int N, const Point& center,
                                                  double radius, double amplitude = 1.0) {
    if (!(radius > 0.0)) throw config_error("mollifier: radius must be positive");
    TrialFunction f;
    f.family = "mollifier";
    f.theta = {center[0], center[1], center[2], radius, amplitude};
    f.N = N;
    for (int k = 0; k < N; ++k) {
        f.box.lo[k] = center[k] - radius;
        f.box.hi[k] = center[k] + radius;
    }
    f.eval = [=](const Point& x) {
        double r2 = 0.0;
        for (int k = 0; k < N; ++k) {
            const double d = (x[k] - center[k]) / radius;
            r2 += d * d;
        }
        if (r2 >= 1.0) return 0.0;
        return amplitude * std::exp(1.0 - 1.0 / (1.0 - r2));
    };
    return f;
}

// d(x)^beta * exp(-gamma |x-center|^2) on a bounded domain (zero outside).
[[nodiscard]] inline TrialFunction make_boundary_power(const Domain& domain, double beta,
                                                       double gamma, const Point& center) {
    Box bb;
    if (!domain.bounding_box(bb))
        throw config_error("boundary_power: domain must be bounded");
    TrialFunction f;
    f.family = "boundary_power";
    f.theta = {beta, gamma, center[0], center[1], center[2]};
    f.N = domain.dim();
    f.box = bb;
    f.eval = [=](const Point& x) {
        const double d = domain.dist_to_complement(x);
        if (d <= 0.0) return 0.0;
        double r2 = 0.0;
        for (int k = 0; k < domain.dim(); ++k) {
            const double t = x[k] - center[k];
            r2 += t * t;
        }
        return std::pow(d, beta) * std::exp(-gamma * r2);
    };
    return f;
}

// 1D hat on (0,1): 2x on [0,1/2], 2(1-x) on [1/2,1].
[[nodiscard]] inline TrialFunction make_hat() {
    TrialFunction f;
    f.family = "hat";
    f.N = 1;
    f.box.lo[0] = 0.0;
    f.box.hi[0] = 1.0;
    f.eval = [](const Point& x) {
        if (x[0] <= 0.0 || x[0] >= 1.0) return 0.0;
        return 1.0 - std::abs(2.0 * x[0] - 1.0);
    };
    return f;
}

// Piecewise-linear interpolant of uniformly spaced knot values on [0,1]
// (knots include both endpoints).
[[nodiscard]] inline TrialFunction make_pwl(std::vector<double> knots) {
    if (knots.size() < 2) throw config_error("pwl: need at least 2 knots");
    TrialFunction f;
    f.family = "pwl";
    f.theta = knots;
    f.N = 1;
    f.box.lo[0] = 0.0;
    f.box.hi[0] = 1.0;
    const auto k = std::make_shared<std::vector<double>>(std::move(knots));
    f.eval = [k](const Point& x) {
        const double t = x[0];
        if (t <= 0.0) return k->front();
        if (t >= 1.0) return k->back();
        const double pos = t * (k->size() - 1);
        const std::size_t i = std::min<std::size_t>(
            static_cast<std::size_t>(pos), k->size() - 2);
        const double frac = pos - static_cast<double>(i);
        return (*k)[i] * (1.0 - frac) + (*k)[i + 1] * frac;
    };
    return f;
}

// x^a * sin(pi x) on (0,1): vanishes at both endpoints for a > 0.
[[nodiscard]] inline TrialFunction make_power_sine(double a) {
    TrialFunction f;
    f.family = "power_sine";
    f.theta = {a};
    f.N = 1;
    f.box.lo[0] = 0.0;
    f.box.hi[0] = 1.0;
    f.eval = [a](const Point& x) {
        if (x[0] <= 0.0 || x[0] >= 1.0) return 0.0;
        return std::pow(x[0], a) * std::sin(pi * x[0]);
    };
    return f;
}

[[nodiscard]] inline TrialFunction make_constant(int N, const Box& box, double value) {
    TrialFunction f;
    f.family = "constant";
    f.theta = {value};
    f.N = N;
    f.box = box;
    f.eval = [value](const Point&) { return value; };
    return f;
}

// Seeded random mollifier with support strictly inside the domain: the
// support keeps `clearance` times the domain scale away from the boundary.
[[nodiscard]] inline TrialFunction random_mollifier_in(const Domain& domain, SplitMix64& rng,
                                                       double clearance = 0.05) {
    Box bb;
    if (!domain.bounding_box(bb))
        throw config_error("random_mollifier_in: domain must be bounded");
    const int N = domain.dim();
    double scale = 0.0;
    for (int k = 0; k < N; ++k) scale = std::max(scale, bb.hi[k] - bb.lo[k]);
    for (int attempt = 0; attempt < 4096; ++attempt) {
        Point c{0, 0, 0};
        for (int k = 0; k < N; ++k)
            c[k] = bb.lo[k] + rng.next_double() * (bb.hi[k] - bb.lo[k]);
        const double radius = (0.10 + 0.20 * rng.next_double()) * scale;
        const double amplitude = 0.5 + 1.5 * rng.next_double();
        if (!domain.contains(c)) continue;
        if (domain.dist_to_complement(c) < radius + clearance * scale) continue;
        return make_mollifier(N, c, radius, amplitude);
    }
    throw config_error("random_mollifier_in: could not place a bump inside the domain");
}

// ---------------------------------------------------------------------------
// GridFunction: cell-center samples on a masked uniform tensor grid
// ---------------------------------------------------------------------------

struct GridFunction {
    Domain domain = Domain::interval(0.0, 1.0);
    Box box;
    int N = 1;
    int resolution = 0;
    double h = 0.0;            // axis spacing
    double cell_volume = 0.0;  // h^N
    std::vector<double> values;        // dense lattice, 0 at masked-out cells
    std::vector<std::uint8_t> mask;    // 1 where the centroid lies in Omega
    std::function<double(const Point&)> evaluator;  // optional, for resampling

    [[nodiscard]] long size() const {
        long s = 1;
        for (int k = 0; k < N; ++k) s *= resolution;
        return s;
    }

    [[nodiscard]] long active_count() const {
        long c = 0;
        for (auto m : mask) c += m;
        return c;
    }

    [[nodiscard]] Point node(long flat) const {
        Point x{0, 0, 0};
        long rest = flat;
        for (int k = 0; k < N; ++k) {
            const long i = rest % resolution;
            rest /= resolution;
            x[k] = box.lo[k] + (static_cast<double>(i) + 0.5) * h;
        }
        return x;
    }

    // Bilinear (N=2) / linear (N=1) interpolation of the dense value lattice;
    // zero outside the box.  Masked-out cells hold value 0 by construction.
    [[nodiscard]] double interpolate(double px, double py = 0.0) const {
        const auto axis = [&](double p, int k) {
            return (p - box.lo[k]) / h - 0.5;
        };
        const double gx = axis(px, 0);
        const long n = resolution;
        if (N == 1) {
            if (gx <= -1.0 || gx >= static_cast<double>(n)) return 0.0;
            const long i0 = static_cast<long>(std::floor(gx));
            const double fx = gx - static_cast<double>(i0);
            const double v0 = (i0 >= 0 && i0 < n) ? values[i0] : 0.0;
            const double v1 = (i0 + 1 >= 0 && i0 + 1 < n) ? values[i0 + 1] : 0.0;
            return v0 * (1.0 - fx) + v1 * fx;
        }
        const double gy = axis(py, 1);
        if (gx <= -1.0 || gx >= static_cast<double>(n) || gy <= -1.0 ||
            gy >= static_cast<double>(n))
            return 0.0;
        const long i0 = static_cast<long>(std::floor(gx));
        const long j0 = static_cast<long>(std::floor(gy));
        const double fx = gx - static_cast<double>(i0);
        const double fy = gy - static_cast<double>(j0);
        const auto at = [&](long i, long j) {
            return (i >= 0 && i < n && j >= 0 && j < n) ? values[j * n + i] : 0.0;
        };
        return at(i0, j0) * (1.0 - fx) * (1.0 - fy) + at(i0 + 1, j0) * fx * (1.0 - fy) +
               at(i0, j0 + 1) * (1.0 - fx) * fy + at(i0 + 1, j0 + 1) * fx * fy;
    }
};

[[nodiscard]] inline bool conformable(const GridFunction& a, const GridFunction& b) {
    if (a.N != b.N || a.resolution != b.resolution) return false;
    for (int k = 0; k < a.N; ++k)
        if (std::abs(a.box.lo[k] - b.box.lo[k]) > 1e-12 ||
            std::abs(a.box.hi[k] - b.box.hi[k]) > 1e-12)
            return false;
    return a.mask == b.mask;
}

// Cell-center samples of f on the tensor grid over f.box, masked to Omega.
[[nodiscard]] inline GridFunction sample(const TrialFunction& f, const Domain& domain,
                                         int resolution) {
    if (resolution < 8) throw config_error("sample: resolution must be >= 8");
    if (f.N != domain.dim()) throw config_error("sample: dimension mismatch");
    const int N = f.N;
    const double extent = f.box.hi[0] - f.box.lo[0];
    if (!(extent > 0.0)) throw config_error("sample: empty box");
    for (int k = 1; k < N; ++k)
        if (std::abs((f.box.hi[k] - f.box.lo[k]) - extent) > 1e-9 * extent)
            throw config_error("sample: box must have equal extent per axis");

    GridFunction g;
    g.domain = domain;
    g.box = f.box;
    g.N = N;
    g.resolution = resolution;
    g.h = extent / resolution;
    g.cell_volume = std::pow(g.h, N);
    g.values.assign(g.size(), 0.0);
    g.mask.assign(g.size(), 0);
    g.evaluator = f.eval;
    for (long flat = 0; flat < g.size(); ++flat) {
        const Point x = g.node(flat);
        if (!domain.contains(x)) continue;
        const double v = f.eval(x);
        if (!std::isfinite(v))
            throw domain_error("sample: evaluator returned a non-finite value");
        g.mask[flat] = 1;
        g.values[flat] = v;
    }
    return g;
}

// Coarse companion at half resolution: resample the evaluator when present,
// otherwise block-average the 2^N children of each coarse cell.
[[nodiscard]] inline GridFunction coarsen(const GridFunction& g) {
    if (g.resolution % 2 != 0)
        throw config_error("coarsen: resolution must be even");
    const int n2 = g.resolution / 2;
    if (g.evaluator) {
        TrialFunction f;
        f.N = g.N;
        f.box = g.box;
        f.eval = g.evaluator;
        return sample(f, g.domain, n2);
    }
    GridFunction c;
    c.domain = g.domain;
    c.box = g.box;
    c.N = g.N;
    c.resolution = n2;
    c.h = 2.0 * g.h;
    c.cell_volume = std::pow(c.h, g.N);
    c.values.assign(c.size(), 0.0);
    c.mask.assign(c.size(), 0);
    for (long flat = 0; flat < c.size(); ++flat) {
        const Point x = c.node(flat);
        if (!g.domain.contains(x)) continue;
        c.mask[flat] = 1;
        double sum = 0.0;
        long cnt = 0;
        // average the valid fine children
        if (g.N == 1) {
            const long i = flat;
            for (long di = 0; di < 2; ++di) {
                const long fi = 2 * i + di;
                if (g.mask[fi]) {
                    sum += g.values[fi];
                    ++cnt;
                }
            }
        } else {
            const long i = flat % n2, j = flat / n2;
            for (long dj = 0; dj < 2; ++dj)
                for (long di = 0; di < 2; ++di) {
                    const long f2 = (2 * j + dj) * g.resolution + (2 * i + di);
                    if (g.mask[f2]) {
                        sum += g.values[f2];
                        ++cnt;
                    }
                }
        }
        c.values[flat] = cnt > 0 ? sum / static_cast<double>(cnt) : 0.0;
    }
    return c;
}

} // namespace fraclab
