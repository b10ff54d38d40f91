#pragma once

// Domain representations (half-space, ball, interval union, convex polygon)
// with exact directional exit distances, boundary distances, and the
// angular-average pseudodistance m_alpha.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "core.hpp"
#include "special.hpp"

namespace fraclab {

// Points are fixed-size; coordinates beyond the active dimension are zero.
using Point = std::array<double, 3>;

[[nodiscard]] inline double dot(const Point& a, const Point& b, int N) {
    double s = 0.0;
    for (int k = 0; k < N; ++k) s += a[k] * b[k];
    return s;
}

[[nodiscard]] inline double norm(const Point& a, int N) {
    return std::sqrt(dot(a, a, N));
}

struct Box {
    Point lo{0, 0, 0};
    Point hi{0, 0, 0};
};

// ---------------------------------------------------------------------------
// Domain
// ---------------------------------------------------------------------------

class Domain {
public:
    enum class Kind { half_space, ball, interval_union, convex_polygon };

    [[nodiscard]] static Domain half_space(int N, const Point& normal, double offset) {
        Domain d;
        d.kind_ = Kind::half_space;
        d.N_ = check_dim(N);
        const double len = norm(normal, N);
        if (!(len > 0.0)) throw config_error("half_space: zero normal");
        for (int k = 0; k < N; ++k) d.normal_[k] = normal[k] / len;
        d.offset_ = offset / len;
        return d;
    }

    // The standard half-space {x_N > 0}.
    [[nodiscard]] static Domain upper_half_space(int N) {
        Point n{0, 0, 0};
        n[N - 1] = 1.0;
        return half_space(N, n, 0.0);
    }

    [[nodiscard]] static Domain ball(int N, const Point& center, double radius) {
        if (!(radius > 0.0)) throw config_error("ball: radius must be positive");
        Domain d;
        d.kind_ = Kind::ball;
        d.N_ = check_dim(N);
        d.center_ = center;
        d.radius_ = radius;
        return d;
    }

    [[nodiscard]] static Domain unit_ball(int N) { return ball(N, {0, 0, 0}, 1.0); }

    [[nodiscard]] static Domain interval_union(std::vector<std::pair<double, double>> iv) {
        if (iv.empty()) throw config_error("interval_union: empty");
        std::sort(iv.begin(), iv.end());
        for (std::size_t i = 0; i < iv.size(); ++i) {
            if (!(iv[i].second > iv[i].first))
                throw config_error("interval_union: interval with nonpositive length");
            if (i > 0 && !(iv[i].first >= iv[i - 1].second))
                throw config_error("interval_union: overlapping intervals");
        }
        Domain d;
        d.kind_ = Kind::interval_union;
        d.N_ = 1;
        d.intervals_ = std::move(iv);
        return d;
    }

    [[nodiscard]] static Domain interval(double a, double b) {
        return interval_union({{a, b}});
    }

    // Vertices in strict counterclockwise order, no three collinear.
    [[nodiscard]] static Domain convex_polygon(std::vector<std::array<double, 2>> verts) {
        const std::size_t m = verts.size();
        if (m < 3) throw config_error("convex_polygon: need at least 3 vertices");
        double scale = 0.0;
        for (const auto& v : verts) scale = std::max({scale, std::abs(v[0]), std::abs(v[1])});
        for (std::size_t i = 0; i < m; ++i) {
            const auto& a = verts[i];
            const auto& b = verts[(i + 1) % m];
            const auto& c = verts[(i + 2) % m];
            const double cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            if (!(cross > 1e-12 * scale * scale))
                throw config_error("convex_polygon: vertices not strictly convex CCW");
        }
        Domain d;
        d.kind_ = Kind::convex_polygon;
        d.N_ = 2;
        d.vertices_ = std::move(verts);
        d.build_edges();
        return d;
    }

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] int dim() const { return N_; }
    [[nodiscard]] const Point& ball_center() const { return center_; }
    [[nodiscard]] double ball_radius() const { return radius_; }
    [[nodiscard]] const Point& hs_normal() const { return normal_; }
    [[nodiscard]] double hs_offset() const { return offset_; }
    [[nodiscard]] const std::vector<std::pair<double, double>>& intervals() const {
        return intervals_;
    }
    [[nodiscard]] const std::vector<std::array<double, 2>>& polygon_vertices() const {
        return vertices_;
    }

    [[nodiscard]] std::string describe() const {
        switch (kind_) {
            case Kind::half_space: return "half_space";
            case Kind::ball: return "ball";
            case Kind::interval_union:
                return intervals_.size() == 1 ? "interval" : "interval_union";
            case Kind::convex_polygon: return "convex_polygon";
        }
        return "unknown";
    }

    [[nodiscard]] bool contains(const Point& x) const {
        switch (kind_) {
            case Kind::half_space:
                return dot(normal_, x, N_) - offset_ > 0.0;
            case Kind::ball: {
                Point r = diff(x, center_);
                return norm(r, N_) < radius_;
            }
            case Kind::interval_union: {
                for (const auto& [a, b] : intervals_)
                    if (x[0] > a && x[0] < b) return true;
                return false;
            }
            case Kind::convex_polygon: {
                for (const auto& e : edges_)
                    if (!(e.nx * x[0] + e.ny * x[1] - e.c > 0.0)) return false;
                return true;
            }
        }
        return false;
    }

    // Axis-aligned bounding box; false when the domain is unbounded.
    [[nodiscard]] bool bounding_box(Box& out) const {
        switch (kind_) {
            case Kind::half_space: return false;
            case Kind::ball:
                for (int k = 0; k < N_; ++k) {
                    out.lo[k] = center_[k] - radius_;
                    out.hi[k] = center_[k] + radius_;
                }
                return true;
            case Kind::interval_union:
                out.lo[0] = intervals_.front().first;
                out.hi[0] = intervals_.back().second;
                return true;
            case Kind::convex_polygon: {
                out.lo = {inf, inf, 0};
                out.hi = {-inf, -inf, 0};
                for (const auto& v : vertices_) {
                    out.lo[0] = std::min(out.lo[0], v[0]);
                    out.lo[1] = std::min(out.lo[1], v[1]);
                    out.hi[0] = std::max(out.hi[0], v[0]);
                    out.hi[1] = std::max(out.hi[1], v[1]);
                }
                return true;
            }
        }
        return false;
    }

    // Exit distance along +omega only: sup{t >= 0 : x + tau*omega in Omega
    // for all 0 <= tau < t}.  +infinity when the ray never leaves.
    [[nodiscard]] double one_sided_exit(const Point& x, const Point& omega) const {
        require_inside(x, "one_sided_exit");
        require_unit(omega);
        switch (kind_) {
            case Kind::half_space: {
                const double a = dot(normal_, x, N_) - offset_;
                const double d = dot(normal_, omega, N_);
                return d < 0.0 ? a / (-d) : inf;
            }
            case Kind::ball: {
                Point r = diff(x, center_);
                const double b = dot(r, omega, N_);
                const double disc = b * b + radius_ * radius_ - dot(r, r, N_);
                return std::sqrt(disc) - b;
            }
            case Kind::interval_union: {
                const auto [a, b] = containing_interval(x[0]);
                return omega[0] > 0.0 ? b - x[0] : x[0] - a;
            }
            case Kind::convex_polygon: {
                double t = inf;
                for (const auto& e : edges_) {
                    const double a = e.nx * x[0] + e.ny * x[1] - e.c;
                    const double d = e.nx * omega[0] + e.ny * omega[1];
                    if (d < 0.0) t = std::min(t, a / (-d));
                }
                return t;
            }
        }
        return inf;
    }

    // d_omega(x) = inf{|t| : x + t*omega not in Omega}, both signs of t.
    [[nodiscard]] double directional_exit(const Point& x, const Point& omega) const {
        Point neg{-omega[0], -omega[1], -omega[2]};
        return std::min(one_sided_exit(x, omega), one_sided_exit(x, neg));
    }

    // Euclidean distance to the complement; 0 for points outside Omega.
    [[nodiscard]] double dist_to_complement(const Point& x) const {
        switch (kind_) {
            case Kind::half_space:
                return std::max(0.0, dot(normal_, x, N_) - offset_);
            case Kind::ball: {
                Point r = diff(x, center_);
                return std::max(0.0, radius_ - norm(r, N_));
            }
            case Kind::interval_union: {
                for (const auto& [a, b] : intervals_)
                    if (x[0] > a && x[0] < b) return std::min(x[0] - a, b - x[0]);
                return 0.0;
            }
            case Kind::convex_polygon: {
                double d = inf;
                for (const auto& e : edges_)
                    d = std::min(d, e.nx * x[0] + e.ny * x[1] - e.c);
                return std::max(0.0, d);
            }
        }
        return 0.0;
    }

    // Pseudodistance m_alpha(x): the sphere-moment-normalized angular average
    //   m_alpha = (M(N,alpha))^{1/alpha} * (int_{S^{N-1}} d_omega^{-alpha})^{-1/alpha}.
    // N=1 uses the exact two-point sum; N=2 the shifted trapezoidal rule on
    // S^1 with `angular_nodes` nodes; N=3 a latitude-longitude product rule
    // with angular_nodes/4 x angular_nodes/2 nodes.  The result is evaluated
    // at the requested and at doubled resolution; the finer value is returned
    // and gross disagreement raises a convergence error.
    [[nodiscard]] double pseudodistance(const Point& x, double alpha,
                                        int angular_nodes = 256) const {
        require_inside(x, "pseudodistance");
        if (!(alpha > 0.0)) throw domain_error("pseudodistance: alpha must be > 0");
        if (angular_nodes < 8) throw domain_error("pseudodistance: angular_nodes < 8");
        if (N_ == 1) {
            // both directions see the same two-sided line distance, and
            // M(1,alpha) = 2 cancels the two-point sum exactly
            Point omega{1, 0, 0};
            return directional_exit(x, omega);
        }
        const double coarse = pseudodistance_once(x, alpha, angular_nodes);
        const double fine = pseudodistance_once(x, alpha, 2 * angular_nodes);
        if (std::abs(fine - coarse) > 1e-3 * std::abs(fine))
            throw convergence_error("pseudodistance: angular rule did not settle");
        return fine;
    }

private:
    struct Edge {
        double nx, ny, c;  // inward half-plane {nx*x + ny*y > c}, |n| = 1
    };

    static int check_dim(int N) {
        if (N < 1 || N > 3) throw config_error("domain: N must be 1, 2, or 3");
        return N;
    }

    static Point diff(const Point& a, const Point& b) {
        return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
    }

    void require_inside(const Point& x, const char* who) const {
        if (!contains(x))
            throw domain_error(std::string(who) + ": point is not inside the domain");
    }

    static void require_unit(const Point& omega) {
        const double n2 = omega[0] * omega[0] + omega[1] * omega[1] + omega[2] * omega[2];
        if (std::abs(n2 - 1.0) > 2e-12)
            throw domain_error("directional exit: omega must be a unit vector");
    }

    [[nodiscard]] std::pair<double, double> containing_interval(double x) const {
        for (const auto& iv : intervals_)
            if (x > iv.first && x < iv.second) return iv;
        throw domain_error("interval_union: point is not inside the domain");
    }

    void build_edges() {
        const std::size_t m = vertices_.size();
        edges_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            const auto& a = vertices_[i];
            const auto& b = vertices_[(i + 1) % m];
            // CCW: interior lies to the left of a->b
            double nx = -(b[1] - a[1]);
            double ny = b[0] - a[0];
            const double len = std::hypot(nx, ny);
            nx /= len;
            ny /= len;
            edges_[i] = {nx, ny, nx * a[0] + ny * a[1]};
        }
    }

    [[nodiscard]] double pseudodistance_once(const Point& x, double alpha, int nodes) const {
        double integral = 0.0;
        if (N_ == 2) {
            const double w = 2.0 * pi / nodes;
            for (int j = 0; j < nodes; ++j) {
                const double th = 2.0 * pi * (j + 0.5) / nodes;
                Point omega{std::cos(th), std::sin(th), 0};
                const double d = directional_exit(x, omega);
                if (std::isfinite(d)) integral += w * std::pow(d, -alpha);
            }
        } else {  // N_ == 3
            const int L = std::max(8, nodes / 4);
            const int K = std::max(8, nodes / 2);
            const double wt = pi / L, wp = 2.0 * pi / K;
            // normalize the product-rule weights to the exact sphere area so
            // that constant integrands (e.g. ball center) are reproduced
            // exactly, as the N=2 trapezoid rule does by construction
            double total_w = 0.0;
            for (int i = 0; i < L; ++i) {
                const double th = pi * (i + 0.5) / L;
                const double st = std::sin(th), ct = std::cos(th);
                for (int j = 0; j < K; ++j) {
                    const double ph = 2.0 * pi * (j + 0.5) / K;
                    Point omega{st * std::cos(ph), st * std::sin(ph), ct};
                    const double d = directional_exit(x, omega);
                    total_w += wt * wp * st;
                    if (std::isfinite(d)) integral += wt * wp * st * std::pow(d, -alpha);
                }
            }
            integral *= sphere_surface(3) / total_w;
        }
        if (!(integral > 0.0))
            throw convergence_error("pseudodistance: angular integral vanished");
        return std::pow(sphere_moment(N_, alpha) / integral, 1.0 / alpha);
    }

    Kind kind_ = Kind::ball;
    int N_ = 1;
    Point normal_{0, 0, 0};
    double offset_ = 0.0;
    Point center_{0, 0, 0};
    double radius_ = 1.0;
    std::vector<std::pair<double, double>> intervals_;
    std::vector<std::array<double, 2>> vertices_;
    std::vector<Edge> edges_;
};

// Weight (r^2 - |x|^2)/(2r) of the ball-proxy Hardy term (ball centered at 0).
[[nodiscard]] inline double ball_proxy(double r, const Point& x, int N) {
    const double x2 = dot(x, x, N);
    if (!(x2 < r * r)) throw domain_error("ball_proxy: point is not inside the ball");
    return (r * r - x2) / (2.0 * r);
}

} // namespace fraclab
