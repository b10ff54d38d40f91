#pragma once

// Deterministic Nelder-Mead simplex minimizer.  Ordering uses stable sorts
// with index tie-breaks so a given start point always produces the same
// iterate sequence; no randomness is involved anywhere.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "core.hpp"

namespace fraclab {

struct NmResult {
    std::vector<double> x;
    double fval = 0.0;
    int evals = 0;
    int iters = 0;
};

[[nodiscard]] inline NmResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& fn,
    const std::vector<double>& x0, const std::vector<double>& step, int max_iter = 200) {
    const std::size_t n = x0.size();
    if (n == 0) throw domain_error("nelder_mead: empty start point");
    if (step.size() != n) throw domain_error("nelder_mead: step/x0 size mismatch");

    NmResult out;
    std::vector<std::vector<double>> pts(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step[i];
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        fv[i] = fn(pts[i]);
        ++out.evals;
    }

    std::vector<std::size_t> ord(n + 1);
    auto sort_simplex = [&] {
        std::iota(ord.begin(), ord.end(), std::size_t{0});
        std::stable_sort(ord.begin(), ord.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    };

    constexpr double alpha = 1.0, gamma_e = 2.0, rho_c = 0.5, sigma_s = 0.5;
    for (int it = 0; it < max_iter; ++it) {
        sort_simplex();
        out.iters = it + 1;
        const std::size_t best = ord[0], worst = ord[n], second = ord[n - 1];
        // converged when the simplex is flat in both f and x
        double fspread = std::abs(fv[worst] - fv[best]);
        double xspread = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            xspread = std::max(xspread, std::abs(pts[worst][i] - pts[best][i]));
        if (fspread <= 1e-12 * (std::abs(fv[best]) + 1e-12) && xspread <= 1e-10) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t k = 0; k <= n; ++k) {
            if (k == worst) continue;
            for (std::size_t i = 0; i < n; ++i) centroid[i] += pts[k][i];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        auto blend = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t i = 0; i < n; ++i)
                p[i] = centroid[i] + coef * (centroid[i] - pts[worst][i]);
            return p;
        };

        auto refl = blend(alpha);
        const double fr = fn(refl);
        ++out.evals;
        if (fr < fv[best]) {
            auto expd = blend(alpha * gamma_e);
            const double fe = fn(expd);
            ++out.evals;
            if (fe < fr) {
                pts[worst] = std::move(expd);
                fv[worst] = fe;
            } else {
                pts[worst] = std::move(refl);
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            pts[worst] = std::move(refl);
            fv[worst] = fr;
            continue;
        }
        const bool outside = fr < fv[worst];
        auto contr = blend(outside ? rho_c : -rho_c);
        const double fc = fn(contr);
        ++out.evals;
        if (fc < std::min(fr, fv[worst])) {
            pts[worst] = std::move(contr);
            fv[worst] = fc;
            continue;
        }
        for (std::size_t k = 0; k <= n; ++k) {  // shrink toward the best point
            if (k == best) continue;
            for (std::size_t i = 0; i < n; ++i)
                pts[k][i] = pts[best][i] + sigma_s * (pts[k][i] - pts[best][i]);
            fv[k] = fn(pts[k]);
            ++out.evals;
        }
    }

    sort_simplex();
    out.x = pts[ord[0]];
    out.fval = fv[ord[0]];
    return out;
}

} // namespace fraclab
