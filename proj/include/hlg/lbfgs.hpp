#pragma once

#include "hlg/linalg.hpp"

#include <deque>
#include <functional>

namespace hlg {

// Minimal limited-memory BFGS with Armijo backtracking. Deterministic: no
// randomness, no parallel reductions.
struct LbfgsOptions {
    int max_iterations = 500;
    double grad_tol = 1e-8;
    int memory = 10;
    double armijo_c1 = 1e-4;
    int max_line_steps = 40;
};

struct LbfgsResult {
    Vec x;
    double f = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

// fg(x, &g) returns f and fills the gradient
inline LbfgsResult lbfgs_minimize(const std::function<double(const Vec&, Vec&)>& fg, Vec x0,
                                  const LbfgsOptions& opts = {}) {
    LbfgsResult res;
    Vec x = std::move(x0);
    Vec g(x.size());
    double f = fg(x, g);
    std::deque<std::pair<Vec, Vec>> pairs; // (s, y)

    for (int it = 0; it < opts.max_iterations; ++it) {
        res.iterations = it;
        double gn = g.cwiseAbs().maxCoeff();
        if (gn <= opts.grad_tol) {
            res.converged = true;
            break;
        }
        // two-loop recursion
        Vec q = g;
        std::vector<double> alpha(pairs.size());
        for (int i = static_cast<int>(pairs.size()) - 1; i >= 0; --i) {
            const auto& [s, y] = pairs[i];
            double rho = 1.0 / y.dot(s);
            alpha[i] = rho * s.dot(q);
            q -= alpha[i] * y;
        }
        if (!pairs.empty()) {
            const auto& [s, y] = pairs.back();
            q *= s.dot(y) / y.dot(y);
        }
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto& [s, y] = pairs[i];
            double rho = 1.0 / y.dot(s);
            double beta = rho * y.dot(q);
            q += (alpha[i] - beta) * s;
        }
        Vec d = -q;
        double dg = d.dot(g);
        if (dg > -1e-16 * (1.0 + std::abs(f))) { // not a descent direction: restart
            d = -g;
            dg = -g.squaredNorm();
            pairs.clear();
        }

        double step = 1.0;
        Vec xn, gn_vec(x.size());
        double fn = f;
        bool ok = false;
        for (int ls = 0; ls < opts.max_line_steps; ++ls) {
            xn = x + step * d;
            fn = fg(xn, gn_vec);
            if (fn <= f + opts.armijo_c1 * step * dg) {
                ok = true;
                break;
            }
            step *= 0.5;
        }
        if (!ok) break; // line search failed: stationary within noise

        Vec s = xn - x, y = gn_vec - g;
        if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
            pairs.emplace_back(std::move(s), std::move(y));
            if (static_cast<int>(pairs.size()) > opts.memory) pairs.pop_front();
        }
        x = std::move(xn);
        g = gn_vec;
        f = fn;
    }
    res.x = std::move(x);
    res.f = f;
    res.grad_norm = g.cwiseAbs().maxCoeff();
    if (res.grad_norm <= opts.grad_tol) res.converged = true;
    return res;
}

} // namespace hlg
