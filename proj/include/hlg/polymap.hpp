#pragma once

#include "hlg/jet.hpp"
#include "hlg/rng.hpp"

#include <map>
#include <vector>

namespace hlg {

// Multivariate polynomial map R^n -> R^m with exact arithmetic in S.
// Monomials are exponent vectors of length n. Supports exact evaluation,
// composition, and jet extraction; this is the exact path of jet_of_map.
template <class S>
struct PolyMap {
    using Monomials = std::map<std::vector<int>, S>;
    int n = 0, m = 0;
    std::vector<Monomials> comps;

    PolyMap() = default;
    PolyMap(int n_, int m_) : n(n_), m(m_), comps(m_) {}

    void add_term(int o, std::vector<int> expo, S c) {
        if (c == S(0)) return;
        auto it = comps[o].find(expo);
        if (it == comps[o].end())
            comps[o].emplace(std::move(expo), c);
        else {
            it->second += c;
            if (it->second == S(0)) comps[o].erase(it);
        }
    }

    std::vector<S> eval(const std::vector<S>& x) const {
        std::vector<S> out(m, S(0));
        for (int o = 0; o < m; ++o)
            for (const auto& [expo, c] : comps[o]) {
                S term = c;
                for (int i = 0; i < n; ++i)
                    for (int e = 0; e < expo[i]; ++e) term *= x[i];
                out[o] += term;
            }
        return out;
    }

    static Monomials poly_mul(const Monomials& a, const Monomials& b, int n) {
        Monomials out;
        for (const auto& [ea, ca] : a)
            for (const auto& [eb, cb] : b) {
                std::vector<int> e(n);
                for (int i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
                auto it = out.find(e);
                if (it == out.end())
                    out.emplace(std::move(e), ca * cb);
                else
                    it->second += ca * cb;
            }
        return out;
    }

    // this o inner (inner maps R^p -> R^n)
    PolyMap compose_with(const PolyMap& inner) const {
        PolyMap out(inner.n, m);
        for (int o = 0; o < m; ++o) {
            Monomials acc;
            for (const auto& [expo, c] : comps[o]) {
                Monomials term;
                term.emplace(std::vector<int>(inner.n, 0), c);
                for (int i = 0; i < n; ++i)
                    for (int e = 0; e < expo[i]; ++e) term = poly_mul(term, inner.comps[i], inner.n);
                for (auto& [e, v] : term) {
                    auto it = acc.find(e);
                    if (it == acc.end())
                        acc.emplace(e, v);
                    else
                        it->second += v;
                }
            }
            for (auto it = acc.begin(); it != acc.end();) {
                if (it->second == S(0))
                    it = acc.erase(it);
                else
                    ++it;
            }
            out.comps[o] = std::move(acc);
        }
        return out;
    }

    // d/dx_i of component o, as monomials
    Monomials derivative(int o, int i) const {
        Monomials out;
        for (const auto& [expo, c] : comps[o]) {
            if (expo[i] == 0) continue;
            std::vector<int> e = expo;
            S coef = c * S(e[i]);
            e[i] -= 1;
            out.emplace(std::move(e), coef);
        }
        return out;
    }

    // Tangent map Tf : R^{2n} -> R^{2m}, (x, X) -> (f(x), df(x)X)
    PolyMap tangent_map() const {
        PolyMap out(2 * n, 2 * m);
        for (int o = 0; o < m; ++o) {
            for (const auto& [expo, c] : comps[o]) {
                std::vector<int> e(2 * n, 0);
                for (int i = 0; i < n; ++i) e[i] = expo[i];
                out.add_term(o, e, c);
            }
            for (int i = 0; i < n; ++i)
                for (const auto& [expo, c] : derivative(o, i)) {
                    std::vector<int> e(2 * n, 0);
                    for (int t = 0; t < n; ++t) e[t] = expo[t];
                    e[n + i] += 1;
                    out.add_term(o + m, e, c);
                }
        }
        return out;
    }

    // exact k-jet at x, blocks d^j f(x)/j!
    Jet<S> jet_at(const std::vector<S>& x, int k) const {
        Jet<S> out;
        out.order = k;
        out.source = x;
        out.target = eval(x);
        for (int j = 1; j <= k; ++j) {
            SymBlock<S> b(j, n, m);
            S fact(1);
            for (int t = 2; t <= j; ++t) fact *= S(t);
            const auto idxs = sym_indices(n, j);
            for (const auto& J : idxs) {
                for (int o = 0; o < m; ++o) {
                    // mixed partial of each monomial along J, evaluated at x
                    S acc(0);
                    for (const auto& [expo, c] : comps[o]) {
                        std::vector<int> e = expo;
                        S coef = c;
                        bool dead = false;
                        for (int i : J) {
                            if (e[i] == 0) { dead = true; break; }
                            coef *= S(e[i]);
                            e[i] -= 1;
                        }
                        if (dead) continue;
                        for (int i = 0; i < n; ++i)
                            for (int t = 0; t < e[i]; ++t) coef *= x[i];
                        acc += coef;
                    }
                    b.at(o, J) = acc / fact;
                }
            }
            out.blocks.push_back(std::move(b));
        }
        return out;
    }

    // Random polynomial with quarter-integer coefficients (exactly
    // representable in binary, so double and rational modes see the
    // same map).
    static PolyMap random(Rng& rng, int n, int m, int degree, double density = 0.6) {
        PolyMap out(n, m);
        std::function<void(std::vector<int>&, int, int)> rec = [&](std::vector<int>& e, int i, int rem) {
            if (i == n) {
                int total = 0;
                for (int v : e) total += v;
                if (total == 0) return; // constant terms don't affect jets beyond target
                if (rng.uniform() < density) {
                    for (int o = 0; o < m; ++o) {
                        int num = rng.uniform_int(-4, 4);
                        if (num != 0) out.add_term(o, e, S(num) / S(4));
                    }
                }
                return;
            }
            for (int v = 0; v <= rem; ++v) {
                e[i] = v;
                rec(e, i + 1, rem - v);
                e[i] = 0;
            }
        };
        std::vector<int> e(n, 0);
        rec(e, 0, degree);
        return out;
    }
};

} // namespace hlg
