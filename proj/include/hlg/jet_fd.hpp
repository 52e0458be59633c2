#pragma once

#include "hlg/jet.hpp"
#include "hlg/polymap.hpp"

#include <functional>

namespace hlg {

using VecFn = std::function<std::vector<double>(const std::vector<double>&)>;

namespace detail {

// iterated central difference: apply D_i for each i in idx (O(h^2) per level)
inline std::vector<double> iterated_central(const VecFn& f, std::vector<double> x,
                                            const std::vector<int>& idx, std::size_t level, double h) {
    if (level == idx.size()) return f(x);
    const int i = idx[level];
    std::vector<double> xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    auto fp = iterated_central(f, xp, idx, level + 1, h);
    auto fm = iterated_central(f, xm, idx, level + 1, h);
    for (std::size_t t = 0; t < fp.size(); ++t) fp[t] = (fp[t] - fm[t]) / (2.0 * h);
    return fp;
}

} // namespace detail

// Finite-difference k-jet of a black-box map; blocks are O(h^2) accurate.
// h <= 0 picks a per-order step balancing truncation against roundoff.
inline Jet<double> jet_of_map(const VecFn& f, const std::vector<double>& x, int k, double h = -1.0) {
    if (k > 4) throw Error("jet_of_map: finite-difference path supports k <= 4");
    const double eps = 2.22e-16;
    double scale = 1.0;
    for (double c : x) scale = std::max(scale, std::abs(c));

    Jet<double> out;
    out.order = k;
    out.source = x;
    out.target = f(x);
    const int n = static_cast<int>(x.size());
    const int m = static_cast<int>(out.target.size());

    for (int j = 1; j <= k; ++j) {
        double hj = h > 0 ? h : std::pow(eps, 1.0 / (j + 2));
        if (std::pow(hj, j) < 16.0 * eps * scale) throw StepTooSmall();
        SymBlock<double> b(j, n, m);
        double fact = 1;
        for (int t = 2; t <= j; ++t) fact *= t;
        for (const auto& J : sym_indices(n, j)) {
            auto d = detail::iterated_central(f, x, J, 0, hj);
            for (int o = 0; o < m; ++o) b.at(o, J) = d[o] / fact;
        }
        out.blocks.push_back(std::move(b));
    }
    return out;
}

// exact path for stored polynomials
template <class S>
Jet<S> jet_of_map(const PolyMap<S>& f, const std::vector<S>& x, int k) {
    return f.jet_at(x, k);
}

} // namespace hlg
