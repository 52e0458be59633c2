#pragma once

#include "hlg/errors.hpp"
#include "hlg/rng.hpp"
#include "hlg/symblock.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace hlg {

// A k-jet between open subsets of coordinate spaces. Block j stores
// d^j f(source) / j!, so jets compose by truncated polynomial composition
// and the identity jet is (x, x, [I, 0, ...]).
template <class S>
struct Jet {
    int order = 0;                  // k >= 0
    std::vector<S> source;          // point in R^n
    std::vector<S> target;          // point in R^m
    std::vector<SymBlock<S>> blocks; // blocks[j-1] has order j, dims (n, m)

    int n() const { return static_cast<int>(source.size()); }
    int m() const { return static_cast<int>(target.size()); }

    void validate() const {
        if (static_cast<int>(blocks.size()) != order) throw Error("Jet: block count != order");
        for (int j = 1; j <= order; ++j) {
            if (blocks[j - 1].order != j || blocks[j - 1].n != n() || blocks[j - 1].m != m())
                throw Error("Jet: block shape mismatch");
        }
    }
};

template <class S>
Jet<S> identity_jet(const std::vector<S>& x, int k) {
    Jet<S> j;
    j.order = k;
    j.source = x;
    j.target = x;
    const int n = static_cast<int>(x.size());
    for (int ord = 1; ord <= k; ++ord) {
        SymBlock<S> b(ord, n, n);
        if (ord == 1) {
            std::vector<int> idx(1);
            for (int i = 0; i < n; ++i) {
                idx[0] = i;
                b.at(i, idx) = S(1);
            }
        }
        j.blocks.push_back(std::move(b));
    }
    return j;
}

namespace detail {

// enumerate ordered compositions of m into parts of size >= 1
inline void for_each_composition(int m, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> parts;
    std::function<void(int)> rec = [&](int rem) {
        if (rem == 0) {
            fn(parts);
            return;
        }
        for (int i = 1; i <= rem; ++i) {
            parts.push_back(i);
            rec(rem - i);
            parts.pop_back();
        }
    };
    rec(m);
}

// Accumulate sum over j, over ordered compositions (i1..ij) of mtot with j <= jmax, of
//   q_j(inner_{i1}(.), ..., inner_{ij}(.))
// into a dense tensor of shape mout x nin^mtot. q_full[j] is the dense expansion of the
// order-j outer block (input dim nmid, output dim mout); inner_full[i] the dense order-i
// inner block (input dim nin, output dim nmid).
template <class S>
void accumulate_polycomp(std::vector<S>& out, int mtot, int nin, int nmid, int mout,
                         const std::vector<std::vector<S>>& q_full,
                         const std::vector<std::vector<S>>& inner_full, int jmax) {
    std::size_t nin_pow = 1;
    for (int t = 0; t < mtot; ++t) nin_pow *= static_cast<std::size_t>(nin);

    std::vector<int> tuple(mtot, 0);
    for_each_composition(mtot, [&](const std::vector<int>& parts) {
        const int j = static_cast<int>(parts.size());
        if (j > jmax || q_full[j].empty()) return;
        std::size_t nmid_pow = 1;
        for (int t = 0; t < j; ++t) nmid_pow *= static_cast<std::size_t>(nmid);

        for (std::size_t flat = 0; flat < nin_pow; ++flat) {
            std::size_t rem = flat;
            for (int t = mtot - 1; t >= 0; --t) {
                tuple[t] = static_cast<int>(rem % nin);
                rem /= nin;
            }
            // w[s][a] = inner_{parts[s]}[a][group_s of tuple]
            std::vector<std::vector<S>> w(j, std::vector<S>(nmid));
            int pos = 0;
            for (int s = 0; s < j; ++s) {
                const int isz = parts[s];
                std::size_t gflat = 0;
                for (int t = 0; t < isz; ++t) gflat = gflat * nin + tuple[pos + t];
                pos += isz;
                std::size_t ni_pow = 1;
                for (int t = 0; t < isz; ++t) ni_pow *= static_cast<std::size_t>(nin);
                for (int a = 0; a < nmid; ++a)
                    w[s][a] = inner_full[isz][static_cast<std::size_t>(a) * ni_pow + gflat];
            }
            // contract q_j with (w1..wj)
            std::vector<int> atup(j, 0);
            for (std::size_t aflat = 0; aflat < nmid_pow; ++aflat) {
                std::size_t arem = aflat;
                for (int t = j - 1; t >= 0; --t) {
                    atup[t] = static_cast<int>(arem % nmid);
                    arem /= nmid;
                }
                S prod(1);
                for (int s = 0; s < j; ++s) prod *= w[s][atup[s]];
                if (prod == S(0)) continue;
                for (int o = 0; o < mout; ++o)
                    out[static_cast<std::size_t>(o) * nin_pow + flat] +=
                        q_full[j][static_cast<std::size_t>(o) * nmid_pow + aflat] * prod;
            }
        }
    });
}

template <class S>
std::vector<std::vector<S>> expand_blocks(const Jet<S>& j) {
    std::vector<std::vector<S>> full(j.order + 1);
    for (int i = 1; i <= j.order; ++i) full[i] = j.blocks[i - 1].expand_full();
    return full;
}

// Dense linear solve / inverse, templated so the rational mode stays exact.
template <class S>
std::vector<S> invert_matrix(const std::vector<S>& a_in, int n) {
    std::vector<S> a = a_in;                 // n x n, row major
    std::vector<S> inv(static_cast<std::size_t>(n) * n, S(0));
    for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i) * n + i] = S(1);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        if constexpr (std::is_same_v<S, double>) {
            double best = 0.0;
            for (int r = col; r < n; ++r) {
                double v = std::abs(a[static_cast<std::size_t>(r) * n + col]);
                if (v > best) { best = v; piv = r; }
            }
            if (piv < 0 || best == 0.0) throw SingularLinearPart();
        } else {
            for (int r = col; r < n; ++r)
                if (a[static_cast<std::size_t>(r) * n + col] != S(0)) { piv = r; break; }
            if (piv < 0) throw SingularLinearPart();
        }
        if (piv != col)
            for (int c = 0; c < n; ++c) {
                std::swap(a[static_cast<std::size_t>(piv) * n + c], a[static_cast<std::size_t>(col) * n + c]);
                std::swap(inv[static_cast<std::size_t>(piv) * n + c], inv[static_cast<std::size_t>(col) * n + c]);
            }
        const S d = a[static_cast<std::size_t>(col) * n + col];
        for (int c = 0; c < n; ++c) {
            a[static_cast<std::size_t>(col) * n + c] /= d;
            inv[static_cast<std::size_t>(col) * n + c] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const S f = a[static_cast<std::size_t>(r) * n + col];
            if (f == S(0)) continue;
            for (int c = 0; c < n; ++c) {
                a[static_cast<std::size_t>(r) * n + c] -= f * a[static_cast<std::size_t>(col) * n + c];
                inv[static_cast<std::size_t>(r) * n + c] -= f * inv[static_cast<std::size_t>(col) * n + c];
            }
        }
    }
    return inv;
}

} // namespace detail

// Truncated composition: (y,z,q) o (x,y,p) = (x, z, pi_k(q o p)).
template <class S>
Jet<S> compose(const Jet<S>& outer, const Jet<S>& inner) {
    if (outer.order != inner.order) throw OrderMismatch();
    if (outer.source != inner.target) throw SourceTargetMismatch();
    const int k = outer.order;
    const int nin = inner.n(), nmid = inner.m(), mout = outer.m();

    Jet<S> out;
    out.order = k;
    out.source = inner.source;
    out.target = outer.target;

    const auto qf = detail::expand_blocks(outer);
    const auto pf = detail::expand_blocks(inner);
    for (int mtot = 1; mtot <= k; ++mtot) {
        std::size_t nin_pow = 1;
        for (int t = 0; t < mtot; ++t) nin_pow *= static_cast<std::size_t>(nin);
        std::vector<S> full(static_cast<std::size_t>(mout) * nin_pow, S(0));
        detail::accumulate_polycomp(full, mtot, nin, nmid, mout, qf, pf, mtot);
        out.blocks.push_back(SymBlock<S>::compress_symmetrize(full, mtot, nin, mout));
    }
    return out;
}

// Tangent point (x, X) for jet evaluation.
template <class S>
struct TangentPoint {
    std::vector<S> base;
    std::vector<S> vector;
};

// Evaluation sigma (.) xi: the (k-1)-jet of the tangent map at (x, X).
// With blocks scaled by 1/j!, the V-component of result block l is
// (l+1) p_{l+1}(h..h, X) + sum_s p_l(h.. V_s ..h); the defining property
// (result equals the finite-difference jet of Tf) pins these coefficients.
template <class S>
Jet<S> evaluate(const Jet<S>& jet, const TangentPoint<S>& xi) {
    if (jet.order < 1) throw OrderMismatch();
    if (xi.base != jet.source) throw BaseMismatch();
    const int k = jet.order, n = jet.n(), m = jet.m();
    const auto pf = detail::expand_blocks(jet);

    Jet<S> out;
    out.order = k - 1;
    out.source = xi.base;
    out.source.insert(out.source.end(), xi.vector.begin(), xi.vector.end());
    out.target = jet.target;
    {
        std::vector<S> p1x(m, S(0));
        for (int o = 0; o < m; ++o)
            for (int a = 0; a < n; ++a) p1x[o] += pf[1][static_cast<std::size_t>(o) * n + a] * xi.vector[a];
        out.target.insert(out.target.end(), p1x.begin(), p1x.end());
    }

    const int n2 = 2 * n, m2 = 2 * m;
    for (int l = 1; l <= k - 1; ++l) {
        std::size_t n2_pow = 1;
        for (int t = 0; t < l; ++t) n2_pow *= static_cast<std::size_t>(n2);
        std::size_t n_pow = 1;
        for (int t = 0; t < l; ++t) n_pow *= static_cast<std::size_t>(n);
        std::vector<S> full(static_cast<std::size_t>(m2) * n2_pow, S(0));
        std::vector<int> tuple(l, 0);
        for (std::size_t flat = 0; flat < n2_pow; ++flat) {
            std::size_t rem = flat;
            for (int t = l - 1; t >= 0; --t) {
                tuple[t] = static_cast<int>(rem % n2);
                rem /= n2;
            }
            int vcount = 0, vpos = -1;
            for (int t = 0; t < l; ++t)
                if (tuple[t] >= n) { ++vcount; vpos = t; }
            if (vcount == 0) {
                std::size_t hflat = 0;
                for (int t = 0; t < l; ++t) hflat = hflat * n + tuple[t];
                // H rows: p_l on the horizontal parts
                for (int o = 0; o < m; ++o)
                    full[static_cast<std::size_t>(o) * n2_pow + flat] =
                        pf[l][static_cast<std::size_t>(o) * n_pow + hflat];
                // V rows, first term: (l+1) p_{l+1}(h..h, X)
                for (int o = 0; o < m; ++o) {
                    S acc(0);
                    for (int a = 0; a < n; ++a)
                        acc += pf[l + 1][static_cast<std::size_t>(o) * (n_pow * n) + hflat * n + a] * xi.vector[a];
                    full[static_cast<std::size_t>(o + m) * n2_pow + flat] = S(l + 1) * acc;
                }
            } else if (vcount == 1) {
                // V rows, second term: p_l with one vertical slot
                std::size_t hflat = 0;
                for (int t = 0; t < l; ++t) hflat = hflat * n + (t == vpos ? tuple[t] - n : tuple[t]);
                for (int o = 0; o < m; ++o)
                    full[static_cast<std::size_t>(o + m) * n2_pow + flat] =
                        pf[l][static_cast<std::size_t>(o) * n_pow + hflat];
            }
        }
        out.blocks.push_back(SymBlock<S>::compress_symmetrize(full, l, n2, m2));
    }
    return out;
}

// Jet inversion by the triangular recursion q1 = p1^{-1},
// q_m = - sum_{j<m} sum_{i1+..+ij=m} q_j(p_{i1} o q1, ..., p_{ij} o q1).
template <class S>
Jet<S> invert(const Jet<S>& jet, double rcond_min = 1e-10) {
    if (jet.n() != jet.m()) throw SingularLinearPart("invert: non-square linear part");
    const int k = jet.order, n = jet.n();
    if (k < 1) throw OrderMismatch();

    const auto pf = detail::expand_blocks(jet);
    std::vector<S> q1 = detail::invert_matrix(pf[1], n);
    if constexpr (std::is_same_v<S, double>) {
        double norm_a = 0, norm_inv = 0; // max row sums
        for (int r = 0; r < n; ++r) {
            double sa = 0, si = 0;
            for (int c = 0; c < n; ++c) {
                sa += std::abs(pf[1][static_cast<std::size_t>(r) * n + c]);
                si += std::abs(q1[static_cast<std::size_t>(r) * n + c]);
            }
            norm_a = std::max(norm_a, sa);
            norm_inv = std::max(norm_inv, si);
        }
        if (1.0 / (norm_a * norm_inv) < rcond_min) throw SingularLinearPart("invert: ill-conditioned linear part");
    }

    Jet<S> out;
    out.order = k;
    out.source = jet.target;
    out.target = jet.source;
    {
        SymBlock<S> b(1, n, n);
        std::vector<int> idx(1);
        for (int o = 0; o < n; ++o)
            for (int c = 0; c < n; ++c) {
                idx[0] = c;
                b.at(o, idx) = q1[static_cast<std::size_t>(o) * n + c];
            }
        out.blocks.push_back(std::move(b));
    }

    // ptilde_i = p_i with every input slot composed with q1
    std::vector<std::vector<S>> ptilde(k + 1);
    for (int i = 1; i <= k; ++i) {
        std::size_t n_pow = 1;
        for (int t = 0; t < i; ++t) n_pow *= static_cast<std::size_t>(n);
        ptilde[i].assign(static_cast<std::size_t>(n) * n_pow, S(0));
        std::vector<int> atup(i, 0), ttup(i, 0);
        for (std::size_t tflat = 0; tflat < n_pow; ++tflat) {
            std::size_t rem = tflat;
            for (int t = i - 1; t >= 0; --t) {
                ttup[t] = static_cast<int>(rem % n);
                rem /= n;
            }
            for (std::size_t aflat = 0; aflat < n_pow; ++aflat) {
                std::size_t arem = aflat;
                for (int t = i - 1; t >= 0; --t) {
                    atup[t] = static_cast<int>(arem % n);
                    arem /= n;
                }
                S prod(1);
                for (int s = 0; s < i; ++s) prod *= q1[static_cast<std::size_t>(atup[s]) * n + ttup[s]];
                if (prod == S(0)) continue;
                for (int o = 0; o < n; ++o)
                    ptilde[i][static_cast<std::size_t>(o) * n_pow + tflat] +=
                        pf[i][static_cast<std::size_t>(o) * n_pow + aflat] * prod;
            }
        }
    }

    std::vector<std::vector<S>> qfull(k + 1);
    qfull[1] = q1;
    for (int mtot = 2; mtot <= k; ++mtot) {
        std::size_t n_pow = 1;
        for (int t = 0; t < mtot; ++t) n_pow *= static_cast<std::size_t>(n);
        std::vector<S> full(static_cast<std::size_t>(n) * n_pow, S(0));
        detail::accumulate_polycomp(full, mtot, n, n, n, qfull, ptilde, mtot - 1);
        for (auto& v : full) v = -v;
        auto blk = SymBlock<S>::compress_symmetrize(full, mtot, n, n);
        qfull[mtot] = blk.expand_full();
        out.blocks.push_back(std::move(blk));
    }
    return out;
}

// ---- norms (double only) ---------------------------------------------------

namespace detail {

inline double vec_norm2(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Diagonal sup-norm estimator. For symmetric multilinear maps into a
// Euclidean space the operator norm equals sup_{|v|=1} |p(v,..,v)|
// (Banach), so maximizing over the sphere is the right target; the sample
// plus ascent refinement below is the documented estimator, exact for n=1.
inline double sym_block_norm(const SymBlock<double>& p) {
    const int n = p.n, j = p.order;
    if (n == 1) {
        std::vector<double> v{1.0};
        return vec_norm2(p.apply_diagonal(v));
    }
    auto value = [&](const std::vector<double>& v) { return vec_norm2(p.apply_diagonal(v)); };
    auto gradient = [&](const std::vector<double>& v) {
        // grad of |P(v)|^2 where P_o(v) = p_o(v..v)
        std::vector<double> Pv = p.apply_diagonal(v);
        std::vector<double> g(n, 0.0);
        const auto idxs = sym_indices(n, j);
        for (int r = 0; r < p.index_count(); ++r) {
            const auto& J = idxs[r];
            const double mult = static_cast<double>(sym_multiplicity(J));
            for (int s = 0; s < j; ++s) {
                double prod = mult;
                for (int t = 0; t < j; ++t)
                    if (t != s) prod *= v[J[t]];
                for (int o = 0; o < p.m; ++o)
                    g[J[s]] += 2.0 * Pv[o] * p.coeffs[static_cast<std::size_t>(o) * p.index_count() + r] * prod;
            }
        }
        return g;
    };

    Rng rng(0x5eed5eedULL); // fixed: the estimator is part of the spec'd contract
    std::vector<std::vector<double>> cands;
    for (int i = 0; i < n; ++i) {
        std::vector<double> e(n, 0.0);
        e[i] = 1.0;
        cands.push_back(e);
    }
    const int nsamp = n <= 3 ? 160 : 320;
    for (int s = 0; s < nsamp; ++s) {
        std::vector<double> v(n);
        double nrm = 0;
        for (int i = 0; i < n; ++i) {
            v[i] = rng.normal();
            nrm += v[i] * v[i];
        }
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12) continue;
        for (auto& x : v) x /= nrm;
        cands.push_back(v);
    }
    double best = 0;
    std::vector<double> bestv = cands[0];
    for (auto& v : cands) {
        double f = value(v);
        if (f > best) { best = f; bestv = v; }
    }
    // projected gradient ascent from the best few starting points
    std::vector<std::vector<double>> starts{bestv};
    for (auto& v : cands)
        if (starts.size() < 4 && value(v) > 0.9 * best) starts.push_back(v);
    for (auto v : starts) {
        double step = 0.2;
        double f = value(v);
        for (int it = 0; it < 60; ++it) {
            auto g = gradient(v);
            double gn = vec_norm2(g);
            if (gn < 1e-14) break;
            std::vector<double> w(n);
            for (int i = 0; i < n; ++i) w[i] = v[i] + step * g[i] / gn;
            double wn = vec_norm2(w);
            for (auto& x : w) x /= wn;
            double fw = value(w);
            if (fw > f) {
                v = w;
                f = fw;
                step *= 1.3;
            } else {
                step *= 0.5;
                if (step < 1e-10) break;
            }
        }
        best = std::max(best, f);
    }
    return best;
}

} // namespace detail

// ||x|| + ||y|| + sum_j ||p_j||
inline double jet_norm(const Jet<double>& j) {
    double s = detail::vec_norm2(j.source) + detail::vec_norm2(j.target);
    for (const auto& b : j.blocks) s += detail::sym_block_norm(b);
    return s;
}

inline double tangent_norm(const TangentPoint<double>& xi) {
    return detail::vec_norm2(xi.base) + detail::vec_norm2(xi.vector);
}

// max componentwise deviation between jets of equal shape (test helper)
template <class S>
double jet_max_diff(const Jet<S>& a, const Jet<S>& b) {
    auto absval = [](const S& v) { return std::abs(static_cast<double>(v)); };
    if (a.order != b.order || a.source.size() != b.source.size() || a.target.size() != b.target.size())
        return std::numeric_limits<double>::infinity();
    double d = 0;
    for (std::size_t i = 0; i < a.source.size(); ++i) d = std::max(d, absval(a.source[i] - b.source[i]));
    for (std::size_t i = 0; i < a.target.size(); ++i) d = std::max(d, absval(a.target[i] - b.target[i]));
    for (int j = 0; j < a.order; ++j) {
        if (a.blocks[j].coeffs.size() != b.blocks[j].coeffs.size())
            return std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < a.blocks[j].coeffs.size(); ++i)
            d = std::max(d, absval(a.blocks[j].coeffs[i] - b.blocks[j].coeffs[i]));
    }
    return d;
}

} // namespace hlg
