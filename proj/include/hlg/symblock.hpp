#pragma once

#include "hlg/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace hlg {

// ---- multi-index helpers -------------------------------------------------
//
// A symmetric j-linear block is stored canonically: one coefficient per
// nondecreasing multi-index (i1 <= ... <= ij) over {0..n-1}, enumerated in
// lexicographic order. rank/unrank are the stars-and-bars bijection.

inline std::int64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// number of nondecreasing tuples of given length over n symbols
inline int sym_index_count(int n, int length) {
    return static_cast<int>(binom(n + length - 1, length));
}

inline int sym_rank(const std::vector<int>& idx, int n) {
    const int j = static_cast<int>(idx.size());
    int rank = 0, prev = 0;
    for (int t = 0; t < j; ++t) {
        for (int c = prev; c < idx[t]; ++c)
            rank += sym_index_count(n - c, j - t - 1);
        prev = idx[t];
    }
    return rank;
}

inline std::vector<std::vector<int>> sym_indices(int n, int length) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(length, 0);
    if (length == 0) {
        out.push_back({});
        return out;
    }
    while (true) {
        out.push_back(cur);
        int t = length - 1;
        while (t >= 0 && cur[t] == n - 1) --t;
        if (t < 0) break;
        ++cur[t];
        for (int s = t + 1; s < length; ++s) cur[s] = cur[t];
    }
    return out;
}

// j! / prod(multiplicities!) = number of distinct arrangements of a sorted tuple
inline std::int64_t sym_multiplicity(const std::vector<int>& sorted_idx) {
    std::int64_t fact = 1;
    for (std::size_t i = 2; i <= sorted_idx.size(); ++i) fact *= static_cast<std::int64_t>(i);
    std::int64_t denom = 1;
    std::size_t i = 0;
    while (i < sorted_idx.size()) {
        std::size_t run = 1;
        while (i + run < sorted_idx.size() && sorted_idx[i + run] == sorted_idx[i]) ++run;
        for (std::size_t r = 2; r <= run; ++r) denom *= static_cast<std::int64_t>(r);
        i += run;
    }
    return fact / denom;
}

// ---- SymBlock --------------------------------------------------------------

template <class S>
struct SymBlock {
    int order = 1; // j
    int n = 0;     // input dimension
    int m = 0;     // output dimension
    std::vector<S> coeffs; // size m * sym_index_count(n, order); row o first

    SymBlock() = default;
    SymBlock(int order_, int n_, int m_)
        : order(order_), n(n_), m(m_),
          coeffs(static_cast<std::size_t>(m_) * sym_index_count(n_, order_), S(0)) {
        if (order_ < 1 || n_ < 1 || m_ < 1) throw Error("SymBlock: bad dimensions");
    }

    int index_count() const { return sym_index_count(n, order); }

    S& at(int o, const std::vector<int>& sorted_idx) {
        return coeffs[static_cast<std::size_t>(o) * index_count() + sym_rank(sorted_idx, n)];
    }
    const S& at(int o, const std::vector<int>& sorted_idx) const {
        return coeffs[static_cast<std::size_t>(o) * index_count() + sym_rank(sorted_idx, n)];
    }

    // coefficient for an arbitrary (unsorted) tuple
    S get(int o, std::vector<int> idx) const {
        std::sort(idx.begin(), idx.end());
        return at(o, idx);
    }

    bool same_shape(const SymBlock& b) const { return order == b.order && n == b.n && m == b.m; }

    SymBlock& operator+=(const SymBlock& b) {
        for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += b.coeffs[i];
        return *this;
    }
    SymBlock& operator-=(const SymBlock& b) {
        for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= b.coeffs[i];
        return *this;
    }
    SymBlock& operator*=(const S& c) {
        for (auto& v : coeffs) v *= c;
        return *this;
    }

    // dense expansion: entry(o, t1..tj) at o * n^j + sum tl * n^(j-1-l)
    std::vector<S> expand_full() const {
        std::size_t nj = 1;
        for (int t = 0; t < order; ++t) nj *= static_cast<std::size_t>(n);
        std::vector<S> full(static_cast<std::size_t>(m) * nj, S(0));
        std::vector<int> tuple(order, 0);
        for (std::size_t flat = 0; flat < nj; ++flat) {
            std::size_t rem = flat;
            for (int t = order - 1; t >= 0; --t) {
                tuple[t] = static_cast<int>(rem % n);
                rem /= n;
            }
            std::vector<int> sorted = tuple;
            std::sort(sorted.begin(), sorted.end());
            const int r = sym_rank(sorted, n);
            for (int o = 0; o < m; ++o)
                full[static_cast<std::size_t>(o) * nj + flat] = coeffs[static_cast<std::size_t>(o) * index_count() + r];
        }
        return full;
    }

    // compress a dense (possibly non-symmetric) tensor, symmetrizing it
    static SymBlock compress_symmetrize(const std::vector<S>& full, int order, int n, int m) {
        SymBlock out(order, n, m);
        std::size_t nj = 1;
        for (int t = 0; t < order; ++t) nj *= static_cast<std::size_t>(n);
        std::vector<S> sums(out.coeffs.size(), S(0));
        std::vector<int> tuple(order, 0);
        for (std::size_t flat = 0; flat < nj; ++flat) {
            std::size_t rem = flat;
            for (int t = order - 1; t >= 0; --t) {
                tuple[t] = static_cast<int>(rem % n);
                rem /= n;
            }
            std::vector<int> sorted = tuple;
            std::sort(sorted.begin(), sorted.end());
            const int r = sym_rank(sorted, n);
            for (int o = 0; o < m; ++o)
                sums[static_cast<std::size_t>(o) * out.index_count() + r] +=
                    full[static_cast<std::size_t>(o) * nj + flat];
        }
        const auto idxs = sym_indices(n, order);
        for (int o = 0; o < m; ++o)
            for (int r = 0; r < out.index_count(); ++r)
                out.coeffs[static_cast<std::size_t>(o) * out.index_count() + r] =
                    sums[static_cast<std::size_t>(o) * out.index_count() + r] / S(sym_multiplicity(idxs[r]));
        return out;
    }

    // p(v, v, ..., v) using arrangement multiplicities
    std::vector<S> apply_diagonal(const std::vector<S>& v) const {
        std::vector<S> out(m, S(0));
        const auto idxs = sym_indices(n, order);
        for (int r = 0; r < index_count(); ++r) {
            S mono(sym_multiplicity(idxs[r]));
            for (int t : idxs[r]) mono *= v[t];
            for (int o = 0; o < m; ++o) out[o] += coeffs[static_cast<std::size_t>(o) * index_count() + r] * mono;
        }
        return out;
    }
};

} // namespace hlg
