#include "hlg/selftest.hpp"

#include "hlg/jet_fd.hpp"
#include "hlg/polymap.hpp"
#include "hlg/scalar.hpp"

#include <cmath>
#include <sstream>

namespace hlg {

Jet<double> random_jet(Rng& rng, int n, int m, int k, double scale) {
    Jet<double> j;
    j.order = k;
    j.source.resize(n);
    j.target.resize(m);
    for (auto& v : j.source) v = scale * rng.normal();
    for (auto& v : j.target) v = scale * rng.normal();
    for (int ord = 1; ord <= k; ++ord) {
        SymBlock<double> b(ord, n, m);
        for (auto& c : b.coeffs) c = scale * rng.normal();
        j.blocks.push_back(std::move(b));
    }
    return j;
}

namespace {

// jet with invertible linear part near the identity
Jet<double> random_invertible_jet(Rng& rng, int n, int k) {
    Jet<double> j = random_jet(rng, n, n, k, 0.25);
    std::vector<int> idx(1);
    for (int i = 0; i < n; ++i) {
        idx[0] = i;
        j.blocks[0].at(i, idx) += 1.0;
    }
    return j;
}

template <class S>
std::vector<S> random_point(Rng& rng, int n, int quarters) {
    std::vector<S> x(n);
    for (auto& v : x) v = S(rng.uniform_int(-quarters, quarters)) / S(4);
    return x;
}

template <class S>
double functoriality_trial(Rng& rng, int max_dim, int max_deg, int max_k) {
    const int n = rng.uniform_int(1, max_dim);
    const int m = rng.uniform_int(1, max_dim);
    const int l = rng.uniform_int(1, max_dim);
    const int k = rng.uniform_int(1, max_k);
    const int deg = rng.uniform_int(1, max_deg);
    auto f = PolyMap<S>::random(rng, n, m, deg);
    auto g = PolyMap<S>::random(rng, m, l, deg);
    auto x = random_point<S>(rng, n, 4);
    auto jf = f.jet_at(x, k);
    auto jg = g.jet_at(jf.target, k);
    auto lhs = compose(jg, jf);
    auto rhs = g.compose_with(f).jet_at(x, k);
    return jet_max_diff(lhs, rhs);
}

// formal difference of two equally-shaped jets, for the Lipschitz bound
Jet<double> jet_difference(const Jet<double>& a, const Jet<double>& b) {
    Jet<double> d = a;
    for (std::size_t i = 0; i < d.source.size(); ++i) d.source[i] -= b.source[i];
    for (std::size_t i = 0; i < d.target.size(); ++i) d.target[i] -= b.target[i];
    for (int j = 0; j < d.order; ++j)
        for (std::size_t i = 0; i < d.blocks[j].coeffs.size(); ++i) d.blocks[j].coeffs[i] -= b.blocks[j].coeffs[i];
    return d;
}

} // namespace

FunctorialityReport jet_functoriality_battery(std::uint64_t seed, int trials, bool rational_mode) {
    FunctorialityReport rep;
    rep.trials = trials;
    rep.exact_mode = rational_mode;
    Rng rng = Rng(seed).derive("functoriality");
    for (int t = 0; t < trials; ++t) {
        double err = rational_mode ? functoriality_trial<Rational>(rng, 2, 4, 3)
                                   : functoriality_trial<double>(rng, 3, 4, 4);
        rep.max_err = std::max(rep.max_err, err);
        if (rational_mode ? (err != 0.0) : (err > 1e-10)) ++rep.violations;
    }
    return rep;
}

InversionReport jet_inversion_battery(std::uint64_t seed, int trials) {
    InversionReport rep;
    rep.trials = trials;
    Rng rng = Rng(seed).derive("inversion");
    for (int t = 0; t < trials; ++t) {
        const int n = rng.uniform_int(1, 3);
        const int k = rng.uniform_int(1, 4);
        Jet<double> s = random_invertible_jet(rng, n, k);
        Jet<double> si = invert(s);
        double r1 = jet_max_diff(compose(si, s), identity_jet(s.source, k));
        double r2 = jet_max_diff(compose(s, si), identity_jet(si.source, k));
        double r = std::max(r1, r2);
        rep.max_roundtrip = std::max(rep.max_roundtrip, r);
        if (r > 1e-9) ++rep.violations;
    }
    return rep;
}

BoundsReport jet_bounds_battery(std::uint64_t seed, int trials) {
    BoundsReport rep;
    rep.trials = trials;
    Rng rng = Rng(seed).derive("bounds");
    const double slack = 1e-9; // estimator refinement slack, scaled by RHS below
    auto check = [&](double lhs, double rhs, int& counter) {
        double margin = rhs + slack * (1.0 + std::abs(rhs)) - lhs;
        rep.worst_margin = std::min(rep.worst_margin, rhs - lhs);
        if (margin < 0) ++counter;
    };

    for (int t = 0; t < trials; ++t) {
        const int n = rng.uniform_int(1, 3);
        const int m = rng.uniform_int(1, 3);
        const int l = rng.uniform_int(1, 3);
        const int k = rng.uniform_int(1, 4);
        Jet<double> s = random_jet(rng, n, m, k, 1.0);
        Jet<double> q = random_jet(rng, m, l, k, 1.0);
        q.source = s.target;

        const double ns = jet_norm(s), nq = jet_norm(q);
        check(jet_norm(compose(q, s)), (1.0 + nq) * (1.0 + std::pow(ns, k)), rep.comp_violations);

        // perturbed pair sharing the middle point
        Jet<double> s2 = s, q2 = q;
        for (auto& v : s2.source) v += 0.3 * rng.normal();
        for (auto& v : s2.target) v += 0.3 * rng.normal();
        q2.source = s2.target;
        for (auto& v : q2.target) v += 0.3 * rng.normal();
        for (int j = 0; j < k; ++j) {
            for (auto& c : s2.blocks[j].coeffs) c += 0.3 * rng.normal();
            for (auto& c : q2.blocks[j].coeffs) c += 0.3 * rng.normal();
        }
        const double ns2 = jet_norm(s2), dq = jet_norm(jet_difference(q2, q)), ds = jet_norm(jet_difference(s2, s));
        check(jet_norm(jet_difference(compose(q2, s2), compose(q, s))),
              dq * (1.0 + std::pow(ns2, k)) +
                  (1.0 + nq) * ds * (1.0 + k * std::pow(ns2, k - 1) + k * std::pow(ns, k - 1)),
              rep.comp_lip_violations);

        // evaluation bounds; the stated constant needs |X| <= 1 in the
        // scaled-block convention, the k-weighted variant holds for any X
        if (k >= 1) {
            TangentPoint<double> xi;
            xi.base = s.source;
            xi.vector.resize(n);
            double r = std::pow(rng.uniform(), 1.0 / n);
            double nn = 0;
            for (auto& v : xi.vector) {
                v = rng.normal();
                nn += v * v;
            }
            for (auto& v : xi.vector) v *= r / std::sqrt(std::max(nn, 1e-300));
            double nxi = tangent_norm(xi);
            check(jet_norm(evaluate(s, xi)), nxi + (k + 1) * ns + nxi * ns, rep.eval_violations);

            for (auto& v : xi.vector) v *= 5.0; // well past the |X|<=1 regime
            nxi = tangent_norm(xi);
            check(jet_norm(evaluate(s, xi)), nxi + (k + 1) * ns + k * nxi * ns, rep.eval_scaled_violations);
        }
    }
    return rep;
}

EvalConsistencyReport jet_eval_consistency_battery(std::uint64_t seed, int trials) {
    EvalConsistencyReport rep;
    rep.trials = trials;
    Rng rng = Rng(seed).derive("evalconsistency");
    for (int t = 0; t < trials; ++t) {
        const int n = rng.uniform_int(1, 3);
        const int m = rng.uniform_int(1, 3);
        const int k = rng.uniform_int(1, 3);
        auto f = PolyMap<double>::random(rng, n, m, 3);
        auto x = random_point<double>(rng, n, 4);
        TangentPoint<double> xi;
        xi.base = x;
        xi.vector = random_point<double>(rng, n, 4);

        auto lhs = evaluate(f.jet_at(x, k), xi);
        std::vector<double> xX = x;
        xX.insert(xX.end(), xi.vector.begin(), xi.vector.end());
        auto tf = f.tangent_map();
        auto rhs = tf.jet_at(xX, k - 1);
        double e1 = jet_max_diff(lhs, rhs);
        rep.max_err_exact = std::max(rep.max_err_exact, e1);

        auto tf_fn = [&](const std::vector<double>& z) { return tf.eval(z); };
        auto rhs_fd = jet_of_map(tf_fn, xX, k - 1, 1e-3);
        double e2 = jet_max_diff(lhs, rhs_fd);
        rep.max_err_fd = std::max(rep.max_err_fd, e2);
        if (e1 > 1e-10 || e2 > 1e-5) ++rep.violations;
    }
    return rep;
}

SymmetryReport symblock_roundtrip_battery(std::uint64_t seed, int trials) {
    SymmetryReport rep;
    rep.trials = trials;
    Rng rng = Rng(seed).derive("symmetry");
    for (int t = 0; t < trials; ++t) {
        const int n = rng.uniform_int(1, 4);
        const int m = rng.uniform_int(1, 3);
        const int j = rng.uniform_int(1, 4);
        SymBlock<double> b(j, n, m);
        for (auto& c : b.coeffs) c = rng.normal();
        auto back = SymBlock<double>::compress_symmetrize(b.expand_full(), j, n, m);
        for (std::size_t i = 0; i < b.coeffs.size(); ++i)
            if (std::abs(back.coeffs[i] - b.coeffs[i]) > 1e-13 * (1.0 + std::abs(b.coeffs[i]))) {
                ++rep.violations;
                break;
            }
    }
    return rep;
}

std::string selftest_report_text(std::uint64_t seed, int trials, bool rational_mode) {
    std::ostringstream os;
    auto f = jet_functoriality_battery(seed, trials, rational_mode);
    auto i = jet_inversion_battery(seed, trials);
    auto b = jet_bounds_battery(seed, trials);
    auto e = jet_eval_consistency_battery(seed, trials / 2 + 1);
    auto s = symblock_roundtrip_battery(seed, trials);
    os << "functoriality: trials=" << f.trials << " max_err=" << f.max_err
       << " violations=" << f.violations << (f.exact_mode ? " mode=rational" : " mode=double") << "\n";
    os << "inversion: trials=" << i.trials << " max_roundtrip=" << i.max_roundtrip
       << " violations=" << i.violations << "\n";
    os << "bounds: trials=" << b.trials << " comp=" << b.comp_violations
       << " comp_lip=" << b.comp_lip_violations << " eval=" << b.eval_violations
       << " eval_scaled=" << b.eval_scaled_violations << " worst_margin=" << b.worst_margin << "\n";
    os << "eval_consistency: trials=" << e.trials << " max_exact=" << e.max_err_exact
       << " max_fd=" << e.max_err_fd << " violations=" << e.violations << "\n";
    os << "symmetry_roundtrip: trials=" << s.trials << " violations=" << s.violations << "\n";
    return os.str();
}

bool selftest_all_pass(std::uint64_t seed, int trials, bool rational_mode) {
    return jet_functoriality_battery(seed, trials, rational_mode).violations == 0 &&
           jet_inversion_battery(seed, trials).violations == 0 &&
           [&] {
               auto b = jet_bounds_battery(seed, trials);
               return b.comp_violations == 0 && b.comp_lip_violations == 0 && b.eval_violations == 0 &&
                      b.eval_scaled_violations == 0;
           }() &&
           jet_eval_consistency_battery(seed, trials / 2 + 1).violations == 0 &&
           symblock_roundtrip_battery(seed, trials).violations == 0;
}

} // namespace hlg
