#include "doctest.h"

#include "hlg/jet.hpp"
#include "hlg/jet_fd.hpp"
#include "hlg/jetio.hpp"
#include "hlg/polymap.hpp"
#include "hlg/scalar.hpp"
#include "hlg/selftest.hpp"

#include <cmath>

using namespace hlg;

namespace {

Jet<double> jet1d(double x, double y, std::vector<double> coeffs) {
    Jet<double> j;
    j.order = static_cast<int>(coeffs.size());
    j.source = {x};
    j.target = {y};
    for (int ord = 1; ord <= j.order; ++ord) {
        SymBlock<double> b(ord, 1, 1);
        b.coeffs[0] = coeffs[ord - 1];
        j.blocks.push_back(std::move(b));
    }
    return j;
}

// Independent 1D series-reversion oracle: scaled coefficients b of f^{-1}
// from scaled coefficients a of f, via [x^m] sum_j b_j f(x)^j = [x^m] x.
std::vector<double> series_reversion(const std::vector<double>& a) {
    const int k = static_cast<int>(a.size());
    auto mul = [&](const std::vector<double>& p, const std::vector<double>& q) {
        std::vector<double> r(k + 1, 0.0); // r[d] = coeff of x^d, truncated
        for (int i = 0; i <= k; ++i)
            for (int j = 0; i + j <= k; ++j) r[i + j] += p[i] * q[j];
        return r;
    };
    std::vector<double> f(k + 1, 0.0);
    for (int d = 1; d <= k; ++d) f[d] = a[d - 1];
    std::vector<std::vector<double>> fpow{{}, f};
    for (int j = 2; j <= k; ++j) fpow.push_back(mul(fpow[j - 1], f));
    std::vector<double> b(k + 1, 0.0);
    b[1] = 1.0 / a[0];
    for (int m = 2; m <= k; ++m) {
        double s = 0.0;
        for (int j = 1; j < m; ++j) s += b[j] * fpow[j][m];
        b[m] = -s / std::pow(a[0], m);
    }
    return std::vector<double>(b.begin() + 1, b.end());
}

} // namespace

TEST_CASE("jet composition matches hand-derived chain rule") {
    auto inner = jet1d(0, 0, {2.0, 0.5});
    auto outer = jet1d(0, 0, {3.0, 1.0});
    auto r = compose(outer, inner);
    CHECK(r.source[0] == 0.0);
    CHECK(r.target[0] == 0.0);
    CHECK(r.blocks[0].coeffs[0] == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(r.blocks[1].coeffs[0] == doctest::Approx(5.5).epsilon(1e-14));
}

TEST_CASE("identity jet is neutral for composition") {
    Rng rng(7);
    auto s = random_jet(rng, 2, 3, 3, 1.0);
    auto idl = identity_jet(s.target, 3);
    auto idr = identity_jet(s.source, 3);
    CHECK(jet_max_diff(compose(idl, s), s) < 1e-14);
    CHECK(jet_max_diff(compose(s, idr), s) < 1e-14);
}

TEST_CASE("quadratic composition f=x+x^2, g=2y+y^2") {
    auto jf = jet1d(0, 0, {1.0, 1.0});
    auto jg = jet1d(0, 0, {2.0, 1.0});
    auto r = compose(jg, jf);
    CHECK(r.blocks[0].coeffs[0] == doctest::Approx(2.0));
    CHECK(r.blocks[1].coeffs[0] == doctest::Approx(3.0));
}

TEST_CASE("composition preconditions") {
    auto a = jet1d(0, 1, {2.0, 0.5});
    auto b = jet1d(0, 0, {3.0, 1.0});
    CHECK_THROWS_AS((void)compose(b, a), SourceTargetMismatch);
    auto c = jet1d(1, 0, {3.0});
    CHECK_THROWS_AS((void)compose(c, a), OrderMismatch);
}

TEST_CASE("jet evaluation: linear map") {
    auto j = jet1d(1, 3, {3.0, 0.0});
    TangentPoint<double> xi{{1.0}, {5.0}};
    auto r = evaluate(j, xi);
    CHECK(r.order == 1);
    CHECK(r.source == std::vector<double>{1.0, 5.0});
    CHECK(r.target == std::vector<double>{3.0, 15.0});
    // Tf(x,X) = (3x, 3X)
    CHECK(r.blocks[0].get(0, {0}) == doctest::Approx(3.0));
    CHECK(r.blocks[0].get(0, {1}) == doctest::Approx(0.0));
    CHECK(r.blocks[0].get(1, {0}) == doctest::Approx(0.0));
    CHECK(r.blocks[0].get(1, {1}) == doctest::Approx(3.0));
}

TEST_CASE("jet evaluation: f(x)=x^2 at x=1") {
    auto j = jet1d(1, 1, {2.0, 1.0}); // p1 = 2, p2 = d^2f/2! = 1
    TangentPoint<double> xi{{1.0}, {3.0}};
    auto r = evaluate(j, xi);
    CHECK(r.target == std::vector<double>{1.0, 6.0});
    // D(Tf)(1,3) rows [[2,0],[6,2]]
    CHECK(r.blocks[0].get(0, {0}) == doctest::Approx(2.0));
    CHECK(r.blocks[0].get(0, {1}) == doctest::Approx(0.0));
    CHECK(r.blocks[0].get(1, {0}) == doctest::Approx(6.0));
    CHECK(r.blocks[0].get(1, {1}) == doctest::Approx(2.0));
}

TEST_CASE("jet evaluation: zero tangent vector kills the vertical value") {
    Rng rng(11);
    auto s = random_jet(rng, 3, 2, 3, 1.0);
    TangentPoint<double> xi{s.source, {0.0, 0.0, 0.0}};
    auto r = evaluate(s, xi);
    CHECK(r.target[2] == 0.0);
    CHECK(r.target[3] == 0.0);
}

TEST_CASE("jet evaluation preconditions") {
    auto j = jet1d(1, 1, {2.0});
    CHECK_THROWS_AS((void)evaluate(jet1d(0, 0, {}), TangentPoint<double>{{0.0}, {1.0}}), OrderMismatch);
    CHECK_THROWS_AS((void)evaluate(j, TangentPoint<double>{{0.5}, {1.0}}), BaseMismatch);
}

TEST_CASE("jet inversion matches series reversion") {
    SUBCASE("f = 2x + x^2") {
        auto r = invert(jet1d(0, 0, {2.0, 1.0}));
        CHECK(r.blocks[0].coeffs[0] == doctest::Approx(0.5));
        CHECK(r.blocks[1].coeffs[0] == doctest::Approx(-0.125));
    }
    SUBCASE("f = x + x^2") {
        auto r = invert(jet1d(0, 0, {1.0, 1.0}));
        CHECK(r.blocks[0].coeffs[0] == doctest::Approx(1.0));
        CHECK(r.blocks[1].coeffs[0] == doctest::Approx(-1.0));
    }
    SUBCASE("random 1D jets vs reversion oracle, k = 4") {
        Rng rng(23);
        for (int t = 0; t < 50; ++t) {
            std::vector<double> a{1.0 + 0.5 * rng.normal(), 0.5 * rng.normal(), 0.5 * rng.normal(),
                                  0.5 * rng.normal()};
            if (std::abs(a[0]) < 0.2) continue;
            auto inv = invert(jet1d(0.3, -0.7, a));
            auto oracle = series_reversion(a);
            for (int j = 0; j < 4; ++j)
                CHECK(inv.blocks[j].coeffs[0] == doctest::Approx(oracle[j]).epsilon(1e-9));
            CHECK(inv.source == std::vector<double>{-0.7});
            CHECK(inv.target == std::vector<double>{0.3});
        }
    }
}

TEST_CASE("linear jet inversion is matrix inversion") {
    Jet<double> j;
    j.order = 1;
    j.source = {0.5, -1.0};
    j.target = {2.0, 0.0};
    SymBlock<double> b(1, 2, 2);
    b.at(0, {0}) = 1.0;
    b.at(0, {1}) = 2.0;
    b.at(1, {0}) = 3.0;
    b.at(1, {1}) = 4.0;
    j.blocks.push_back(b);
    auto r = invert(j);
    CHECK(r.source == j.target);
    CHECK(r.target == j.source);
    // inverse of [[1,2],[3,4]] = [[-2,1],[1.5,-0.5]]
    CHECK(r.blocks[0].get(0, {0}) == doctest::Approx(-2.0));
    CHECK(r.blocks[0].get(0, {1}) == doctest::Approx(1.0));
    CHECK(r.blocks[0].get(1, {0}) == doctest::Approx(1.5));
    CHECK(r.blocks[0].get(1, {1}) == doctest::Approx(-0.5));
}

TEST_CASE("inversion rejects singular linear parts") {
    CHECK_THROWS_AS((void)invert(jet1d(0, 0, {0.0, 1.0})), SingularLinearPart);
    Jet<double> j;
    j.order = 1;
    j.source = {0, 0};
    j.target = {0, 0};
    SymBlock<double> b(1, 2, 2);
    b.at(0, {0}) = 1.0;
    b.at(0, {1}) = 1.0;
    b.at(1, {0}) = 1.0;
    b.at(1, {1}) = 1.0 + 1e-12;
    j.blocks.push_back(b);
    CHECK_THROWS_AS((void)invert(j), SingularLinearPart);
}

TEST_CASE("jet_of_map: sin x at 0, k=3") {
    auto f = [](const std::vector<double>& x) { return std::vector<double>{std::sin(x[0])}; };
    auto j = jet_of_map(f, {0.0}, 3, 1e-3);
    CHECK(j.blocks[0].coeffs[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(j.blocks[1].coeffs[0]) < 1e-6);
    CHECK(j.blocks[2].coeffs[0] == doctest::Approx(-1.0 / 6.0).epsilon(1e-4));
}

TEST_CASE("jet_of_map: exact path for polynomials") {
    Rng rng(5);
    auto f = PolyMap<double>::random(rng, 2, 2, 3);
    auto j = jet_of_map(f, {0.25, -0.5}, 3);
    auto fd = jet_of_map([&](const std::vector<double>& x) { return f.eval(x); }, {0.25, -0.5}, 3, 1e-3);
    CHECK(jet_max_diff(j, fd) < 1e-5);
}

TEST_CASE("jet_of_map: functoriality cross-check on stored polynomials") {
    Rng rng(9);
    auto h = PolyMap<double>::random(rng, 2, 2, 2);
    auto g = PolyMap<double>::random(rng, 2, 1, 2);
    std::vector<double> x{0.5, -0.25};
    auto jh = jet_of_map(h, x, 3);
    auto jg = jet_of_map(g, jh.target, 3);
    auto direct = jet_of_map(g.compose_with(h), x, 3);
    CHECK(jet_max_diff(compose(jg, jh), direct) < 1e-12);
}

TEST_CASE("jet_of_map: step underflow") {
    auto f = [](const std::vector<double>& x) { return std::vector<double>{x[0] * x[0]}; };
    CHECK_THROWS_AS((void)jet_of_map(f, {0.0}, 4, 1e-5), StepTooSmall);
}

TEST_CASE("jet norm") {
    CHECK(jet_norm(jet1d(0, 0, {2.0, 0.5})) == doctest::Approx(2.5));
    CHECK(jet_norm(jet1d(0, 0, {0.0, 0.0, 0.0})) == 0.0);
    // norm of a known 2x2 symmetric bilinear block: p(v,v) = v1^2 + v2^2 has norm 1
    SymBlock<double> b(2, 2, 1);
    b.at(0, {0, 0}) = 1.0;
    b.at(0, {1, 1}) = 1.0;
    Jet<double> j;
    j.order = 2;
    j.source = {0, 0};
    j.target = {0};
    j.blocks.push_back(SymBlock<double>(1, 2, 1));
    j.blocks.push_back(b);
    CHECK(jet_norm(j) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("rational mode: functoriality is exact") {
    auto rep = jet_functoriality_battery(2026, 40, true);
    CHECK(rep.violations == 0);
    CHECK(rep.max_err == 0.0);
}

TEST_CASE("double mode batteries") {
    CHECK(jet_functoriality_battery(2026, 60, false).violations == 0);
    CHECK(jet_inversion_battery(2026, 60).violations == 0);
    auto b = jet_bounds_battery(2026, 120);
    CHECK(b.comp_violations == 0);
    CHECK(b.comp_lip_violations == 0);
    CHECK(b.eval_violations == 0);
    CHECK(b.eval_scaled_violations == 0);
    CHECK(jet_eval_consistency_battery(2026, 40).violations == 0);
    CHECK(symblock_roundtrip_battery(2026, 100).violations == 0);
}

TEST_CASE("jet json round-trip") {
    Rng rng(31);
    auto j = random_jet(rng, 2, 3, 3, 1.0);
    auto back = jet_from_json(jet_to_json(j));
    CHECK(jet_max_diff(j, back) == 0.0);
}
