#include "doctest.h"

#include "hlg/bvp.hpp"

#include <cmath>

using namespace hlg;

namespace {

Vec unit3(int i) {
    Vec v = Vec::Zero(3);
    v[i] = 1.0;
    return v;
}

BVPOptions fast_opts(bool adjoint = true) {
    BVPOptions o;
    o.restarts = 2;
    o.use_adjoint = adjoint;
    return o;
}

} // namespace

TEST_CASE("control energy") {
    auto so3 = make_so(3);
    auto metric = make_dense_metric(so3.get(), Mat::Identity(3, 3));

    SUBCASE("constant control") {
        Vec u(3);
        u << 0.3, -0.2, 0.5;
        auto path = ControlPath::constant(so3.get(), u, 8);
        CHECK(energy(path, metric) == doctest::Approx(u.squaredNorm()).epsilon(1e-14));
        CHECK(energy(ControlPath::constant(so3.get(), Vec::Zero(3), 8), metric) == 0.0);
    }
    SUBCASE("rotation by theta about e3 costs theta^2") {
        double theta = 1.3;
        auto path = ControlPath::constant(so3.get(), theta * unit3(2), 16);
        CHECK(energy(path, metric) == doctest::Approx(theta * theta).epsilon(1e-14));
    }
}

TEST_CASE("solve_bvp on SO(3)") {
    auto so3 = make_so(3);
    auto metric = make_dense_metric(so3.get(), Mat::Identity(3, 3));
    GroupPoint e{so3.get(), so3->identity()};

    SUBCASE("identical endpoints give the zero control") {
        auto sol = solve_bvp(make_bvp(metric, e, e, 8), fast_opts());
        CHECK(sol.converged);
        CHECK(sol.energy <= 1e-12);
        CHECK(sol.endpoint_error <= 1e-8);
    }

    SUBCASE("distance equals the rotation angle; controls are constant") {
        for (double theta : {0.5, 1.0, 2.0}) {
            GroupPoint x1{so3.get(), so3->chart_exp(theta * unit3(2))};
            auto sol = solve_bvp(make_bvp(metric, e, x1, 16), fast_opts());
            REQUIRE(sol.converged);
            CHECK(std::abs(std::sqrt(sol.energy) - theta) < 1e-4);
            // sample standard deviation of the control across intervals
            Vec mean = Vec::Zero(3);
            for (int i = 0; i < 16; ++i) mean += Vec(sol.xi.samples.row(i)) / 16.0;
            double var = 0.0;
            for (int i = 0; i < 16; ++i) var += (Vec(sol.xi.samples.row(i)) - mean).squaredNorm() / 16.0;
            CHECK(std::sqrt(var) <= 1e-4);
            auto rep = minimality_check(sol, metric);
            CHECK(rep.pass);
        }
    }

    SUBCASE("finite-difference and adjoint gradients agree") {
        GroupPoint x1{so3.get(), so3->chart_exp(Vec(0.9 * unit3(0) + 0.4 * unit3(1)))};
        auto p = make_bvp(metric, e, x1, 8);
        BVPOptions o1 = fast_opts(false), o2 = fast_opts(true);
        o1.restarts = o2.restarts = 1;
        auto s1 = solve_bvp(p, o1);
        auto s2 = solve_bvp(p, o2);
        REQUIRE(s1.converged);
        REQUIRE(s2.converged);
        CHECK(std::abs(s1.energy - s2.energy) < 1e-8);
    }

    SUBCASE("penalty continuation is monotone and the solve is deterministic") {
        GroupPoint x1{so3.get(), so3->chart_exp(Vec(1.2 * unit3(1)))};
        auto p = make_bvp(metric, e, x1, 16);
        BVPOptions o = fast_opts();
        o.seed = 77;
        auto s1 = solve_bvp(p, o);
        for (std::size_t i = 1; i < s1.stage_endpoint_errors.size(); ++i)
            CHECK(s1.stage_endpoint_errors[i] <= s1.stage_endpoint_errors[i - 1] + 1e-15);
        auto s2 = solve_bvp(p, o);
        CHECK((s1.xi.samples - s2.xi.samples).cwiseAbs().maxCoeff() == 0.0);
        CHECK(s1.energy == s2.energy);
    }
}

TEST_CASE("direct product splits into factor geodesics") {
    auto so3 = make_so(3);
    auto sd = make_semidirect(so3, trivial_rep(2));
    Mat a = Mat::Identity(5, 5);
    a.diagonal() << 1, 1, 1, 2, 3; // product metric, fiber block diag(2,3)
    auto metric = make_dense_metric(sd.get(), a);
    GroupPoint e{sd.get(), sd->identity()};
    Vec v = Vec::Zero(5);
    v[3] = 0.8;
    v[4] = -0.5;
    GroupPoint x1{sd.get(), sd->chart_exp(v)};
    auto sol = solve_bvp(make_bvp(metric, e, x1, 8), fast_opts(false));
    REQUIRE(sol.converged);
    double expected = 2.0 * 0.8 * 0.8 + 3.0 * 0.5 * 0.5;
    CHECK(sol.energy == doctest::Approx(expected).epsilon(1e-6));
    for (int i = 0; i < 8; ++i) {
        CHECK(Vec(sol.xi.samples.row(i)).head(3).cwiseAbs().maxCoeff() < 1e-5);
        CHECK(Vec(sol.xi.samples.row(i)).tail(2)[0] == doctest::Approx(0.8).epsilon(1e-4));
    }
}

TEST_CASE("geodesic distance") {
    auto so3 = make_so(3);
    auto metric = make_dense_metric(so3.get(), Mat::Identity(3, 3));
    GroupPoint e{so3.get(), so3->identity()};

    SUBCASE("d(x,x) = 0") {
        GroupPoint x{so3.get(), so3->chart_exp(Vec(0.7 * unit3(0)))};
        CHECK(geodesic_distance(metric, x, x, fast_opts()) <= 1e-6);
    }

    SUBCASE("rotation angle oracle and symmetry") {
        Rng rng(55);
        for (int t = 0; t < 3; ++t) {
            Vec v = sample_algebra(rng, *so3, 0.6);
            GroupPoint x0{so3.get(), so3->chart_exp(sample_algebra(rng, *so3, 0.5))};
            GroupPoint x1{so3.get(), so3->multiply(so3->chart_exp(v), x0.data)};
            double d01 = geodesic_distance(metric, x0, x1, fast_opts());
            double d10 = geodesic_distance(metric, x1, x0, fast_opts());
            CHECK(std::abs(d01 - v.norm()) < 1e-4); // angle of x1 x0^{-1}
            CHECK(std::abs(d01 - d10) < 1e-5);
        }
    }

    SUBCASE("right-invariance of the distance") {
        Rng rng(56);
        GroupPoint x0{so3.get(), so3->chart_exp(sample_algebra(rng, *so3, 0.5))};
        GroupPoint x1{so3.get(), so3->chart_exp(sample_algebra(rng, *so3, 0.5))};
        GroupPoint y{so3.get(), so3->chart_exp(sample_algebra(rng, *so3, 0.5))};
        double d = geodesic_distance(metric, x0, x1, fast_opts());
        double dy = geodesic_distance(metric, GroupPoint{so3.get(), so3->multiply(x0.data, y.data)},
                                      GroupPoint{so3.get(), so3->multiply(x1.data, y.data)}, fast_opts());
        CHECK(std::abs(d - dy) < 1e-6);
    }

    SUBCASE("triangle inequality on a sampled triple") {
        Rng rng(57);
        GroupPoint x{so3.get(), so3->chart_exp(sample_algebra(rng, *so3, 0.5))};
        GroupPoint y{so3.get(), so3->chart_exp(sample_algebra(rng, *so3, 0.5))};
        GroupPoint z{so3.get(), so3->chart_exp(sample_algebra(rng, *so3, 0.5))};
        double dxz = geodesic_distance(metric, x, z, fast_opts());
        double dxy = geodesic_distance(metric, x, y, fast_opts());
        double dyz = geodesic_distance(metric, y, z, fast_opts());
        CHECK(dxz <= dxy + dyz + 1e-4);
    }
}

TEST_CASE("minimality check flags perturbed controls") {
    auto so3 = make_so(3);
    auto metric = make_dense_metric(so3.get(), Mat::Identity(3, 3));
    GroupPoint e{so3.get(), so3->identity()};
    GroupPoint x1{so3.get(), so3->chart_exp(Vec(1.0 * unit3(2)))};
    auto sol = solve_bvp(make_bvp(metric, e, x1, 16), fast_opts());
    REQUIRE(sol.converged);
    REQUIRE(minimality_check(sol, metric).pass);
    sol.xi.samples.row(3) *= 1.5; // deliberate speed bump
    CHECK_FALSE(minimality_check(sol, metric).pass);
}

TEST_CASE("rigid body minimizer satisfies the discrete Euler-Arnold equation") {
    auto so3 = make_so(3);
    Mat a = Mat::Identity(3, 3);
    a.diagonal() << 1, 2, 3;
    auto metric = make_dense_metric(so3.get(), a);
    GroupPoint e{so3.get(), so3->identity()};
    GroupPoint x1{so3.get(), so3->chart_exp(Vec(0.6 * unit3(0) + 0.5 * unit3(1) + 0.3 * unit3(2)))};
    auto sol = solve_bvp(make_bvp(metric, e, x1, 16), fast_opts());
    REQUIRE(sol.converged);
    auto rep = minimality_check(sol, metric);
    CHECK(rep.pass);
    CHECK(rep.ea_residual <= rep.ea_tolerance);
    // lower bound by the bi-invariant distance
    CHECK(std::sqrt(sol.energy) >= 1.0 * so3->chart_log(x1.data).norm() - 1e-6);
}

TEST_CASE("completeness probe") {
    auto so3 = make_so(3);
    Mat a = Mat::Identity(3, 3);
    a.diagonal() << 1, 2, 3;
    auto metric = make_dense_metric(so3.get(), a);
    auto rep = completeness_probe(metric, 5, 50.0, 11);
    CHECK(rep.pass);
    CHECK(rep.blowups == 0);
    CHECK(rep.max_drift <= 1e-6);

    Mat weak = 0.5 * Mat::Identity(3, 3);
    auto mw = make_dense_metric(so3.get(), weak);
    CHECK_THROWS(completeness_probe(mw, 1, 1.0, 1)); // strong-metric surrogate violated
}

TEST_CASE("nondegeneracy probe") {
    auto so3 = make_so(3);
    auto m1 = make_dense_metric(so3.get(), Mat::Identity(3, 3));
    auto rep = nondegeneracy_probe(m1, 10, 13, fast_opts());
    CHECK(rep.pass);
    CHECK(rep.min_ratio >= 0.999); // exactly 1 in the exponential chart
    CHECK(rep.min_ratio <= 1.001);

    Mat a = Mat::Identity(3, 3);
    a.diagonal() << 1, 2, 3;
    auto m2 = make_dense_metric(so3.get(), a);
    auto rep2 = nondegeneracy_probe(m2, 10, 13, fast_opts());
    CHECK(rep2.pass);
    CHECK(rep2.min_ratio >= 1.0 - 1e-6); // >= sqrt(lambda_min) = 1
}
