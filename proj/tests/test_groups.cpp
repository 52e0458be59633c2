#include "doctest.h"

#include "hlg/models.hpp"

#include <cmath>

using namespace hlg;

namespace {

const double kPi = 3.14159265358979323846;

Vec so2_point(double theta) {
    Vec a(4);
    a << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return a;
}

Vec fourier_mode(int dim, int index, double value) {
    Vec v = Vec::Zero(dim);
    v[index] = value;
    return v;
}

} // namespace

TEST_CASE("semidirect rotation group law") {
    auto so2 = make_so(2);
    auto g = make_semidirect(so2, rotation_rep(so2));

    Vec a(6), b(6);
    a << so2_point(kPi / 2), 1.0, 0.0;
    b << so2_point(kPi / 2), 0.0, 0.0;
    Vec ab = g->multiply(a, b);
    CHECK((ab.head(4) - so2_point(kPi)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(ab[4] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ab[5] == doctest::Approx(-1.0));

    SUBCASE("identity is neutral") {
        Vec e = g->identity();
        CHECK((g->multiply(e, a) - a).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((g->multiply(a, e) - a).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("inverse round-trips") {
        Vec ai = g->inverse(a);
        CHECK(ai[4] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(ai[5] == doctest::Approx(-1.0)); // -rho(R(pi/2)) (1,0) = (0,-1)
        CHECK((g->multiply(ai, a) - g->identity()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((g->inverse(g->identity()) - g->identity()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("heisenberg extension group law") {
    auto base = make_vector_group(2);
    auto fiber = make_vector_group(1);
    auto h = make_extension(base, fiber, heisenberg_datum());

    Vec a(3), b(3);
    a << 1.0, 0.0, 0.0;
    b << 0.0, 1.0, 0.0;
    Vec ab = h->multiply(a, b);
    CHECK(ab[0] == 1.0);
    CHECK(ab[1] == 1.0);
    CHECK(ab[2] == doctest::Approx(1.0));

    // ((a,b),m)^{-1} = ((-a,-b), -m + a b)
    Vec p(3);
    p << 0.7, -0.3, 0.2;
    Vec pi = h->inverse(p);
    CHECK(pi[0] == doctest::Approx(-0.7));
    CHECK(pi[1] == doctest::Approx(0.3));
    CHECK(pi[2] == doctest::Approx(-0.2 + 0.7 * -0.3));
    CHECK((h->multiply(pi, p) - h->identity()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("extension datum validation") {
    auto base = make_vector_group(2);
    auto fiber = make_vector_group(1);

    SUBCASE("heisenberg cocycle passes") {
        auto rep = validate_extension_datum(heisenberg_datum(), *fiber, *base, 200, 99);
        CHECK(rep.pass);
        CHECK(rep.residual_cocycle < 1e-12);
        CHECK(rep.residual_central < 1e-12);
    }
    SUBCASE("perturbed cocycle fails with residual 2|x2 y2 z2|") {
        auto rep = validate_extension_datum(perturbed_heisenberg_datum(), *fiber, *base, 200, 99);
        CHECK_FALSE(rep.pass);
        // replay the validator's sampling stream to pin the expected residual
        Rng rng = Rng(99).derive("extension-validate");
        double expected = 0.0;
        for (int s = 0; s < 200; ++s) {
            Vec x = sample_algebra(rng, *base, 0.7);
            Vec y = sample_algebra(rng, *base, 0.7);
            Vec z = sample_algebra(rng, *base, 0.7);
            (void)sample_algebra(rng, *fiber, 0.7);
            expected = std::max(expected, std::abs(2.0 * x[1] * y[1] * z[1]));
        }
        CHECK(rep.residual_cocycle == doctest::Approx(expected).epsilon(1e-9));
    }
    SUBCASE("split datum (f == e, right action) passes") {
        auto so2 = make_so(2);
        auto fiber2 = make_vector_group(2);
        auto rep = validate_extension_datum(split_rotation_datum(so2), *fiber2, *so2, 100, 7);
        CHECK(rep.pass);
    }
}

TEST_CASE("group axioms on samples") {
    Rng rng(1234);
    auto so3 = make_so(3);
    auto sd = make_semidirect(so3, rotation_rep(so3));
    auto heis = make_extension(make_vector_group(2), make_vector_group(1), heisenberg_datum());
    for (const auto& model : {so3, sd, heis}) {
        for (int t = 0; t < 25; ++t) {
            Vec a = model->chart_exp(sample_algebra(rng, *model, 0.6));
            Vec b = model->chart_exp(sample_algebra(rng, *model, 0.6));
            Vec c = model->chart_exp(sample_algebra(rng, *model, 0.6));
            Vec lhs = model->multiply(model->multiply(a, b), c);
            Vec rhs = model->multiply(a, model->multiply(b, c));
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
            CHECK((model->multiply(model->inverse(a), a) - model->identity()).cwiseAbs().maxCoeff() < 1e-9);
            CHECK((model->multiply(a, model->inverse(a)) - model->identity()).cwiseAbs().maxCoeff() < 1e-9);
            CHECK(model->member(a));
        }
    }
}

TEST_CASE("fourier diffeo model") {
    FourierDiffeoModel f(16);
    const int d = f.point_dim();

    SUBCASE("two-sided inverse within truncation tolerance") {
        Rng rng(5);
        for (int t = 0; t < 10; ++t) {
            // smooth perturbations: the projection defect sits well below the
            // 1e-6 budget for n^{-4} tails at this amplitude
            Vec a = Vec::Zero(d);
            for (int n = 1; n <= 16; ++n) {
                double decay = std::pow(n, -4.0);
                a[2 * n - 1] = 0.05 * decay * rng.normal();
                a[2 * n] = 0.05 * decay * rng.normal();
            }
            REQUIRE(f.member(a));
            Vec ai = f.inverse(a);
            CHECK((f.multiply(ai, a) - f.identity()).cwiseAbs().maxCoeff() < 1e-6);
            CHECK((f.multiply(a, ai) - f.identity()).cwiseAbs().maxCoeff() < 1e-6);
        }
    }

    SUBCASE("associativity residual shrinks when modes double") {
        auto residual = [](int modes) {
            FourierDiffeoModel m(modes);
            const int dim = m.point_dim();
            auto coeff = [&](int n, bool sin_part, double v) {
                Vec c = Vec::Zero(dim);
                c[sin_part ? 2 * n : 2 * n - 1] = v;
                return c;
            };
            Vec a = coeff(1, false, 0.31) + coeff(2, true, 0.11);
            Vec b = coeff(1, true, 0.23) + coeff(3, false, 0.07);
            Vec c = coeff(2, false, 0.17) + coeff(1, true, -0.13);
            Vec lhs = m.multiply(m.multiply(a, b), c);
            Vec rhs = m.multiply(a, m.multiply(b, c));
            return (lhs - rhs).cwiseAbs().maxCoeff();
        };
        double r16 = residual(16), r32 = residual(32);
        CHECK(r32 < 0.5 * r16 + 1e-15);
    }

    SUBCASE("non-diffeomorphism is rejected") {
        Vec a = fourier_mode(d, 1, 1.5); // 1 + f' reaches 1 - 1.5 < 0
        CHECK_FALSE(f.member(a));
        CHECK_THROWS_AS((void)f.chart_exp(a), NotADiffeomorphism);
    }
}

TEST_CASE("regularity decay fit") {
    FourierDiffeoModel f(32);
    Vec c = Vec::Zero(f.point_dim());

    SUBCASE("exact power law") {
        for (int n = 1; n <= 32; ++n) c[2 * n - 1] = std::pow(n, -3.0);
        auto fit = regularity_decay(f, c);
        CHECK(fit.exponent == doctest::Approx(-3.0).epsilon(0.01));
        CHECK(fit.residual < 1e-10);
    }
    SUBCASE("noisy power law") {
        for (int n = 1; n <= 32; ++n) c[2 * n - 1] = std::pow(n, -3.0) * (1.0 + 0.1 * std::sin(double(n)));
        auto fit = regularity_decay(f, c);
        CHECK(std::abs(fit.exponent + 3.0) < 0.2);
    }
    SUBCASE("zero high modes") {
        c[1] = 1e-3;
        CHECK_THROWS_AS((void)regularity_decay(f, c), InsufficientModes);
    }
}

TEST_CASE("brackets") {
    auto so3m = make_so(3);
    const auto& so3 = *so3m;

    SUBCASE("so(3) commutator") {
        Vec e1 = Vec::Zero(3), e2 = Vec::Zero(3);
        e1[0] = 1;
        e2[1] = 1;
        Vec b = so3.bracket(e1, e2);
        CHECK(b[2] == doctest::Approx(1.0));
        CHECK((so3.bracket(e1, e1)).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("fourier bracket, flow convention u'v - uv'") {
        FourierDiffeoModel f(8);
        Vec u = fourier_mode(f.point_dim(), 1, 1.0); // cos
        Vec v = fourier_mode(f.point_dim(), 2, 1.0); // sin
        Vec b = f.bracket(u, v);
        CHECK(b[0] == doctest::Approx(-1.0)); // -(cos^2 + sin^2)
        for (int i = 1; i < f.point_dim(); ++i) CHECK(std::abs(b[i]) < 1e-12);
    }

    SUBCASE("jacobi identity") {
        Rng rng(17);
        auto sd = make_semidirect(so3m, rotation_rep(so3m));
        for (const auto& model : {so3m, sd}) {
            for (int t = 0; t < 20; ++t) {
                Vec x = sample_algebra(rng, *model, 1.0);
                Vec y = sample_algebra(rng, *model, 1.0);
                Vec z = sample_algebra(rng, *model, 1.0);
                Vec j = model->bracket(x, model->bracket(y, z)) + model->bracket(y, model->bracket(z, x)) +
                        model->bracket(z, model->bracket(x, y));
                CHECK(j.cwiseAbs().maxCoeff() < 1e-9);
            }
        }
    }

    SUBCASE("jacobi residual shrinks with fourier cutoff") {
        auto jacobi_res = [](int modes) {
            FourierDiffeoModel m(modes);
            const int dim = m.point_dim();
            Vec x = fourier_mode(dim, 1, 0.8) + fourier_mode(dim, 4, 0.3);
            Vec y = fourier_mode(dim, 2, 0.5) + fourier_mode(dim, 5, 0.2);
            Vec z = fourier_mode(dim, 3, 0.4);
            Vec j = m.bracket(x, m.bracket(y, z)) + m.bracket(y, m.bracket(z, x)) +
                    m.bracket(z, m.bracket(x, y));
            return j.cwiseAbs().maxCoeff();
        };
        CHECK(jacobi_res(16) < 0.5 * jacobi_res(8) + 1e-14);
    }
}

TEST_CASE("bracket via flows") {
    auto so3m = make_so(3);

    SUBCASE("so(3): e1, e2 -> e3 within 1e-3 at t = 1e-2") {
        Vec e1 = Vec::Zero(3), e2 = Vec::Zero(3), e3 = Vec::Zero(3);
        e1[0] = e2[1] = e3[2] = 1;
        AlgebraVector x{so3m.get(), e1}, y{so3m.get(), e2};
        Vec b = bracket_via_flows(x, y, 1e-2).data;
        CHECK((b - e3).cwiseAbs().maxCoeff() < 1e-3);
    }

    SUBCASE("X = Y vanishes") {
        Vec u(3);
        u << 0.3, -0.2, 0.9;
        AlgebraVector x{so3m.get(), u};
        CHECK(bracket_via_flows(x, x, 1e-2).data.cwiseAbs().maxCoeff() < 1e-9);
    }

    SUBCASE("semidirect abelian kernel directions commute") {
        auto sd = make_semidirect(so3m, rotation_rep(so3m));
        Vec h1 = Vec::Zero(6), h2 = Vec::Zero(6);
        h1[3] = 1.0;
        h2[4] = 1.0;
        AlgebraVector x{sd.get(), h1}, y{sd.get(), h2};
        CHECK(bracket_via_flows(x, y, 1e-2).data.cwiseAbs().maxCoeff() < 1e-8);
    }

    SUBCASE("order >= 2 convergence to the algebraic bracket") {
        Rng rng(3);
        auto sd = make_semidirect(so3m, rotation_rep(so3m));
        auto fm = make_fourier_diffeo(16);
        for (const auto& model : {so3m, sd, fm}) {
            Vec xv = sample_algebra(rng, *model, 0.8);
            Vec yv = sample_algebra(rng, *model, 0.8);
            if (model == fm) {
                // keep flows well inside the diffeo set and the retained band
                xv = fourier_mode(model->algebra_dim(), 1, 0.4) + fourier_mode(model->algebra_dim(), 4, 0.2);
                yv = fourier_mode(model->algebra_dim(), 2, 0.5) + fourier_mode(model->algebra_dim(), 3, 0.1);
            }
            AlgebraVector x{model.get(), xv}, y{model.get(), yv};
            Vec exact = model->bracket(xv, yv);
            double e1 = (bracket_via_flows_raw(x, y, 0.08).data - exact).cwiseAbs().maxCoeff();
            double e2 = (bracket_via_flows_raw(x, y, 0.04).data - exact).cwiseAbs().maxCoeff();
            double e3 = (bracket_via_flows_raw(x, y, 0.02).data - exact).cwiseAbs().maxCoeff();
            double order1 = std::log2(e1 / e2), order2 = std::log2(e2 / e3);
            CHECK(order1 > 1.7);
            CHECK(order2 > 1.7);
            CHECK((bracket_via_flows(x, y, 1e-2).data - exact).cwiseAbs().maxCoeff() < 1e-3);
        }
    }

    SUBCASE("heisenberg flow bracket is the antisymmetrized cocycle pairing") {
        auto heis = make_extension(make_vector_group(2), make_vector_group(1), heisenberg_datum());
        Vec x(3), y(3);
        x << 1.0, 0.0, 0.0;
        y << 0.0, 1.0, 0.0;
        Vec b = heis->bracket(x, y);
        CHECK(std::abs(b[0]) < 1e-6);
        CHECK(std::abs(b[1]) < 1e-6);
        CHECK(std::abs(std::abs(b[2]) - 1.0) < 1e-5); // |omega((1,0),(0,1))| = 1
        Vec b2 = heis->bracket(y, x);
        CHECK((b + b2).cwiseAbs().maxCoeff() < 1e-5);
    }
}

TEST_CASE("evolve") {
    auto so3m = make_so(3);

    SUBCASE("zero control stays at identity") {
        auto path = ControlPath::constant(so3m.get(), Vec::Zero(3), 4);
        auto curve = evolve(path, 0.25 / 4);
        for (const auto& p : curve) CHECK((p.data - so3m->identity()).cwiseAbs().maxCoeff() < 1e-15);
    }

    SUBCASE("constant control reproduces the exponential") {
        Vec u = Vec::Zero(3);
        u[2] = kPi / 2;
        auto path = ControlPath::constant(so3m.get(), u, 10);
        auto curve = evolve(path, 1e-3);
        Vec expected = so3m->step(u);
        CHECK((curve.back().data - expected).cwiseAbs().maxCoeff() < 1e-8);
    }

    SUBCASE("semidirect constant fiber control is a straight line") {
        auto sd = make_semidirect(so3m, rotation_rep(so3m));
        Vec u = Vec::Zero(6);
        u[3] = 0.7;
        u[5] = -0.2;
        auto path = ControlPath::constant(sd.get(), u, 5);
        auto curve = evolve(path, 0.2 / 8);
        for (int i = 0; i <= 5; ++i) {
            double t = i / 5.0;
            CHECK((curve[i].data.head(9) - so3m->identity()).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(std::abs(curve[i].data[9] - t * 0.7) < 1e-12);
            CHECK(std::abs(curve[i].data[11] - t * -0.2) < 1e-12);
        }
    }

    SUBCASE("h must divide the grid spacing") {
        auto path = ControlPath::constant(so3m.get(), Vec::Zero(3), 3);
        CHECK_THROWS_AS((void)evolve(path, 0.1), StepRejected);
    }

    SUBCASE("concatenation cocycle property") {
        Rng rng(8);
        Mat v1(4, 3), v2(4, 3);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 3; ++j) {
                v1(i, j) = 0.8 * rng.normal();
                v2(i, j) = 0.8 * rng.normal();
            }
        // traversing both legs inside [0,1] doubles the control speed
        Mat vcat(8, 3);
        vcat << v1, v2;
        vcat *= 2.0;
        auto p1 = ControlPath::from_interval_values(so3m.get(), v1);
        auto p2 = ControlPath::from_interval_values(so3m.get(), v2);
        auto pc = ControlPath::from_interval_values(so3m.get(), vcat);
        // same integrator resolution on both sides: h dt = 1/64 overall
        auto gc = evolve(pc, 1.0 / 64).back();
        auto g1 = evolve(p1, 1.0 / 32).back();
        auto g2 = evolve(p2, 1.0 / 32).back();
        CHECK((gc.data - multiply(g2, g1).data).cwiseAbs().maxCoeff() < 1e-6);
    }

    SUBCASE("midpoint is order >= 2, gauss-magnus is order 4") {
        Rng rng(21);
        Mat nodes(9, 3);
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 3; ++j) nodes(i, j) = rng.normal();
        ControlPath path;
        path.model = so3m.get();
        path.samples = nodes;
        path.interp = ControlPath::Interp::Linear;

        Vec ref = evolve(path, 1.0 / 8192, 4).back().data;
        auto err = [&](double h, int order) {
            return (evolve(path, h, order).back().data - ref).cwiseAbs().maxCoeff();
        };
        double m1 = err(1.0 / 32, 2), m2 = err(1.0 / 64, 2);
        CHECK(std::log2(m1 / m2) > 1.7);
        double g1 = err(1.0 / 32, 4), g2 = err(1.0 / 64, 4);
        CHECK(std::log2(g1 / g2) > 3.5);
        CHECK(g1 < m1);
    }

    SUBCASE("fourier evolution stays a diffeo and is order >= 2") {
        auto fm = make_fourier_diffeo(12);
        Vec u = fourier_mode(fm->algebra_dim(), 1, 0.4) + fourier_mode(fm->algebra_dim(), 3, 0.15);
        auto path = ControlPath::constant(fm.get(), u, 4);
        Vec ref = fm->flow(u, 1.0);
        auto err = [&](double h) { return (evolve(path, h).back().data - ref).cwiseAbs().maxCoeff(); };
        double e1 = err(1.0 / 32), e2 = err(1.0 / 64);
        CHECK(std::log2(e1 / e2) > 1.7);
    }
}
