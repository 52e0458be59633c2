#include "hlg/geodesic.hpp"

#include <cmath>

namespace hlg {

namespace {

struct EulerArnoldSystem {
    const Metric& metric;
    bool with_group;
    int du; // algebra dim

    Vec rhs(const Vec& state) const {
        Vec out(state.size());
        Vec u = state.head(du);
        out.head(du) = -ad_transpose(metric, u, u);
        if (with_group) out.tail(state.size() - du) = metric.model->tangent_at(state.tail(state.size() - du), u);
        return out;
    }
};

Vec rk4_step(const EulerArnoldSystem& sys, const Vec& y, double h) {
    Vec k1 = sys.rhs(y);
    Vec k2 = sys.rhs(y + 0.5 * h * k1);
    Vec k3 = sys.rhs(y + 0.5 * h * k2);
    Vec k4 = sys.rhs(y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Cash-Karp embedded pair
std::pair<Vec, Vec> rk45_step(const EulerArnoldSystem& sys, const Vec& y, double h) {
    static const double a2 = 0.2, a3 = 0.3, a4 = 0.6, a5 = 1.0, a6 = 0.875;
    (void)a2; (void)a3; (void)a4; (void)a5; (void)a6;
    Vec k1 = sys.rhs(y);
    Vec k2 = sys.rhs(y + h * (0.2 * k1));
    Vec k3 = sys.rhs(y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
    Vec k4 = sys.rhs(y + h * (0.3 * k1 - 0.9 * k2 + 1.2 * k3));
    Vec k5 = sys.rhs(y + h * (-11.0 / 54.0 * k1 + 2.5 * k2 - 70.0 / 27.0 * k3 + 35.0 / 27.0 * k4));
    Vec k6 = sys.rhs(y + h * (1631.0 / 55296.0 * k1 + 175.0 / 512.0 * k2 + 575.0 / 13824.0 * k3 +
                              44275.0 / 110592.0 * k4 + 253.0 / 4096.0 * k5));
    Vec y5 = y + h * (37.0 / 378.0 * k1 + 250.0 / 621.0 * k3 + 125.0 / 594.0 * k4 + 512.0 / 1771.0 * k6);
    Vec y4 = y + h * (2825.0 / 27648.0 * k1 + 18575.0 / 48384.0 * k3 + 13525.0 / 55296.0 * k4 +
                      277.0 / 14336.0 * k5 + 0.25 * k6);
    return {y5, y5 - y4};
}

} // namespace

ShootResult shoot(const Metric& metric, const Vec& u0, double horizon, double h, const ShootOptions& opts) {
    if (h <= 0.0) throw StepRejected("shoot: h must be positive");
    const int du = metric.model->algebra_dim();
    EulerArnoldSystem sys{metric, opts.record_group, du};

    Vec state(du + (opts.record_group ? metric.model->point_dim() : 0));
    state.head(du) = u0;
    if (opts.record_group) state.tail(metric.model->point_dim()) = metric.model->identity();

    const double e0 = metric.eval(u0, u0);
    const double ceiling = opts.energy_ceiling_factor * std::max(e0, 1.0);

    ShootResult res;
    auto push = [&](double t) {
        GeodesicState gs;
        gs.t = t;
        gs.u = state.head(du);
        if (opts.record_group) gs.g = state.tail(metric.model->point_dim());
        res.states.push_back(std::move(gs));
        if (e0 > 0.0) {
            double e = metric.eval(res.states.back().u, res.states.back().u);
            res.max_energy_drift = std::max(res.max_energy_drift, std::abs(e - e0) / e0);
        }
    };
    auto check = [&](double t) {
        Vec u = state.head(du);
        double e = metric.eval(u, u);
        if (!state.allFinite() || e > ceiling) throw BlowUp("shoot: energy ceiling exceeded at t = " + std::to_string(t));
    };

    push(0.0);
    if (!opts.adaptive) {
        const long n = std::lround(horizon / h);
        if (n < 1 || std::abs(n * h - horizon) > 1e-9 * horizon)
            throw StepRejected("shoot: h must divide the horizon");
        for (long i = 0; i < n; ++i) {
            state = rk4_step(sys, state, h);
            check((i + 1) * h);
            ++res.steps;
            if ((i + 1) % opts.store_every == 0 || i + 1 == n) push((i + 1) * h);
        }
    } else {
        double t = 0.0, dt = h;
        while (t < horizon - 1e-14 * horizon) {
            dt = std::min(dt, horizon - t);
            auto [ynew, err] = rk45_step(sys, state, dt);
            double scale = opts.atol + opts.rtol * state.cwiseAbs().maxCoeff();
            double e = err.cwiseAbs().maxCoeff() / scale;
            if (e <= 1.0) {
                state = ynew;
                t += dt;
                ++res.steps;
                check(t);
                if (res.steps % opts.store_every == 0 || t >= horizon - 1e-14) push(t);
            }
            double fac = (e > 0) ? 0.9 * std::pow(e, -0.2) : 5.0;
            dt *= std::min(5.0, std::max(0.2, fac));
            if (dt < 1e-14 * std::max(1.0, horizon)) throw StepRejected("shoot: step size underflow");
        }
    }
    return res;
}

Mat chart_metric(const Metric& metric, const Vec& v) {
    const int d = metric.model->algebra_dim();
    Mat eta(d, d);
    for (int i = 0; i < d; ++i) {
        Vec ei = Vec::Zero(d);
        ei[i] = 1.0;
        eta.col(i) = metric.model->dchart_rt(v, ei);
    }
    return eta.transpose() * metric.gram * eta;
}

namespace {

// Gamma(X, X) from the defining relation, one linear solve
Vec christoffel_quadratic(const Metric& metric, const Vec& v, const Vec& x, double fd_h) {
    const int d = metric.model->algebra_dim();
    auto g_at = [&](const Vec& p) -> Mat {
        try {
            return chart_metric(metric, p);
        } catch (const Error&) {
            throw ChartBoundary();
        }
    };
    Mat g0 = g_at(v);
    // directional derivative of the chart metric along w
    auto dg = [&](const Vec& w) -> Mat { return (g_at(v + fd_h * w) - g_at(v - fd_h * w)) / (2.0 * fd_h); };
    Mat dgx = dg(x);
    Vec rhs(d);
    for (int l = 0; l < d; ++l) {
        Vec el = Vec::Zero(d);
        el[l] = 1.0;
        Mat dgl = dg(el);
        rhs[l] = 0.5 * x.dot(dgl * x) - x.dot(dgx * el);
    }
    return g0.ldlt().solve(rhs);
}

} // namespace

Vec christoffel_fd(const Metric& metric, const Vec& v, const Vec& x, const Vec& y, double fd_h) {
    if (fd_h <= 0.0) fd_h = 1e-4 * (1.0 + v.norm());
    if ((x - y).cwiseAbs().maxCoeff() == 0.0) return christoffel_quadratic(metric, v, x, fd_h);
    Vec qp = christoffel_quadratic(metric, v, x + y, fd_h);
    Vec qm = christoffel_quadratic(metric, v, x - y, fd_h);
    return 0.25 * (qp - qm);
}

std::vector<ChartState> lagrangian_geodesic(const Metric& metric, const GroupPoint& x0, const Vec& cdot0,
                                            double horizon, double h, double fd_h, double recenter_radius) {
    require_same_model(metric.model, x0.model);
    const GroupModel& model = *metric.model;
    const int d = model.algebra_dim();

    Vec ref = x0.data;
    Vec c = Vec::Zero(d), cdot = cdot0;
    auto acc = [&](const Vec& cc, const Vec& cd) { return christoffel_quadratic(metric, cc, cd, fd_h > 0 ? fd_h : 1e-4 * (1.0 + cc.norm())); };

    std::vector<ChartState> out;
    auto push = [&](double t) {
        out.push_back({t, c, cdot, GroupPoint{&model, model.multiply(model.chart_exp(c), ref)}});
    };
    push(0.0);
    const long n = std::lround(horizon / h);
    if (n < 1 || std::abs(n * h - horizon) > 1e-9 * horizon)
        throw StepRejected("lagrangian_geodesic: h must divide the horizon");
    for (long i = 0; i < n; ++i) {
        // classic RK4 on (c, cdot)
        Vec k1c = cdot, k1v = acc(c, cdot);
        Vec k2c = cdot + 0.5 * h * k1v, k2v = acc(c + 0.5 * h * k1c, cdot + 0.5 * h * k1v);
        Vec k3c = cdot + 0.5 * h * k2v, k3v = acc(c + 0.5 * h * k2c, cdot + 0.5 * h * k2v);
        Vec k4c = cdot + h * k3v, k4v = acc(c + h * k3c, cdot + h * k3v);
        c += (h / 6.0) * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
        cdot += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if (!c.allFinite() || !cdot.allFinite()) throw BlowUp("lagrangian_geodesic: state diverged");
        if (c.norm() > recenter_radius) {
            Vec cdot_new = model.dchart_rt(c, cdot);
            ref = model.multiply(model.chart_exp(c), ref);
            c.setZero();
            cdot = cdot_new;
        }
        push((i + 1) * h);
    }
    return out;
}

NoLossReport no_loss_no_gain_check(const Metric& metric, const Vec& u0, double horizon, double h,
                                   double max_variation, double fit_residual_threshold) {
    if (metric.fourier == nullptr) throw ModelMismatch("no_loss_no_gain_check: FourierDiffeo metric required");
    const auto& fm = *metric.fourier;

    NoLossReport rep;
    if (u0.cwiseAbs().maxCoeff() == 0.0) {
        rep.skipped = true;
        rep.pass = true;
        return rep;
    }
    auto fit0 = regularity_decay(fm, u0);
    if (fit0.residual > fit_residual_threshold)
        throw Error("no_loss_no_gain_check: initial velocity has no measurable decay exponent");

    auto run = shoot(metric, u0, horizon, h, ShootOptions{});
    const auto& states = run.states;
    for (int q = 0; q <= 4; ++q) {
        double target = horizon * q / 4.0;
        std::size_t best = 0;
        for (std::size_t i = 1; i < states.size(); ++i)
            if (std::abs(states[i].t - target) < std::abs(states[best].t - target)) best = i;
        const auto& st = states[best];
        rep.times.push_back(st.t);
        auto fit = regularity_decay(fm, st.u);
        rep.u_exponent.push_back(fit.exponent);
        rep.u_residual.push_back(fit.residual);
        if (st.t > 0.0) {
            auto gfit = regularity_decay(fm, st.g);
            rep.g_exponent.push_back(gfit.exponent);
        }
    }
    double umin = rep.u_exponent[0], umax = rep.u_exponent[0];
    for (double e : rep.u_exponent) {
        umin = std::min(umin, e);
        umax = std::max(umax, e);
    }
    double gmin = rep.g_exponent.empty() ? 0.0 : rep.g_exponent[0], gmax = gmin;
    for (double e : rep.g_exponent) {
        gmin = std::min(gmin, e);
        gmax = std::max(gmax, e);
    }
    rep.pass = (umax - umin) <= max_variation && (gmax - gmin) <= max_variation;
    return rep;
}

} // namespace hlg
