#include "hlg/group.hpp"

#include <cmath>

namespace hlg {

Vec GroupModel::tangent_at(const Vec& g, const Vec& xi) const {
    const double s = 1e-6;
    Vec p = multiply(chart_exp(s * xi), g);
    Vec m = multiply(chart_exp(-s * xi), g);
    return (p - m) / (2.0 * s);
}

Vec GroupModel::step(const Vec& xi) const {
    // generic fallback: integrate the right-invariant field over [0,1]
    const int substeps = 16;
    const double h = 1.0 / substeps;
    Vec g = identity();
    for (int i = 0; i < substeps; ++i) {
        Vec k1 = tangent_at(g, xi);
        Vec k2 = tangent_at(g + 0.5 * h * k1, xi);
        Vec k3 = tangent_at(g + 0.5 * h * k2, xi);
        Vec k4 = tangent_at(g + h * k3, xi);
        g += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return g;
}

Vec GroupModel::dchart_rt(const Vec& v, const Vec& w) const {
    const double s = 1e-5;
    Vec base_inv = inverse(chart_exp(v));
    Vec p = chart_log(multiply(chart_exp(v + s * w), base_inv));
    Vec m = chart_log(multiply(chart_exp(v - s * w), base_inv));
    return (p - m) / (2.0 * s);
}

GroupPoint multiply(const GroupPoint& a, const GroupPoint& b) {
    require_same_model(a.model, b.model);
    return GroupPoint{a.model, a.model->multiply(a.data, b.data)};
}

GroupPoint inverse(const GroupPoint& a) {
    if (a.model == nullptr) throw ModelMismatch();
    return GroupPoint{a.model, a.model->inverse(a.data)};
}

AlgebraVector bracket(const AlgebraVector& x, const AlgebraVector& y) {
    require_same_model(x.model, y.model);
    return AlgebraVector{x.model, x.model->bracket(x.data, y.data)};
}

Vec ControlPath::value(double t) const {
    const int m = intervals();
    if (interp == Interp::Constant) {
        int i = std::min(static_cast<int>(std::floor(t * m)), m - 1);
        if (i < 0) i = 0;
        return samples.row(i);
    }
    double u = t * m;
    int i = std::min(static_cast<int>(std::floor(u)), m - 1);
    if (i < 0) i = 0;
    double frac = u - i;
    return (1.0 - frac) * samples.row(i).transpose() + frac * samples.row(i + 1).transpose();
}

ControlPath ControlPath::constant(const GroupModel* model, const Vec& u, int m_intervals) {
    ControlPath p;
    p.model = model;
    p.samples = Mat::Zero(m_intervals + 1, u.size());
    for (int i = 0; i <= m_intervals; ++i) p.samples.row(i) = u;
    return p;
}

ControlPath ControlPath::from_interval_values(const GroupModel* model, const Mat& values) {
    ControlPath p;
    p.model = model;
    p.samples = Mat::Zero(values.rows() + 1, values.cols());
    p.samples.topRows(values.rows()) = values;
    p.samples.row(values.rows()) = values.row(values.rows() - 1);
    return p;
}

std::vector<GroupPoint> evolve(const ControlPath& xi, double h, int order) {
    if (xi.model == nullptr) throw ModelMismatch();
    const GroupModel& model = *xi.model;
    const int m = xi.intervals();
    if (m < 1) throw Error("evolve: empty control path");
    const double dt = 1.0 / m;
    const int substeps = static_cast<int>(std::llround(dt / h));
    if (substeps < 1 || std::abs(substeps * h - dt) > 1e-9 * dt)
        throw StepRejected("evolve: h must divide the control grid spacing");

    std::vector<GroupPoint> out;
    out.reserve(m + 1);
    Vec g = model.identity();
    out.push_back({&model, g});
    const double gauss = 0.28867513459481288; // sqrt(3)/6
    for (int i = 0; i < m; ++i) {
        for (int s = 0; s < substeps; ++s) {
            const double t0 = i * dt + s * h;
            if (order == 4) {
                Vec u1 = xi.value(t0 + (0.5 - gauss) * h);
                Vec u2 = xi.value(t0 + (0.5 + gauss) * h);
                Vec omega = 0.5 * h * (u1 + u2) +
                            (std::sqrt(3.0) / 12.0) * h * h * model.bracket(u2, u1);
                g = model.multiply(model.step(omega), g);
            } else {
                Vec u = xi.value(t0 + 0.5 * h);
                g = model.evolve_substep(g, u, h);
            }
        }
        out.push_back({&model, g});
    }
    return out;
}

namespace {

// central t-difference of Ad(Evol(tX)^{-1}) Y at fixed t
Vec flow_bracket_difference(const GroupModel& model, const Vec& x, const Vec& y, double t) {
    const double s0 = 1e-5;
    auto ad_pullback = [&](double tt) -> Vec {
        Vec gamma = model.flow(x, tt);
        Vec gamma_inv = model.inverse(gamma);
        Vec cp = model.chart_log(model.multiply(model.multiply(gamma_inv, model.flow(y, s0)), gamma));
        Vec cm = model.chart_log(model.multiply(model.multiply(gamma_inv, model.flow(y, -s0)), gamma));
        return (cp - cm) / (2.0 * s0);
    };
    Vec ap = ad_pullback(t);
    Vec am = ad_pullback(-t);
    return -(ap - am) / (2.0 * t);
}

} // namespace

AlgebraVector bracket_via_flows_raw(const AlgebraVector& x, const AlgebraVector& y, double t) {
    require_same_model(x.model, y.model);
    try {
        Vec d = flow_bracket_difference(*x.model, x.data, y.data, t);
        if (!d.allFinite()) throw FlowDiverged();
        return AlgebraVector{x.model, d};
    } catch (const FlowDiverged&) {
        throw;
    } catch (const Error& e) {
        throw FlowDiverged(std::string("bracket_via_flows: ") + e.what());
    }
}

AlgebraVector bracket_via_flows(const AlgebraVector& x, const AlgebraVector& y, double t) {
    Vec d1 = bracket_via_flows_raw(x, y, t).data;
    Vec d2 = bracket_via_flows_raw(x, y, 0.5 * t).data;
    return AlgebraVector{x.model, (4.0 * d2 - d1) / 3.0};
}

} // namespace hlg
