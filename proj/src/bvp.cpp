#include "hlg/bvp.hpp"

#include "hlg/lbfgs.hpp"

#include <cmath>

namespace hlg {

BVPProblem make_bvp(const Metric& metric, const GroupPoint& x0, const GroupPoint& x1, int intervals) {
    require_same_model(metric.model, x0.model);
    require_same_model(metric.model, x1.model);
    if (intervals < 4) throw Error("make_bvp: need at least 4 control intervals");
    BVPProblem p;
    p.metric = &metric;
    p.x0 = x0;
    p.x1 = x1;
    p.intervals = intervals;
    p.target = metric.model->multiply(x1.data, metric.model->inverse(x0.data));
    return p;
}

double energy(const ControlPath& xi, const Metric& metric) {
    require_same_model(xi.model, metric.model);
    const int m = xi.intervals();
    const double dt = 1.0 / m;
    double e = 0.0;
    if (xi.interp == ControlPath::Interp::Constant) {
        for (int i = 0; i < m; ++i) {
            Vec v = xi.samples.row(i);
            e += dt * metric.eval(v, v);
        }
    } else {
        for (int i = 0; i <= m; ++i) {
            Vec v = xi.samples.row(i);
            double w = (i == 0 || i == m) ? 0.5 : 1.0;
            e += w * dt * metric.eval(v, v);
        }
    }
    return e;
}

namespace {

struct Workspace {
    const BVPProblem& problem;
    const BVPOptions& opts;
    const GroupModel& model;
    int d;      // algebra dim
    int m;      // intervals
    double dt;
    double h;   // integrator substep

    const SpecialOrthogonalModel* so; // non-null when the adjoint path applies

    ControlPath to_path(const Vec& z) const {
        Mat values = Eigen::Map<const Mat>(z.data(), d, m).transpose();
        return ControlPath::from_interval_values(&model, values);
    }

    Vec endpoint_gap(const Vec& z) const {
        auto curve = evolve(to_path(z), h);
        return model.chart_log(model.multiply(curve.back().data, model.inverse(problem.target)));
    }

    double energy_of(const Vec& z, Vec* grad) const {
        double e = 0.0;
        for (int i = 0; i < m; ++i) {
            Vec v = z.segment(i * d, d);
            e += dt * problem.metric->eval(v, v);
            if (grad) grad->segment(i * d, d) += 2.0 * dt * (problem.metric->gram * v);
        }
        return e;
    }

    // augmented-Lagrangian objective E + lambda.c + mu |c|^2 and gradient;
    // finite differences by default, discrete adjoint through the expm steps
    // for SO(n)
    double objective(const Vec& z, const Vec& lambda, double mu, Vec& grad) const {
        grad.setZero();
        double e = energy_of(z, &grad);
        if (so != nullptr && opts.use_adjoint) return e + adjoint_penalty(z, lambda, mu, grad);
        auto pen_value = [&](const Vec& zz) {
            Vec c = endpoint_gap(zz);
            return lambda.dot(c) + mu * c.squaredNorm();
        };
        double pen = pen_value(z);
        // central differences on the control coefficients
        const double fd = 1e-6;
        for (int i = 0; i < z.size(); ++i) {
            Vec zp = z, zm = z;
            zp[i] += fd;
            zm[i] -= fd;
            grad[i] += (pen_value(zp) - pen_value(zm)) / (2.0 * fd);
        }
        return e + pen;
    }

    // lambda.c + mu |c|^2 and its gradient via backpropagation through
    // g <- expm(h hat(xi)) g
    double adjoint_penalty(const Vec& z, const Vec& lambda, double mu, Vec& grad) const {
        const int n = so->n();
        const int sub = opts.substeps_per_interval;
        std::vector<Mat> gs;
        gs.reserve(m * sub + 1);
        Mat g = Mat::Identity(n, n);
        gs.push_back(g);
        std::vector<Mat> exps(m * sub);
        for (int i = 0; i < m; ++i) {
            Mat e = expm(h * so->hat(z.segment(i * d, d)));
            for (int s = 0; s < sub; ++s) {
                exps[i * sub + s] = e;
                g = e * g;
                gs.push_back(g);
            }
        }
        Mat tinv = so->to_matrix(so->inverse(problem.target));
        Vec gap = so->unhat([&] {
            Mat l = logm(g * tinv);
            return Mat(0.5 * (l - l.transpose()));
        }());
        // d gap / d g entries, by central differences on the endpoint matrix
        const double fd = 1e-7;
        Vec w = lambda + 2.0 * mu * gap; // dPenalty/dgap
        Mat vbar = Mat::Zero(n, n);      // dPenalty/dg_N
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                Mat gp = g, gm = g;
                gp(r, c) += fd;
                gm(r, c) -= fd;
                Mat lp = logm(gp * tinv), lm = logm(gm * tinv);
                Vec dp = so->unhat(0.5 * (lp - lp.transpose()));
                Vec dm = so->unhat(0.5 * (lm - lm.transpose()));
                vbar(r, c) = w.dot((dp - dm) / (2.0 * fd));
            }
        // backward sweep
        for (int k = m * sub - 1; k >= 0; --k) {
            const int i = k / sub;
            const Mat& gk = gs[k];
            const Mat& ek = exps[k];
            Mat a = h * so->hat(z.segment(i * d, d));
            for (int j = 0; j < d; ++j) {
                Vec ej = Vec::Zero(d);
                ej[j] = 1.0;
                Mat de = dexpm(a, h * so->hat(ej));
                grad[i * d + j] += (vbar.array() * (de * gk).array()).sum();
            }
            vbar = ek.transpose() * vbar;
        }
        return lambda.dot(gap) + mu * gap.squaredNorm();
    }
};

} // namespace

BVPSolution solve_bvp(const BVPProblem& problem, const BVPOptions& opts) {
    const GroupModel& model = *problem.metric->model;
    const int d = model.algebra_dim();
    const int m = problem.intervals;
    Workspace ws{problem,
                 opts,
                 model,
                 d,
                 m,
                 1.0 / m,
                 (1.0 / m) / opts.substeps_per_interval,
                 opts.use_adjoint ? dynamic_cast<const SpecialOrthogonalModel*>(&model) : nullptr};

    // constant chart-log initializer; scale for the restart jitter follows
    // the energy cap heuristic ||xi||^2 <= 2 dist^2
    Vec v0 = model.chart_log(problem.target);
    Vec base = Vec::Zero(m * d);
    for (int i = 0; i < m; ++i) base.segment(i * d, d) = v0;
    const double cap_energy = 2.0 * problem.metric->eval(v0, v0);

    Rng root = Rng(opts.seed).derive("solve_bvp");
    BVPSolution best;
    bool have_best = false;

    for (int r = 0; r < opts.restarts; ++r) {
        Rng rng = root.derive(static_cast<std::uint64_t>(r));
        Vec z = base;
        if (r > 0)
            for (int i = 0; i < z.size(); ++i) z[i] += opts.restart_sigma * rng.normal();

        BVPSolution sol;
        bool diverged = false;
        double prev_err = std::numeric_limits<double>::infinity();
        // penalty continuation with first-order multiplier estimates
        // (lambda <- lambda + 2 mu c), so moderate mu already drives the gap
        // to tolerance and the inner problems stay well conditioned
        Vec lambda = Vec::Zero(ws.endpoint_gap(z).size());
        std::vector<double> schedule = opts.penalty_schedule;
        while (!schedule.empty() && schedule.back() < 1e8) schedule.push_back(schedule.back() * 10.0);
        for (double mu : schedule) {
            Vec z_before = z;
            LbfgsOptions lopts;
            lopts.max_iterations = opts.max_inner_iterations;
            lopts.grad_tol = 0.5 * opts.stationarity_tol;
            LbfgsResult lr;
            try {
                lr = lbfgs_minimize(
                    [&](const Vec& zz, Vec& gg) { return ws.objective(zz, lambda, mu, gg); }, z, lopts);
            } catch (const Error&) {
                diverged = true;
                break;
            }
            Vec gap = ws.endpoint_gap(lr.x);
            double err = gap.norm();
            if (err <= prev_err + 1e-15) {
                z = lr.x;
                prev_err = err;
                sol.stage_endpoint_errors.push_back(err);
                sol.stationarity = lr.grad_norm;
                lambda += 2.0 * mu * gap;
            } else {
                z = z_before; // keep the previous iterate, continue up the schedule
            }
            if (opts.enforce_energy_cap) {
                ControlPath p = ws.to_path(z);
                double e = energy(p, *problem.metric);
                if (e > cap_energy) z *= std::sqrt(cap_energy / e);
            }
            if (prev_err <= opts.endpoint_tol && sol.stationarity <= opts.stationarity_tol) break;
        }
        if (diverged) continue;

        sol.xi = ws.to_path(z);
        sol.energy = energy(sol.xi, *problem.metric);
        sol.endpoint_error = ws.endpoint_gap(z).norm();
        sol.converged = sol.endpoint_error <= opts.endpoint_tol && sol.stationarity <= opts.stationarity_tol;
        sol.restarts_used = r + 1;

        bool better = !have_best || (sol.converged && !best.converged) ||
                      (sol.converged == best.converged && sol.energy < best.energy);
        if (better) {
            best = sol;
            have_best = true;
        }
    }
    if (!have_best) throw NotConverged("solve_bvp: all restarts diverged");
    best.restarts_used = opts.restarts;
    return best;
}

double geodesic_distance(const Metric& metric, const GroupPoint& x0, const GroupPoint& x1,
                         const BVPOptions& opts) {
    auto problem = make_bvp(metric, x0, x1, 16);
    auto sol = solve_bvp(problem, opts);
    if (!sol.converged) throw NotConverged("geodesic_distance: best restart did not converge");
    return std::sqrt(sol.energy);
}

MinimalityReport minimality_check(const BVPSolution& solution, const Metric& metric, double speed_tol,
                                  double ea_coeff) {
    MinimalityReport rep;
    const auto& xi = solution.xi;
    const int m = xi.intervals();
    const double dt = 1.0 / m;
    double smin = 1e300, smax = 0.0, speed_max = 0.0;
    for (int i = 0; i < m; ++i) {
        Vec v = xi.samples.row(i);
        double s = std::sqrt(metric.eval(v, v));
        smin = std::min(smin, s);
        smax = std::max(smax, s);
        speed_max = std::max(speed_max, s);
    }
    rep.speed_variation = smax > 0 ? (smax - smin) / smax : 0.0;

    for (int i = 0; i + 1 < m; ++i) {
        Vec a = xi.samples.row(i), b = xi.samples.row(i + 1);
        Vec mid = 0.5 * (a + b);
        Vec r = (b - a) / dt + ad_transpose(metric, mid, mid);
        rep.ea_residual = std::max(rep.ea_residual, std::sqrt(metric.eval(r, r)));
    }
    rep.ea_tolerance = ea_coeff * dt * std::pow(1.0 + speed_max, 3);
    rep.pass = rep.speed_variation <= speed_tol && rep.ea_residual <= rep.ea_tolerance;
    return rep;
}

CompletenessReport completeness_probe(const Metric& metric, int n_samples, double horizon,
                                      std::uint64_t seed) {
    if (min_inertia_eigenvalue(metric) < 1.0 - 1e-12)
        throw Error("completeness_probe: strong-metric surrogate needs inertia eigenvalues >= 1");
    CompletenessReport rep;
    rep.samples = n_samples;
    Rng rng = Rng(seed).derive("completeness");
    const GroupModel& model = *metric.model;
    for (int s = 0; s < n_samples; ++s) {
        Vec u(model.algebra_dim());
        if (metric.fourier != nullptr) {
            // smooth prior: mode n drawn with weight n^{-2}
            u.setZero();
            for (int n = 1; n <= metric.fourier->modes(); ++n) {
                double w = std::pow(n, -2.0);
                u[2 * n - 1] = w * rng.normal();
                u[2 * n] = w * rng.normal();
            }
        } else {
            for (int i = 0; i < u.size(); ++i) u[i] = rng.normal();
        }
        u /= std::sqrt(metric.eval(u, u));
        try {
            ShootOptions so;
            so.record_group = false;
            so.adaptive = true;
            so.store_every = 16;
            auto run = shoot(metric, u, horizon, 1e-2, so);
            rep.max_drift = std::max(rep.max_drift, run.max_energy_drift);
            rep.total_steps += run.steps;
        } catch (const BlowUp&) {
            ++rep.blowups;
        }
    }
    rep.pass = rep.blowups == 0 && rep.max_drift <= 1e-6;
    return rep;
}

NondegeneracyReport nondegeneracy_probe(const Metric& metric, int n_samples, std::uint64_t seed,
                                        const BVPOptions& opts) {
    if (min_inertia_eigenvalue(metric) < 1.0 - 1e-12)
        throw Error("nondegeneracy_probe: strong-metric surrogate needs inertia eigenvalues >= 1");
    NondegeneracyReport rep;
    rep.samples = n_samples;
    rep.bound = 0.9 * std::sqrt(min_inertia_eigenvalue(metric));
    rep.min_ratio = 1e300;
    Rng rng = Rng(seed).derive("nondegeneracy");
    const GroupModel& model = *metric.model;
    GroupPoint e{&model, model.identity()};
    for (int s = 0; s < n_samples; ++s) {
        Vec dir(model.algebra_dim());
        for (int i = 0; i < dir.size(); ++i) dir[i] = rng.normal();
        dir.normalize();
        double r = rng.uniform(0.1, 1.0);
        Vec v = r * dir;
        GroupPoint x{&model, model.chart_exp(v)};
        auto problem = make_bvp(metric, e, x, 16);
        auto sol = solve_bvp(problem, opts);
        if (!sol.converged) {
            ++rep.nonconverged;
            continue;
        }
        rep.min_ratio = std::min(rep.min_ratio, std::sqrt(sol.energy) / v.norm());
    }
    rep.pass = rep.nonconverged == 0 && rep.min_ratio >= rep.bound;
    return rep;
}

} // namespace hlg
