#include "hlg/experiments.hpp"

#include "hlg/bvp.hpp"
#include "hlg/csv.hpp"
#include "hlg/curvature.hpp"
#include "hlg/groupio.hpp"
#include "hlg/selftest.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace hlg {

Vec smooth_sample_algebra(Rng& rng, const GroupModel& model, double scale) {
    if (auto* fm = dynamic_cast<const FourierDiffeoModel*>(&model)) {
        Vec v = Vec::Zero(fm->point_dim());
        for (int n = 1; n <= fm->modes(); ++n) {
            double w = scale * std::pow(n, -4.0);
            v[2 * n - 1] = w * rng.normal();
            v[2 * n] = w * rng.normal();
        }
        return v;
    }
    return sample_algebra(rng, model, scale);
}

namespace {

namespace fs = std::filesystem;

struct ModelBundle {
    std::shared_ptr<GroupModel> model;
    bool is_fourier = false;
    bool is_matrix = false;
};

ModelBundle make_model(const Config& cfg) {
    std::string variant = cfg.get("model.variant");
    ModelBundle b;
    if (variant == "so2" || variant == "so3") {
        b.model = make_so(variant == "so2" ? 2 : 3);
        b.is_matrix = true;
    } else if (variant == "r2" || variant == "r3") {
        b.model = make_vector_group(variant == "r2" ? 2 : 3);
    } else if (variant == "se2") { // SO(2) |x R^2, rotation representation
        auto so2 = make_so(2);
        b.model = make_semidirect(so2, rotation_rep(so2));
    } else if (variant == "se3") {
        auto so3 = make_so(3);
        b.model = make_semidirect(so3, rotation_rep(so3));
    } else if (variant == "product-so3-r2") { // trivial representation
        b.model = make_semidirect(make_so(3), trivial_rep(2));
    } else if (variant == "fourier") {
        b.model = make_fourier_diffeo(static_cast<int>(cfg.get_int("model.modes")));
        b.is_fourier = true;
    } else if (variant == "heisenberg") {
        b.model = make_extension(make_vector_group(2), make_vector_group(1), heisenberg_datum());
    } else {
        throw ConfigError("model.variant: unknown variant " + variant);
    }
    return b;
}

Metric make_metric_from(const Config& cfg, const ModelBundle& b) {
    if (b.is_fourier) {
        auto* fm = dynamic_cast<const FourierDiffeoModel*>(b.model.get());
        return make_sobolev_metric(fm, cfg.get_double_or("metric.s", 2.0));
    }
    const int d = b.model->algebra_dim();
    if (cfg.has("metric.inertia")) {
        auto diag = cfg.get_doubles("metric.inertia");
        if (static_cast<int>(diag.size()) != d)
            throw ConfigError("metric.inertia: expected " + std::to_string(d) + " diagonal entries");
        Mat a = Mat::Zero(d, d);
        for (int i = 0; i < d; ++i) a(i, i) = diag[i];
        return make_dense_metric(b.model.get(), a);
    }
    return make_dense_metric(b.model.get(), Mat::Identity(d, d));
}

void write_file(const std::string& out_dir, const std::string& name, const std::string& content) {
    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
    if (!out) throw Error("cannot write artifact: " + name);
    out << content;
}

Vec u0_from_config(const Config& cfg, const ModelBundle& b) {
    if (cfg.has("options.u0")) {
        auto vals = cfg.get_doubles("options.u0");
        if (static_cast<int>(vals.size()) != b.model->algebra_dim())
            throw ConfigError("options.u0: expected " + std::to_string(b.model->algebra_dim()) +
                              " coordinates");
        return Eigen::Map<const Vec>(vals.data(), vals.size());
    }
    if (b.is_fourier) { // power-law profile c_n = amp * n^{-decay} on the cosine coordinates
        auto* fm = dynamic_cast<const FourierDiffeoModel*>(b.model.get());
        double decay = cfg.get_double_or("options.u0_decay", 4.0);
        double amp = cfg.get_double_or("options.u0_amp", 0.5);
        Vec u0 = Vec::Zero(fm->point_dim());
        for (int n = 1; n <= fm->modes(); ++n) u0[2 * n - 1] = amp * std::pow(n, -decay);
        return u0;
    }
    throw ConfigError("missing config key: options.u0");
}

// ---- the eight experiments -------------------------------------------------

ExperimentResult run_jets_selftest(const Config& cfg, const std::string& out_dir) {
    const auto seed = cfg.get_seed("experiment.seed");
    const int trials = static_cast<int>(cfg.get_int_or("options.trials", 200));
    const bool rational = cfg.get_bool_or("options.rational", true);

    std::ostringstream rep;
    rep << selftest_report_text(seed, trials, false);
    if (rational) rep << selftest_report_text(seed, trials / 4 + 1, true);

    // serialization fixture round-trip
    Rng rng = Rng(seed).derive("fixture");
    auto jet = random_jet(rng, 2, 2, 3, 1.0);
    auto round = jet_from_json(jet_to_json(jet));
    double dev = jet_max_diff(jet, round);
    rep << "serialization_roundtrip: max_dev=" << format_double(dev) << "\n";

    bool pass = selftest_all_pass(seed, trials, false) && dev == 0.0 &&
                (!rational || selftest_all_pass(seed, trials / 4 + 1, true));
    rep << (pass ? "PASS" : "FAIL") << "\n";
    write_file(out_dir, cfg.get_or("output.report", "jets-selftest.txt"), rep.str());
    return {pass ? 0 : 1, pass ? "jets-selftest: pass" : "jets-selftest: FAIL"};
}

ExperimentResult run_group_validate(const Config& cfg, const std::string& out_dir) {
    const auto seed = cfg.get_seed("experiment.seed");
    auto bundle = make_model(cfg);
    const auto& model = *bundle.model;
    const int samples = static_cast<int>(cfg.get_int_or("options.samples", 100));
    const double tol = bundle.is_fourier ? 1e-6 : 1e-9;

    Rng rng = Rng(seed).derive("group-validate");
    double assoc = 0.0, inv = 0.0;
    for (int t = 0; t < samples; ++t) {
        Vec a = model.chart_exp(smooth_sample_algebra(rng, model, 0.5));
        Vec b = model.chart_exp(smooth_sample_algebra(rng, model, 0.5));
        Vec c = model.chart_exp(smooth_sample_algebra(rng, model, 0.5));
        Vec lhs = model.multiply(model.multiply(a, b), c);
        Vec rhs = model.multiply(a, model.multiply(b, c));
        assoc = std::max(assoc, (lhs - rhs).cwiseAbs().maxCoeff());
        inv = std::max(inv, (model.multiply(model.inverse(a), a) - model.identity()).cwiseAbs().maxCoeff());
        inv = std::max(inv, (model.multiply(a, model.inverse(a)) - model.identity()).cwiseAbs().maxCoeff());
    }

    // flow bracket agreement at a fixed extrapolated step
    Vec x = smooth_sample_algebra(rng, model, 0.5);
    Vec y = smooth_sample_algebra(rng, model, 0.5);
    AlgebraVector ax{&model, x}, ay{&model, y};
    double flowdev =
        (bracket_via_flows(ax, ay, 1e-2).data - model.bracket(x, y)).cwiseAbs().maxCoeff();

    std::ostringstream rep;
    rep << "model: " << model.name() << "\n";
    rep << "samples: " << samples << "\n";
    rep << "associativity_residual: " << format_double(assoc) << "\n";
    rep << "inverse_residual: " << format_double(inv) << "\n";
    rep << "flow_bracket_deviation: " << format_double(flowdev) << "\n";
    bool pass = assoc <= tol && inv <= tol && flowdev <= 1e-3;

    if (cfg.get("model.variant") == "heisenberg") {
        auto base = make_vector_group(2);
        auto fiber = make_vector_group(1);
        auto good = validate_extension_datum(heisenberg_datum(), *fiber, *base, samples, seed);
        auto bad = validate_extension_datum(perturbed_heisenberg_datum(), *fiber, *base, samples, seed);
        rep << "heisenberg_cocycle: pass=" << (good.pass ? 1 : 0)
            << " residual=" << format_double(good.residual_cocycle) << "\n";
        rep << "perturbed_cocycle: pass=" << (bad.pass ? 1 : 0)
            << " residual=" << format_double(bad.residual_cocycle) << "\n";
        pass = pass && good.pass && !bad.pass;
    }
    if (cfg.has("options.control_path")) { // evolve a fixture and check the cocycle property
        std::ifstream in(cfg.get("options.control_path"));
        if (!in) throw ConfigError("options.control_path: cannot open fixture");
        nlohmann::json j;
        in >> j;
        auto path = control_path_from_json(j, &model);
        auto curve = evolve(path, 1.0 / (path.intervals() * 8));
        rep << "fixture_evolve_endpoint_member: " << (model.member(curve.back().data) ? 1 : 0) << "\n";
        pass = pass && model.member(curve.back().data);
    }
    rep << (pass ? "PASS" : "FAIL") << "\n";
    write_file(out_dir, cfg.get_or("output.report", "group-validate.txt"), rep.str());
    return {pass ? 0 : 1, "group-validate(" + model.name() + "): " + (pass ? "pass" : "FAIL")};
}

ExperimentResult run_shoot(const Config& cfg, const std::string& out_dir) {
    auto bundle = make_model(cfg);
    auto metric = make_metric_from(cfg, bundle);
    const double horizon = cfg.get_double_or("options.T", 1.0);
    const double h = cfg.get_double_or("options.h", 1e-3);
    const double drift_tol = cfg.get_double_or("options.drift_tol", 1e-6);

    CsvWriter csv;
    std::vector<std::string> names{"t", "energy"};
    for (int i = 0; i < bundle.model->point_dim(); ++i) names.push_back("g" + std::to_string(i));
    if (bundle.is_fourier) names.push_back("decay_exponent");
    csv.header(names);

    bool pass = true;
    double drift = 0.0;
    if (cfg.has("options.control_path")) {
        std::ifstream in(cfg.get("options.control_path"));
        if (!in) throw ConfigError("options.control_path: cannot open fixture");
        nlohmann::json j;
        in >> j;
        auto path = control_path_from_json(j, bundle.model.get());
        auto curve = evolve(path, h);
        for (std::size_t i = 0; i < curve.size(); ++i) {
            Vec u = path.value(std::min(1.0, double(i) / path.intervals()));
            csv.cell(double(i) / path.intervals()).cell(metric.eval(u, u));
            for (int c = 0; c < curve[i].data.size(); ++c) csv.cell(curve[i].data[c]);
            if (bundle.is_fourier) csv.cell(0.0);
            csv.end_row();
        }
    } else {
        Vec u0 = u0_from_config(cfg, bundle);
        ShootOptions so;
        so.store_every = static_cast<int>(cfg.get_int_or("options.store_every", 100));
        so.adaptive = cfg.get_bool_or("options.adaptive", false);
        auto run = shoot(metric, u0, horizon, h, so);
        drift = run.max_energy_drift;
        for (const auto& s : run.states) {
            csv.cell(s.t).cell(metric.eval(s.u, s.u));
            for (int c = 0; c < s.g.size(); ++c) csv.cell(s.g[c]);
            if (bundle.is_fourier) {
                auto* fm = dynamic_cast<const FourierDiffeoModel*>(bundle.model.get());
                double expo = 0.0;
                try {
                    expo = regularity_decay(*fm, s.u).exponent;
                } catch (const InsufficientModes&) {
                }
                csv.cell(expo);
            }
            csv.end_row();
        }
        pass = drift <= drift_tol;
    }
    write_file(out_dir, cfg.get_or("output.csv", "shoot.csv"), csv.text());
    return {pass ? 0 : 1,
            "shoot(" + bundle.model->name() + "): drift=" + format_double(drift) +
                (pass ? " pass" : " FAIL")};
}

ExperimentResult run_bvp_distance(const Config& cfg, const std::string& out_dir) {
    auto bundle = make_model(cfg);
    auto metric = make_metric_from(cfg, bundle);
    const auto& model = *bundle.model;

    BVPOptions opts;
    opts.seed = cfg.get_seed("experiment.seed");
    opts.restarts = static_cast<int>(cfg.get_int_or("options.restarts", 8));
    opts.use_adjoint = cfg.get_or("options.gradient", "fd") == "adjoint";
    const int m = static_cast<int>(cfg.get_int_or("options.intervals", 16));
    const double tol = cfg.get_double_or("options.tol", 1e-4);

    std::vector<std::pair<Vec, double>> targets; // chart vector, oracle distance (<0: none)
    if (cfg.has("options.theta_grid")) {
        if (cfg.get("model.variant") != "so3")
            throw ConfigError("options.theta_grid applies to the so3 model");
        for (double theta : cfg.get_doubles("options.theta_grid")) {
            Vec v = Vec::Zero(3);
            v[2] = theta;
            bool biinv = (metric.inertia - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14;
            targets.emplace_back(v, biinv ? theta : -1.0);
        }
    } else if (cfg.has("options.target_chart")) {
        auto vals = cfg.get_doubles("options.target_chart");
        if (static_cast<int>(vals.size()) != model.algebra_dim())
            throw ConfigError("options.target_chart: wrong dimension");
        targets.emplace_back(Eigen::Map<const Vec>(vals.data(), vals.size()), -1.0);
    } else {
        throw ConfigError("bvp-distance needs options.theta_grid or options.target_chart");
    }

    CsvWriter csv;
    std::vector<std::string> names;
    for (int i = 0; i < model.algebra_dim(); ++i) names.push_back("target_chart" + std::to_string(i));
    for (const char* s : {"energy", "distance", "endpoint_error", "converged", "restarts_used",
                          "oracle", "abs_error", "minimality"})
        names.push_back(s);
    csv.header(names);

    bool pass = true;
    GroupPoint e{&model, model.identity()};
    for (const auto& [v, oracle] : targets) {
        GroupPoint x1{&model, model.chart_exp(v)};
        auto sol = solve_bvp(make_bvp(metric, e, x1, m), opts);
        auto min_rep = minimality_check(sol, metric);
        double dist = std::sqrt(sol.energy);
        double err = oracle >= 0 ? std::abs(dist - oracle) : 0.0;
        for (int i = 0; i < v.size(); ++i) csv.cell(v[i]);
        csv.cell(sol.energy)
            .cell(dist)
            .cell(sol.endpoint_error)
            .cell(sol.converged)
            .cell(sol.restarts_used)
            .cell(oracle)
            .cell(err)
            .cell(min_rep.pass);
        csv.end_row();
        pass = pass && sol.converged && min_rep.pass && (oracle < 0 || err <= tol);
    }
    write_file(out_dir, cfg.get_or("output.csv", "bvp-distance.csv"), csv.text());
    return {pass ? 0 : 1, std::string("bvp-distance: ") + (pass ? "pass" : "FAIL")};
}

ExperimentResult run_curvature_table(const Config& cfg, const std::string& out_dir) {
    const auto seed = cfg.get_seed("experiment.seed");
    const double h = cfg.get_double_or("options.h", 1e-3);
    const int random_fields = static_cast<int>(cfg.get_int_or("options.random_fields", 10));
    Rng rng = Rng(seed).derive("curvature-table");

    CsvWriter csv;
    csv.header({"model", "point", "plane", "numerator_formula", "numerator_oracle", "sectional",
                "discrepancy", "halving_ok"});
    bool pass = true;

    auto emit = [&](const std::string& name, const ChartMetricField& field, const Vec& x, const Vec& a,
                    const Vec& b, double expected_sectional, double expect_tol) {
        CovectorPair pair{x, a, b};
        auto row = [&](double hh) {
            Mat gi = field.ginv(x);
            double num = sectional_numerator(field, pair, hh);
            double oracle = riemann_fd_oracle(field, x, Vec(gi * a), Vec(gi * b), hh);
            return std::make_pair(num, oracle);
        };
        auto [num, oracle] = row(h);
        auto [num2, oracle2] = row(0.5 * h);
        double disc = std::abs(num - oracle), disc2 = std::abs(num2 - oracle2);
        double floor = 1e-8 * (1.0 + std::abs(num));
        bool halving_ok = disc2 <= 0.5 * disc + floor;
        double sec = sectional_curvature(field, pair, h);
        std::ostringstream px, pl;
        px << "(" << x.transpose() << ")";
        pl << "(" << a.transpose() << ";" << b.transpose() << ")";
        csv.cell(name).cell(px.str()).cell(pl.str()).cell(num).cell(oracle).cell(sec).cell(disc).cell(
            halving_ok);
        csv.end_row();
        bool row_ok = disc <= 1e-3 * (1.0 + std::abs(num)) && halving_ok;
        if (expect_tol > 0) row_ok = row_ok && std::abs(sec - expected_sectional) <= expect_tol;
        pass = pass && row_ok;
    };

    {
        auto f = hyperbolic_half_plane();
        Vec x(2), a(2), b(2);
        x << 0, 1;
        a << 1, 0;
        b << 0, 1;
        emit("hyperbolic", f, x, a, b, -1.0, 1e-3);
    }
    {
        auto so3 = make_so(3);
        auto metric = make_dense_metric(so3.get(), Mat::Identity(3, 3));
        auto f = group_chart_field(metric);
        emit("so3-biinvariant", f, Vec::Zero(3), Vec::Unit(3, 0), Vec::Unit(3, 1), 0.25, 1e-3);

        Mat a3 = Mat::Identity(3, 3);
        a3.diagonal() << 1, 2, 3;
        auto rb = make_dense_metric(so3.get(), a3);
        auto frb = group_chart_field(rb);
        Vec x(3), a(3), b(3);
        for (int i = 0; i < 3; ++i) {
            x[i] = 0.2 * rng.normal();
            a[i] = rng.normal();
            b[i] = rng.normal();
        }
        emit("rigid-body", frb, x, a, b, 0.0, -1.0);
    }
    for (int t = 0; t < random_fields; ++t) {
        int dim = (t % 3 == 0) ? 2 : (t % 3 == 1) ? 3 : 6;
        auto f = random_perturbed_field(dim, rng);
        Vec x(dim), a(dim), b(dim);
        for (int i = 0; i < dim; ++i) {
            x[i] = 0.3 * rng.normal();
            a[i] = rng.normal();
            b[i] = rng.normal();
        }
        emit("random-" + std::to_string(dim) + "d", f, x, a, b, 0.0, -1.0);
    }
    if (cfg.get_bool_or("options.fourier_chart", false)) {
        // truncated circle-diffeo metric, chart restricted to the leading modes
        FourierDiffeoModel fm(8);
        auto metric = make_sobolev_metric(&fm, cfg.get_double_or("metric.s", 1.0));
        auto field = group_chart_field(metric, 2 * 6 + 1);
        Vec x = Vec::Zero(field.dim), a = Vec::Unit(field.dim, 1), b = Vec::Unit(field.dim, 2);
        emit("fourier-chart", field, x, a, b, 0.0, -1.0);
    }

    write_file(out_dir, cfg.get_or("output.csv", "curvature-table.csv"), csv.text());
    return {pass ? 0 : 1, std::string("curvature-table: ") + (pass ? "pass" : "FAIL")};
}

ExperimentResult run_completeness(const Config& cfg, const std::string& out_dir) {
    auto bundle = make_model(cfg);
    auto metric = make_metric_from(cfg, bundle);
    auto rep = completeness_probe(metric, static_cast<int>(cfg.get_int_or("options.samples", 20)),
                                  cfg.get_double_or("options.T", 50.0), cfg.get_seed("experiment.seed"));
    std::ostringstream out;
    out << "model: " << bundle.model->name() << "\n";
    out << "samples: " << rep.samples << "\n";
    out << "max_energy_drift: " << format_double(rep.max_drift) << "\n";
    out << "blowups: " << rep.blowups << "\n";
    out << "total_steps: " << rep.total_steps << "\n";
    out << (rep.pass ? "PASS" : "FAIL") << "\n";
    write_file(out_dir, cfg.get_or("output.report", "completeness.txt"), out.str());
    return {rep.pass ? 0 : 1,
            "completeness(" + bundle.model->name() + "): drift=" + format_double(rep.max_drift) +
                (rep.pass ? " pass" : " FAIL")};
}

ExperimentResult run_noloss(const Config& cfg, const std::string& out_dir) {
    auto bundle = make_model(cfg);
    if (!bundle.is_fourier) throw ConfigError("noloss requires the fourier model");
    auto metric = make_metric_from(cfg, bundle);
    Vec u0 = u0_from_config(cfg, bundle);
    const double decay = cfg.get_double_or("options.u0_decay", 4.0);
    auto rep = no_loss_no_gain_check(metric, u0, cfg.get_double_or("options.T", 1.0),
                                     cfg.get_double_or("options.h", 2e-3));
    std::ostringstream out;
    out << "model: " << bundle.model->name() << "\n";
    bool band_ok = true;
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        out << "t=" << format_double(rep.times[i]) << " u_exponent=" << format_double(rep.u_exponent[i])
            << " fit_residual=" << format_double(rep.u_residual[i]) << "\n";
        band_ok = band_ok && std::abs(rep.u_exponent[i] + decay) <= 0.5;
    }
    for (std::size_t i = 0; i < rep.g_exponent.size(); ++i)
        out << "g_exponent[" << i + 1 << "]=" << format_double(rep.g_exponent[i]) << "\n";
    bool pass = rep.pass && band_ok;
    out << (pass ? "PASS" : "FAIL") << "\n";
    write_file(out_dir, cfg.get_or("output.report", "noloss.txt"), out.str());
    return {pass ? 0 : 1, std::string("noloss: ") + (pass ? "pass" : "FAIL")};
}

ExperimentResult run_nondegeneracy(const Config& cfg, const std::string& out_dir) {
    auto bundle = make_model(cfg);
    auto metric = make_metric_from(cfg, bundle);
    BVPOptions opts;
    opts.seed = cfg.get_seed("experiment.seed");
    opts.restarts = static_cast<int>(cfg.get_int_or("options.restarts", 2));
    opts.use_adjoint = cfg.get_or("options.gradient", "fd") == "adjoint";
    auto rep = nondegeneracy_probe(metric, static_cast<int>(cfg.get_int_or("options.samples", 100)),
                                   cfg.get_seed("experiment.seed"), opts);
    std::ostringstream out;
    out << "model: " << bundle.model->name() << "\n";
    out << "samples: " << rep.samples << "\n";
    out << "nonconverged: " << rep.nonconverged << "\n";
    out << "min_ratio: " << format_double(rep.min_ratio) << "\n";
    out << "bound: " << format_double(rep.bound) << "\n";
    out << (rep.pass ? "PASS" : "FAIL") << "\n";
    write_file(out_dir, cfg.get_or("output.report", "nondegeneracy.txt"), out.str());
    return {rep.pass ? 0 : 1,
            "nondegeneracy(" + bundle.model->name() + "): min_ratio=" + format_double(rep.min_ratio) +
                (rep.pass ? " pass" : " FAIL")};
}

struct ExperimentEntry {
    std::string name;
    std::string description;
    ExperimentResult (*run)(const Config&, const std::string&);
};

const std::vector<ExperimentEntry>& registry() {
    static const std::vector<ExperimentEntry> entries{
        {"jets-selftest", "jet calculus batteries: functoriality, inversion, norm bounds, evaluation",
         run_jets_selftest},
        {"group-validate", "group axioms on samples, cocycle validators, flow-bracket agreement",
         run_group_validate},
        {"shoot", "geodesic initial value problem: energy monitor, trajectory CSV, decay diagnostic",
         run_shoot},
        {"bvp-distance", "geodesic boundary value solver vs the rotation-angle oracle", run_bvp_distance},
        {"curvature-table", "force/stress sectional curvature vs the Christoffel-based oracle",
         run_curvature_table},
        {"completeness", "long-horizon geodesic shooting: no blow-ups, bounded energy drift",
         run_completeness},
        {"noloss", "Fourier-coefficient decay exponent preserved along geodesics", run_noloss},
        {"nondegeneracy", "geodesic distance bounded below by the chart norm", run_nondegeneracy},
    };
    return entries;
}

} // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& e : registry()) out.push_back(e.name);
        return out;
    }();
    return names;
}

std::string list_experiments_text() {
    std::ostringstream out;
    for (const auto& e : registry()) out << e.name << "  -  " << e.description << "\n";
    return out.str();
}

std::string list_experiments_machine() {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : registry()) out.push_back({{"name", e.name}, {"description", e.description}});
    return out.dump(2) + "\n";
}

ExperimentResult run_experiment(const Config& cfg, const std::string& out_dir, bool verbose) {
    const std::string name = cfg.get("experiment.name");
    if (!cfg.has("experiment.seed")) throw ConfigError("missing config key: experiment.seed");
    for (const auto& e : registry()) {
        if (e.name == name) {
            auto result = e.run(cfg, out_dir);
            if (verbose) std::cout << result.summary << "\n";
            return result;
        }
    }
    throw ConfigError("experiment.name: unknown experiment " + name);
}

} // namespace hlg
