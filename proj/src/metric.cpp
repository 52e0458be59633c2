#include "hlg/metric.hpp"

#include <Eigen/Eigenvalues>

namespace hlg {

namespace {

void finalize(Metric& m) {
    if ((m.gram - m.gram.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw Error("Metric: inertia operator must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(m.gram);
    if (es.eigenvalues().minCoeff() <= 0.0) throw Error("Metric: inertia operator must be positive definite");
    m.gram_solver = Eigen::LDLT<Mat>(m.gram);
    const int d = m.model->algebra_dim();
    if (m.fourier == nullptr && d <= 16) {
        m.basis_brackets.resize(d);
        for (int i = 0; i < d; ++i) {
            Mat ci(d, d);
            Vec ei = Vec::Zero(d);
            ei[i] = 1.0;
            for (int j = 0; j < d; ++j) {
                Vec ej = Vec::Zero(d);
                ej[j] = 1.0;
                ci.col(j) = m.model->bracket(ei, ej);
            }
            m.basis_brackets[i] = ci;
        }
    }
}

} // namespace

Metric make_dense_metric(const GroupModel* model, const Mat& inertia) {
    Metric m;
    m.model = model;
    m.inertia = inertia;
    m.gram = inertia;
    finalize(m);
    return m;
}

Metric make_sobolev_metric(const FourierDiffeoModel* model, double s) {
    const double pi = 3.14159265358979323846;
    Metric m;
    m.model = model;
    m.fourier = model;
    m.sobolev_s = s;
    const int d = model->point_dim();
    Vec mult(d), weight(d);
    mult[0] = 1.0;
    weight[0] = 2.0 * pi;
    for (int n = 1; n <= model->modes(); ++n) {
        double lam = std::pow(1.0 + double(n) * n, s);
        mult[2 * n - 1] = mult[2 * n] = lam;
        weight[2 * n - 1] = weight[2 * n] = pi;
    }
    m.inertia = mult.asDiagonal();
    m.gram = (weight.cwiseProduct(mult)).asDiagonal();
    finalize(m);
    return m;
}

double metric_eval(const Metric& metric, const GroupPoint& x, const Vec& v, const Vec& w) {
    require_same_model(metric.model, x.model);
    return metric.eval(v, w);
}

Vec ad_transpose_dense(const Metric& metric, const Vec& u, const Vec& w) {
    const int d = metric.model->algebra_dim();
    Mat mu(d, d);
    if (!metric.basis_brackets.empty()) {
        mu.setZero();
        for (int i = 0; i < d; ++i) mu += u[i] * metric.basis_brackets[i];
    } else {
        for (int j = 0; j < d; ++j) {
            Vec ej = Vec::Zero(d);
            ej[j] = 1.0;
            mu.col(j) = metric.model->bracket(u, ej);
        }
    }
    return metric.gram_solver.solve(mu.transpose() * (metric.gram * w));
}

Vec ad_transpose(const Metric& metric, const Vec& u, const Vec& w) {
    if (metric.fourier != nullptr) {
        const auto& f = *metric.fourier;
        Vec m = metric.inertia_apply(w);
        Vec ug = f.grid_values(u), upg = f.grid_derivative(u);
        Vec mg = f.grid_values(m), mpg = f.grid_derivative(m);
        Vec rhs = f.project(ug.cwiseProduct(mpg) + 2.0 * upg.cwiseProduct(mg));
        for (int i = 0; i < rhs.size(); ++i) rhs[i] /= metric.inertia(i, i);
        return rhs;
    }
    return ad_transpose_dense(metric, u, w);
}

double min_inertia_eigenvalue(const Metric& metric) {
    Eigen::SelfAdjointEigenSolver<Mat> es(metric.inertia);
    return es.eigenvalues().minCoeff();
}

} // namespace hlg
