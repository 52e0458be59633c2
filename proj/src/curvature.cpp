#include "hlg/curvature.hpp"

#include "hlg/geodesic.hpp"

#include <cmath>

namespace hlg {

Mat ChartMetricField::g(const Vec& x) const {
    Mat m = metric(x);
    if (!m.allFinite()) throw DomainBoundary();
    return m;
}

Mat ChartMetricField::ginv(const Vec& x) const {
    Mat m = g(x);
    Mat inv = m.ldlt().solve(Mat::Identity(dim, dim));
    if ((m * inv - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10)
        throw Error("ChartMetricField: cometric validation failed (metric near-singular)");
    return inv;
}

ChartMetricField hyperbolic_half_plane() {
    ChartMetricField f;
    f.dim = 2;
    f.metric = [](const Vec& x) -> Mat {
        if (x[1] <= 0.0) throw DomainBoundary("hyperbolic half plane: y <= 0");
        return Mat::Identity(2, 2) / (x[1] * x[1]);
    };
    return f;
}

ChartMetricField group_chart_field(const Metric& metric, int sub_dim) {
    const int full = metric.model->algebra_dim();
    const int d = sub_dim > 0 ? sub_dim : full;
    ChartMetricField f;
    f.dim = d;
    const Metric* m = &metric;
    f.metric = [m, d, full](const Vec& x) -> Mat {
        Vec v = Vec::Zero(full);
        v.head(d) = x;
        Mat g;
        try {
            g = chart_metric(*m, v);
        } catch (const Error&) {
            throw DomainBoundary();
        }
        return g.topLeftCorner(d, d);
    };
    return f;
}

ChartMetricField random_perturbed_field(int dim, Rng& rng, double amplitude, int terms) {
    struct Term {
        Mat s;
        Vec omega;
        double phase;
    };
    auto terms_vec = std::make_shared<std::vector<Term>>();
    for (int k = 0; k < terms; ++k) {
        Mat s(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j <= i; ++j) s(i, j) = s(j, i) = rng.normal();
        s *= amplitude / (terms * std::max(1.0, s.cwiseAbs().maxCoeff()));
        Vec omega(dim);
        for (int i = 0; i < dim; ++i) omega[i] = rng.uniform(-1.5, 1.5);
        terms_vec->push_back({s, omega, rng.uniform(0.0, 6.28)});
    }
    ChartMetricField f;
    f.dim = dim;
    f.metric = [dim, terms_vec](const Vec& x) -> Mat {
        Mat g = Mat::Identity(dim, dim);
        for (const auto& t : *terms_vec) g += std::sin(t.omega.dot(x) + t.phase) * t.s;
        return g;
    };
    return f;
}

namespace {

// scalar field z -> a^T ginv(z) b
double pairing(const ChartMetricField& f, const Vec& z, const Vec& a, const Vec& b) {
    return a.dot(f.ginv(z) * b);
}

double second_directional(const ChartMetricField& f, const Vec& x, const Vec& v, const Vec& a,
                          const Vec& b, double h) {
    return (pairing(f, x + h * v, a, b) - 2.0 * pairing(f, x, a, b) + pairing(f, x - h * v, a, b)) /
           (h * h);
}

// standard 4-point cross for the mixed derivative
double mixed_directional(const ChartMetricField& f, const Vec& x, const Vec& v, const Vec& w,
                         const Vec& a, const Vec& b, double h) {
    return (pairing(f, x + h * v + h * w, a, b) - pairing(f, x + h * v - h * w, a, b) -
            pairing(f, x - h * v + h * w, a, b) + pairing(f, x - h * v - h * w, a, b)) /
           (4.0 * h * h);
}

} // namespace

Vec force(const ChartMetricField& field, const CovectorPair& pair, double h) {
    Vec out(field.dim);
    for (int i = 0; i < field.dim; ++i) {
        Vec ei = Vec::Zero(field.dim);
        ei[i] = 1.0;
        out[i] = 0.5 *
                 (pairing(field, pair.x + h * ei, pair.alpha, pair.beta) -
                  pairing(field, pair.x - h * ei, pair.alpha, pair.beta)) /
                 (2.0 * h);
    }
    return out;
}

Vec stress(const ChartMetricField& field, const CovectorPair& pair, double h) {
    // Jacobian of z -> ginv(z) beta, applied to alpha_sharp(x)
    Vec asharp = field.ginv(pair.x) * pair.alpha;
    Mat jac(field.dim, field.dim);
    for (int j = 0; j < field.dim; ++j) {
        Vec ej = Vec::Zero(field.dim);
        ej[j] = 1.0;
        jac.col(j) =
            (field.ginv(pair.x + h * ej) * pair.beta - field.ginv(pair.x - h * ej) * pair.beta) /
            (2.0 * h);
    }
    return jac * asharp;
}

double sectional_numerator(const ChartMetricField& field, const CovectorPair& pair, double h) {
    const Vec& x = pair.x;
    const Vec& a = pair.alpha;
    const Vec& b = pair.beta;
    Mat gi = field.ginv(x);
    Vec xa = gi * a, xb = gi * b;

    double r11 = 0.5 * (second_directional(field, x, xa, b, b, h) -
                        2.0 * mixed_directional(field, x, xa, xb, a, b, h) +
                        second_directional(field, x, xb, a, a, h));

    Vec faa = force(field, {x, a, a}, h);
    Vec fbb = force(field, {x, b, b}, h);
    Vec fab = force(field, {x, a, b}, h);
    Vec dab = stress(field, {x, a, b}, h);
    Vec dba = stress(field, {x, b, a}, h);
    Vec daa = stress(field, {x, a, a}, h);
    Vec dbb = stress(field, {x, b, b}, h);

    double r12 = faa.dot(dbb) + fbb.dot(daa) - fab.dot(dab + dba);
    double r2 = fab.dot(gi * fab) - faa.dot(gi * fbb);
    Vec dskew = dab - dba;
    double r3 = -0.75 * dskew.dot(field.g(x) * dskew);
    return r11 + r12 + r2 + r3;
}

double sectional_curvature(const ChartMetricField& field, const CovectorPair& pair, double h) {
    Mat gi = field.ginv(pair.x);
    double aa = pair.alpha.dot(gi * pair.alpha);
    double bb = pair.beta.dot(gi * pair.beta);
    double ab = pair.alpha.dot(gi * pair.beta);
    double area = aa * bb - ab * ab;
    if (area <= 1e-12) throw DegeneratePlane();
    return sectional_numerator(field, pair, h) / area;
}

namespace {

// Gamma^l_{ij} at z from first central differences of g
std::vector<Mat> christoffel_upper(const ChartMetricField& f, const Vec& z, double h) {
    const int d = f.dim;
    std::vector<Mat> dg(d); // dg[k] = d g / d z_k
    for (int k = 0; k < d; ++k) {
        Vec ek = Vec::Zero(d);
        ek[k] = 1.0;
        dg[k] = (f.g(z + h * ek) - f.g(z - h * ek)) / (2.0 * h);
    }
    Mat gi = f.ginv(z);
    std::vector<Mat> gamma(d, Mat::Zero(d, d)); // gamma[l](i,j)
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Vec lower(d);
            for (int l = 0; l < d; ++l) lower[l] = 0.5 * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
            Vec upper = gi * lower;
            for (int l = 0; l < d; ++l) gamma[l](i, j) = upper[l];
        }
    return gamma;
}

} // namespace

double riemann_fd_oracle(const ChartMetricField& field, const Vec& x, const Vec& xv, const Vec& yv,
                         double h) {
    const int d = field.dim;
    // dgamma[k][l](i,j) = d Gamma^l_{ij} / d x_k
    std::vector<std::vector<Mat>> dgamma(d);
    for (int k = 0; k < d; ++k) {
        Vec ek = Vec::Zero(d);
        ek[k] = 1.0;
        auto gp = christoffel_upper(field, x + h * ek, h);
        auto gm = christoffel_upper(field, x - h * ek, h);
        dgamma[k].resize(d);
        for (int l = 0; l < d; ++l) dgamma[k][l] = (gp[l] - gm[l]) / (2.0 * h);
    }
    auto gamma = christoffel_upper(field, x, h);

    // (R(X,Y)Z)^l = X^k Y^m Z^j (d_k G^l_{mj} - d_m G^l_{kj} + G^l_{kp} G^p_{mj} - G^l_{mp} G^p_{kj})
    Vec rz = Vec::Zero(d);
    for (int l = 0; l < d; ++l) {
        double acc = 0.0;
        for (int k = 0; k < d; ++k)
            for (int m = 0; m < d; ++m) {
                if (xv[k] == 0.0 && yv[m] == 0.0) continue;
                for (int j = 0; j < d; ++j) {
                    double term = dgamma[k][l](m, j) - dgamma[m][l](k, j);
                    for (int p = 0; p < d; ++p)
                        term += gamma[l](k, p) * gamma[p](m, j) - gamma[l](m, p) * gamma[p](k, j);
                    acc += xv[k] * yv[m] * yv[j] * term;
                }
            }
        rz[l] = acc;
    }
    return xv.dot(field.g(x) * rz);
}

} // namespace hlg
