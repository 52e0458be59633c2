#pragma once

#include "hlg/metric.hpp"

#include <functional>

namespace hlg {

// A metric given as a matrix field over a chart domain. The callable throws
// DomainBoundary outside its domain; the cometric is solved on demand and
// validated against g to 1e-10.
struct ChartMetricField {
    int dim = 0;
    std::function<Mat(const Vec&)> metric;

    Mat g(const Vec& x) const;
    Mat ginv(const Vec& x) const;
};

ChartMetricField hyperbolic_half_plane();
// right-invariant group metric in the chart at the identity; sub_dim > 0
// restricts to the submanifold spanned by the leading chart coordinates
ChartMetricField group_chart_field(const Metric& metric, int sub_dim = -1);
// identity plus smooth trigonometric perturbations, SPD by construction
ChartMetricField random_perturbed_field(int dim, Rng& rng, double amplitude = 0.12, int terms = 4);

// Covectors at x, extended chart-constantly; the associated vector fields
// X_alpha = ginv(x) alpha are the locally constant extensions.
struct CovectorPair {
    Vec x;
    Vec alpha;
    Vec beta;
};

// F(alpha, beta) = 1/2 d(ginv(alpha, beta)), a covector
Vec force(const ChartMetricField& field, const CovectorPair& pair, double h);
// D(alpha, beta) = D_x(beta_sharp - X_beta) . alpha_sharp(x), a vector
Vec stress(const ChartMetricField& field, const CovectorPair& pair, double h);

// g(R(alpha#, beta#) beta#, alpha#)(x) = R11 + R12 + R2 + R3 with
// chart-constant extensions; all derivatives by second-order central
// differences with step h
double sectional_numerator(const ChartMetricField& field, const CovectorPair& pair, double h);

double sectional_curvature(const ChartMetricField& field, const CovectorPair& pair, double h);

// independent oracle: Christoffel symbols from first differences of g, the
// curvature tensor from differences of the symbols plus the quadratic terms,
// contracted to g(R(X,Y)Y,X)
double riemann_fd_oracle(const ChartMetricField& field, const Vec& x, const Vec& xv, const Vec& yv,
                         double h);

} // namespace hlg
