#pragma once

#include "hlg/models.hpp"

#include <optional>

namespace hlg {

// Right-invariant metric from a symmetric positive-definite inertia operator
// on the algebra. <u,v>_A = u^T gram v in algebra coordinates; for dense
// models gram is the inertia matrix itself, for FourierDiffeo the inertia is
// the multiplier n -> (1+n^2)^s and gram additionally carries the L^2 weights
// (2*pi for the constant mode, pi for each cos/sin coordinate).
struct Metric {
    const GroupModel* model = nullptr;
    Mat inertia;         // operator matrix in algebra coordinates (diagonal for Fourier)
    Mat gram;            // coordinate matrix of <A. , .>
    Eigen::LDLT<Mat> gram_solver;
    std::vector<Mat> basis_brackets; // C_i with columns bracket(e_i, e_j); dense models
    const FourierDiffeoModel* fourier = nullptr; // set for spectral fast paths
    double sobolev_s = 0.0;

    double eval(const Vec& u, const Vec& w) const { return u.dot(gram * w); }
    Vec inertia_apply(const Vec& u) const { return inertia * u; }
};

Metric make_dense_metric(const GroupModel* model, const Mat& inertia);
Metric make_sobolev_metric(const FourierDiffeoModel* model, double s);

// <A u_v, u_w> with right-trivialized tangent data; the base point never
// enters (right-invariance by construction).
double metric_eval(const Metric& metric, const GroupPoint& x, const Vec& v, const Vec& w);

// z with <A z, v> = <A w, [u, v]> for all v. Dense solve, or the closed
// spectral form A^{-1}(u m' + 2 u' m), m = A w, on FourierDiffeo (both agree;
// the sign follows the flow bracket [u,v] = u'v - uv').
Vec ad_transpose(const Metric& metric, const Vec& u, const Vec& w);
Vec ad_transpose_dense(const Metric& metric, const Vec& u, const Vec& w); // reference route

double min_inertia_eigenvalue(const Metric& metric);

} // namespace hlg
