#pragma once

#include "hlg/errors.hpp"
#include "hlg/linalg.hpp"

#include <memory>
#include <string>
#include <vector>

namespace hlg {

// A concrete desk-scale group model. Points and algebra vectors live in flat
// coordinate vectors whose layout is fixed by the model. All operations are
// pure; models own no mutable state.
class GroupModel {
  public:
    virtual ~GroupModel() = default;

    virtual std::string name() const = 0;
    virtual int point_dim() const = 0;
    virtual int algebra_dim() const = 0;
    virtual Vec identity() const = 0;
    virtual Vec multiply(const Vec& a, const Vec& b) const = 0;
    virtual Vec inverse(const Vec& a) const = 0;
    virtual bool member(const Vec& a, double tol = 1e-9) const = 0;

    virtual Vec bracket(const Vec& x, const Vec& y) const = 0;

    // T_e mu^g (xi): derivative of right translation, in point coordinates.
    virtual Vec tangent_at(const Vec& g, const Vec& xi) const;

    // Time-1 flow of the right-invariant field of xi, started at e. Exact for
    // matrix and semidirect models; a documented truncated substitute for
    // FourierDiffeo; generic models integrate numerically.
    virtual Vec step(const Vec& xi) const;

    // flow for time t (sign carries through)
    virtual Vec flow(const Vec& xi, double t) const { return step(t * xi); }

    // one evolution substep with frozen control: g <- step(h xi) . g by
    // default; FourierDiffeo replaces the left multiplication by a
    // mode-truncated flow substep so the projection enters per instant, not
    // per composition.
    virtual Vec evolve_substep(const Vec& g, const Vec& xi, double h) const {
        return multiply(flow(xi, h), g);
    }

    // chart at the identity and its inverse; chart_log(identity()) = 0 and
    // d(chart_log)_e = Id in algebra coordinates.
    virtual Vec chart_log(const Vec& a) const = 0;
    virtual Vec chart_exp(const Vec& v) const = 0;

    // d/ds|_0 of chart_exp(v + s w) * chart_exp(v)^{-1}, right-trivialized,
    // in algebra coordinates. Overridden with closed forms per model.
    virtual Vec dchart_rt(const Vec& v, const Vec& w) const;
};

struct GroupPoint {
    const GroupModel* model = nullptr;
    Vec data;
};

struct AlgebraVector {
    const GroupModel* model = nullptr;
    Vec data;
};

inline void require_same_model(const GroupModel* a, const GroupModel* b) {
    if (a == nullptr || a != b) throw ModelMismatch();
}

GroupPoint multiply(const GroupPoint& a, const GroupPoint& b);
GroupPoint inverse(const GroupPoint& a);
AlgebraVector bracket(const AlgebraVector& x, const AlgebraVector& y);

// Time-discretized control xi : [0,1] -> algebra. samples.row(i) is the value
// at t_i = i / M; piecewise-constant interpolation uses the left node, so the
// last row is redundant and constructors from interval values duplicate it.
struct ControlPath {
    enum class Interp { Constant, Linear };
    const GroupModel* model = nullptr;
    Mat samples; // (M+1) x algebra_dim
    Interp interp = Interp::Constant;

    int intervals() const { return static_cast<int>(samples.rows()) - 1; }
    Vec value(double t) const;

    static ControlPath constant(const GroupModel* model, const Vec& u, int m_intervals);
    static ControlPath from_interval_values(const GroupModel* model, const Mat& values);
};

// Evolution of a control path: g(0) = e, each substep applies the step map on
// the left, g <- step(h xi) . g. Returns the curve at the control times.
// order 2 = right-trivialized midpoint; order 4 = two-node Gauss-Magnus step
// (models with exact step maps).
std::vector<GroupPoint> evolve(const ControlPath& xi, double h, int order = 2);

// Flow-based bracket: -d/dt|_0 Ad(Evol(tX)^{-1}) Y, one central difference in
// t (no extrapolation). The main entry below Richardson-extrapolates.
AlgebraVector bracket_via_flows_raw(const AlgebraVector& x, const AlgebraVector& y, double t);
AlgebraVector bracket_via_flows(const AlgebraVector& x, const AlgebraVector& y, double t);

} // namespace hlg
