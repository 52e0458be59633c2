#pragma once

#include "hlg/group.hpp"
#include "hlg/rng.hpp"

#include <functional>

namespace hlg {

// ---- SO(n), points are row-major flattened matrices ------------------------

class SpecialOrthogonalModel : public GroupModel {
  public:
    explicit SpecialOrthogonalModel(int n);

    std::string name() const override { return "so" + std::to_string(n_); }
    int point_dim() const override { return n_ * n_; }
    int algebra_dim() const override { return n_ * (n_ - 1) / 2; }
    Vec identity() const override;
    Vec multiply(const Vec& a, const Vec& b) const override;
    Vec inverse(const Vec& a) const override;
    bool member(const Vec& a, double tol = 1e-9) const override;
    Vec bracket(const Vec& x, const Vec& y) const override;
    Vec tangent_at(const Vec& g, const Vec& xi) const override;
    Vec step(const Vec& xi) const override;
    Vec chart_log(const Vec& a) const override;
    Vec chart_exp(const Vec& v) const override;
    Vec dchart_rt(const Vec& v, const Vec& w) const override;

    Mat hat(const Vec& v) const;
    Vec unhat(const Mat& m) const;
    Mat to_matrix(const Vec& a) const;
    Vec from_matrix(const Mat& m) const;
    int n() const { return n_; }

  private:
    int n_;
};

// ---- (R^d, +) ---------------------------------------------------------------

class VectorGroupModel : public GroupModel {
  public:
    explicit VectorGroupModel(int d) : d_(d) {}
    std::string name() const override { return "r" + std::to_string(d_); }
    int point_dim() const override { return d_; }
    int algebra_dim() const override { return d_; }
    Vec identity() const override { return Vec::Zero(d_); }
    Vec multiply(const Vec& a, const Vec& b) const override { return a + b; }
    Vec inverse(const Vec& a) const override { return -a; }
    bool member(const Vec& a, double) const override { return a.size() == d_; }
    Vec bracket(const Vec& x, const Vec&) const override { return Vec::Zero(x.size()); }
    Vec tangent_at(const Vec&, const Vec& xi) const override { return xi; }
    Vec step(const Vec& xi) const override { return xi; }
    Vec chart_log(const Vec& a) const override { return a; }
    Vec chart_exp(const Vec& v) const override { return v; }
    Vec dchart_rt(const Vec&, const Vec& w) const override { return w; }

  private:
    int d_;
};

// ---- right semidirect product base |x R^d -----------------------------------
//
// (g1,h1).(g2,h2) = (g1 g2, rho(g2^{-1}) h1 + h2)

struct RepSpec {
    int fiber_dim = 0;
    std::function<Mat(const Vec& base_point)> rho;
    std::function<Mat(const Vec& base_algebra)> drho; // may be empty: finite-difference fallback
};

class SemidirectModel : public GroupModel {
  public:
    SemidirectModel(std::shared_ptr<const GroupModel> base, RepSpec rep);

    std::string name() const override { return "semidirect(" + base_->name() + ")"; }
    int point_dim() const override { return base_->point_dim() + rep_.fiber_dim; }
    int algebra_dim() const override { return base_->algebra_dim() + rep_.fiber_dim; }
    Vec identity() const override;
    Vec multiply(const Vec& a, const Vec& b) const override;
    Vec inverse(const Vec& a) const override;
    bool member(const Vec& a, double tol = 1e-9) const override;
    Vec bracket(const Vec& x, const Vec& y) const override;
    Vec tangent_at(const Vec& g, const Vec& xi) const override;
    Vec step(const Vec& xi) const override;
    Vec chart_log(const Vec& a) const override;
    Vec chart_exp(const Vec& v) const override;
    Vec dchart_rt(const Vec& v, const Vec& w) const override;

    Mat drho(const Vec& base_algebra) const;
    const GroupModel& base() const { return *base_; }
    int fiber_dim() const { return rep_.fiber_dim; }

  private:
    std::shared_ptr<const GroupModel> base_;
    RepSpec rep_;
};

// ---- Fourier-truncated circle diffeomorphisms -------------------------------
//
// phi(t) = t + f(t), f a trig polynomial with modes <= N, min(1 + f') > 0.
// Coefficients are laid out [a0, a1, b1, ..., aN, bN]. Composition evaluates
// on a 4N grid and projects back; the truncation defect is measured by the
// tests, not hidden.

class FourierDiffeoModel : public GroupModel {
  public:
    explicit FourierDiffeoModel(int n_modes);

    std::string name() const override { return "fourier" + std::to_string(n_modes_); }
    int point_dim() const override { return 2 * n_modes_ + 1; }
    int algebra_dim() const override { return 2 * n_modes_ + 1; }
    Vec identity() const override { return Vec::Zero(point_dim()); }
    Vec multiply(const Vec& a, const Vec& b) const override;
    Vec inverse(const Vec& a) const override;
    bool member(const Vec& a, double tol = 1e-9) const override;
    Vec bracket(const Vec& x, const Vec& y) const override;
    Vec tangent_at(const Vec& g, const Vec& xi) const override;
    Vec step(const Vec& xi) const override;
    Vec flow(const Vec& xi, double t) const override;
    Vec evolve_substep(const Vec& g, const Vec& xi, double h) const override;
    Vec chart_log(const Vec& a) const override { return a; }
    Vec chart_exp(const Vec& v) const override;
    Vec dchart_rt(const Vec& v, const Vec& w) const override;

    int modes() const { return n_modes_; }
    int grid_size() const { return 4 * n_modes_; }
    // grid synthesis of values / derivative values, and projection back
    Vec grid_values(const Vec& coeffs) const { return synth_ * coeffs; }
    Vec grid_derivative(const Vec& coeffs) const { return dsynth_ * coeffs; }
    Vec project(const Vec& grid_vals) const { return analysis_ * grid_vals; }
    double eval_at(const Vec& coeffs, double theta) const;
    double eval_derivative_at(const Vec& coeffs, double theta) const;
    // Newton inversion of id + f on the grid; throws NotInvertible
    Vec inverse_grid_values(const Vec& coeffs) const;

  private:
    int n_modes_;
    Mat synth_, dsynth_, analysis_;
    Vec grid_; // grid angles
};

// least-squares decay exponent of log|c_n| vs log n over modes [N/4, N]
struct DecayFit {
    double exponent = 0.0;
    double residual = 0.0;
    int modes_used = 0;
};
DecayFit regularity_decay(const FourierDiffeoModel& model, const Vec& coeffs);

// ---- extension groups E(alpha, f) -------------------------------------------
//
// (x,m).(y,n) = (xy, f(x,y) alpha^y(m) n)
// (x,m)^{-1}  = (x^{-1}, alpha^{x^{-1}}(m^{-1}) f(x,x^{-1})^{-1})

struct ExtensionDatum {
    std::function<Vec(const Vec& m, const Vec& x)> alpha; // alpha^x(m)
    std::function<Vec(const Vec& x, const Vec& y)> f;     // f(x,y), fiber point
    bool central = false;
    bool fiber_abelian = true;
};

class ExtensionModel : public GroupModel {
  public:
    ExtensionModel(std::shared_ptr<const GroupModel> base, std::shared_ptr<const GroupModel> fiber,
                   ExtensionDatum datum);

    std::string name() const override { return "extension(" + base_->name() + "," + fiber_->name() + ")"; }
    int point_dim() const override { return base_->point_dim() + fiber_->point_dim(); }
    int algebra_dim() const override { return base_->algebra_dim() + fiber_->algebra_dim(); }
    Vec identity() const override;
    Vec multiply(const Vec& a, const Vec& b) const override;
    Vec inverse(const Vec& a) const override;
    bool member(const Vec& a, double tol = 1e-9) const override;
    Vec bracket(const Vec& x, const Vec& y) const override; // numerical, via flows
    Vec chart_log(const Vec& a) const override;
    Vec chart_exp(const Vec& v) const override;

    const GroupModel& base() const { return *base_; }
    const GroupModel& fiber() const { return *fiber_; }
    const ExtensionDatum& datum() const { return datum_; }

  private:
    std::shared_ptr<const GroupModel> base_, fiber_;
    ExtensionDatum datum_;
};

struct ValidationReport {
    int samples = 0;
    double residual_normalized = 0.0; // f(e,e), f(x,e), f(e,y)
    double residual_antihom = 0.0;    // alpha^x alpha^y = conj_{f(x,y)^{-1}} alpha^{yx}
    double residual_cocycle = 0.0;    // twisted cocycle identity
    double residual_central = 0.0;    // normalized group cocycle (central data only)
    bool pass = false;
};
ValidationReport validate_extension_datum(const ExtensionDatum& datum, const GroupModel& fiber,
                                          const GroupModel& base, int n_samples, std::uint64_t seed,
                                          double tol = 1e-9);

// ---- factories ---------------------------------------------------------------

std::shared_ptr<GroupModel> make_so(int n);
std::shared_ptr<GroupModel> make_vector_group(int d);
std::shared_ptr<GroupModel> make_fourier_diffeo(int n_modes);
RepSpec rotation_rep(const std::shared_ptr<const GroupModel>& so_base);
RepSpec trivial_rep(int d);
std::shared_ptr<GroupModel> make_semidirect(std::shared_ptr<const GroupModel> base, RepSpec rep);
ExtensionDatum heisenberg_datum();
ExtensionDatum perturbed_heisenberg_datum();
ExtensionDatum split_rotation_datum(const std::shared_ptr<const GroupModel>& so2);
std::shared_ptr<GroupModel> make_extension(std::shared_ptr<const GroupModel> base,
                                           std::shared_ptr<const GroupModel> fiber, ExtensionDatum datum);

// random chart-ball point, used by validators and probes
Vec sample_algebra(Rng& rng, const GroupModel& model, double scale);

} // namespace hlg
