#include "hlg/models.hpp"

#include <cmath>

namespace hlg {

// ---- SO(n) -------------------------------------------------------------------

SpecialOrthogonalModel::SpecialOrthogonalModel(int n) : n_(n) {
    if (n < 2) throw Error("SpecialOrthogonalModel: n >= 2");
}

Mat SpecialOrthogonalModel::to_matrix(const Vec& a) const {
    Mat m(n_, n_);
    for (int r = 0; r < n_; ++r)
        for (int c = 0; c < n_; ++c) m(r, c) = a[r * n_ + c];
    return m;
}

Vec SpecialOrthogonalModel::from_matrix(const Mat& m) const {
    Vec a(n_ * n_);
    for (int r = 0; r < n_; ++r)
        for (int c = 0; c < n_; ++c) a[r * n_ + c] = m(r, c);
    return a;
}

Mat SpecialOrthogonalModel::hat(const Vec& v) const {
    Mat m = Mat::Zero(n_, n_);
    if (n_ == 2) {
        m(0, 1) = -v[0];
        m(1, 0) = v[0];
    } else if (n_ == 3) {
        // cross-product basis: hat(v) w = v x w
        m(0, 1) = -v[2];
        m(0, 2) = v[1];
        m(1, 0) = v[2];
        m(1, 2) = -v[0];
        m(2, 0) = -v[1];
        m(2, 1) = v[0];
    } else {
        int k = 0;
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j) {
                m(i, j) = v[k];
                m(j, i) = -v[k];
                ++k;
            }
    }
    return m;
}

Vec SpecialOrthogonalModel::unhat(const Mat& m) const {
    Vec v(algebra_dim());
    if (n_ == 2) {
        v[0] = m(1, 0);
    } else if (n_ == 3) {
        v[0] = m(2, 1);
        v[1] = m(0, 2);
        v[2] = m(1, 0);
    } else {
        int k = 0;
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j) v[k++] = m(i, j);
    }
    return v;
}

Vec SpecialOrthogonalModel::identity() const { return from_matrix(Mat::Identity(n_, n_)); }

Vec SpecialOrthogonalModel::multiply(const Vec& a, const Vec& b) const {
    return from_matrix(to_matrix(a) * to_matrix(b));
}

Vec SpecialOrthogonalModel::inverse(const Vec& a) const {
    return from_matrix(to_matrix(a).transpose());
}

bool SpecialOrthogonalModel::member(const Vec& a, double tol) const {
    if (a.size() != point_dim()) return false;
    Mat m = to_matrix(a);
    if (((m.transpose() * m) - Mat::Identity(n_, n_)).cwiseAbs().maxCoeff() > tol) return false;
    return m.determinant() > 0.0;
}

Vec SpecialOrthogonalModel::bracket(const Vec& x, const Vec& y) const {
    Mat mx = hat(x), my = hat(y);
    return unhat(mx * my - my * mx);
}

Vec SpecialOrthogonalModel::tangent_at(const Vec& g, const Vec& xi) const {
    return from_matrix(hat(xi) * to_matrix(g));
}

Vec SpecialOrthogonalModel::step(const Vec& xi) const { return from_matrix(expm(hat(xi))); }

Vec SpecialOrthogonalModel::chart_log(const Vec& a) const {
    Mat l = logm(to_matrix(a));
    return unhat(0.5 * (l - l.transpose()));
}

Vec SpecialOrthogonalModel::chart_exp(const Vec& v) const { return step(v); }

Vec SpecialOrthogonalModel::dchart_rt(const Vec& v, const Vec& w) const {
    Mat hv = hat(v);
    Mat d = dexpm(hv, hat(w)) * expm(-hv);
    return unhat(0.5 * (d - d.transpose()));
}

// ---- semidirect ---------------------------------------------------------------

SemidirectModel::SemidirectModel(std::shared_ptr<const GroupModel> base, RepSpec rep)
    : base_(std::move(base)), rep_(std::move(rep)) {
    if (!rep_.rho || rep_.fiber_dim < 1) throw Error("SemidirectModel: representation required");
}

Vec SemidirectModel::identity() const {
    Vec out = Vec::Zero(point_dim());
    out.head(base_->point_dim()) = base_->identity();
    return out;
}

Vec SemidirectModel::multiply(const Vec& a, const Vec& b) const {
    const int pb = base_->point_dim();
    Vec out(point_dim());
    out.head(pb) = base_->multiply(a.head(pb), b.head(pb));
    out.tail(rep_.fiber_dim) =
        rep_.rho(base_->inverse(b.head(pb))) * a.tail(rep_.fiber_dim) + b.tail(rep_.fiber_dim);
    return out;
}

Vec SemidirectModel::inverse(const Vec& a) const {
    const int pb = base_->point_dim();
    Vec out(point_dim());
    out.head(pb) = base_->inverse(a.head(pb));
    out.tail(rep_.fiber_dim) = -(rep_.rho(a.head(pb)) * a.tail(rep_.fiber_dim));
    return out;
}

bool SemidirectModel::member(const Vec& a, double tol) const {
    return a.size() == point_dim() && base_->member(a.head(base_->point_dim()), tol);
}

Mat SemidirectModel::drho(const Vec& xi_base) const {
    if (rep_.drho) return rep_.drho(xi_base);
    const double s = 1e-6;
    Mat p = rep_.rho(base_->chart_exp(s * xi_base));
    Mat m = rep_.rho(base_->chart_exp(-s * xi_base));
    return (p - m) / (2.0 * s);
}

Vec SemidirectModel::bracket(const Vec& x, const Vec& y) const {
    const int ab = base_->algebra_dim();
    Vec out(algebra_dim());
    out.head(ab) = base_->bracket(x.head(ab), y.head(ab));
    out.tail(rep_.fiber_dim) =
        drho(x.head(ab)) * y.tail(rep_.fiber_dim) - drho(y.head(ab)) * x.tail(rep_.fiber_dim);
    return out;
}

Vec SemidirectModel::tangent_at(const Vec& g, const Vec& xi) const {
    const int pb = base_->point_dim();
    const int ab = base_->algebra_dim();
    Vec out(point_dim());
    out.head(pb) = base_->tangent_at(g.head(pb), xi.head(ab));
    out.tail(rep_.fiber_dim) = rep_.rho(base_->inverse(g.head(pb))) * xi.tail(rep_.fiber_dim);
    return out;
}

Vec SemidirectModel::step(const Vec& xi) const {
    const int ab = base_->algebra_dim();
    Vec out(point_dim());
    out.head(base_->point_dim()) = base_->step(xi.head(ab));
    out.tail(rep_.fiber_dim) = phi1m(-drho(xi.head(ab))) * xi.tail(rep_.fiber_dim);
    return out;
}

Vec SemidirectModel::chart_log(const Vec& a) const {
    Vec out(algebra_dim());
    out.head(base_->algebra_dim()) = base_->chart_log(a.head(base_->point_dim()));
    out.tail(rep_.fiber_dim) = a.tail(rep_.fiber_dim);
    return out;
}

Vec SemidirectModel::chart_exp(const Vec& v) const {
    Vec out(point_dim());
    out.head(base_->point_dim()) = base_->chart_exp(v.head(base_->algebra_dim()));
    out.tail(rep_.fiber_dim) = v.tail(rep_.fiber_dim);
    return out;
}

Vec SemidirectModel::dchart_rt(const Vec& v, const Vec& w) const {
    const int ab = base_->algebra_dim();
    Vec out(algebra_dim());
    out.head(ab) = base_->dchart_rt(v.head(ab), w.head(ab));
    out.tail(rep_.fiber_dim) = rep_.rho(base_->chart_exp(v.head(ab))) * w.tail(rep_.fiber_dim);
    return out;
}

// ---- Fourier diffeos ------------------------------------------------------------

FourierDiffeoModel::FourierDiffeoModel(int n_modes) : n_modes_(n_modes) {
    if (n_modes < 1) throw Error("FourierDiffeoModel: need at least one mode");
    const int m = grid_size();
    const int d = point_dim();
    grid_ = Vec(m);
    synth_ = Mat(m, d);
    dsynth_ = Mat(m, d);
    analysis_ = Mat(d, m);
    const double two_pi = 6.283185307179586476925286766559;
    for (int i = 0; i < m; ++i) {
        const double th = two_pi * i / m;
        grid_[i] = th;
        synth_(i, 0) = 1.0;
        dsynth_(i, 0) = 0.0;
        analysis_(0, i) = 1.0 / m;
        for (int n = 1; n <= n_modes_; ++n) {
            synth_(i, 2 * n - 1) = std::cos(n * th);
            synth_(i, 2 * n) = std::sin(n * th);
            dsynth_(i, 2 * n - 1) = -n * std::sin(n * th);
            dsynth_(i, 2 * n) = n * std::cos(n * th);
            analysis_(2 * n - 1, i) = 2.0 * std::cos(n * th) / m;
            analysis_(2 * n, i) = 2.0 * std::sin(n * th) / m;
        }
    }
}

double FourierDiffeoModel::eval_at(const Vec& coeffs, double theta) const {
    double s = coeffs[0];
    for (int n = 1; n <= n_modes_; ++n)
        s += coeffs[2 * n - 1] * std::cos(n * theta) + coeffs[2 * n] * std::sin(n * theta);
    return s;
}

double FourierDiffeoModel::eval_derivative_at(const Vec& coeffs, double theta) const {
    double s = 0.0;
    for (int n = 1; n <= n_modes_; ++n)
        s += n * (-coeffs[2 * n - 1] * std::sin(n * theta) + coeffs[2 * n] * std::cos(n * theta));
    return s;
}

bool FourierDiffeoModel::member(const Vec& a, double) const {
    if (a.size() != point_dim()) return false;
    return (1.0 + grid_derivative(a).array()).minCoeff() > 1e-12;
}

Vec FourierDiffeoModel::multiply(const Vec& a, const Vec& b) const {
    // (id + fa) o (id + fb), evaluated on the grid and projected
    Vec fb = grid_values(b);
    Vec h(grid_size());
    for (int i = 0; i < grid_size(); ++i) h[i] = fb[i] + eval_at(a, grid_[i] + fb[i]);
    Vec out = project(h);
    if (!member(out)) throw NotADiffeomorphism();
    return out;
}

Vec FourierDiffeoModel::inverse_grid_values(const Vec& coeffs) const {
    Vec psi(grid_size());
    for (int i = 0; i < grid_size(); ++i) {
        double y = grid_[i];
        bool done = false;
        for (int it = 0; it < 50; ++it) {
            double r = y + eval_at(coeffs, y) - grid_[i];
            double dp = 1.0 + eval_derivative_at(coeffs, y);
            y -= r / dp;
            if (std::abs(r) < 1e-14 * (1.0 + std::abs(grid_[i]))) {
                done = true;
                break;
            }
        }
        if (!done && std::abs(y + eval_at(coeffs, y) - grid_[i]) > 1e-10) throw NotInvertible();
        psi[i] = y;
    }
    return psi;
}

Vec FourierDiffeoModel::inverse(const Vec& a) const {
    Vec psi = inverse_grid_values(a);
    Vec out = project(psi - grid_);
    if (!member(out)) throw NotADiffeomorphism();
    return out;
}

Vec FourierDiffeoModel::bracket(const Vec& x, const Vec& y) const {
    // flow convention: [u,v] = u'v - uv'
    Vec u = grid_values(x), v = grid_values(y);
    Vec up = grid_derivative(x), vp = grid_derivative(y);
    return project(up.cwiseProduct(v) - u.cwiseProduct(vp));
}

Vec FourierDiffeoModel::tangent_at(const Vec& g, const Vec& xi) const {
    Vec f = grid_values(g);
    Vec vals(grid_size());
    for (int i = 0; i < grid_size(); ++i) vals[i] = eval_at(xi, grid_[i] + f[i]);
    return project(vals);
}

Vec FourierDiffeoModel::step(const Vec& xi) const {
    // truncated flow substep: id + v + v v'/2, projected
    Vec v = grid_values(xi), vp = grid_derivative(xi);
    Vec out = project(v + 0.5 * v.cwiseProduct(vp));
    if (!member(out)) throw NotADiffeomorphism();
    return out;
}

Vec FourierDiffeoModel::flow(const Vec& xi, double t) const {
    const int substeps = std::max(4, static_cast<int>(std::ceil(std::abs(t) / 2e-3)));
    const double h = t / substeps;
    Vec g = identity();
    for (int i = 0; i < substeps; ++i) {
        Vec k1 = tangent_at(g, xi);
        Vec k2 = tangent_at(g + 0.5 * h * k1, xi);
        Vec k3 = tangent_at(g + 0.5 * h * k2, xi);
        Vec k4 = tangent_at(g + h * k3, xi);
        g += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!member(g)) throw NotADiffeomorphism();
    return g;
}

Vec FourierDiffeoModel::evolve_substep(const Vec& g, const Vec& xi, double h) const {
    Vec k1 = tangent_at(g, xi);
    Vec k2 = tangent_at(g + 0.5 * h * k1, xi);
    Vec k3 = tangent_at(g + 0.5 * h * k2, xi);
    Vec k4 = tangent_at(g + h * k3, xi);
    Vec out = g + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!member(out)) throw NotADiffeomorphism();
    return out;
}

Vec FourierDiffeoModel::chart_exp(const Vec& v) const {
    if (!member(v)) throw NotADiffeomorphism();
    return v;
}

Vec FourierDiffeoModel::dchart_rt(const Vec& v, const Vec& w) const {
    // d/ds (id + f_v + s f_w) o (id + f_v)^{-1} = f_w o psi
    Vec psi = inverse_grid_values(v);
    Vec vals(grid_size());
    for (int i = 0; i < grid_size(); ++i) vals[i] = eval_at(w, psi[i]);
    return project(vals);
}

DecayFit regularity_decay(const FourierDiffeoModel& model, const Vec& coeffs) {
    const int n_max = model.modes();
    if (n_max < 8) throw InsufficientModes("regularity_decay: need mode cutoff >= 8");
    const int n_min = std::max(1, n_max / 4);
    std::vector<double> lx, ly;
    for (int n = n_min; n <= n_max; ++n) {
        double mag = std::hypot(coeffs[2 * n - 1], coeffs[2 * n]);
        if (mag < 1e-14) continue;
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(mag));
    }
    if (lx.size() < 3) throw InsufficientModes();
    const int k = static_cast<int>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < k; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    DecayFit fit;
    fit.modes_used = k;
    fit.exponent = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    double intercept = (sy - fit.exponent * sx) / k;
    double rss = 0;
    for (int i = 0; i < k; ++i) {
        double r = ly[i] - (intercept + fit.exponent * lx[i]);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / k);
    return fit;
}

// ---- extensions -------------------------------------------------------------------

ExtensionModel::ExtensionModel(std::shared_ptr<const GroupModel> base,
                               std::shared_ptr<const GroupModel> fiber, ExtensionDatum datum)
    : base_(std::move(base)), fiber_(std::move(fiber)), datum_(std::move(datum)) {
    if (!datum_.alpha || !datum_.f) throw Error("ExtensionModel: datum requires alpha and f");
}

Vec ExtensionModel::identity() const {
    Vec out(point_dim());
    out.head(base_->point_dim()) = base_->identity();
    out.tail(fiber_->point_dim()) = fiber_->identity();
    return out;
}

Vec ExtensionModel::multiply(const Vec& a, const Vec& b) const {
    const int pb = base_->point_dim();
    Vec x = a.head(pb), m = a.tail(fiber_->point_dim());
    Vec y = b.head(pb), n = b.tail(fiber_->point_dim());
    Vec out(point_dim());
    out.head(pb) = base_->multiply(x, y);
    out.tail(fiber_->point_dim()) =
        fiber_->multiply(fiber_->multiply(datum_.f(x, y), datum_.alpha(m, y)), n);
    return out;
}

Vec ExtensionModel::inverse(const Vec& a) const {
    const int pb = base_->point_dim();
    Vec x = a.head(pb), m = a.tail(fiber_->point_dim());
    Vec xinv = base_->inverse(x);
    Vec out(point_dim());
    out.head(pb) = xinv;
    out.tail(fiber_->point_dim()) =
        fiber_->multiply(datum_.alpha(fiber_->inverse(m), xinv), fiber_->inverse(datum_.f(x, xinv)));
    return out;
}

bool ExtensionModel::member(const Vec& a, double tol) const {
    return a.size() == point_dim() && base_->member(a.head(base_->point_dim()), tol) &&
           fiber_->member(a.tail(fiber_->point_dim()), tol);
}

Vec ExtensionModel::bracket(const Vec& x, const Vec& y) const {
    // no closed form is assumed for a user-supplied datum; the flow-based
    // definition is the ground truth here
    AlgebraVector ax{this, x}, ay{this, y};
    return bracket_via_flows(ax, ay, 5e-3).data;
}

Vec ExtensionModel::chart_log(const Vec& a) const {
    Vec out(algebra_dim());
    out.head(base_->algebra_dim()) = base_->chart_log(a.head(base_->point_dim()));
    out.tail(fiber_->algebra_dim()) = fiber_->chart_log(a.tail(fiber_->point_dim()));
    return out;
}

Vec ExtensionModel::chart_exp(const Vec& v) const {
    Vec out(point_dim());
    out.head(base_->point_dim()) = base_->chart_exp(v.head(base_->algebra_dim()));
    out.tail(fiber_->point_dim()) = fiber_->chart_exp(v.tail(fiber_->algebra_dim()));
    return out;
}

Vec sample_algebra(Rng& rng, const GroupModel& model, double scale) {
    Vec v(model.algebra_dim());
    for (int i = 0; i < v.size(); ++i) v[i] = scale * rng.normal();
    return v;
}

ValidationReport validate_extension_datum(const ExtensionDatum& datum, const GroupModel& fiber,
                                          const GroupModel& base, int n_samples, std::uint64_t seed,
                                          double tol) {
    ValidationReport rep;
    rep.samples = n_samples;
    Rng rng = Rng(seed).derive("extension-validate");
    auto fiber_dev = [&](const Vec& u, const Vec& v) {
        return fiber.chart_log(fiber.multiply(u, fiber.inverse(v))).cwiseAbs().maxCoeff();
    };
    auto fiber_dev_e = [&](const Vec& u) { return fiber.chart_log(u).cwiseAbs().maxCoeff(); };

    const Vec be = base.identity();
    for (int s = 0; s < n_samples; ++s) {
        Vec x = base.chart_exp(sample_algebra(rng, base, 0.7));
        Vec y = base.chart_exp(sample_algebra(rng, base, 0.7));
        Vec z = base.chart_exp(sample_algebra(rng, base, 0.7));
        Vec m = fiber.chart_exp(sample_algebra(rng, fiber, 0.7));

        // normalization f(e,e) = f(x,e) = f(e,y) = e
        rep.residual_normalized = std::max(rep.residual_normalized, fiber_dev_e(datum.f(be, be)));
        rep.residual_normalized = std::max(rep.residual_normalized, fiber_dev_e(datum.f(x, be)));
        rep.residual_normalized = std::max(rep.residual_normalized, fiber_dev_e(datum.f(be, y)));

        // alpha^x o alpha^y = conj_{f(x,y)^{-1}} o alpha^{yx}
        Vec lhs = datum.alpha(datum.alpha(m, y), x);
        Vec fxy = datum.f(x, y);
        Vec rhs = fiber.multiply(fiber.multiply(fiber.inverse(fxy), datum.alpha(m, base.multiply(y, x))), fxy);
        rep.residual_antihom = std::max(rep.residual_antihom, fiber_dev(lhs, rhs));

        // e = f(xy,z)^{-1} f(x,yz) f(y,z) alpha^z(f(x,y)^{-1})
        Vec t = fiber.multiply(
            fiber.multiply(fiber.inverse(datum.f(base.multiply(x, y), z)), datum.f(x, base.multiply(y, z))),
            fiber.multiply(datum.f(y, z), datum.alpha(fiber.inverse(datum.f(x, y)), z)));
        rep.residual_cocycle = std::max(rep.residual_cocycle, fiber_dev_e(t));

        if (datum.central) {
            // normalized group cocycle: f(y,z) f(xy,z)^{-1} f(x,yz) f(x,y)^{-1} = e
            Vec c = fiber.multiply(
                fiber.multiply(datum.f(y, z), fiber.inverse(datum.f(base.multiply(x, y), z))),
                fiber.multiply(datum.f(x, base.multiply(y, z)), fiber.inverse(datum.f(x, y))));
            rep.residual_central = std::max(rep.residual_central, fiber_dev_e(c));
        }
    }
    rep.pass = rep.residual_normalized <= tol && rep.residual_antihom <= tol &&
               rep.residual_cocycle <= tol && rep.residual_central <= tol;
    return rep;
}

// ---- factories ------------------------------------------------------------------

std::shared_ptr<GroupModel> make_so(int n) { return std::make_shared<SpecialOrthogonalModel>(n); }
std::shared_ptr<GroupModel> make_vector_group(int d) { return std::make_shared<VectorGroupModel>(d); }
std::shared_ptr<GroupModel> make_fourier_diffeo(int n_modes) {
    return std::make_shared<FourierDiffeoModel>(n_modes);
}

RepSpec rotation_rep(const std::shared_ptr<const GroupModel>& so_base) {
    auto so = std::dynamic_pointer_cast<const SpecialOrthogonalModel>(so_base);
    if (!so) throw Error("rotation_rep: base must be SO(n)");
    RepSpec rep;
    rep.fiber_dim = so->n();
    rep.rho = [so](const Vec& p) { return so->to_matrix(p); };
    rep.drho = [so](const Vec& xi) { return so->hat(xi); };
    return rep;
}

RepSpec trivial_rep(int d) {
    RepSpec rep;
    rep.fiber_dim = d;
    rep.rho = [d](const Vec&) { return Mat::Identity(d, d); };
    rep.drho = [d](const Vec&) { return Mat::Zero(d, d); };
    return rep;
}

std::shared_ptr<GroupModel> make_semidirect(std::shared_ptr<const GroupModel> base, RepSpec rep) {
    return std::make_shared<SemidirectModel>(std::move(base), std::move(rep));
}

ExtensionDatum heisenberg_datum() {
    ExtensionDatum d;
    d.central = true;
    d.alpha = [](const Vec& m, const Vec&) { return m; };
    d.f = [](const Vec& x, const Vec& y) {
        Vec out(1);
        out[0] = x[0] * y[1];
        return out;
    };
    return d;
}

ExtensionDatum perturbed_heisenberg_datum() {
    ExtensionDatum d;
    d.central = true;
    d.alpha = [](const Vec& m, const Vec&) { return m; };
    d.f = [](const Vec& x, const Vec& y) {
        Vec out(1);
        out[0] = x[0] * y[1] + x[1] * y[1] * y[1];
        return out;
    };
    return d;
}

ExtensionDatum split_rotation_datum(const std::shared_ptr<const GroupModel>& so2) {
    auto so = std::dynamic_pointer_cast<const SpecialOrthogonalModel>(so2);
    if (!so) throw Error("split_rotation_datum: base must be SO(n)");
    ExtensionDatum d;
    d.central = false;
    // split case: f == e and alpha a right action, alpha^y(m) = rho(y^{-1}) m
    d.alpha = [so](const Vec& m, const Vec& y) -> Vec { return so->to_matrix(so->inverse(y)) * m; };
    d.f = [so](const Vec&, const Vec&) -> Vec { return Vec::Zero(so->n()); };
    return d;
}

std::shared_ptr<GroupModel> make_extension(std::shared_ptr<const GroupModel> base,
                                           std::shared_ptr<const GroupModel> fiber, ExtensionDatum datum) {
    return std::make_shared<ExtensionModel>(std::move(base), std::move(fiber), std::move(datum));
}

} // namespace hlg
