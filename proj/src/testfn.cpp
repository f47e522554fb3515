#include "visclab/testfn.hpp"

#include "visclab/parallel.hpp"
#include "visclab/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace visclab {

namespace {

double smoothstep(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }

/// Spectral norm of a small matrix.
double spectral_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(m.transpose() * m, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

Vec random_in_ball(int n, double radius, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = g(rng);
    const double len = v.norm();
    if (len == 0.0) return Vec::Zero(n);
    return v / len * radius * std::pow(u(rng), 1.0 / n);
}

bool on_boundary(const Domain& domain, const Vec& x) { return std::abs(domain.signed_distance(x)) <= 1e-12; }

}  // namespace

// ---------------------------------------------------------------- mollifier

Mollifier::Mollifier(int dim, int order) : dim_(dim), order_(order) {
    if (order < 4) throw ConfigError("mollifier quadrature order must be at least 4");
    if (dim < 1 || dim > 2) throw ConfigError("mollifier dimension must be 1 or 2");
    const GaussLegendre rule = gauss_legendre(order);
    std::vector<double> raw;
    auto add = [&](const Vec& z, double w) {
        const double r2 = z.squaredNorm();
        if (r2 >= 1.0) return;
        const double v = w * bump(r2);
        if (v <= 0.0) return;
        nodes_.push_back(z);
        raw.push_back(v);
    };
    for (int i = 0; i < order; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        if (dim == 1) {
            add(make_vec(rule.nodes[ui]), rule.weights[ui]);
        } else {
            for (int k = 0; k < order; ++k) {
                const auto uk = static_cast<std::size_t>(k);
                add(make_vec(rule.nodes[ui], rule.nodes[uk]), rule.weights[ui] * rule.weights[uk]);
            }
        }
    }
    double total = 0.0;
    for (double v : raw) total += v;
    c_ = 1.0 / total;
    weights_.reserve(raw.size());
    for (double v : raw) weights_.push_back(v * c_);
}

double Mollifier::bump(double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

double Mollifier::operator()(const Vec& z) const { return c_ * bump(z.squaredNorm()); }

double Mollifier::mass() const {
    double m = 0.0;
    for (double w : weights_) m += w;
    return m;
}

// ---------------------------------------------------------------- extension

ShiftExtension::ShiftExtension(NormalShift shift, DistanceField field)
    : shift_(std::move(shift)), field_(std::move(field)) {
    if (shift_.spec.extension_width() < 0.5 * field_.r0() - 1e-12)
        throw ConfigError("boundary extension band is narrower than r0/2");
}

double ShiftExtension::cutoff(double s) const {
    const double h = 0.5 * field_.r0();
    if (s <= h) return 1.0;
    if (s >= 2.0 * h) return 0.0;
    return 1.0 - smoothstep((s - h) / h);
}

double ShiftExtension::operator()(const Vec& y, const Vec& q) const {
    const Domain& dom = field_.domain();
    const double chi = cutoff(dom.signed_distance(y));
    if (chi == 0.0) return 0.0;
    return chi * compute_normal_shift(shift_, dom.closest_boundary_point(y), q);
}

// ---------------------------------------------------------------- C_a

RegularizedShift::RegularizedShift(ShiftFunction base, DistanceField field, double a, Mollifier mollifier)
    : base_(std::move(base)), field_(std::move(field)), a_(a), mollifier_(std::move(mollifier)) {
    if (!(a_ > 0.0 && a_ <= 1.0)) throw ArgumentError("regularization parameter a must lie in (0, 1]");
    if (mollifier_.dim() != field_.dim()) throw ConfigError("mollifier dimension mismatch");
    if (!base_) throw ArgumentError("missing base shift");
}

Vec RegularizedShift::normal(const Vec& x) const {
    const Domain& dom = field_.domain();
    if (dom.contains(x, 0.0)) return -field_.eval(x).grad;
    return dom.boundary_normal(x);
}

double RegularizedShift::Lambda(const Vec& x, const Vec& p) const {
    const double pn = p.dot(normal(x));
    return std::sqrt(a_ * a_ + pn * pn);
}

RegularizedShift RegularizedShift::with_a(double a) const { return RegularizedShift(base_, field_, a, mollifier_); }

RegularizedShift RegularizedShift::with_order(int order) const {
    return RegularizedShift(base_, field_, a_, Mollifier(mollifier_.dim(), order));
}

double eval_C_a(const RegularizedShift& shift, const Vec& x, const Vec& p) {
    const double L = shift.Lambda(x, p);
    const double rx = L / RegularizedShift::Gamma(p);
    const auto& nodes = shift.mollifier().nodes();
    const auto& w = shift.mollifier().weights();
    double total = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Vec y = x - rx * nodes[i];
        double inner = 0.0;
        for (std::size_t k = 0; k < nodes.size(); ++k) inner += w[k] * shift.base()(y, p - L * nodes[k]);
        total += w[i] * inner;
    }
    return total;
}

ShiftDerivatives shift_derivatives(const RegularizedShift& shift, const Vec& x, const Vec& p, int order) {
    const int n = shift.dim();
    const int m = 2 * n;
    const double h = shift.step();
    // Variables v = (x, p).
    Vec4 v(m);
    v << x, p;
    for (int k = 0; k < m; ++k)
        if (v(k) + h == v(k)) throw ConfigError("finite-difference step underflows");
    auto f = [&](const Vec4& w) { return eval_C_a(shift, w.head(n), w.tail(n)); };
    auto e = [&](int k) {
        Vec4 u = Vec4::Zero(m);
        u(k) = h;
        return u;
    };
    ShiftDerivatives d;
    d.value = f(v);
    Vec4 grad(m);
    Vec4 fp(m), fm(m);
    for (int k = 0; k < m; ++k) {
        fp(k) = f(v + e(k));
        fm(k) = f(v - e(k));
        grad(k) = (fp(k) - fm(k)) / (2.0 * h);
    }
    d.Dx = grad.head(n);
    d.Dp = grad.tail(n);
    if (order < 2) return d;
    Mat4 H(m, m);
    for (int k = 0; k < m; ++k) H(k, k) = (fp(k) - 2.0 * d.value + fm(k)) / (h * h);
    for (int k = 0; k < m; ++k)
        for (int l = k + 1; l < m; ++l) {
            const double s = f(v + e(k) + e(l)) - f(v + e(k) - e(l)) - f(v - e(k) + e(l)) + f(v - e(k) - e(l));
            H(k, l) = H(l, k) = s / (4.0 * h * h);
        }
    d.Dxx = H.topLeftCorner(n, n);
    d.Dxp = H.topRightCorner(n, n);
    d.Dpp = H.bottomRightCorner(n, n);
    return d;
}

Mat deriv_C_a(const RegularizedShift& shift, const Vec& x, const Vec& p, ShiftDeriv which) {
    const bool second = which == ShiftDeriv::Dxx || which == ShiftDeriv::Dxp || which == ShiftDeriv::Dpp;
    const ShiftDerivatives d = shift_derivatives(shift, x, p, second ? 2 : 1);
    switch (which) {
        case ShiftDeriv::Dx: return d.Dx;
        case ShiftDeriv::Dp: return d.Dp;
        case ShiftDeriv::Dxx: return d.Dxx;
        case ShiftDeriv::Dxp: return d.Dxp;
        default: return d.Dpp;
    }
}

// ---------------------------------------------------------------- lemguy

const std::vector<std::string> kLemguyBounds = {"C_a<=K.Gamma",          "|C_a-C|<=K(a+|p.n|)",
                                                "|DxC_a|<=K.Gamma",      "|DpC_a|<=K",
                                                "|DxxC_a|<=K.Gamma^2/Lambda", "|DxpC_a|<=K.Gamma/Lambda",
                                                "|DppC_a|<=K/Lambda"};

std::vector<LemguySample> make_lemguy_grid(const Domain& domain, int x_count, int p_count, double p_max,
                                           int a_levels, double a_max) {
    if (x_count < 2 || p_count < 2 || a_levels < 1) throw ArgumentError("lemguy grid too small");
    const int n = domain.dim();
    std::vector<Vec> ps;
    for (int i = 0; i < p_count; ++i) {
        const double t = -p_max + 2.0 * p_max * i / (p_count - 1);
        if (n == 1) {
            ps.push_back(make_vec(t));
        } else {
            for (int k = 0; k < p_count; ++k) ps.push_back(make_vec(t, -p_max + 2.0 * p_max * k / (p_count - 1)));
        }
    }
    std::vector<LemguySample> out;
    for (int l = 0; l < a_levels; ++l) {
        const double a = a_max * std::pow(0.5, l);
        for (const Vec& x : domain.sample_points(x_count))
            for (const Vec& p : ps) out.push_back({x, p, a});
    }
    return out;
}

LemguyData lemguy_data(const RegularizedShift& shift, std::span<const LemguySample> samples) {
    struct Row {
        double lhs[7];
        double env[7];
    };
    std::map<double, RegularizedShift> by_a;
    for (const auto& s : samples)
        if (!by_a.count(s.a)) by_a.emplace(s.a, shift.with_a(s.a));
    const auto rows = parallel_map(samples.size(), [&](std::size_t i) {
        const LemguySample& s = samples[i];
        const RegularizedShift& sh = by_a.at(s.a);
        const ShiftDerivatives d = shift_derivatives(sh, s.x, s.p, 2);
        const double G = RegularizedShift::Gamma(s.p);
        const double L = sh.Lambda(s.x, s.p);
        const double pn = std::abs(s.p.dot(sh.normal(s.x)));
        Row r{};
        r.lhs[0] = std::abs(d.value);
        r.env[0] = G;
        r.lhs[1] = std::abs(d.value - sh.base()(s.x, s.p));
        r.env[1] = s.a + pn;
        r.lhs[2] = d.Dx.norm();
        r.env[2] = G;
        r.lhs[3] = d.Dp.norm();
        r.env[3] = 1.0;
        r.lhs[4] = spectral_norm(d.Dxx);
        r.env[4] = G * G / L;
        r.lhs[5] = spectral_norm(d.Dxp);
        r.env[5] = G / L;
        r.lhs[6] = spectral_norm(d.Dpp);
        r.env[6] = 1.0 / L;
        return r;
    });
    LemguyData out;
    out.lhs.assign(7, {});
    out.env.assign(7, {});
    for (const Row& r : rows)
        for (int b = 0; b < 7; ++b) {
            out.lhs[static_cast<std::size_t>(b)].push_back(r.lhs[b]);
            out.env[static_cast<std::size_t>(b)].push_back(r.env[b]);
        }
    return out;
}

LemguyReport check_lemguy(const RegularizedShift& shift, std::span<const LemguySample> samples) {
    const LemguyData data = lemguy_data(shift, samples);
    LemguyReport rep;
    rep.samples = samples.size();
    for (std::size_t b = 0; b < kLemguyBounds.size(); ++b) {
        const RatioFit f = fit_ratio(data.lhs[b], data.env[b]);
        rep.bounds.push_back({kLemguyBounds[b], f.K, f.violations});
    }
    return rep;
}

// ---------------------------------------------------------------- phi_a

double TestFunction::eta_for(double eps, double alpha_bar) {
    return std::pow(eps, alpha_bar / (2.0 - alpha_bar));
}

TestFunction::TestFunction(TestFunctionParams params, const RegularizedShift& shift)
    : eps_(params.eps),
      eta_(eta_for(params.eps, params.alpha_bar)),
      alpha_bar_(params.alpha_bar),
      A_(params.A),
      B_(params.B),
      shift_(shift.with_a(params.eps * eta_for(params.eps, params.alpha_bar))) {
    if (!(eps_ > 0.0 && eps_ <= 1.0)) throw ArgumentError("eps must lie in (0, 1]");
    if (!(alpha_bar_ > 0.0 && alpha_bar_ <= 1.0)) throw ArgumentError("alpha_bar must lie in (0, 1]");
    if (!(A_ >= 0.0 && B_ >= 0.0) || !std::isfinite(A_) || !std::isfinite(B_))
        throw ArgumentError("A and B must be finite and nonnegative");
}

TestFunction TestFunction::with_AB(double A, double B) const {
    return TestFunction({eps_, alpha_bar_, A, B}, shift_);
}

PhiPoint phi_point(const TestFunction& tf, const Vec& x, const Vec& y, int order) {
    PhiPoint pt;
    pt.x = x;
    pt.y = y;
    pt.eps = tf.eps();
    pt.order = order;
    pt.dx = tf.field().eval(x);
    pt.dy = tf.field().eval(y);
    const Vec X = 0.5 * (x + y);
    const Vec P = 2.0 * (x - y) / (tf.eps() * tf.eps());
    if (order > 0) {
        pt.c = shift_derivatives(tf.shift(), X, P, order);
    } else {
        pt.c.value = eval_C_a(tf.shift(), X, P);
    }
    return pt;
}

double phi_value(const PhiPoint& pt, double A, double B) {
    const double e2 = pt.eps * pt.eps;
    const double Z = pt.dx.d - pt.dy.d;
    const double T = pt.dx.d + pt.dy.d;
    return (pt.x - pt.y).squaredNorm() / e2 + A / e2 * Z * Z - B * T - pt.c.value * Z;
}

PhiDerivatives phi_derivatives(const PhiPoint& pt, double A, double B) {
    if (pt.order < 1) throw ArgumentError("phi point lacks shift derivatives");
    const int n = static_cast<int>(pt.x.size());
    const double e2 = pt.eps * pt.eps;
    const double k = 2.0 / e2;
    const Vec Y = pt.x - pt.y;
    const double Z = pt.dx.d - pt.dy.d;
    const auto& c = pt.c;

    const Vec PX = -c.Dx * Z;
    const Vec PY = k * Y - k * c.Dp * Z;
    const double PZ = -c.value + 2.0 * A * Z / e2;
    const double PT = -B;

    PhiDerivatives out;
    out.Dx = 0.5 * PX + PY + (PZ + PT) * pt.dx.grad;
    out.Dy = 0.5 * PX - PY - PZ * pt.dy.grad + PT * pt.dy.grad;
    if (pt.order < 2) return out;

    // Hessian of Phi in (X, Y, Z, T); T enters linearly.
    const int m = 2 * n + 2;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
    H.block(0, 0, n, n) = -c.Dxx * Z;
    H.block(0, n, n, n) = -k * c.Dxp * Z;
    H.block(n, 0, n, n) = H.block(0, n, n, n).transpose();
    H.block(n, n, n, n) = k * Eigen::MatrixXd::Identity(n, n) - k * k * c.Dpp * Z;
    H.block(0, 2 * n, n, 1) = -c.Dx;
    H.block(2 * n, 0, 1, n) = -c.Dx.transpose();
    H.block(n, 2 * n, n, 1) = -k * c.Dp;
    H.block(2 * n, n, 1, n) = -k * c.Dp.transpose();
    H(2 * n, 2 * n) = 2.0 * A / e2;

    // Jacobian of (X, Y, Z, T) with respect to (x, y).
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, 2 * n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = J(i, n + i) = 0.5;
        J(n + i, i) = 1.0;
        J(n + i, n + i) = -1.0;
        J(2 * n, i) = pt.dx.grad(i);
        J(2 * n, n + i) = -pt.dy.grad(i);
        J(2 * n + 1, i) = pt.dx.grad(i);
        J(2 * n + 1, n + i) = pt.dy.grad(i);
    }
    Eigen::MatrixXd D2 = J.transpose() * H * J;
    D2.block(0, 0, n, n) += (PZ + PT) * pt.dx.hess;
    D2.block(n, n, n, n) += (-PZ + PT) * pt.dy.hess;
    out.hess = 0.5 * (D2 + D2.transpose());
    return out;
}

double eval_phi(const TestFunction& tf, const Vec& x, const Vec& y) {
    return phi_value(phi_point(tf, x, y, 0), tf.A(), tf.B());
}

PhiDerivatives grad_hess_phi(const TestFunction& tf, const Vec& x, const Vec& y) {
    return phi_derivatives(phi_point(tf, x, y, 2), tf.A(), tf.B());
}

ABChoice choose_AB(double eps, double eta, double a, double nu1, double nu2, double mu1, double mu2, double K) {
    if (!(nu1 > 0.0 && nu2 > 0.0)) throw AssumptionError("choose_AB needs positive nu");
    if (!(K > 0.0)) throw ArgumentError("choose_AB needs K > 0");
    const double nu = std::max(nu1, nu2);
    return {K, K * (eta * eta + eps * eps + a) + K / nu * (mu1 + mu2 * eta / eps)};
}

// ---------------------------------------------------------------- lemma checks

std::vector<PairSample> make_pair_samples(const Domain& domain, std::span<const double> eps_levels,
                                          double alpha_bar, std::size_t count, double K1, PairMode mode,
                                          std::uint64_t seed) {
    if (eps_levels.empty()) throw ArgumentError("empty eps schedule");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = domain.dim();
    std::vector<PairSample> out;
    out.reserve(count);
    std::size_t k = 0;
    while (out.size() < count) {
        const double eps = eps_levels[k % eps_levels.size()];
        const double r = K1 * TestFunction::eta_for(eps, alpha_bar) * eps;
        PairSample s;
        s.eps = eps;
        switch (mode) {
            case PairMode::Any: {
                const double kind = u(rng);
                if (kind < 1.0 / 3.0) {
                    s.x = domain.uniform_point(rng);
                    s.y = domain.uniform_point(rng);
                } else if (kind < 2.0 / 3.0) {
                    s.x = domain.uniform_point(rng);
                    s.y = s.x + random_in_ball(n, r, rng);
                } else {
                    // One end on the boundary, |x - y| log-uniform around eps^2
                    // where 2(x - y)/eps^2 is of order one.
                    const Vec b = random_boundary_point(domain, rng);
                    Vec dir = random_in_ball(n, 1.0, rng);
                    if (dir.norm() == 0.0) continue;
                    const Vec o = b + dir.normalized() * (eps * eps * std::pow(10.0, 4.0 * u(rng) - 2.0));
                    const bool x_on = u(rng) < 0.5;
                    s.x = x_on ? b : o;
                    s.y = x_on ? o : b;
                }
                break;
            }
            case PairMode::Close:
                s.x = domain.uniform_point(rng);
                s.y = s.x + random_in_ball(n, r, rng);
                break;
            case PairMode::XOnBoundary:
                s.x = random_boundary_point(domain, rng);
                s.y = s.x + random_in_ball(n, r, rng);
                break;
            case PairMode::YOnBoundary:
                s.y = random_boundary_point(domain, rng);
                s.x = s.y + random_in_ball(n, r, rng);
                break;
        }
        if (!domain.contains(s.x, 0.0) || !domain.contains(s.y, 0.0)) continue;
        ++k;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<PhiPoint> precompute_points(const RegularizedShift& shift, double alpha_bar,
                                        std::span<const PairSample> samples, int order) {
    std::map<double, TestFunction> by_eps;
    for (const auto& s : samples)
        if (!by_eps.count(s.eps)) by_eps.emplace(s.eps, TestFunction({s.eps, alpha_bar, 0.0, 0.0}, shift));
    return parallel_map(samples.size(), [&](std::size_t i) {
        const PairSample& s = samples[i];
        return phi_point(by_eps.at(s.eps), s.x, s.y, order);
    });
}

namespace {

/// Compass ascent of value(x, y) in the coordinates (x, w = y - x), keeping
/// |w| <= rmax and both points in the closed domain.
double climb(const Domain& dom, Vec x, Vec w, double v, double step, double rmax,
             const std::function<double(const Vec&, const Vec&)>& value) {
    const int n = dom.dim();
    auto eval = [&](const Vec& xx, const Vec& ww) {
        if (ww.norm() > rmax) return -std::numeric_limits<double>::infinity();
        const Vec yy = xx + ww;
        if (!dom.contains(xx, 0.0) || !dom.contains(yy, 0.0)) return -std::numeric_limits<double>::infinity();
        return value(xx, yy);
    };
    for (int it = 0; it < 400 && step > 1e-13; ++it) {
        bool moved = false;
        for (int k = 0; k < 2 * n && !moved; ++k)
            for (double sgn : {1.0, -1.0}) {
                Vec xx = x, ww = w;
                (k < n ? xx(k) : ww(k - n)) += sgn * step;
                const double t = eval(xx, ww);
                if (t > v) {
                    x = xx, w = ww, v = t;
                    moved = true;
                    break;
                }
            }
        if (!moved) step *= 0.5;
    }
    return v;
}

/// Indices of the `m` largest entries, ties to the lower index.
std::vector<std::size_t> top_indices(const std::vector<double>& r, int m) {
    std::vector<std::size_t> idx(r.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(m, 0)), idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t i, std::size_t j) { return r[i] > r[j] || (r[i] == r[j] && i < j); });
    idx.resize(k);
    return idx;
}

std::map<double, TestFunction> test_functions(const RegularizedShift& shift, double alpha_bar,
                                              std::span<const PhiPoint> points) {
    std::map<double, TestFunction> by_eps;
    for (const auto& pt : points)
        if (!by_eps.count(pt.eps)) by_eps.emplace(pt.eps, TestFunction({pt.eps, alpha_bar, 0.0, 0.0}, shift));
    return by_eps;
}

/// |x-y|^2/(2 eps^2) - B T - phi; the lemma asks for this to be <= K0 eps^2.
double pos_deficit(const PhiPoint& pt, double A, double B) {
    const double e2 = pt.eps * pt.eps;
    const double T = pt.dx.d + pt.dy.d;
    return (pt.x - pt.y).squaredNorm() / (2.0 * e2) - B * T - phi_value(pt, A, B);
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> lem_pos_data(std::span<const PhiPoint> points, double A,
                                                                 double B) {
    std::pair<std::vector<double>, std::vector<double>> out;
    for (const auto& pt : points) {
        out.first.push_back(pos_deficit(pt, A, B));
        out.second.push_back(pt.eps * pt.eps);
    }
    return out;
}

LemPosResult check_lem_pos(std::span<const PhiPoint> points, double A, double B) {
    std::vector<double> lhs, env;
    for (const auto& pt : points) {
        lhs.push_back(pos_deficit(pt, A, B));
        env.push_back(pt.eps * pt.eps);
    }
    const RatioFit f = fit_ratio(lhs, env);
    return {f.violations, f.K};
}

LemPosCalibration calibrate_lem_pos(std::span<const PhiPoint> points, double B) {
    if (points.empty()) throw ArgumentError("calibrate_lem_pos needs samples");
    std::vector<double> levels;
    for (const auto& pt : points) levels.push_back(pt.eps);
    std::sort(levels.begin(), levels.end(), std::greater<>());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    const double coarse_min = levels[(levels.size() - 1) / 2];
    const bool split = levels.size() > 1;
    for (int k = 0; k <= 20; ++k) {
        const double A = std::ldexp(1.0, k);
        std::vector<double> lc, ec, lf, ef;
        for (const auto& pt : points) {
            const bool coarse = !split || pt.eps >= coarse_min;
            const bool fine = !split || pt.eps < coarse_min;
            const double l = pos_deficit(pt, A, B), e = pt.eps * pt.eps;
            if (coarse) {
                lc.push_back(l);
                ec.push_back(e);
            }
            if (fine) {
                lf.push_back(l);
                ef.push_back(e);
            }
        }
        const double K0 = max_ratio(lc, ec);
        const std::size_t v = std::isfinite(K0) ? count_violations(lf, ef, K0) : lf.size();
        if (v == 0) return {A, std::max(K0, max_ratio(lf, ef)), 0, k};
    }
    throw CalibrationError("lem_pos: no A up to 2^20 gives an eps-independent K0");
}

double refine_lem_pos(const RegularizedShift& shift, double alpha_bar, std::span<const PhiPoint> points, double A,
                      double B, int starts) {
    if (points.empty()) throw ArgumentError("refine_lem_pos needs samples");
    const auto [lhs, env] = lem_pos_data(points, A, B);
    std::vector<double> r(lhs.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = lhs[i] / env[i];
    const auto seeds = top_indices(r, starts);
    const auto by_eps = test_functions(shift, alpha_bar, points);
    const Domain& dom = shift.field().domain();
    const auto climbed = parallel_map(seeds.size(), [&](std::size_t s) {
        const PhiPoint& pt = points[seeds[s]];
        const TestFunction& tf = by_eps.at(pt.eps);
        const double e2 = pt.eps * pt.eps;
        return climb(dom, pt.x, pt.y - pt.x, r[seeds[s]], 0.25 * dom.diameter(), std::numeric_limits<double>::infinity(),
                     [&](const Vec& x, const Vec& y) { return pos_deficit(phi_point(tf, x, y, 0), A, B) / e2; });
    });
    double best = *std::max_element(r.begin(), r.end());
    for (double v : climbed) best = std::max(best, v);
    return best;
}

LemPosCalibration calibrate_lem_pos(const RegularizedShift& shift, double alpha_bar, std::span<const PhiPoint> points,
                                    double B, int starts) {
    if (points.empty()) throw ArgumentError("calibrate_lem_pos needs samples");
    std::vector<double> levels;
    for (const auto& pt : points) levels.push_back(pt.eps);
    std::sort(levels.begin(), levels.end(), std::greater<>());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (levels.size() < 2) throw ArgumentError("calibrate_lem_pos needs at least two eps levels");
    const double coarse_min = levels[(levels.size() - 1) / 2];
    std::vector<PhiPoint> coarse, fine, even, odd;
    for (const auto& pt : points) (pt.eps >= coarse_min ? coarse : fine).push_back(pt);
    for (std::size_t i = 0; i < points.size(); ++i) (i % 2 ? odd : even).push_back(points[i]);
    for (int k = 0; k <= 20; ++k) {
        const double A = std::ldexp(1.0, k);
        const double Kc = refine_lem_pos(shift, alpha_bar, coarse, A, B, starts);
        const double Kf = refine_lem_pos(shift, alpha_bar, fine, A, B, starts);
        const bool eps_free = Kf <= 1.1 * std::max(Kc, 0.0) || Kf <= 1e-12;
        // A K0 that two halves of one draw disagree on is not a constant yet.
        const bool steady = relative_drift(std::max(0.0, refine_lem_pos(shift, alpha_bar, even, A, B, starts)),
                                           std::max(0.0, refine_lem_pos(shift, alpha_bar, odd, A, B, starts))) <= 0.2;
        if (eps_free && steady) return {A, std::max({Kc, Kf, 0.0}), 0, k};
    }
    throw CalibrationError("lem_pos: no A up to 2^20 gives an eps-independent K0");
}

LemBCResult check_lem_BC(std::span<const PhiPoint> points, const BoundarySpec& spec1, const BoundarySpec& spec2,
                         const std::function<ABChoice(double eps)>& ab, double alpha_bar, double K1) {
    const Domain& dom = spec1.domain();
    LemBCResult r;
    for (const auto& pt : points) {
        const double eta = TestFunction::eta_for(pt.eps, alpha_bar);
        if ((pt.x - pt.y).norm() > K1 * eta * pt.eps * (1.0 + 1e-12))
            throw ArgumentError("lem_BC sample violates |x - y| <= K1 eta eps");
        const bool bx = on_boundary(dom, pt.x), by = on_boundary(dom, pt.y);
        if (!bx && !by) continue;
        const ABChoice c = ab(pt.eps);
        const PhiDerivatives d = phi_derivatives(pt, c.A, c.B);
        if (bx) {
            ++r.checked_x;
            if (!(eval_G(spec1, pt.x, d.Dx) > 0.0)) ++r.violations_x;
        }
        if (by) {
            ++r.checked_y;
            if (!(eval_G(spec2, pt.y, Vec(-d.Dy)) < 0.0)) ++r.violations_y;
        }
    }
    return r;
}

LemBCResult check_lem_BC(std::span<const PhiPoint> points, const BoundarySpec& spec1, const BoundarySpec& spec2,
                         double A, double B, double alpha_bar, double K1) {
    return check_lem_BC(points, spec1, spec2, [&](double) { return ABChoice{A, B}; }, alpha_bar, K1);
}

LemBCCalibration calibrate_lem_BC(std::span<const PhiPoint> points, const BoundarySpec& spec1,
                                  const BoundarySpec& spec2, const LemBCData& data, double alpha_bar, double K1) {
    for (int k = 0; k <= 10; ++k) {
        const double K = std::ldexp(1.0, k);
        auto ab = [&](double eps) {
            const double eta = TestFunction::eta_for(eps, alpha_bar);
            return choose_AB(eps, eta, eps * eta, data.nu1, data.nu2, data.mu1, data.mu2, K);
        };
        const LemBCResult r = check_lem_BC(points, spec1, spec2, ab, alpha_bar, K1);
        if (r.violations_x == 0 && r.violations_y == 0) return {K, r};
    }
    throw CalibrationError("lem_BC: no K up to 2^10 removes the sign violations");
}

const std::vector<std::string> kLemDerivBounds = {"pmqest", "pmqest2", "lwrbd", "scnd"};

namespace {

/// The four (lhs, env) pairs of the derivative displays at one point.
std::array<std::pair<double, double>, 4> deriv_rows(const PhiPoint& pt, double A, double B, double alpha_bar) {
    if (pt.order < 2) throw ArgumentError("derivative checks need second-order phi points");
    const PhiDerivatives d = phi_derivatives(pt, A, B);
    const int n = static_cast<int>(pt.x.size());
    const double e2 = pt.eps * pt.eps;
    const double eta = TestFunction::eta_for(pt.eps, alpha_bar);
    const double r = (pt.x - pt.y).norm();
    const double gx = d.Dx.norm(), gy = d.Dy.norm();
    std::array<std::pair<double, double>, 4> out;
    out[0] = {(d.Dx + d.Dy).norm() - 2.0 * B, r * r / e2 + e2};
    out[1] = {gx + gy - 2.0 * B, e2 + r * r / e2 + r / e2};
    out[2] = {r / (2.0 * e2) - r * B / 2.0 - std::min(gx, gy), r * (1.0 + A) / 2.0 + e2 + B};

    // With a = eps eta the factor 1 + (eps/a) eta^3 is 1 + eta^2.
    const double f = 1.0 + eta * eta;
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        P(i, i) = P(n + i, n + i) = f / e2;
        P(i, n + i) = P(n + i, i) = -f / e2;
    }
    P += (f * (eta * eta + e2) + B) * Eigen::MatrixXd::Identity(2 * n, 2 * n);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Eigen::MatrixXd(d.hess), P,
                                                                  Eigen::EigenvaluesOnly);
    out[3] = {ges.eigenvalues().maxCoeff(), 1.0};
    return out;
}

}  // namespace

LemDerivData lem_deriv_data(std::span<const PhiPoint> points, const std::function<ABChoice(double eps)>& ab,
                            double alpha_bar) {
    LemDerivData out;
    out.lhs.assign(4, {});
    out.env.assign(4, {});
    for (const auto& pt : points) {
        const ABChoice c = ab(pt.eps);
        const auto rows = deriv_rows(pt, c.A, c.B, alpha_bar);
        for (std::size_t b = 0; b < 4; ++b) {
            out.lhs[b].push_back(rows[b].first);
            out.env[b].push_back(rows[b].second);
        }
    }
    return out;
}

LemDerivData lem_deriv_data(std::span<const PhiPoint> points, double A, double B, double alpha_bar) {
    return lem_deriv_data(points, [=](double) { return ABChoice{A, B}; }, alpha_bar);
}

std::vector<double> refine_lem_deriv(const RegularizedShift& shift, double alpha_bar,
                                     std::span<const PhiPoint> points,
                                     const std::function<ABChoice(double eps)>& ab, double K1, int starts) {
    const LemDerivData data = lem_deriv_data(points, ab, alpha_bar);
    const Domain& dom = shift.field().domain();
    std::vector<double> best(4, -std::numeric_limits<double>::infinity());
    // (display, sample) seeds: the `starts` largest ratios per display.
    std::vector<std::pair<std::size_t, std::size_t>> seeds;
    std::vector<std::vector<double>> ratio(4);
    for (std::size_t b = 0; b < 4; ++b) {
        for (std::size_t i = 0; i < points.size(); ++i) ratio[b].push_back(data.lhs[b][i] / data.env[b][i]);
        for (std::size_t i : top_indices(ratio[b], starts)) seeds.emplace_back(b, i);
        for (double v : ratio[b]) best[b] = std::max(best[b], v);
    }
    const auto by_eps = test_functions(shift, alpha_bar, points);
    const auto climbed = parallel_map(seeds.size(), [&](std::size_t s) {
        const auto [b, i] = seeds[s];
        const PhiPoint& pt = points[i];
        const TestFunction& tf = by_eps.at(pt.eps);
        const ABChoice c = ab(pt.eps);
        const double rmax = K1 * TestFunction::eta_for(pt.eps, alpha_bar) * pt.eps;
        return climb(dom, pt.x, pt.y - pt.x, ratio[b][i], 0.25 * rmax, rmax, [&](const Vec& x, const Vec& y) {
            const auto row = deriv_rows(phi_point(tf, x, y, 2), c.A, c.B, alpha_bar)[b];
            return row.first / row.second;
        });
    });
    for (std::size_t s = 0; s < seeds.size(); ++s) best[seeds[s].first] = std::max(best[seeds[s].first], climbed[s]);
    return best;
}

LemDerivReport check_lem_deriv(std::span<const PhiPoint> points, double A, double B, double alpha_bar) {
    const LemDerivData data = lem_deriv_data(points, A, B, alpha_bar);
    LemDerivReport rep;
    rep.samples = points.size();
    for (std::size_t b = 0; b < kLemDerivBounds.size(); ++b) {
        const RatioFit f = fit_ratio(data.lhs[b], data.env[b]);
        rep.bounds.push_back({kLemDerivBounds[b], f.K, f.violations});
    }
    return rep;
}

}  // namespace visclab
