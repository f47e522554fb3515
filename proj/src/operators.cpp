#include "visclab/operators.hpp"

#include "visclab/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace visclab {

namespace {

Mat random_symmetric(int n, double scale, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, scale);
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = i; k < n; ++k) m(i, k) = m(k, i) = g(rng);
    return m;
}

Vec random_vec(int n, double scale, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, scale);
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = g(rng);
    return v;
}

/// Uniform in the ball of given radius.
Vec random_in_ball(int n, double radius, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vec dir = random_vec(n, 1.0, rng);
    const double len = dir.norm();
    if (len == 0.0) return Vec::Zero(n);
    return dir / len * radius * std::pow(u(rng), 1.0 / n);
}

Json labels_json(const std::vector<std::string>& labels) {
    Json a = Json::array();
    for (const auto& l : labels) a.push_back(l);
    return a;
}

Json set_json(const CoefficientSet& s) {
    return {{"sigma", s.sigma.to_json()}, {"b", s.b.to_json()}, {"c", s.c.to_json()}, {"f", s.f.to_json()}};
}

CoefficientSet set_from_json(const Json& j, int dim, const std::string& path, SchemaErrors& errors) {
    ObjectReader r(j, path, errors);
    CoefficientSet s;
    if (!r.valid()) return s;
    s.sigma = MatrixField::from_json(r.require("sigma"), dim, r.child("sigma"), errors);
    s.b = VectorField::from_json(r.require("b"), dim, r.child("b"), errors);
    s.c = ScalarField::from_json(r.require("c"), dim, r.child("c"), errors);
    s.f = ScalarField::from_json(r.require("f"), dim, r.child("f"), errors);
    r.finish();
    return s;
}

std::vector<std::string> labels_from_json(ObjectReader& r, const std::string& key) {
    std::vector<std::string> out;
    const Json* j = r.optional(key);
    if (!j) return out;
    if (!j->is_array()) {
        r.fail(key, "expected an array of strings");
        return out;
    }
    for (const auto& e : *j) {
        if (!e.is_string()) {
            r.fail(key, "expected an array of strings");
            return {};
        }
        out.push_back(e.get<std::string>());
    }
    return out;
}

const char* kind_name(OperatorKind k) {
    switch (k) {
        case OperatorKind::Linear: return "linear";
        case OperatorKind::Bellman: return "bellman";
        default: return "isaacs";
    }
}

}  // namespace

double max_eigenvalue(const Mat4& m) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double min_eigenvalue(const Mat4& m) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

OperatorSpec::OperatorSpec(OperatorKind kind, ControlledCoefficients coefficients)
    : kind_(kind), coeffs_(std::move(coefficients)) {
    if (coeffs_.n1() == 0 || coeffs_.n2() == 0) throw ConfigError("control grids must be nonempty");
    for (const auto& row : coeffs_.sets)
        if (static_cast<int>(row.size()) != coeffs_.n2())
            throw ConfigError("control table must be rectangular");
    if (kind_ == OperatorKind::Bellman && coeffs_.n2() != 1)
        throw ConfigError("bellman operators have a single theta2 control");
    if (kind_ == OperatorKind::Linear && (coeffs_.n1() != 1 || coeffs_.n2() != 1))
        throw ConfigError("linear operators have a single control pair");
    if (!(coeffs_.alpha > 0.0 && coeffs_.alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
    if (!coeffs_.labels1.empty() && static_cast<int>(coeffs_.labels1.size()) != coeffs_.n1())
        throw ConfigError("labels1 does not match the theta1 grid");
    if (!coeffs_.labels2.empty() && static_cast<int>(coeffs_.labels2.size()) != coeffs_.n2())
        throw ConfigError("labels2 does not match the theta2 grid");
}

OperatorSpec OperatorSpec::linear(int dim, CoefficientSet set) {
    ControlledCoefficients cc;
    cc.dim = dim;
    cc.sets = {{std::move(set)}};
    return OperatorSpec(OperatorKind::Linear, std::move(cc));
}

double OperatorSpec::eval_pair(int i, int j, const Vec& x, double r, const Vec& p, const Mat& X) const {
    const CoefficientSet& s = coeffs_.at(i, j);
    return -(s.diffusion(x) * X).trace() - s.b(x).dot(p) + s.c(x) * r - s.f(x);
}

std::vector<std::string> OperatorSpec::invariant_issues(std::span<const Vec> points, double lambda_min) const {
    std::vector<std::string> issues;
    for (int i = 0; i < coeffs_.n1(); ++i) {
        for (int j = 0; j < coeffs_.n2(); ++j) {
            const CoefficientSet& s = coeffs_.at(i, j);
            double cmin = std::numeric_limits<double>::infinity();
            bool finite = true;
            for (const Vec& x : points) {
                const double c = s.c(x);
                cmin = std::min(cmin, c);
                finite = finite && std::isfinite(c) && std::isfinite(s.f(x)) &&
                         s.sigma(x).allFinite() && s.b(x).allFinite();
            }
            const std::string tag = "control (" + std::to_string(i) + "," + std::to_string(j) + ")";
            if (!finite) issues.push_back(tag + ": non-finite coefficient value");
            if (!(cmin > 0.0) || cmin < lambda_min)
                issues.push_back(tag + ": min c = " + std::to_string(cmin) + " violates c >= lambda > 0");
        }
    }
    return issues;
}

OperatorSpec OperatorSpec::shifted(const std::string& which, double s) const {
    ControlledCoefficients cc = coeffs_;
    for (auto& row : cc.sets) {
        for (auto& set : row) {
            if (which == "f") set.f = set.f.shifted(s);
            else if (which == "c") set.c = set.c.shifted(s);
            else if (which == "sigma") set.sigma = set.sigma.shifted(s);
            else if (which == "b") set.b = set.b.shifted(s);
            else throw ArgumentError("unknown coefficient '" + which + "'");
        }
    }
    return OperatorSpec(kind_, std::move(cc));
}

Json OperatorSpec::to_json() const {
    Json j = {{"type", kind_name(kind_)}, {"alpha", coeffs_.alpha}};
    if (kind_ == OperatorKind::Linear) {
        j["coefficients"] = set_json(coeffs_.at(0, 0));
    } else if (kind_ == OperatorKind::Bellman) {
        Json a = Json::array();
        for (int i = 0; i < coeffs_.n1(); ++i) a.push_back(set_json(coeffs_.at(i, 0)));
        j["controls"] = a;
    } else {
        Json a = Json::array();
        for (int i = 0; i < coeffs_.n1(); ++i) {
            Json row = Json::array();
            for (int k = 0; k < coeffs_.n2(); ++k) row.push_back(set_json(coeffs_.at(i, k)));
            a.push_back(row);
        }
        j["controls"] = a;
    }
    if (!coeffs_.labels1.empty()) j["labels1"] = labels_json(coeffs_.labels1);
    if (!coeffs_.labels2.empty()) j["labels2"] = labels_json(coeffs_.labels2);
    return j;
}

OperatorSpec OperatorSpec::from_json(const Json& j, int dim, const std::string& path, SchemaErrors& errors) {
    auto fallback = [dim] {
        return linear(dim, CoefficientSet{MatrixField::constant(Mat::Zero(dim, dim)),
                                          VectorField::constant(Vec::Zero(dim)), ScalarField::constant(1.0),
                                          ScalarField::constant(0.0)});
    };
    ObjectReader r(j, path, errors);
    if (!r.valid()) return fallback();
    const std::string type = r.string("type");
    ControlledCoefficients cc;
    cc.dim = dim;
    cc.alpha = r.number_or("alpha", 1.0);
    OperatorKind kind = OperatorKind::Linear;
    if (type == "linear") {
        cc.sets = {{set_from_json(r.require("coefficients"), dim, r.child("coefficients"), errors)}};
    } else if (type == "bellman") {
        kind = OperatorKind::Bellman;
        const Json& c = r.require("controls");
        if (!c.is_array() || c.empty()) {
            r.fail("controls", "expected a nonempty array of coefficient sets");
        } else {
            for (std::size_t i = 0; i < c.size(); ++i)
                cc.sets.push_back({set_from_json(c[i], dim, r.child("controls") + "/" + std::to_string(i), errors)});
        }
    } else if (type == "isaacs") {
        kind = OperatorKind::Isaacs;
        const Json& c = r.require("controls");
        if (!c.is_array() || c.empty()) {
            r.fail("controls", "expected a nonempty array of rows");
        } else {
            for (std::size_t i = 0; i < c.size(); ++i) {
                const std::string rp = r.child("controls") + "/" + std::to_string(i);
                if (!c[i].is_array() || c[i].empty() || c[i].size() != c[0].size()) {
                    errors.add(rp, "expected a nonempty row of equal length");
                    continue;
                }
                std::vector<CoefficientSet> row;
                for (std::size_t k = 0; k < c[i].size(); ++k)
                    row.push_back(set_from_json(c[i][k], dim, rp + "/" + std::to_string(k), errors));
                cc.sets.push_back(std::move(row));
            }
        }
    } else if (!type.empty()) {
        r.fail("type", "unknown operator type '" + type + "'");
    }
    cc.labels1 = labels_from_json(r, "labels1");
    cc.labels2 = labels_from_json(r, "labels2");
    r.finish();
    if (!errors.empty()) return fallback();
    try {
        return OperatorSpec(kind, std::move(cc));
    } catch (const ConfigError& e) {
        errors.add(path, e.what());
        return fallback();
    }
}

double eval_F(const OperatorSpec& spec, const Vec& x, double r, const Vec& p, const Mat& X) {
    const ControlPair c = eval_argcontrols(spec, x, r, p, X);
    return spec.eval_pair(c.theta1, c.theta2, x, r, p, X);
}

ControlPair eval_argcontrols(const OperatorSpec& spec, const Vec& x, double r, const Vec& p, const Mat& X) {
    const double asym = (X - X.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * (1.0 + X.cwiseAbs().maxCoeff())) throw ArgumentError("X must be symmetric");
    const auto& cc = spec.coefficients();
    ControlPair best;
    double inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cc.n1(); ++i) {
        int jbest = 0;
        double sup = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < cc.n2(); ++j) {
            const double v = spec.eval_pair(i, j, x, r, p, X);
            if (v > sup) {
                sup = v;
                jbest = j;
            }
        }
        if (sup < inf) {
            inf = sup;
            best = {i, jbest};
        }
    }
    return best;
}

double probe_H3(const OperatorSpec& spec, std::span<const H3Sample> samples) {
    if (samples.empty()) throw ArgumentError("probe_H3 needs at least one sample");
    double lambda = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        if (!(s.r > s.s)) throw ArgumentError("probe_H3 samples need r > s");
        const double d = eval_F(spec, s.x, s.r, s.p, s.X) - eval_F(spec, s.x, s.s, s.p, s.X);
        lambda = std::min(lambda, d / (s.r - s.s));
    }
    return lambda;
}

std::vector<H3Sample> make_h3_samples(const OperatorSpec& spec, const Domain& domain, std::size_t count,
                                      double R, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-R, R);
    const int n = spec.dim();
    std::vector<H3Sample> out;
    out.reserve(count);
    while (out.size() < count) {
        H3Sample s;
        s.x = domain.uniform_point(rng);
        s.p = random_vec(n, 1.0, rng);
        s.X = random_symmetric(n, 1.0, rng);
        s.r = u(rng);
        s.s = u(rng);
        if (s.r < s.s) std::swap(s.r, s.s);
        if (s.r - s.s < 1e-6 * R) continue;
        out.push_back(std::move(s));
    }
    return out;
}

CoefficientDistance coefficient_distance(const OperatorSpec& spec1, const OperatorSpec& spec2,
                                         std::span<const Vec> points) {
    const auto& a = spec1.coefficients();
    const auto& b = spec2.coefficients();
    if (a.n1() != b.n1() || a.n2() != b.n2() || a.dim != b.dim)
        throw ArgumentError("coefficient_distance needs matching control grids");
    if (points.empty()) throw ArgumentError("coefficient_distance needs sampling points");
    double d1 = 0.0, d2sq = 0.0;
    for (int i = 0; i < a.n1(); ++i) {
        for (int j = 0; j < a.n2(); ++j) {
            const auto& s1 = a.at(i, j);
            const auto& s2 = b.at(i, j);
            double dc = 0.0, df = 0.0, ds = 0.0, db = 0.0;
            for (const Vec& x : points) {
                dc = std::max(dc, std::abs(s1.c(x) - s2.c(x)));
                df = std::max(df, std::abs(s1.f(x) - s2.f(x)));
                ds = std::max(ds, (s1.sigma(x) - s2.sigma(x)).norm());
                db = std::max(db, (s1.b(x) - s2.b(x)).norm());
            }
            d1 = std::max(d1, dc + df);
            d2sq = std::max(d2sq, ds * ds + db * db);
        }
    }
    return {d1, std::sqrt(d2sq)};
}

std::vector<H2barSample> make_h2bar_samples(const Domain& domain, std::span<const EpsEta> schedule,
                                            std::size_t count, const H2barOptions& options,
                                            std::uint64_t seed) {
    if (schedule.empty()) throw ArgumentError("empty eps/eta schedule");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = domain.dim();
    const double K = options.K;
    std::vector<H2barSample> out;
    out.reserve(count);
    std::size_t k = 0;
    while (out.size() < count) {
        const EpsEta& ee = schedule[k++ % schedule.size()];
        H2barSample s;
        s.eps = ee.eps;
        s.eta = ee.eta;
        s.B = u(rng) * ee.eps * ee.eps;
        s.r = options.R * (2.0 * u(rng) - 1.0);
        s.x = domain.uniform_point(rng);
        s.y = s.x + random_in_ball(n, K * ee.eta * ee.eps, rng);
        if (!domain.contains(s.y, 0.0)) continue;
        const double small = ee.eta * ee.eta + ee.eps * ee.eps + s.B;
        const double big = K * (ee.eta / ee.eps + small);
        s.p = random_in_ball(n, 0.5 * big, rng);
        s.q = s.p + random_in_ball(n, K * small, rng);
        const double total = s.p.norm() + s.q.norm();
        if (total > big) {
            s.p *= big / total;
            s.q *= big / total;
        }
        // Matrices: a common part Z plus independent corrections, shrunk
        // until diag(X, -Y) <= (K/eps^2) [[I,-I],[-I,I]] + K small I.
        Mat4 rhs = Mat4::Zero(2 * n, 2 * n);
        const double k_eps = K / (ee.eps * ee.eps);
        for (int i = 0; i < n; ++i) {
            rhs(i, i) = rhs(n + i, n + i) = k_eps + K * small;
            rhs(i, n + i) = rhs(n + i, i) = -k_eps;
        }
        const Mat Z = random_symmetric(n, k_eps, rng);
        s.X = Z + random_symmetric(n, K * small, rng);
        s.Y = Z + random_symmetric(n, K * small, rng);
        for (int tries = 0;; ++tries) {
            Mat4 lhs = Mat4::Zero(2 * n, 2 * n);
            lhs.topLeftCorner(n, n) = s.X;
            lhs.bottomRightCorner(n, n) = -s.Y;
            if (min_eigenvalue(rhs - lhs) >= 0.0) break;
            if (tries > 60) {
                s.X.setZero();
                s.Y.setZero();
                break;
            }
            s.X *= 0.7;
            s.Y *= 0.7;
        }
        out.push_back(std::move(s));
    }
    return out;
}

H2barProbe probe_H2bar(const OperatorSpec& spec, std::span<const H2barSample> samples, double alpha) {
    if (samples.empty()) throw ArgumentError("probe_H2bar needs samples");
    double K = 0.0;
    for (const auto& s : samples) {
        const double lhs = eval_F(spec, s.y, s.r, s.q, s.Y) - eval_F(spec, s.x, s.r, s.p, s.X);
        const double dist = (s.x - s.y).norm();
        const double env = std::pow(dist, alpha) + dist * dist / (s.eps * s.eps) + s.eta * s.eta +
                           s.eps * s.eps + s.B;
        if (lhs <= 0.0) continue;
        K = std::max(K, lhs / env);
    }
    return {K, std::isfinite(K)};
}

H2barProbe probe_H2bar(const OperatorSpec& spec, const Domain& domain, std::span<const EpsEta> schedule,
                       std::size_t count, const H2barOptions& options, std::uint64_t seed) {
    const auto samples = make_h2bar_samples(domain, schedule, count, options, seed);
    return probe_H2bar(spec, samples, options.alpha);
}

H2barStability h2bar_stability(const OperatorSpec& spec, const Domain& domain, std::span<const EpsEta> schedule,
                               std::size_t count, const H2barOptions& options, std::uint64_t seed) {
    if (schedule.empty()) throw ArgumentError("empty eps/eta schedule");
    std::vector<EpsEta> extended(schedule.begin(), schedule.end());
    // Two further halvings of the smallest eps, keeping log(eta)/log(eps).
    auto smallest = *std::min_element(extended.begin(), extended.end(),
                                      [](const EpsEta& a, const EpsEta& b) { return a.eps < b.eps; });
    const double expo = smallest.eps < 1.0 ? std::log(smallest.eta) / std::log(smallest.eps) : 1.0;
    for (int h = 1; h <= 2; ++h) {
        const double e = smallest.eps * std::pow(0.5, h);
        extended.push_back({e, std::pow(e, expo)});
    }
    H2barStability out;
    out.K_base = probe_H2bar(spec, domain, schedule, count, options, seed).K_hat;
    out.K_refined = probe_H2bar(spec, domain, extended, 4 * count, options, seed + 1).K_hat;
    out.drift = relative_drift(out.K_base, out.K_refined);
    out.stable = std::isfinite(out.K_refined) && out.drift <= 0.2;
    return out;
}

}  // namespace visclab
