#include "visclab/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace visclab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// A boundary point at arclength offset `delta` from x (same boundary component).
Vec nearby_boundary_point(const Domain& domain, const Vec& x, double delta) {
    return std::visit(overloaded{
                          [&](const Interval&) { return x; },
                          [&](const PeriodicStrip& s) {
                              double t = std::fmod(x(0) + delta, s.period);
                              if (t < 0.0) t += s.period;
                              return make_vec(t, x(1));
                          },
                          [&](const Disc& s) {
                              const double t = std::atan2(x(1), x(0)) + delta / s.radius;
                              return make_vec(s.radius * std::cos(t), s.radius * std::sin(t));
                          },
                      },
                      domain.shape());
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

ObliqueTerm term_from_json(const Json& j, int dim, const std::string& path, SchemaErrors& errors) {
    ObjectReader r(j, path, errors);
    ObliqueTerm t;
    if (!r.valid()) return t;
    t.gamma = VectorField::from_json(r.require("gamma"), dim, r.child("gamma"), errors);
    t.g = ScalarField::from_json(r.require("g"), dim, r.child("g"), errors);
    r.finish();
    return t;
}

}  // namespace

Vec random_boundary_point(const Domain& domain, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::visit(overloaded{
                          [&](const Interval& s) { return make_vec(u(rng) < 0.5 ? s.a : s.b); },
                          [&](const PeriodicStrip& s) {
                              return make_vec(s.period * u(rng), u(rng) < 0.5 ? 0.0 : s.height);
                          },
                          [&](const Disc& s) {
                              const double t = 2.0 * kPi * u(rng);
                              return make_vec(s.radius * std::cos(t), s.radius * std::sin(t));
                          },
                      },
                      domain.shape());
}

BoundarySpec::BoundarySpec(Domain domain, Variant variant, std::optional<double> nu, std::optional<double> K,
                           std::optional<double> extension_width)
    : domain_(std::move(domain)),
      variant_(std::move(variant)),
      nu_(nu),
      K_(K),
      width_decl_(extension_width),
      width_(extension_width.value_or(0.5 * domain_.inradius())) {
    if (nu_ && !(*nu_ > 0.0)) throw ConfigError("declared nu must be positive");
    if (K_ && !(*K_ > 0.0)) throw ConfigError("declared K must be positive");
    if (!(width_ > 0.0) || width_ > domain_.inradius())
        throw ConfigError("extension width must lie in (0, inradius]");
    if (auto* cr = std::get_if<ControlledReflection>(&variant_)) {
        if (cr->sets.empty() || cr->sets.front().empty())
            throw ConfigError("controlled reflection needs a nonempty control table");
        for (const auto& row : cr->sets)
            if (row.size() != cr->sets.front().size()) throw ConfigError("control table must be rectangular");
    }

    // Analytic HB1 rate and linear-growth constant on boundary samples.
    double nu_min = std::numeric_limits<double>::infinity();
    double K_max = 0.0;
    const Vec zero = Vec::Zero(dim());
    for (const Vec& x : domain_.boundary_points(64)) {
        const Vec n = domain_.boundary_normal(x);
        double lip = 0.0;
        std::visit(overloaded{
                       [&](const Neumann&) {
                           nu_min = std::min(nu_min, 1.0);
                           lip = 1.0;
                       },
                       [&](const Oblique& o) {
                           const Vec g = o.gamma(x);
                           nu_min = std::min(nu_min, g.dot(n));
                           lip = g.norm();
                       },
                       [&](const Capillary& c) {
                           const double t = std::abs(c.theta(x));
                           nu_min = std::min(nu_min, 1.0 - t);
                           lip = 1.0 + t;
                       },
                       [&](const ControlledReflection& cr) {
                           for (const auto& row : cr.sets)
                               for (const auto& t : row) {
                                   const Vec g = t.gamma(x);
                                   nu_min = std::min(nu_min, g.dot(n));
                                   lip = std::max(lip, g.norm());
                               }
                       },
                   },
                   variant_);
        K_max = std::max(K_max, std::abs(eval_G(*this, x, zero)) + lip);
    }
    nu_nominal_ = nu_min;
    K_nominal_ = K_max;
}

std::string BoundarySpec::type_name() const {
    return std::visit(overloaded{
                          [](const Neumann&) { return std::string("neumann"); },
                          [](const Oblique&) { return std::string("oblique"); },
                          [](const Capillary&) { return std::string("capillary"); },
                          [](const ControlledReflection&) { return std::string("controlled_reflection"); },
                      },
                      variant_);
}

Vec BoundarySpec::normal(const Vec& x) const {
    if (x.size() != dim()) throw ArgumentError("point dimension mismatch");
    if (std::abs(domain_.signed_distance(x)) > width_ + 1e-12)
        throw DomainError("point outside the boundary neighbourhood");
    return domain_.boundary_normal(x);
}

int BoundarySpec::n1() const {
    if (auto* cr = std::get_if<ControlledReflection>(&variant_)) return static_cast<int>(cr->sets.size());
    return is_capillary() ? 0 : 1;
}

int BoundarySpec::n2() const {
    if (auto* cr = std::get_if<ControlledReflection>(&variant_)) return static_cast<int>(cr->sets.front().size());
    return is_capillary() ? 0 : 1;
}

std::pair<Vec, double> BoundarySpec::linear_term(int i, int j, const Vec& x) const {
    const Vec px = domain_.closest_boundary_point(x);
    return std::visit(overloaded{
                          [&](const Neumann& v) -> std::pair<Vec, double> { return {normal(x), v.g(px)}; },
                          [&](const Oblique& v) -> std::pair<Vec, double> { return {v.gamma(px), v.g(px)}; },
                          [&](const Capillary&) -> std::pair<Vec, double> {
                              throw ArgumentError("capillary conditions have no linear term");
                          },
                          [&](const ControlledReflection& v) -> std::pair<Vec, double> {
                              const auto& t = v.sets.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j));
                              return {t.gamma(px), t.g(px)};
                          },
                      },
                      variant_);
}

double BoundarySpec::theta(const Vec& x) const {
    const auto* c = std::get_if<Capillary>(&variant_);
    if (!c) throw ArgumentError("not a capillary condition");
    return c->theta(domain_.closest_boundary_point(x));
}

double BoundarySpec::nu() const { return nu_.value_or(nu_nominal_); }
double BoundarySpec::K() const { return K_.value_or(K_nominal_); }

std::vector<std::string> BoundarySpec::invariant_issues(int boundary_samples) const {
    std::vector<std::string> issues;
    const double floor = nu_.value_or(0.0);
    for (const Vec& x : domain_.boundary_points(boundary_samples)) {
        const Vec n = domain_.boundary_normal(x);
        auto check_gamma = [&](const Vec& g) {
            const double gn = g.dot(n);
            if (!(gn > 0.0) || gn < floor)
                issues.push_back("gamma.n = " + std::to_string(gn) + " at boundary point violates gamma.n >= nu > 0");
        };
        std::visit(overloaded{
                       [&](const Neumann&) {},
                       [&](const Oblique& o) { check_gamma(o.gamma(x)); },
                       [&](const Capillary& c) {
                           const double t = std::abs(c.theta(x));
                           if (!(t < 1.0)) issues.push_back("|theta| = " + std::to_string(t) + " is not below 1");
                           else if (1.0 - t < floor)
                               issues.push_back("1 - |theta| below declared nu");
                       },
                       [&](const ControlledReflection& cr) {
                           for (const auto& row : cr.sets)
                               for (const auto& t : row) check_gamma(t.gamma(x));
                       },
                   },
                   variant_);
        if (issues.size() > 8) break;
    }
    return issues;
}

BoundarySpec BoundarySpec::shifted(const std::string& which, double s) const {
    Variant v = variant_;
    auto bad = [&] { throw ArgumentError("cannot shift '" + which + "' of a " + type_name() + " condition"); };
    std::visit(overloaded{
                   [&](Neumann& n) {
                       if (which != "g") bad();
                       n.g = n.g.shifted(s);
                   },
                   [&](Oblique& o) {
                       if (which == "g") o.g = o.g.shifted(s);
                       else if (which == "gamma") o.gamma = o.gamma.shifted(s);
                       else bad();
                   },
                   [&](Capillary& c) {
                       if (which != "theta") bad();
                       c.theta = c.theta.shifted(s);
                   },
                   [&](ControlledReflection& cr) {
                       if (which != "g" && which != "gamma") bad();
                       for (auto& row : cr.sets)
                           for (auto& t : row) {
                               if (which == "g") t.g = t.g.shifted(s);
                               else t.gamma = t.gamma.shifted(s);
                           }
                   },
               },
               v);
    return BoundarySpec(domain_, std::move(v), nu_, K_, width_decl_);
}

Json BoundarySpec::to_json() const {
    Json j = {{"type", type_name()}};
    std::visit(overloaded{
                   [&](const Neumann& n) { j["g"] = n.g.to_json(); },
                   [&](const Oblique& o) {
                       j["gamma"] = o.gamma.to_json();
                       j["g"] = o.g.to_json();
                   },
                   [&](const Capillary& c) { j["theta"] = c.theta.to_json(); },
                   [&](const ControlledReflection& cr) {
                       Json rows = Json::array();
                       for (const auto& row : cr.sets) {
                           Json r = Json::array();
                           for (const auto& t : row) r.push_back({{"gamma", t.gamma.to_json()}, {"g", t.g.to_json()}});
                           rows.push_back(r);
                       }
                       j["controls"] = rows;
                   },
               },
               variant_);
    if (nu_) j["nu"] = *nu_;
    if (K_) j["K"] = *K_;
    if (width_decl_) j["extension_width"] = *width_decl_;
    return j;
}

BoundarySpec BoundarySpec::from_json(const Json& j, const Domain& domain, const std::string& path,
                                     SchemaErrors& errors) {
    const int dim = domain.dim();
    auto fallback = [&] { return BoundarySpec(domain, Neumann{ScalarField::constant(0.0)}); };
    ObjectReader r(j, path, errors);
    if (!r.valid()) return fallback();
    const std::string type = r.string("type");
    std::optional<Variant> v;
    if (type == "neumann") {
        v = Neumann{ScalarField::from_json(r.require("g"), dim, r.child("g"), errors)};
    } else if (type == "oblique") {
        Oblique o;
        o.gamma = VectorField::from_json(r.require("gamma"), dim, r.child("gamma"), errors);
        o.g = ScalarField::from_json(r.require("g"), dim, r.child("g"), errors);
        v = o;
    } else if (type == "capillary") {
        v = Capillary{ScalarField::from_json(r.require("theta"), dim, r.child("theta"), errors)};
    } else if (type == "controlled_reflection") {
        ControlledReflection cr;
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
                std::vector<ObliqueTerm> row;
                for (std::size_t k = 0; k < c[i].size(); ++k)
                    row.push_back(term_from_json(c[i][k], dim, rp + "/" + std::to_string(k), errors));
                cr.sets.push_back(std::move(row));
            }
        }
        v = cr;
    } else if (!type.empty()) {
        r.fail("type", "unknown boundary type '" + type + "'");
    }
    std::optional<double> nu, K, width;
    if (const Json* n = r.optional("nu")) nu = as_number(*n, r.child("nu"), errors);
    if (const Json* k = r.optional("K")) K = as_number(*k, r.child("K"), errors);
    if (const Json* w = r.optional("extension_width")) width = as_number(*w, r.child("extension_width"), errors);
    r.finish();
    if (!v || !errors.empty()) return fallback();
    try {
        return BoundarySpec(domain, std::move(*v), nu, K, width);
    } catch (const ConfigError& e) {
        errors.add(path, e.what());
        return fallback();
    }
}

double eval_G(const BoundarySpec& spec, const Vec& x, const Vec& p) {
    const Vec n = spec.normal(x);
    const Vec px = spec.domain().closest_boundary_point(x);
    return std::visit(overloaded{
                          [&](const BoundarySpec::Neumann& v) { return p.dot(n) - v.g(px); },
                          [&](const BoundarySpec::Oblique& v) { return v.gamma(px).dot(p) - v.g(px); },
                          [&](const BoundarySpec::Capillary& v) {
                              return p.dot(n) - v.theta(px) * std::sqrt(1.0 + p.squaredNorm());
                          },
                          [&](const BoundarySpec::ControlledReflection& v) {
                              double inf = std::numeric_limits<double>::infinity();
                              for (const auto& row : v.sets) {
                                  double sup = -std::numeric_limits<double>::infinity();
                                  for (const auto& t : row) sup = std::max(sup, t.gamma(px).dot(p) - t.g(px));
                                  inf = std::min(inf, sup);
                              }
                              return inf;
                          },
                      },
                      spec.variant());
}

std::vector<BoundarySample> make_boundary_samples(const Domain& domain, std::size_t count, double p_max,
                                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<BoundarySample> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        Vec x = random_boundary_point(domain, rng);
        out.push_back({x, random_in_ball(domain.dim(), p_max, rng)});
    }
    return out;
}

double probe_HB1(const BoundarySpec& spec, std::span<const BoundarySample> samples, std::span<const double> mus) {
    if (samples.empty() || mus.empty()) throw ArgumentError("probe_HB1 needs samples and mu values");
    for (double mu : mus)
        if (!(mu > 0.0)) throw ArgumentError("probe_HB1 needs positive mu");
    double nu = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        const Vec n = spec.normal(s.x);
        const double g0 = eval_G(spec, s.x, s.p);
        for (double mu : mus) nu = std::min(nu, (eval_G(spec, s.x, s.p + mu * n) - g0) / mu);
    }
    return nu;
}

NormalShift::NormalShift(BoundarySpec spec_, double tol_scale_, double growth_)
    : spec(std::move(spec_)), tol_scale(tol_scale_), growth(growth_) {
    if (!(tol_scale > 0.0)) throw ConfigError("shift tolerance must be positive");
    if (!(growth > 1.0)) throw ConfigError("bracket growth factor must exceed 1");
}

double NormalShift::operator()(const Vec& x, const Vec& p) const { return compute_normal_shift(*this, x, p); }

double compute_normal_shift(const NormalShift& shift, const Vec& x, const Vec& p) {
    const BoundarySpec& spec = shift.spec;
    const Vec n = spec.normal(x);
    const double tol = shift.tolerance(p);
    auto G = [&](double t) { return eval_G(spec, x, p + t * n); };

    const double g0 = G(0.0);
    if (std::abs(g0) <= tol) return 0.0;
    const double nu = spec.nu();
    if (!(nu > 0.0)) throw AssumptionError("normal shift needs nu > 0");
    // HB1 puts the root within |G(x,p)|/nu; the growth loop only matters when
    // the declared nu overstates the true rate.
    const double cap = shift.growth * std::max(spec.K() * (1.0 + p.norm()), std::abs(g0)) / nu;
    const double dir = g0 < 0.0 ? 1.0 : -1.0;
    double t = std::abs(g0) / nu;
    double ft = G(dir * t);
    while ((ft < 0.0) == (g0 < 0.0) && std::abs(ft) > tol) {
        t *= shift.growth;
        if (t > cap) throw AssumptionError("no sign change of G along the normal within the growth bound");
        ft = G(dir * t);
    }
    if (std::abs(ft) <= tol) return dir * t;

    // Illinois regula falsi with a bisection safeguard.
    double a = 0.0, fa = g0, b = dir * t, fb = ft;
    int side = 0;
    double best = std::abs(fa) < std::abs(fb) ? a : b;
    double fbest = std::min(std::abs(fa), std::abs(fb));
    for (int it = 0; it < 400; ++it) {
        double c = b - fb * (b - a) / (fb - fa);
        const double lo = std::min(a, b), hi = std::max(a, b);
        if (!(c > lo && c < hi)) c = 0.5 * (a + b);
        const double fc = G(c);
        if (std::abs(fc) < fbest) {
            fbest = std::abs(fc);
            best = c;
        }
        if (std::abs(fc) <= tol) return c;
        if ((fc < 0.0) == (fb < 0.0)) {
            b = c;
            fb = fc;
            if (side == -1) fa *= 0.5;
            side = -1;
        } else {
            a = b;
            fa = fb;
            b = c;
            fb = fc;
            side = +1;
        }
        if (std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(b))) break;
    }
    if (fbest <= tol) return best;
    throw AssumptionError("normal shift root finder stalled with residual " + std::to_string(fbest));
}

BoundaryDistance boundary_distance(const BoundarySpec& spec1, const BoundarySpec& spec2,
                                   std::span<const BoundarySample> samples) {
    if (samples.empty()) throw ArgumentError("boundary_distance needs samples");
    if (spec1.dim() != spec2.dim()) throw ArgumentError("boundary specs live in different dimensions");
    BoundaryDistance out;
    std::vector<double> d(samples.size()), r(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        d[k] = eval_G(spec2, samples[k].x, samples[k].p) - eval_G(spec1, samples[k].x, samples[k].p);
        r[k] = samples[k].p.norm();
    }
    const bool linear1 = !spec1.is_capillary(), linear2 = !spec2.is_capillary();
    if (linear1 && linear2 && spec1.n1() == spec2.n1() && spec1.n2() == spec2.n2()) {
        out.closed_form = true;
        for (const auto& s : samples)
            for (int i = 0; i < spec1.n1(); ++i)
                for (int j = 0; j < spec1.n2(); ++j) {
                    const auto [g1, c1] = spec1.linear_term(i, j, s.x);
                    const auto [g2, c2] = spec2.linear_term(i, j, s.x);
                    out.mu1 = std::max(out.mu1, std::abs(c1 - c2));
                    out.mu2 = std::max(out.mu2, (g1 - g2).norm());
                }
    } else if (spec1.is_capillary() && spec2.is_capillary()) {
        out.closed_form = true;
        for (const auto& s : samples) out.mu1 = std::max(out.mu1, std::abs(spec1.theta(s.x) - spec2.theta(s.x)));
        out.mu2 = out.mu1;
    } else {
        // mu1(mu2) = max (d - mu2 r)^+ is convex in mu2; minimise mu1 + mu2.
        double hi = 0.0;
        for (std::size_t k = 0; k < d.size(); ++k)
            if (r[k] > 0.0) hi = std::max(hi, d[k] / r[k]);
        auto mu1_of = [&](double m2) {
            double m1 = 0.0;
            for (std::size_t k = 0; k < d.size(); ++k) m1 = std::max(m1, d[k] - m2 * r[k]);
            return m1;
        };
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double lo = 0.0;
        for (int it = 0; it < 100 && hi - lo > 1e-12 * (1.0 + hi); ++it) {
            const double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
            if (mu1_of(m1) + m1 <= mu1_of(m2) + m2) hi = m2;
            else lo = m1;
        }
        out.mu2 = 0.5 * (lo + hi);
        out.mu1 = mu1_of(out.mu2);
        // Linear growth check: the envelope must survive doubling |p|.
        for (const auto& s : samples) {
            const Vec p2 = 2.0 * s.p;
            const double dd = eval_G(spec2, s.x, p2) - eval_G(spec1, s.x, p2);
            if (!std::isfinite(dd) || dd > 1.2 * (out.mu1 + out.mu2 * p2.norm()) + 1e-12) {
                out.bounded = false;
                break;
            }
        }
    }
    std::vector<double> env(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) env[k] = out.mu1 + out.mu2 * r[k];
    out.K_G = max_ratio(d, env);
    if (!std::isfinite(out.K_G)) out.bounded = false;
    return out;
}

ShiftDifferenceCheck check_shift_difference(const NormalShift& shift1, const NormalShift& shift2,
                                            const BoundaryDistance& distance,
                                            std::span<const BoundarySample> samples) {
    if (samples.empty()) throw ArgumentError("check_shift_difference needs samples");
    const double nu = std::max(shift1.spec.nu(), shift2.spec.nu());
    std::vector<double> lhs(samples.size()), env(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const auto& s = samples[k];
        lhs[k] = std::abs(shift1(s.x, s.p) - shift2(s.x, s.p));
        env[k] = (distance.mu1 + distance.mu2 * (1.0 + s.p.norm())) / nu;
    }
    const RatioFit f = fit_ratio(lhs, env);
    return {f.violations, f.K};
}

std::vector<BoundaryPair> make_boundary_pairs(const Domain& domain, std::size_t count, double p_max,
                                              std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = domain.dim();
    std::vector<BoundaryPair> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        BoundaryPair b;
        b.x = random_boundary_point(domain, rng);
        // Half the pairs are close along the same boundary component, half arbitrary.
        b.y = u(rng) < 0.5 ? nearby_boundary_point(domain, b.x, 0.1 * domain.inradius() * (2.0 * u(rng) - 1.0))
                           : random_boundary_point(domain, rng);
        b.p = random_in_ball(n, p_max, rng);
        b.q = u(rng) < 0.5 ? Vec(b.p + random_in_ball(n, 0.1 * p_max, rng)) : random_in_ball(n, p_max, rng);
        out.push_back(std::move(b));
    }
    return out;
}

double probe_HB2(const BoundarySpec& spec, std::span<const BoundaryPair> samples) {
    if (samples.empty()) throw ArgumentError("probe_HB2 needs samples");
    std::vector<double> lhs, env;
    for (const auto& s : samples) {
        lhs.push_back(std::abs(eval_G(spec, s.x, s.p) - eval_G(spec, s.y, s.q)));
        env.push_back((1.0 + s.p.norm() + s.q.norm()) * (s.x - s.y).norm() + (s.p - s.q).norm());
    }
    return max_ratio(lhs, env);
}

StableFit check_shift_bound(const NormalShift& shift, const Domain& domain, std::size_t count, double p_max,
                            std::uint64_t seed) {
    const double nu = shift.spec.nu();
    auto build = [&](std::size_t m, std::uint64_t sd, std::vector<double>& lhs, std::vector<double>& env) {
        for (const auto& s : make_boundary_samples(domain, m, p_max, sd)) {
            lhs.push_back(nu * std::abs(shift(s.x, s.p)));
            env.push_back(1.0 + s.p.norm());
        }
    };
    std::vector<double> l1, e1, l2, e2;
    build(count, seed, l1, e1);
    build(2 * count, seed + 1, l2, e2);
    return compare_fits(l1, e1, l2, e2);
}

StableFit check_shift_regularity(const NormalShift& shift, const Domain& domain, std::size_t count,
                                 double p_max, std::uint64_t seed) {
    const double nu = shift.spec.nu();
    auto build = [&](std::size_t m, std::uint64_t sd, std::vector<double>& lhs, std::vector<double>& env) {
        for (const auto& s : make_boundary_pairs(domain, m, p_max, sd)) {
            lhs.push_back(nu * std::abs(shift(s.x, s.p) - shift(s.y, s.q)));
            env.push_back((1.0 + s.p.norm() + s.q.norm()) * (s.x - s.y).norm() + (s.p - s.q).norm());
        }
    };
    std::vector<double> l1, e1, l2, e2;
    build(count, seed, l1, e1);
    build(2 * count, seed + 1, l2, e2);
    return compare_fits(l1, e1, l2, e2);
}

}  // namespace visclab
