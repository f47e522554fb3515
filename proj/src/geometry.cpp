#include "visclab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace visclab {

namespace {

// Quintic smoothstep B(u) = 6u^5 - 15u^4 + 10u^3 and its derivatives.
double smoothstep(double u, int derivative) {
    switch (derivative) {
        case 0: return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
        case 1: return 30.0 * u * u * (1.0 - u) * (1.0 - u);
        case 2: return 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
        default: return 60.0 - 360.0 * u + 360.0 * u * u;
    }
}

constexpr double kMaxS2 = 3.75;               // max |S''| = 2 max B'
const double kMaxS3 = 40.0 / std::sqrt(3.0);  // max |S'''| = 4 max |B''|

}  // namespace

Domain::Domain(Shape shape) : shape_(shape) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Interval>) {
                if (!(s.a < s.b)) throw ConfigError("interval requires a < b");
            } else if constexpr (std::is_same_v<T, PeriodicStrip>) {
                if (!(s.period > 0.0 && s.height > 0.0))
                    throw ConfigError("strip requires positive period and height");
            } else {
                if (!(s.radius > 0.0)) throw ConfigError("disc requires a positive radius");
            }
        },
        shape_);
}

int Domain::dim() const {
    return std::holds_alternative<Interval>(shape_) ? 1 : 2;
}

double Domain::inradius() const {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Interval>) return 0.5 * (s.b - s.a);
            else if constexpr (std::is_same_v<T, PeriodicStrip>) return 0.5 * s.height;
            else return s.radius;
        },
        shape_);
}

double Domain::diameter() const {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Interval>) return s.b - s.a;
            else if constexpr (std::is_same_v<T, PeriodicStrip>)
                return std::hypot(0.5 * s.period, s.height);
            else return 2.0 * s.radius;
        },
        shape_);
}

double Domain::signed_distance(const Vec& x) const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Interval>) return std::min(x(0) - s.a, s.b - x(0));
            else if constexpr (std::is_same_v<T, PeriodicStrip>) return std::min(x(1), s.height - x(1));
            else return s.radius - x.norm();
        },
        shape_);
}

Vec Domain::closest_boundary_point(const Vec& x) const {
    return std::visit(
        [&](const auto& s) -> Vec {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Interval>) {
                return make_vec(x(0) - s.a <= s.b - x(0) ? s.a : s.b);
            } else if constexpr (std::is_same_v<T, PeriodicStrip>) {
                return make_vec(x(0), x(1) <= s.height - x(1) ? 0.0 : s.height);
            } else {
                const double r = x.norm();
                if (r == 0.0) return make_vec(s.radius, 0.0);
                return Vec(x * (s.radius / r));
            }
        },
        shape_);
}

Vec Domain::boundary_normal(const Vec& x) const {
    return std::visit(
        [&](const auto& s) -> Vec {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Interval>) {
                return make_vec(x(0) - s.a <= s.b - x(0) ? -1.0 : 1.0);
            } else if constexpr (std::is_same_v<T, PeriodicStrip>) {
                return make_vec(0.0, x(1) <= s.height - x(1) ? -1.0 : 1.0);
            } else {
                const double r = x.norm();
                if (r == 0.0) return make_vec(1.0, 0.0);
                return Vec(x / r);
            }
        },
        shape_);
}

Vec Domain::difference(const Vec& x, const Vec& y) const {
    Vec d = x - y;
    if (const auto* s = std::get_if<PeriodicStrip>(&shape_)) {
        d(0) -= s->period * std::round(d(0) / s->period);
    }
    return d;
}

Vec Domain::uniform_point(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::visit(
        [&](const auto& s) -> Vec {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Interval>) {
                return make_vec(s.a + (s.b - s.a) * u(rng));
            } else if constexpr (std::is_same_v<T, PeriodicStrip>) {
                const double x0 = s.period * u(rng);
                return make_vec(x0, s.height * u(rng));
            } else {
                const double r = s.radius * std::sqrt(u(rng));
                const double t = 2.0 * kPi * u(rng);
                return make_vec(r * std::cos(t), r * std::sin(t));
            }
        },
        shape_);
}

std::vector<Vec> Domain::boundary_points(int count) const {
    std::vector<Vec> out;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Interval>) {
                out.push_back(make_vec(s.a));
                out.push_back(make_vec(s.b));
            } else if constexpr (std::is_same_v<T, PeriodicStrip>) {
                const int per_side = std::max(1, count / 2);
                for (int side = 0; side < 2; ++side)
                    for (int i = 0; i < per_side; ++i)
                        out.push_back(make_vec(s.period * i / per_side, side == 0 ? 0.0 : s.height));
            } else {
                for (int i = 0; i < std::max(count, 2); ++i) {
                    const double t = 2.0 * kPi * i / std::max(count, 2);
                    out.push_back(make_vec(s.radius * std::cos(t), s.radius * std::sin(t)));
                }
            }
        },
        shape_);
    return out;
}

std::vector<Vec> Domain::sample_points(int per_axis) const {
    per_axis = std::max(per_axis, 2);
    std::vector<Vec> out;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Interval>) {
                for (int i = 0; i < per_axis; ++i)
                    out.push_back(make_vec(s.a + (s.b - s.a) * i / (per_axis - 1)));
            } else if constexpr (std::is_same_v<T, PeriodicStrip>) {
                for (int j = 0; j < per_axis; ++j)
                    for (int i = 0; i < per_axis; ++i)
                        out.push_back(make_vec(s.period * i / per_axis, s.height * j / (per_axis - 1)));
            } else {
                out.push_back(make_vec(0.0, 0.0));
                for (int j = 1; j < per_axis; ++j) {
                    const double r = s.radius * j / (per_axis - 1);
                    const int ring = std::max(4, 4 * j);
                    for (int i = 0; i < ring; ++i) {
                        const double t = 2.0 * kPi * i / ring;
                        out.push_back(make_vec(r * std::cos(t), r * std::sin(t)));
                    }
                }
            }
        },
        shape_);
    return out;
}

Json Domain::to_json() const {
    return std::visit(
        [](const auto& s) -> Json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Interval>)
                return {{"type", "interval"}, {"a", s.a}, {"b", s.b}};
            else if constexpr (std::is_same_v<T, PeriodicStrip>)
                return {{"type", "strip"}, {"period", s.period}, {"height", s.height}};
            else return {{"type", "disc"}, {"radius", s.radius}};
        },
        shape_);
}

Domain Domain::from_json(const Json& j, const std::string& path, SchemaErrors& errors) {
    ObjectReader r(j, path, errors);
    Shape shape = Interval{};
    if (r.valid()) {
        const std::string type = r.string("type");
        if (type == "interval") {
            shape = Interval{r.number("a"), r.number("b")};
        } else if (type == "strip") {
            shape = PeriodicStrip{r.number("period"), r.number("height")};
        } else if (type == "disc") {
            shape = Disc{r.number("radius")};
        } else if (!type.empty()) {
            r.fail("type", "unknown domain type '" + type + "'");
        }
        r.finish();
    }
    try {
        return Domain(shape);
    } catch (const ConfigError& e) {
        errors.add(path, e.what());
        return Domain(Interval{});
    }
}

DistanceField::DistanceField(Domain domain, std::optional<double> r0)
    : domain_(std::move(domain)), r0_(r0.value_or(0.2 * domain_.inradius())) {
    if (!(r0_ > 0.0)) throw ConfigError("distance saturation radius r0 must be positive");
    if (r0_ > domain_.inradius()) throw ConfigError("distance saturation radius r0 exceeds the inradius");
    if (plateau() > 1.0) throw ConfigError("distance plateau 0.75*r0 exceeds 1");
    d3_bound_ = kMaxS3 / (r0_ * r0_);
    if (const auto* disc = std::get_if<Disc>(&domain_.shape())) {
        // Radial third derivative picks up curvature terms of order 1/r and 1/r^2
        // on the annulus where d is not constant.
        const double rmin = disc->radius - r0_;
        if (rmin <= 0.0) throw ConfigError("disc radius must exceed r0");
        d3_bound_ += 3.0 * kMaxS2 / (r0_ * rmin) + 3.0 / (rmin * rmin);
    }
}

double DistanceField::profile(double t, int derivative) {
    if (t <= 0.5) {
        if (derivative == 0) return t;
        return derivative == 1 ? 1.0 : 0.0;
    }
    if (t >= 1.0) return derivative == 0 ? 0.75 : 0.0;
    const double u = 2.0 * t - 1.0;
    switch (derivative) {
        case 0: {
            // Integral of B from 0 to u is u^6 - 3u^5 + 2.5u^4.
            const double ib = u * u * u * u * (2.5 + u * (-3.0 + u));
            return 0.5 + 0.5 * (u - ib);
        }
        case 1: return 1.0 - smoothstep(u, 0);
        case 2: return -2.0 * smoothstep(u, 1);
        default: return -4.0 * smoothstep(u, 2);
    }
}

DistanceField::Eval DistanceField::eval(const Vec& x) const {
    if (x.size() != dim()) throw ArgumentError("point dimension does not match the domain");
    const double dist = domain_.signed_distance(x);
    if (dist < -1e-12) throw DomainError("point outside the closed domain");
    const double t = std::max(dist, 0.0) / r0_;
    const double s0 = profile(t, 0);
    const double s1 = profile(t, 1);
    const double s2 = profile(t, 2);

    Eval out;
    out.d = r0_ * s0;
    const int n = dim();
    // grad(dist) is minus the outward normal; hess(dist) vanishes except on the disc.
    const Vec gdist = -domain_.boundary_normal(x);
    Mat hdist = Mat::Zero(n, n);
    if (std::holds_alternative<Disc>(domain_.shape()) && s1 != 0.0) {
        const double r = x.norm();
        const Vec xh = x / r;
        hdist = -(Mat::Identity(2, 2) - xh * xh.transpose()) / r;
    }
    out.grad = s1 * gdist;
    out.hess = (s2 / r0_) * gdist * gdist.transpose() + s1 * hdist;
    return out;
}

DistanceField::Eval eval_distance(const DistanceField& field, const Vec& x) {
    return field.eval(x);
}

Vec outward_normal(const DistanceField& field, const Vec& x) {
    return -field.eval(x).grad;
}

W3Check check_w3_inequality(const DistanceField& field, std::span<const std::pair<Vec, Vec>> samples) {
    if (samples.empty()) throw ArgumentError("check_w3_inequality: empty sample list");
    const double bound = field.d3_bound() / 24.0;
    W3Check out;
    for (const auto& [x, y] : samples) {
        const auto ex = field.eval(x);
        const auto ey = field.eval(y);
        const Vec mid = 0.5 * (x + y);
        const Vec n = outward_normal(field, mid);
        const Vec dxy = x - y;
        const double r = dxy.norm();
        const double lhs = std::abs(ex.d - ey.d - (y - x).dot(n));
        // Rounding allowance for the two evaluations and the inner product.
        const double slack = 8.0 * std::numeric_limits<double>::epsilon() *
                             (std::abs(ex.d) + std::abs(ey.d) + r);
        if (lhs > bound * r * r * r + slack) ++out.violations;
        if (r > 0.0) out.fitted_bound = std::max(out.fitted_bound, std::max(lhs - slack, 0.0) / (r * r * r));
    }
    return out;
}

Grid::Grid(Domain domain, std::vector<int> cells) : domain_(std::move(domain)), cells_(std::move(cells)) {
    if (!domain_.solver_capable()) throw ConfigError("grids are only supported on intervals and strips");
    if (static_cast<int>(cells_.size()) != domain_.dim())
        throw ConfigError("grid cell counts must match the domain dimension");
    for (int c : cells_)
        if (c < 2) throw ConfigError("grid needs at least two cells per axis");
    if (const auto* iv = std::get_if<Interval>(&domain_.shape())) {
        counts_ = {cells_[0] + 1};
        h_ = {(iv->b - iv->a) / cells_[0]};
        for (int i = 0; i <= cells_[0]; ++i) nodes_.push_back(make_vec(iv->a + i * h_[0]));
        on_boundary_.assign(nodes_.size(), 0);
        boundary_ = {0, cells_[0]};
    } else {
        const auto& st = std::get<PeriodicStrip>(domain_.shape());
        counts_ = {cells_[0], cells_[1] + 1};
        h_ = {st.period / cells_[0], st.height / cells_[1]};
        for (int j = 0; j < counts_[1]; ++j)
            for (int i = 0; i < counts_[0]; ++i) nodes_.push_back(make_vec(i * h_[0], j * h_[1]));
        on_boundary_.assign(nodes_.size(), 0);
        for (int i = 0; i < counts_[0]; ++i) boundary_.push_back(index(i, 0));
        for (int i = 0; i < counts_[0]; ++i) boundary_.push_back(index(i, counts_[1] - 1));
    }
    for (int k : boundary_) on_boundary_[static_cast<std::size_t>(k)] = 1;
}

int Grid::neighbor(int k, int di, int dj) const {
    auto [i, j] = coords(k);
    i += di;
    j += dj;
    if (dim() == 1) {
        if (dj != 0 || i < 0 || i >= counts_[0]) return -1;
        return i;
    }
    i = ((i % counts_[0]) + counts_[0]) % counts_[0];
    if (j < 0 || j >= counts_[1]) return -1;
    return index(i, j);
}

int Grid::inward_step(int k) const {
    const auto [i, j] = coords(k);
    if (dim() == 1) return i == 0 ? 1 : -1;
    return j == 0 ? 1 : -1;
}

}  // namespace visclab
