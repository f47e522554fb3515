#pragma once

// Bounded smooth domains, the smoothed distance function d with n = -Dd,
// and the Cartesian grids used by the solver.

#include "visclab/core.hpp"
#include "visclab/schema.hpp"

#include <optional>
#include <random>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace visclab {

struct Interval {
    double a = 0.0;
    double b = 1.0;
};

/// Periodic in x1 with the given period; boundary is {x2 = 0} and {x2 = height}.
struct PeriodicStrip {
    double period = 1.0;
    double height = 1.0;
};

/// Disc of given radius centred at the origin.
struct Disc {
    double radius = 1.0;
};

class Domain {
public:
    using Shape = std::variant<Interval, PeriodicStrip, Disc>;

    explicit Domain(Shape shape);

    [[nodiscard]] const Shape& shape() const { return shape_; }
    [[nodiscard]] int dim() const;
    [[nodiscard]] double inradius() const;
    [[nodiscard]] double diameter() const;
    [[nodiscard]] bool solver_capable() const { return !std::holds_alternative<Disc>(shape_); }

    /// Distance to the boundary, positive inside and negative outside.
    [[nodiscard]] double signed_distance(const Vec& x) const;
    [[nodiscard]] bool contains(const Vec& x, double slack = 1e-12) const {
        return signed_distance(x) >= -slack;
    }
    /// Nearest boundary point (for the disc centre an arbitrary one).
    [[nodiscard]] Vec closest_boundary_point(const Vec& x) const;
    /// Unit outward normal at the boundary point nearest to x.
    [[nodiscard]] Vec boundary_normal(const Vec& x) const;

    /// Minimal-image difference x - y (periodic axis wrapped for the strip).
    [[nodiscard]] Vec difference(const Vec& x, const Vec& y) const;

    [[nodiscard]] Vec uniform_point(std::mt19937_64& rng) const;
    /// Points on the boundary, evenly spread; count >= 2.
    [[nodiscard]] std::vector<Vec> boundary_points(int count) const;
    /// Tensor or polar sampling of the closed domain with about `per_axis`
    /// points per direction.
    [[nodiscard]] std::vector<Vec> sample_points(int per_axis) const;

    [[nodiscard]] Json to_json() const;
    static Domain from_json(const Json& j, const std::string& path, SchemaErrors& errors);

private:
    Shape shape_;
};

/// Smooth W^{3,inf} extension of the boundary distance.
///
/// d = r0 * S(dist / r0) where S(t) = t on [0, 1/2], S' = 1 - B(2t - 1) on
/// [1/2, 1] with B the quintic smoothstep, and S = 3/4 beyond t = 1. Hence
/// d equals the distance for dist <= r0/2, plateaus at 0.75 r0, and has three
/// bounded derivatives.
class DistanceField {
public:
    struct Eval {
        double d = 0.0;
        Vec grad;
        Mat hess;
    };

    explicit DistanceField(Domain domain, std::optional<double> r0 = std::nullopt);

    [[nodiscard]] const Domain& domain() const { return domain_; }
    [[nodiscard]] int dim() const { return domain_.dim(); }
    [[nodiscard]] double r0() const { return r0_; }
    [[nodiscard]] double plateau() const { return 0.75 * r0_; }
    /// Upper bound for |D^3 d| on the closed domain.
    [[nodiscard]] double d3_bound() const { return d3_bound_; }

    /// Throws DomainError outside the closed domain.
    [[nodiscard]] Eval eval(const Vec& x) const;

    /// The one-dimensional profile S and its derivatives up to order three.
    static double profile(double t, int derivative = 0);

private:
    Domain domain_;
    double r0_;
    double d3_bound_;
};

DistanceField::Eval eval_distance(const DistanceField& field, const Vec& x);
Vec outward_normal(const DistanceField& field, const Vec& x);

struct W3Check {
    std::size_t violations = 0;
    double fitted_bound = 0.0;  // smallest constant replacing |D^3 d|_0 / 24
};

/// Midpoint Taylor inequality |d(x) - d(y) - (y - x).n((x+y)/2)| <= |D^3d|_0/24 |x-y|^3.
W3Check check_w3_inequality(const DistanceField& field, std::span<const std::pair<Vec, Vec>> samples);

class Grid {
public:
    /// Interval: `cells` = {n} gives n + 1 nodes including both endpoints.
    /// Strip: {n1, n2} gives n1 periodic columns and n2 + 1 rows.
    Grid(Domain domain, std::vector<int> cells);

    [[nodiscard]] const Domain& domain() const { return domain_; }
    [[nodiscard]] int dim() const { return domain_.dim(); }
    [[nodiscard]] int size() const { return static_cast<int>(nodes_.size()); }
    [[nodiscard]] const Vec& node(int k) const { return nodes_[static_cast<std::size_t>(k)]; }
    [[nodiscard]] const std::vector<Vec>& nodes() const { return nodes_; }
    [[nodiscard]] double h(int axis) const { return h_[static_cast<std::size_t>(axis)]; }
    [[nodiscard]] int count(int axis) const { return counts_[static_cast<std::size_t>(axis)]; }
    [[nodiscard]] const std::vector<int>& cells() const { return cells_; }
    [[nodiscard]] bool periodic(int axis) const { return dim() == 2 && axis == 0; }

    [[nodiscard]] int index(int i, int j = 0) const { return j * counts_[0] + i; }
    [[nodiscard]] std::pair<int, int> coords(int k) const {
        return {k % counts_[0], k / counts_[0]};
    }
    /// Neighbour offset along each axis; -1 when it leaves the grid.
    [[nodiscard]] int neighbor(int k, int di, int dj = 0) const;

    [[nodiscard]] const std::vector<int>& boundary_nodes() const { return boundary_; }
    [[nodiscard]] bool on_boundary(int k) const { return on_boundary_[static_cast<std::size_t>(k)] != 0; }
    /// Axis normal to the boundary (the last axis) and the step pointing inward.
    [[nodiscard]] int normal_axis() const { return dim() - 1; }
    [[nodiscard]] int inward_step(int k) const;

private:
    Domain domain_;
    std::vector<int> cells_;
    std::vector<int> counts_;
    std::vector<double> h_;
    std::vector<Vec> nodes_;
    std::vector<int> boundary_;
    std::vector<char> on_boundary_;
};

}  // namespace visclab
