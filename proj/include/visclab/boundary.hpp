#pragma once

// Neumann-type boundary nonlinearities G(x, p) and the normal shift C(x, p),
// the unique t with G(x, p + t n(x)) = 0.
//
// G is extended off the boundary (to a band V of width `extension_width`)
// by evaluating coefficients at the closest boundary point and using the
// normal there.

#include "visclab/core.hpp"
#include "visclab/fields.hpp"
#include "visclab/fitting.hpp"
#include "visclab/geometry.hpp"

#include <optional>
#include <random>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace visclab {

/// gamma . p - g, one entry of a controlled reflection table.
struct ObliqueTerm {
    VectorField gamma;
    ScalarField g;
};

class BoundarySpec {
public:
    struct Neumann {
        ScalarField g;
    };
    struct Oblique {
        VectorField gamma;
        ScalarField g;
    };
    struct Capillary {
        ScalarField theta;
    };
    /// inf over rows, sup over columns of gamma_ij . p - g_ij.
    struct ControlledReflection {
        std::vector<std::vector<ObliqueTerm>> sets;
    };
    using Variant = std::variant<Neumann, Oblique, Capillary, ControlledReflection>;

    BoundarySpec(Domain domain, Variant variant, std::optional<double> nu = std::nullopt,
                 std::optional<double> K = std::nullopt, std::optional<double> extension_width = std::nullopt);

    [[nodiscard]] const Domain& domain() const { return domain_; }
    [[nodiscard]] const Variant& variant() const { return variant_; }
    [[nodiscard]] int dim() const { return domain_.dim(); }
    [[nodiscard]] std::optional<double> declared_nu() const { return nu_; }
    [[nodiscard]] std::optional<double> declared_K() const { return K_; }
    [[nodiscard]] double extension_width() const { return width_; }
    [[nodiscard]] bool is_capillary() const { return std::holds_alternative<Capillary>(variant_); }
    [[nodiscard]] std::string type_name() const;

    /// Outward normal at the closest boundary point; DomainError outside V.
    [[nodiscard]] Vec normal(const Vec& x) const;

    /// Linear pieces: rows x columns of (gamma(x), g(x)). Neumann and oblique
    /// are 1 x 1; capillary has none (it is nonlinear).
    [[nodiscard]] int n1() const;
    [[nodiscard]] int n2() const;
    [[nodiscard]] std::pair<Vec, double> linear_term(int i, int j, const Vec& x) const;
    /// Capillary angle at the projection of x.
    [[nodiscard]] double theta(const Vec& x) const;

    /// Nominal constants: nu from HB1 evaluated analytically on boundary
    /// samples, K with |G(x, p)| <= K (1 + |p|). Declared values win.
    [[nodiscard]] double nu() const;
    [[nodiscard]] double K() const;

    /// Invariants: |theta| <= omega < 1, gamma . n > 0 (>= declared nu).
    [[nodiscard]] std::vector<std::string> invariant_issues(int boundary_samples = 64) const;

    /// Copy with g (or theta for capillary) shifted by s, or gamma shifted by s.
    [[nodiscard]] BoundarySpec shifted(const std::string& which, double s) const;

    [[nodiscard]] Json to_json() const;
    static BoundarySpec from_json(const Json& j, const Domain& domain, const std::string& path,
                                  SchemaErrors& errors);

private:
    Domain domain_;
    Variant variant_;
    std::optional<double> nu_;
    std::optional<double> K_;
    std::optional<double> width_decl_;
    double width_;
    double nu_nominal_ = 1.0;
    double K_nominal_ = 1.0;
};

double eval_G(const BoundarySpec& spec, const Vec& x, const Vec& p);

struct BoundarySample {
    Vec x;
    Vec p;
};

Vec random_boundary_point(const Domain& domain, std::mt19937_64& rng);

/// Boundary points times random gradients with |p| <= p_max.
std::vector<BoundarySample> make_boundary_samples(const Domain& domain, std::size_t count, double p_max,
                                                  std::uint64_t seed);

/// min over samples and mu of (G(x, p + mu n) - G(x, p)) / mu.
double probe_HB1(const BoundarySpec& spec, std::span<const BoundarySample> samples, std::span<const double> mus);

struct NormalShift {
    explicit NormalShift(BoundarySpec spec, double tol_scale = 1e-12, double growth = 2.0);

    BoundarySpec spec;
    double tol_scale;
    double growth;

    [[nodiscard]] double tolerance(const Vec& p) const { return tol_scale * (1.0 + p.norm()); }
    [[nodiscard]] double operator()(const Vec& x, const Vec& p) const;
};

/// Root of t -> G(x, p + t n(x)); AssumptionError when no bracket is found
/// within the growth bound nu |C| <= K (1 + |p|).
double compute_normal_shift(const NormalShift& shift, const Vec& x, const Vec& p);

struct BoundaryDistance {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double K_G = 0.0;
    bool bounded = true;
    bool closed_form = false;
};

/// (mu1, mu2) with G2 - G1 <= K_G (mu1 + mu2 |p|). Closed form for pairs of
/// oblique-type conditions with matching control grids and for capillary
/// pairs; otherwise a least-max envelope fit over the samples with K_G = 1.
BoundaryDistance boundary_distance(const BoundarySpec& spec1, const BoundarySpec& spec2,
                                   std::span<const BoundarySample> samples);

struct ShiftDifferenceCheck {
    std::size_t violations = 0;
    double K_C = 0.0;
};

/// Fits |C1 - C2| <= K_C / (nu1 v nu2) (mu1 + mu2 (1 + |p|)).
ShiftDifferenceCheck check_shift_difference(const NormalShift& shift1, const NormalShift& shift2,
                                            const BoundaryDistance& distance,
                                            std::span<const BoundarySample> samples);

struct BoundaryPair {
    Vec x, p, y, q;
};

std::vector<BoundaryPair> make_boundary_pairs(const Domain& domain, std::size_t count, double p_max,
                                              std::uint64_t seed);

/// Smallest K with |G(x,p) - G(y,q)| <= K ((1 + |p| + |q|)|x - y| + |p - q|).
double probe_HB2(const BoundarySpec& spec, std::span<const BoundaryPair> samples);

/// nu |C(x, p)| <= K (1 + |p|) on samples and on a doubled set.
StableFit check_shift_bound(const NormalShift& shift, const Domain& domain, std::size_t count, double p_max,
                            std::uint64_t seed);

/// nu |C(x,p) - C(y,q)| <= K ((1 + |p| + |q|)|x - y| + |p - q|) on pairs and a doubled set.
StableFit check_shift_regularity(const NormalShift& shift, const Domain& domain, std::size_t count,
                                 double p_max, std::uint64_t seed);

}  // namespace visclab
