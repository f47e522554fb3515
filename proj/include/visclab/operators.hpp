#pragma once

// Bellman-Isaacs operators
//
//   F(x, r, p, X) = inf_{i in Theta1} sup_{j in Theta2}
//                   { -tr[(sigma sigma^T)_ij(x) X] - b_ij(x).p + c_ij(x) r - f_ij(x) }
//
// over finite control lists, together with sample-based probes of the
// structural assumptions. The zeroth-order term enters as +c r so that F is
// increasing in r with rate min c.

#include "visclab/core.hpp"
#include "visclab/fields.hpp"
#include "visclab/geometry.hpp"

#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace visclab {

struct CoefficientSet {
    MatrixField sigma;
    VectorField b;
    ScalarField c;
    ScalarField f;

    /// a = sigma sigma^T at x.
    [[nodiscard]] Mat diffusion(const Vec& x) const {
        const Mat s = sigma(x);
        return s * s.transpose();
    }
};

struct ControlledCoefficients {
    int dim = 1;
    /// sets[i][j] for control pair (theta1_i, theta2_j).
    std::vector<std::vector<CoefficientSet>> sets;
    std::vector<std::string> labels1;
    std::vector<std::string> labels2;
    /// Declared Hoelder exponent of c and f (sigma, b are Lipschitz).
    double alpha = 1.0;

    [[nodiscard]] int n1() const { return static_cast<int>(sets.size()); }
    [[nodiscard]] int n2() const { return sets.empty() ? 0 : static_cast<int>(sets.front().size()); }
    [[nodiscard]] const CoefficientSet& at(int i, int j) const {
        return sets[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
};

enum class OperatorKind { Linear, Bellman, Isaacs };

class OperatorSpec {
public:
    OperatorSpec(OperatorKind kind, ControlledCoefficients coefficients);

    /// Single control pair with the given coefficients.
    static OperatorSpec linear(int dim, CoefficientSet set);

    [[nodiscard]] OperatorKind kind() const { return kind_; }
    [[nodiscard]] const ControlledCoefficients& coefficients() const { return coeffs_; }
    [[nodiscard]] int dim() const { return coeffs_.dim; }

    /// Value of the linear operator for one control pair.
    [[nodiscard]] double eval_pair(int i, int j, const Vec& x, double r, const Vec& p, const Mat& X) const;

    /// Checks c >= lambda > 0 and finiteness on the given points; returns issues found.
    [[nodiscard]] std::vector<std::string> invariant_issues(std::span<const Vec> points,
                                                            double lambda_min = 0.0) const;

    /// Copy with every coefficient of one kind perturbed by a constant.
    [[nodiscard]] OperatorSpec shifted(const std::string& which, double s) const;

    [[nodiscard]] Json to_json() const;
    static OperatorSpec from_json(const Json& j, int dim, const std::string& path, SchemaErrors& errors);

private:
    OperatorKind kind_;
    ControlledCoefficients coeffs_;
};

double eval_F(const OperatorSpec& spec, const Vec& x, double r, const Vec& p, const Mat& X);

struct ControlPair {
    int theta1 = 0;
    int theta2 = 0;
    bool operator==(const ControlPair&) const = default;
};

/// Control pair attaining eval_F; ties go to the lowest index.
ControlPair eval_argcontrols(const OperatorSpec& spec, const Vec& x, double r, const Vec& p, const Mat& X);

struct H3Sample {
    Vec x;
    Vec p;
    Mat X;
    double r = 0.0;
    double s = 0.0;
};

/// min over samples of (F(x,r,p,X) - F(x,s,p,X)) / (r - s).
double probe_H3(const OperatorSpec& spec, std::span<const H3Sample> samples);

/// Random (x, p, X, r, s) with r > s and |r|, |s| <= R.
std::vector<H3Sample> make_h3_samples(const OperatorSpec& spec, const Domain& domain, std::size_t count,
                                      double R, std::uint64_t seed);

struct CoefficientDistance {
    double delta1 = 0.0;
    double delta2 = 0.0;
};

/// delta1 = sup_controls (|c1 - c2|_0 + |f1 - f2|_0),
/// delta2^2 = sup_controls (|sigma1 - sigma2|_0^2 + |b1 - b2|_0^2), sups over `points`.
CoefficientDistance coefficient_distance(const OperatorSpec& spec1, const OperatorSpec& spec2,
                                         std::span<const Vec> points);

struct EpsEta {
    double eps = 0.1;
    double eta = 0.1;
};

struct H2barSample {
    Vec x, y;
    double r = 0.0;
    Vec p, q;
    Mat X, Y;
    double eps = 0.1;
    double eta = 0.1;
    double B = 0.0;
};

struct H2barOptions {
    double K = 1.0;       // constant in the side conditions
    double R = 1.0;       // |r| <= R
    double alpha = 1.0;   // Hoelder exponent in the envelope
};

/// Samples satisfying the side conditions |x-y| <= K eta eps, |p-q| <= K(eta^2+eps^2+B),
/// |p|+|q| <= K(eta/eps+eta^2+eps^2+B) and the doubled matrix inequality.
std::vector<H2barSample> make_h2bar_samples(const Domain& domain, std::span<const EpsEta> schedule,
                                            std::size_t count, const H2barOptions& options,
                                            std::uint64_t seed);

struct H2barProbe {
    double K_hat = 0.0;
    bool pass = false;
};

/// Smallest K with F(y,r,q,Y) - F(x,r,p,X) <= K(|x-y|^alpha + |x-y|^2/eps^2 + eta^2 + eps^2 + B).
H2barProbe probe_H2bar(const OperatorSpec& spec, std::span<const H2barSample> samples, double alpha);

/// Generates samples from the schedule and probes them.
H2barProbe probe_H2bar(const OperatorSpec& spec, const Domain& domain, std::span<const EpsEta> schedule,
                       std::size_t count, const H2barOptions& options, std::uint64_t seed);

struct H2barStability {
    double K_base = 0.0;
    double K_refined = 0.0;
    double drift = 0.0;
    bool stable = false;
};

/// Compares K_hat on (count, schedule) with (4 count, schedule extended by two
/// halvings of eps). Stable when the relative drift is at most 20%.
H2barStability h2bar_stability(const OperatorSpec& spec, const Domain& domain, std::span<const EpsEta> schedule,
                               std::size_t count, const H2barOptions& options, std::uint64_t seed);

/// Largest eigenvalue of a symmetric matrix; used by the matrix-order checks.
double max_eigenvalue(const Mat4& m);
double min_eigenvalue(const Mat4& m);

}  // namespace visclab
