#pragma once

// Least-max (Chebyshev) constant fits: the smallest K with lhs <= K * env on
// every sample, and the resampling test used to call such a K "stable".

#include <cstddef>
#include <span>

namespace visclab {

struct RatioFit {
    double K = 0.0;
    std::size_t violations = 0;
    std::size_t samples = 0;
};

/// K = max lhs / env (pairs with env = 0 must have lhs ~ 0, otherwise K = inf).
double max_ratio(std::span<const double> lhs, std::span<const double> env);

/// Samples with lhs > margin * K * env, up to rounding.
std::size_t count_violations(std::span<const double> lhs, std::span<const double> env, double K,
                             double margin = 1.1);

/// Fit K and count violations at the fitted K (+margin).
RatioFit fit_ratio(std::span<const double> lhs, std::span<const double> env, double margin = 1.1);

struct StableFit {
    double K_base = 0.0;
    double K_refined = 0.0;
    double drift = 0.0;
    bool stable = false;
    /// Refined samples exceeding 1.1 * K_base * env.
    std::size_t violations = 0;
};

/// Relative change |a - b| / max(|a|, |b|); 0 when both are below `floor`
/// (constants that vanish up to rounding).
double relative_drift(double a, double b, double floor = 1e-9);

/// Compares a base fit with a fit on a refined sample set; stable when the
/// relative drift is at most `tolerance`.
StableFit compare_fits(std::span<const double> lhs_base, std::span<const double> env_base,
                       std::span<const double> lhs_refined, std::span<const double> env_refined,
                       double tolerance = 0.2);

}  // namespace visclab
