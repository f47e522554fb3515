#include "visclab/fitting.hpp"

#include "visclab/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace visclab {

namespace {

// Absolute slack below which an excess counts as rounding.
double slack(double lhs) { return 1e-12 * (1.0 + std::abs(lhs)); }

void check_sizes(std::span<const double> lhs, std::span<const double> env) {
    if (lhs.size() != env.size()) throw ArgumentError("fit: size mismatch");
}

}  // namespace

double max_ratio(std::span<const double> lhs, std::span<const double> env) {
    check_sizes(lhs, env);
    double K = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        if (lhs[i] <= slack(lhs[i])) continue;
        if (env[i] <= 0.0) return std::numeric_limits<double>::infinity();
        K = std::max(K, lhs[i] / env[i]);
    }
    return K;
}

std::size_t count_violations(std::span<const double> lhs, std::span<const double> env, double K,
                             double margin) {
    check_sizes(lhs, env);
    std::size_t v = 0;
    for (std::size_t i = 0; i < lhs.size(); ++i)
        if (lhs[i] > margin * K * env[i] + slack(lhs[i])) ++v;
    return v;
}

RatioFit fit_ratio(std::span<const double> lhs, std::span<const double> env, double margin) {
    RatioFit f;
    f.K = max_ratio(lhs, env);
    f.violations = count_violations(lhs, env, f.K, margin);
    f.samples = lhs.size();
    return f;
}

double relative_drift(double a, double b, double floor) {
    if (!std::isfinite(a) || !std::isfinite(b)) return std::numeric_limits<double>::infinity();
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale <= floor ? 0.0 : std::abs(a - b) / scale;
}

StableFit compare_fits(std::span<const double> lhs_base, std::span<const double> env_base,
                       std::span<const double> lhs_refined, std::span<const double> env_refined,
                       double tolerance) {
    StableFit s;
    s.K_base = max_ratio(lhs_base, env_base);
    s.K_refined = max_ratio(lhs_refined, env_refined);
    s.drift = relative_drift(s.K_base, s.K_refined);
    s.stable = std::isfinite(s.K_base) && s.drift <= tolerance;
    s.violations = std::isfinite(s.K_base) ? count_violations(lhs_refined, env_refined, s.K_base)
                                           : lhs_refined.size();
    return s;
}

}  // namespace visclab
