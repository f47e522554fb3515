#pragma once

// Desk-scale studies: vanishing-viscosity rate, continuous-dependence
// envelope, the lemma checks, probes, and a plain solve. Every study returns
// a Report; reports carry no timing so two runs of one config are
// byte-identical.

#include "visclab/boundary.hpp"
#include "visclab/geometry.hpp"
#include "visclab/operators.hpp"
#include "visclab/schema.hpp"
#include "visclab/solver.hpp"
#include "visclab/testfn.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace visclab {

struct Problem {
    Domain domain;
    OperatorSpec op;
    BoundarySpec boundary;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least squares of log error on log scale. Two or more pairs; nonpositive
/// entries are an ArgumentError.
RateFit fit_rate(std::span<const std::pair<double, double>> pairs);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    /// Header row plus one line per row, numbers as %.17g.
    [[nodiscard]] std::string csv() const;
};

struct Report {
    std::string study;
    bool pass = true;
    /// False when a solve gave up; the tables hold what was finished.
    bool converged = true;
    Json summary = Json::object();
    std::vector<std::pair<std::string, Table>> tables;

    [[nodiscard]] Json to_json() const;
    /// <study>.json and <study>_<table>.csv inside `dir`.
    void write(const std::filesystem::path& dir) const;
};

// ---------------------------------------------------------------- studies

struct RateStudy {
    std::vector<double> mu_schedule;  // strictly decreasing
    std::vector<int> cells;
    int reference_factor = 4;

    static std::vector<double> default_schedule();  // 2^-2 ... 2^-9
};

/// |u - u_mu|_0 against a mu = 0 reference on a grid reference_factor times
/// finer; pass when slope >= beta_hat/2 - 0.1 and the errors do not increase
/// as mu decreases (1e-12 slack).
Report run_vv_rate(const Problem& problem, const SolveParams& params, const RateStudy& study,
                   const SchemeOptions& scheme = {});

struct Perturbation {
    std::string name;
    std::string target;  // operator | boundary
    std::string which;   // sigma, b, c, f | g, gamma, theta
    std::vector<double> magnitudes;
};

struct ContDepStudy {
    std::vector<int> cells;
    std::vector<Perturbation> families;
    std::optional<double> C_declared;
    std::size_t boundary_samples = 256;
    double p_max = 4.0;
};

/// R = lambda |u1 - u2|_0 / (delta1 + delta2^ab + mu1/nu + (mu2/nu)^ab) per
/// magnitude, ab = min(alpha, beta_hat). A family passes when max R <= 10
/// median R (and R <= C when declared). f-shifts on constant c also check
/// |u1 - u2|_0 = |s| / lambda to 1e-8.
Report run_cont_dep(const Problem& problem, const SolveParams& params, const ContDepStudy& study,
                    std::uint64_t seed, const SchemeOptions& scheme = {});

struct LemguyGridSpec {
    int x_count = 25;
    int p_count = 51;
    double p_max = 4.0;
    int a_levels = 8;
    double a_max = 0.5;
};

struct LemmaStudy {
    /// Saturation radius of d; defaults to the inradius.
    std::optional<double> r0;
    int quadrature_order = 16;
    double alpha_bar = 1.0;
    std::vector<double> eps_levels{0.2, 0.1, 0.05, 0.025};
    std::size_t samples = 10000;
    double K1 = 1.0;
    LemguyGridSpec lemguy;
    /// Second boundary condition for lem_BC: the first one shifted. Empty
    /// picks theta for capillary conditions and g otherwise.
    std::string partner_which;
    double partner_shift = 0.1;
    int refine_starts = 8;
};

/// lemguy on a nested (x, p, a) grid, lem_pos by calibration, lem_BC with its
/// B = 0 negative control, lem_deriv at A, B from the lem_BC calibration.
/// Constants are fitted on one draw and checked on an independent one.
Report run_lemma_check(const Problem& problem, const LemmaStudy& study, std::uint64_t seed);

struct ProbeStudy {
    std::size_t samples = 256;
    double p_max = 4.0;
    std::optional<double> lambda;  // declared lower bound for c
};

/// lambda from (H3), nu from (HB1), coefficient invariants.
Report run_probe(const Problem& problem, const ProbeStudy& study, std::uint64_t seed);

Report run_solve(const Problem& problem, const SolveParams& params, const std::vector<int>& cells,
                 double mu = 0.0, const SchemeOptions& scheme = {});

Report run_holder(const Problem& problem, const SolveParams& params, const std::vector<int>& cells,
                  const SchemeOptions& scheme = {});

/// Max-norm error against `exact` on successive grids; pass when every
/// consecutive ratio lies in [3.5, 4.5].
Report run_refinement(const Problem& problem, const SolveParams& params, std::span<const int> cells,
                      const std::function<double(const Vec&)>& exact, const SchemeOptions& scheme = {});

}  // namespace visclab
