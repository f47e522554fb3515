#pragma once

// Monotone finite differences for F(x, u, Du, D^2u) = mu Delta u with a
// Neumann-type boundary condition, solved by policy iteration.
//
// Interior: central second differences (Kushner-Dupuis for the mixed term)
// and upwinded drift. Boundary: G imposed strongly with a three-point
// one-sided normal difference. Its far point is eliminated with the row of
// the inward neighbour, which keeps the system an M-matrix; where that
// fails for some control the node falls back to a two-point difference.

#include "visclab/boundary.hpp"
#include "visclab/core.hpp"
#include "visclab/geometry.hpp"
#include "visclab/operators.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace visclab {

class NonconvergenceError : public Error {
public:
    NonconvergenceError(const std::string& what, std::vector<double> history)
        : Error(what), history_(std::move(history)) {}
    [[nodiscard]] const std::vector<double>& history() const { return history_; }

private:
    std::vector<double> history_;
};

/// Sparse row: sum coef * u - rhs.
struct Row {
    std::vector<std::pair<int, double>> coef;
    double rhs = 0.0;
    /// Boundary row whose far point is eliminated before the linear solve.
    bool eliminate = false;

    [[nodiscard]] double at(int k) const;
    [[nodiscard]] double apply(std::span<const double> u) const;
    void add(int k, double c);
};

enum class BoundaryForm { Strong, Weak };

struct SchemeOptions {
    /// Weak: boundary nodes use min(equation row, boundary row).
    BoundaryForm form = BoundaryForm::Strong;
    bool second_order_boundary = true;
};

class Discretization {
public:
    Discretization(Grid grid, OperatorSpec op, BoundarySpec boundary, double mu = 0.0, SchemeOptions options = {});

    [[nodiscard]] const Grid& grid() const { return grid_; }
    [[nodiscard]] const OperatorSpec& op() const { return op_; }
    [[nodiscard]] const BoundarySpec& boundary() const { return bc_; }
    [[nodiscard]] double mu() const { return mu_; }
    [[nodiscard]] const SchemeOptions& options() const { return options_; }
    [[nodiscard]] bool second_order_at(int k) const { return second_order_[static_cast<std::size_t>(k)] != 0; }

    /// Candidate rows at node k: inf over the outer index of sup over the
    /// inner one. `g` is the frozen capillary right-hand side at k.
    [[nodiscard]] std::vector<std::vector<Row>> family(int k, double g = 0.0) const;

    /// Interior row of control pair (i, j); off-grid neighbours dropped.
    [[nodiscard]] Row interior_row(int k, int i, int j) const;
    /// Linear boundary row gamma . D_h u - g (capillary: gamma = n).
    [[nodiscard]] Row boundary_row(int k, const Vec& gamma, double g) const;

    /// Discrete gradient at a boundary node as used by the boundary rows
    /// (normal part one-sided, tangential part central).
    [[nodiscard]] Vec boundary_gradient(int k, std::span<const double> u) const;

private:
    Grid grid_;
    OperatorSpec op_;
    BoundarySpec bc_;
    double mu_;
    SchemeOptions options_;
    std::vector<char> second_order_;
};

struct Policy {
    std::vector<int> outer;
    std::vector<int> inner;
};

/// Linear system for frozen controls and frozen capillary data; boundary
/// rows arrive with their far point eliminated. SchemeError on a
/// nonpositive diagonal or positive off-diagonal.
std::vector<Row> assemble(const Discretization& disc, const Policy& policy, std::span<const double> boundary_g);

struct SolveParams {
    double tol = 1e-10;
    int max_policy_iters = 200;
    double linear_tol = 1e-12;
    double damping = 0.5;
    int max_picard_iters = 400;
};

struct SolutionField {
    Grid grid;
    std::vector<double> values;
    double residual_norm = 0.0;
    int iterations = 0;  // linear solves
    std::vector<double> residual_history;
};

/// max_k |inf_i sup_j R_ij(u)_k| / diagonal of the attaining row.
double residual_norm(const Discretization& disc, std::span<const double> u);

SolutionField solve(const Discretization& disc, const SolveParams& params = {});

/// Direct tridiagonal solve in 1D; BiCGSTAB with ILUT (SparseLU fallback) in 2D.
std::vector<double> solve_linear(const Grid& grid, const std::vector<Row>& rows, double tol);

struct ComparisonTrial {
    Discretization sub;
    Discretization super;
};

/// Randomized problems with f_sub <= f_super and g_sub <= g_super
/// (theta for capillary), Bellman operators with two controls.
std::vector<ComparisonTrial> make_comparison_trials(const Grid& grid, std::size_t count, std::uint64_t seed);

/// Nodes with u_sub > u_super + 1e-10, summed over trials.
std::size_t discrete_comparison_check(std::span<const ComparisonTrial> trials, const SolveParams& params = {});

struct HolderEstimate {
    double beta = 1.0;
    double seminorm = 0.0;
};

/// Log-log fit of the discrete modulus of continuity over r in [4h, diam/4].
HolderEstimate holder_estimate(const SolutionField& u);
HolderEstimate holder_estimate(const Grid& grid, std::span<const double> values);

}  // namespace visclab
