#include "visclab/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace visclab {

// ---------------------------------------------------------------- rows

double Row::at(int k) const {
    for (const auto& [i, c] : coef)
        if (i == k) return c;
    return 0.0;
}

double Row::apply(std::span<const double> u) const {
    double s = -rhs;
    for (const auto& [i, c] : coef) s += c * u[static_cast<std::size_t>(i)];
    return s;
}

void Row::add(int k, double c) {
    for (auto& [i, v] : coef)
        if (i == k) {
            v += c;
            return;
        }
    coef.emplace_back(k, c);
}

namespace {

int step_along(const Grid& grid, int k, int axis, int d) {
    return axis == 0 ? grid.neighbor(k, d, 0) : grid.neighbor(k, 0, d);
}

/// Far point k2 of the three-point boundary difference at k.
std::pair<int, int> inward_points(const Grid& grid, int k) {
    const int l = grid.normal_axis();
    const int s = grid.inward_step(k);
    return {step_along(grid, k, l, s), step_along(grid, k, l, 2 * s)};
}

Row combine(Row a, const Row& b, double kappa, int drop) {
    for (const auto& [i, c] : b.coef) a.add(i, kappa * c);
    a.rhs += kappa * b.rhs;
    std::erase_if(a.coef, [&](const auto& e) { return e.first == drop; });
    a.eliminate = false;
    return a;
}

bool monotone(const Row& r, int k, double rel = 1e-12) {
    const double d = r.at(k);
    if (!(d > 0.0)) return false;
    for (const auto& [i, c] : r.coef)
        if (i != k && c > rel * d) return false;
    return true;
}

}  // namespace

// ---------------------------------------------------------------- discretization

Discretization::Discretization(Grid grid, OperatorSpec op, BoundarySpec boundary, double mu, SchemeOptions options)
    : grid_(std::move(grid)), op_(std::move(op)), bc_(std::move(boundary)), mu_(mu), options_(options) {
    if (op_.dim() != grid_.dim() || bc_.dim() != grid_.dim()) throw ConfigError("dimension mismatch in problem");
    if (!(mu_ >= 0.0) || !std::isfinite(mu_)) throw ConfigError("viscosity must be finite and nonnegative");
    second_order_.assign(static_cast<std::size_t>(grid_.size()), 0);
    if (!options_.second_order_boundary) return;
    for (int k : grid_.boundary_nodes()) {
        const auto [k1, k2] = inward_points(grid_, k);
        if (k1 < 0 || k2 < 0 || grid_.on_boundary(k1)) continue;
        second_order_[static_cast<std::size_t>(k)] = 1;
        bool ok = true;
        for (const auto& opts : family(k, 0.0)) {
            for (const Row& rb : opts) {
                if (!rb.eliminate) continue;
                for (int i = 0; i < op_.coefficients().n1() && ok; ++i)
                    for (int j = 0; j < op_.coefficients().n2() && ok; ++j) {
                        const Row r1 = interior_row(k1, i, j);
                        const double w_up = -r1.at(k2);
                        if (!(w_up > 0.0)) {
                            ok = false;
                            break;
                        }
                        ok = monotone(combine(rb, r1, rb.at(k2) / w_up, k2), k);
                    }
            }
        }
        second_order_[static_cast<std::size_t>(k)] = ok ? 1 : 0;
    }
}

Row Discretization::interior_row(int k, int i, int j) const {
    const Vec& x = grid_.node(k);
    const CoefficientSet& s = op_.coefficients().at(i, j);
    const int n = grid_.dim();
    Mat a = s.diffusion(x);
    a += mu_ * Mat::Identity(n, n);
    const Vec b = s.b(x);
    Row r;
    r.rhs = s.f(x);
    double diag = s.c(x);
    auto link = [&](int nb, double w) {
        if (nb < 0 || w == 0.0) return;
        r.add(nb, -w);
        diag += w;
    };
    const double cross = n == 2 ? std::abs(a(0, 1)) / (grid_.h(0) * grid_.h(1)) : 0.0;
    for (int l = 0; l < n; ++l) {
        const double h = grid_.h(l);
        const double w = a(l, l) / (h * h) - cross;
        if (w < 0.0)
            throw SchemeError("scheme not monotone at node " + std::to_string(k) +
                              ": mixed diffusion dominates the axis term");
        link(step_along(grid_, k, l, +1), w + std::max(b(l), 0.0) / h);
        link(step_along(grid_, k, l, -1), w + std::max(-b(l), 0.0) / h);
    }
    if (cross > 0.0) {
        const int t = a(0, 1) > 0.0 ? 1 : -1;
        link(grid_.neighbor(k, 1, t), cross);
        link(grid_.neighbor(k, -1, -t), cross);
    }
    r.add(k, diag);
    // keep the diagonal first
    std::rotate(r.coef.begin(), r.coef.end() - 1, r.coef.end());
    return r;
}

Row Discretization::boundary_row(int k, const Vec& gamma, double g) const {
    const int l = grid_.normal_axis();
    const int s = grid_.inward_step(k);
    const double h = grid_.h(l);
    const auto [k1, k2] = inward_points(grid_, k);
    Row r;
    r.rhs = g;
    const double gl = gamma(l) * s;
    if (second_order_[static_cast<std::size_t>(k)]) {
        r.add(k, -1.5 * gl / h);
        r.add(k1, 2.0 * gl / h);
        r.add(k2, -0.5 * gl / h);
        r.eliminate = true;
    } else {
        r.add(k, -gl / h);
        r.add(k1, gl / h);
    }
    if (grid_.dim() == 2 && gamma(0) != 0.0) {
        const double h0 = grid_.h(0);
        if (gamma(0) > 0.0) {
            r.add(k, gamma(0) / h0);
            r.add(grid_.neighbor(k, -1, 0), -gamma(0) / h0);
        } else {
            r.add(k, -gamma(0) / h0);
            r.add(grid_.neighbor(k, 1, 0), gamma(0) / h0);
        }
    }
    return r;
}

Vec Discretization::boundary_gradient(int k, std::span<const double> u) const {
    const int n = grid_.dim();
    const int l = grid_.normal_axis();
    const int s = grid_.inward_step(k);
    const double h = grid_.h(l);
    const auto [k1, k2] = inward_points(grid_, k);
    auto U = [&](int i) { return u[static_cast<std::size_t>(i)]; };
    Vec p = Vec::Zero(n);
    p(l) = second_order_[static_cast<std::size_t>(k)] ? s * (-1.5 * U(k) + 2.0 * U(k1) - 0.5 * U(k2)) / h
                                                      : s * (U(k1) - U(k)) / h;
    if (n == 2) p(0) = (U(grid_.neighbor(k, 1, 0)) - U(grid_.neighbor(k, -1, 0))) / (2.0 * grid_.h(0));
    return p;
}

std::vector<std::vector<Row>> Discretization::family(int k, double g) const {
    const auto& cc = op_.coefficients();
    std::vector<std::vector<Row>> out;
    auto add_operator = [&] {
        for (int i = 0; i < cc.n1(); ++i) {
            std::vector<Row> opts;
            for (int j = 0; j < cc.n2(); ++j) opts.push_back(interior_row(k, i, j));
            out.push_back(std::move(opts));
        }
    };
    if (!grid_.on_boundary(k)) {
        add_operator();
        return out;
    }
    if (options_.form == BoundaryForm::Weak) add_operator();
    const Vec& x = grid_.node(k);
    if (bc_.is_capillary()) {
        out.push_back({boundary_row(k, grid_.domain().boundary_normal(x), g)});
        return out;
    }
    for (int i = 0; i < bc_.n1(); ++i) {
        std::vector<Row> opts;
        for (int j = 0; j < bc_.n2(); ++j) {
            const auto [gamma, gv] = bc_.linear_term(i, j, x);
            opts.push_back(boundary_row(k, gamma, gv));
        }
        out.push_back(std::move(opts));
    }
    return out;
}

// ---------------------------------------------------------------- assembly

namespace {

const Row& pick(const std::vector<std::vector<Row>>& fam, const Policy& pol, int k) {
    return fam.at(static_cast<std::size_t>(pol.outer[static_cast<std::size_t>(k)]))
        .at(static_cast<std::size_t>(pol.inner[static_cast<std::size_t>(k)]));
}

}  // namespace

std::vector<Row> assemble(const Discretization& disc, const Policy& policy, std::span<const double> boundary_g) {
    const Grid& grid = disc.grid();
    const int n = grid.size();
    std::vector<Row> rows(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const auto fam = disc.family(k, boundary_g[static_cast<std::size_t>(k)]);
        Row r = pick(fam, policy, k);
        if (r.eliminate) {
            const auto [k1, k2] = inward_points(grid, k);
            const auto fam1 = disc.family(k1, boundary_g[static_cast<std::size_t>(k1)]);
            const Row& r1 = pick(fam1, policy, k1);
            r = combine(r, r1, r.at(k2) / (-r1.at(k2)), k2);
        }
        if (!monotone(r, k))
            throw SchemeError("scheme not monotone at node " + std::to_string(k) + " (x = " +
                              std::to_string(grid.node(k)(0)) + ")");
        rows[static_cast<std::size_t>(k)] = std::move(r);
    }
    return rows;
}

// ---------------------------------------------------------------- linear solves

std::vector<double> solve_linear(const Grid& grid, const std::vector<Row>& rows, double tol) {
    const int n = static_cast<int>(rows.size());
    std::vector<double> u(rows.size(), 0.0);
    if (grid.dim() == 1) {
        // Thomas algorithm; rows are diagonally dominant M-matrix rows.
        std::vector<double> lo(rows.size(), 0.0), di(rows.size(), 0.0), up(rows.size(), 0.0), rhs(rows.size());
        for (int k = 0; k < n; ++k) {
            const auto uk = static_cast<std::size_t>(k);
            for (const auto& [i, c] : rows[uk].coef) {
                if (i == k) di[uk] += c;
                else if (i == k - 1) lo[uk] += c;
                else if (i == k + 1) up[uk] += c;
                else throw ArgumentError("row is not tridiagonal");
            }
            rhs[uk] = rows[uk].rhs;
        }
        for (std::size_t k = 1; k < rows.size(); ++k) {
            const double m = lo[k] / di[k - 1];
            di[k] -= m * up[k - 1];
            rhs[k] -= m * rhs[k - 1];
        }
        u.back() = rhs.back() / di.back();
        for (std::size_t k = rows.size() - 1; k-- > 0;) u[k] = (rhs[k] - up[k] * u[k + 1]) / di[k];
        return u;
    }
    using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd b(n);
    for (int k = 0; k < n; ++k) {
        for (const auto& [i, c] : rows[static_cast<std::size_t>(k)].coef) trip.emplace_back(k, i, c);
        b(k) = rows[static_cast<std::size_t>(k)].rhs;
    }
    SpMat A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::VectorXd x;
    bool done = false;
    {
        Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>> it;
        it.setTolerance(tol);
        it.setMaxIterations(4 * n);
        it.compute(A);
        if (it.info() == Eigen::Success) {
            x = it.solve(b);
            done = it.info() == Eigen::Success && (A * x - b).norm() <= tol * std::max(1.0, b.norm());
        }
    }
    if (!done) {
        Eigen::SparseMatrix<double> Ac(A);
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(Ac);
        if (lu.info() != Eigen::Success) throw SchemeError("sparse factorization failed");
        x = lu.solve(b);
    }
    for (int k = 0; k < n; ++k) u[static_cast<std::size_t>(k)] = x(k);
    return u;
}

// ---------------------------------------------------------------- residual and solve

namespace {

std::vector<double> capillary_data(const Discretization& disc, std::span<const double> u) {
    const Grid& grid = disc.grid();
    std::vector<double> g(static_cast<std::size_t>(grid.size()), 0.0);
    if (!disc.boundary().is_capillary()) return g;
    for (int k : grid.boundary_nodes()) {
        const Vec p = disc.boundary_gradient(k, u);
        g[static_cast<std::size_t>(k)] = disc.boundary().theta(grid.node(k)) * std::sqrt(1.0 + p.squaredNorm());
    }
    return g;
}

/// inf_i sup_j of the family at u, scaled by the attaining row's diagonal.
double scaled_value(const std::vector<std::vector<Row>>& fam, int k, std::span<const double> u) {
    double best = std::numeric_limits<double>::infinity();
    double diag = 1.0;
    for (const auto& opts : fam) {
        double v = -std::numeric_limits<double>::infinity();
        double d = 1.0;
        for (const Row& r : opts) {
            const double rv = r.apply(u);
            if (rv > v) {
                v = rv;
                d = r.at(k);
            }
        }
        if (v < best) {
            best = v;
            diag = d;
        }
    }
    return best / diag;
}

struct Iteration {
    const Discretization& disc;
    const SolveParams& params;
    Policy policy;
    int solves = 0;
    std::vector<double> history;

    std::vector<double> linear(std::span<const double> g) {
        if (++solves > params.max_policy_iters)
            throw NonconvergenceError("policy iteration exceeded " + std::to_string(params.max_policy_iters) +
                                          " linear solves",
                                      history);
        return solve_linear(disc.grid(), assemble(disc, policy, g), params.linear_tol);
    }

    static double threshold(const Row& r, int k, std::span<const double> u) {
        return 1e-13 * r.at(k) * (1.0 + std::abs(u[static_cast<std::size_t>(k)]));
    }

    /// Howard (inner maximization for fixed outer controls), then
    /// Hoffman-Karp improvement of the outer controls.
    std::vector<double> run(std::span<const double> g) {
        const int n = disc.grid().size();
        std::vector<std::vector<std::vector<Row>>> fams(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) fams[static_cast<std::size_t>(k)] = disc.family(k, g[static_cast<std::size_t>(k)]);
        std::vector<double> u;
        for (;;) {
            for (;;) {
                u = linear(g);
                history.push_back(residual_of(fams, u));
                bool changed = false;
                for (int k = 0; k < n; ++k) {
                    const auto uk = static_cast<std::size_t>(k);
                    const auto& opts = fams[uk][static_cast<std::size_t>(policy.outer[uk])];
                    int best = policy.inner[uk];
                    double bv = opts[static_cast<std::size_t>(best)].apply(u);
                    const double thr = threshold(opts[static_cast<std::size_t>(best)], k, u);
                    for (int j = 0; j < static_cast<int>(opts.size()); ++j) {
                        const double v = opts[static_cast<std::size_t>(j)].apply(u);
                        if (v > bv + thr) {
                            bv = v;
                            best = j;
                        }
                    }
                    if (best != policy.inner[uk]) {
                        policy.inner[uk] = best;
                        changed = true;
                    }
                }
                if (!changed) break;
            }
            bool changed = false;
            for (int k = 0; k < n; ++k) {
                const auto uk = static_cast<std::size_t>(k);
                const auto& fam = fams[uk];
                auto sup = [&](int i, int& arg) {
                    const auto& opts = fam[static_cast<std::size_t>(i)];
                    double v = -std::numeric_limits<double>::infinity();
                    for (int j = 0; j < static_cast<int>(opts.size()); ++j) {
                        const double rv = opts[static_cast<std::size_t>(j)].apply(u);
                        if (rv > v) {
                            v = rv;
                            arg = j;
                        }
                    }
                    return v;
                };
                int cur_arg = 0;
                double cur = sup(policy.outer[uk], cur_arg);
                const double thr = threshold(pick(fam, policy, k), k, u);
                int best = policy.outer[uk], best_arg = policy.inner[uk];
                for (int i = 0; i < static_cast<int>(fam.size()); ++i) {
                    int arg = 0;
                    const double v = sup(i, arg);
                    if (v < cur - thr) {
                        cur = v;
                        best = i;
                        best_arg = arg;
                    }
                }
                if (best != policy.outer[uk]) {
                    policy.outer[uk] = best;
                    policy.inner[uk] = best_arg;
                    changed = true;
                }
            }
            if (!changed) return u;
        }
    }

    static double residual_of(const std::vector<std::vector<std::vector<Row>>>& fams, std::span<const double> u) {
        double r = 0.0;
        for (std::size_t k = 0; k < fams.size(); ++k)
            r = std::max(r, std::abs(scaled_value(fams[k], static_cast<int>(k), u)));
        return r;
    }

    /// A few steps of iterative refinement at the final policy.
    void refine(std::vector<double>& u, std::span<const double> g) {
        for (int pass = 0; pass < 3; ++pass) {
            if (residual_norm(disc, u) <= 0.1 * params.tol) return;
            std::vector<Row> rows = assemble(disc, policy, g);
            for (Row& r : rows) r.rhs = r.apply(u);
            const auto du = solve_linear(disc.grid(), rows, params.linear_tol);
            for (std::size_t k = 0; k < u.size(); ++k) u[k] -= du[k];
        }
    }
};

}  // namespace

double residual_norm(const Discretization& disc, std::span<const double> u) {
    const auto g = capillary_data(disc, u);
    double r = 0.0;
    for (int k = 0; k < disc.grid().size(); ++k)
        r = std::max(r, std::abs(scaled_value(disc.family(k, g[static_cast<std::size_t>(k)]), k, u)));
    return r;
}

SolutionField solve(const Discretization& disc, const SolveParams& params) {
    if (!(params.tol > 0.0 && params.linear_tol > 0.0)) throw ConfigError("solver tolerances must be positive");
    if (!(params.damping > 0.0 && params.damping <= 1.0)) throw ConfigError("damping must lie in (0, 1]");
    const Grid& grid = disc.grid();
    const auto n = static_cast<std::size_t>(grid.size());
    Iteration it{disc, params, {std::vector<int>(n, 0), std::vector<int>(n, 0)}, 0, {}};
    std::vector<double> g(n, 0.0);
    const bool capillary = disc.boundary().is_capillary();
    if (capillary)
        for (int k : grid.boundary_nodes()) g[static_cast<std::size_t>(k)] = disc.boundary().theta(grid.node(k));

    std::vector<double> u;
    double res = std::numeric_limits<double>::infinity();
    for (int picard = 0;; ++picard) {
        u = it.run(g);
        it.refine(u, g);
        res = residual_norm(disc, u);
        if (!capillary || res <= params.tol) break;
        it.history.push_back(res);
        if (picard + 1 >= params.max_picard_iters)
            throw NonconvergenceError("capillary fixed point did not converge", it.history);
        const auto g_new = capillary_data(disc, u);
        for (int k : grid.boundary_nodes()) {
            const auto uk = static_cast<std::size_t>(k);
            g[uk] = (1.0 - params.damping) * g[uk] + params.damping * g_new[uk];
        }
    }
    it.history.push_back(res);
    if (!(res <= params.tol))
        throw NonconvergenceError("residual " + std::to_string(res) + " above tolerance", it.history);
    return {grid, std::move(u), res, it.solves, std::move(it.history)};
}

// ---------------------------------------------------------------- comparison

std::vector<ComparisonTrial> make_comparison_trials(const Grid& grid, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto uni = [&](double a, double b) { return a + (b - a) * U(rng); };
    const Domain& dom = grid.domain();
    const int n = grid.dim();
    // Extent of the normal axis: [lo, hi].
    double lo = 0.0, hi = 1.0;
    if (const auto* iv = std::get_if<Interval>(&dom.shape())) {
        lo = iv->a;
        hi = iv->b;
    } else {
        hi = std::get<PeriodicStrip>(dom.shape()).height;
    }
    auto constant_vec = [&](double lo_, double hi_) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v(i) = uni(lo_, hi_);
        return VectorField::constant(v);
    };
    std::vector<ComparisonTrial> out;
    out.reserve(count);
    while (out.size() < count) {
        ControlledCoefficients sub, sup;
        sub.dim = sup.dim = n;
        for (int m = 0; m < 2; ++m) {
            CoefficientSet s;
            Mat sig = Mat::Zero(n, n);
            for (int i = 0; i < n; ++i) sig(i, i) = uni(0.3, 1.0);
            s.sigma = MatrixField::constant(sig);
            s.b = constant_vec(-1.0, 1.0);
            s.c = ScalarField::constant(uni(0.5, 2.0));
            std::vector<double> freq(static_cast<std::size_t>(n), 0.0);
            freq[static_cast<std::size_t>(n - 1)] = std::floor(uni(1.0, 3.0));
            const double off = uni(-1.0, 1.0), amp = uni(0.0, 1.0), phase = uni(0.0, kPi);
            const double d = uni(0.0, 0.5), e = uni(-d, d);
            CoefficientSet t = s;
            s.f = ScalarField(ScalarField::Trig{off, amp, freq, phase});
            t.f = ScalarField(ScalarField::Trig{off + d, amp + e, freq, phase});
            sub.sets.push_back({s});
            sup.sets.push_back({t});
        }
        BoundarySpec::Variant bs, bp;
        const int kind = static_cast<int>(uni(0.0, 3.0));
        if (kind == 2) {
            const double th = uni(-0.5, 0.5);
            bs = BoundarySpec::Capillary{ScalarField::constant(th)};
            bp = BoundarySpec::Capillary{ScalarField::constant(th + uni(0.0, 0.3))};
        } else {
            const double g = uni(-1.0, 1.0);
            const ScalarField gs = ScalarField::constant(g), gp = ScalarField::constant(g + uni(0.0, 0.5));
            if (kind == 0) {
                bs = BoundarySpec::Neumann{gs};
                bp = BoundarySpec::Neumann{gp};
            } else {
                // gamma . n > 0 on both sides: normal component -alpha at lo, beta at hi.
                const double alpha = uni(0.5, 1.5), beta = uni(0.5, 1.5);
                const double slope = (alpha + beta) / (hi - lo);
                std::vector<double> sl(static_cast<std::size_t>(n), 0.0);
                sl[static_cast<std::size_t>(n - 1)] = slope;
                std::vector<ScalarField> comps;
                if (n == 2) comps.push_back(ScalarField::constant(uni(-0.5, 0.5)));
                comps.push_back(ScalarField(ScalarField::Affine{-alpha - slope * lo, sl}));
                const VectorField gamma(comps);
                bs = BoundarySpec::Oblique{gamma, gs};
                bp = BoundarySpec::Oblique{gamma, gp};
            }
        }
        out.push_back({Discretization(grid, OperatorSpec(OperatorKind::Bellman, sub), BoundarySpec(dom, bs)),
                       Discretization(grid, OperatorSpec(OperatorKind::Bellman, sup), BoundarySpec(dom, bp))});
    }
    return out;
}

std::size_t discrete_comparison_check(std::span<const ComparisonTrial> trials, const SolveParams& params) {
    std::size_t v = 0;
    for (const auto& t : trials) {
        const SolutionField a = solve(t.sub, params);
        const SolutionField b = solve(t.super, params);
        for (std::size_t k = 0; k < a.values.size(); ++k)
            if (a.values[k] > b.values[k] + 1e-10) ++v;
    }
    return v;
}

// ---------------------------------------------------------------- Hoelder estimate

HolderEstimate holder_estimate(const SolutionField& u) { return holder_estimate(u.grid, u.values); }

HolderEstimate holder_estimate(const Grid& grid, std::span<const double> values) {
    if (values.size() != static_cast<std::size_t>(grid.size())) throw ArgumentError("field size mismatch");
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    if (*mx - *mn <= 1e-14 * (1.0 + scale)) return {1.0, 0.0};

    const int n = grid.dim();
    // Oscillation per lattice offset; the strip wraps in x1 so offsets there
    // stop at half a period (minimal image).
    struct Offset {
        double len;
        double osc;
    };
    const double rmax = grid.domain().diameter() / 4.0;
    std::vector<Offset> offs;
    auto U = [&](int k) { return values[static_cast<std::size_t>(k)]; };
    const int m0 = n == 2 ? grid.count(0) / 2 : grid.count(0) - 1;
    const int m1 = n == 2 ? grid.count(1) - 1 : 0;
    for (int dj = 0; dj <= m1; ++dj)
        for (int di = (dj == 0 ? 1 : -m0); di <= m0; ++di) {
            const double len = std::hypot(di * grid.h(0), n == 2 ? dj * grid.h(1) : 0.0);
            double osc = 0.0;
            for (int k = 0; k < grid.size(); ++k) {
                const int q = grid.neighbor(k, di, dj);
                if (q >= 0) osc = std::max(osc, std::abs(U(q) - U(k)));
            }
            offs.push_back({len, osc});
        }
    std::sort(offs.begin(), offs.end(), [](const Offset& a, const Offset& b) { return a.len < b.len; });
    double hmin = grid.h(0);
    if (n == 2) hmin = std::max(hmin, grid.h(1));
    const double rmin = 4.0 * hmin;

    // Log-spaced radii in [rmin, rmax].
    std::vector<double> lx, ly;
    if (rmax > rmin) {
        const int nr = 24;
        double prev = -1.0;
        for (int s = 0; s < nr; ++s) {
            const double r = rmin * std::pow(rmax / rmin, static_cast<double>(s) / (nr - 1));
            double w = 0.0, used = 0.0;
            for (const auto& o : offs) {
                if (o.len > r * (1.0 + 1e-12)) break;
                w = std::max(w, o.osc);
                used = o.len;
            }
            if (used <= prev || w <= 0.0) continue;
            prev = used;
            lx.push_back(std::log(used));
            ly.push_back(std::log(w));
        }
    }
    double beta = 1.0;
    if (lx.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(lx.size());
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sx += lx[i];
            sy += ly[i];
            sxx += lx[i] * lx[i];
            sxy += lx[i] * ly[i];
        }
        beta = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
    beta = std::clamp(beta, 1e-6, 1.0);

    double semi = 0.0;
    for (const auto& o : offs) semi = std::max(semi, o.osc / std::pow(o.len, beta));
    return {beta, semi};
}

}  // namespace visclab
