#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "unshade/grid.hpp"

namespace unshade {

enum class EllipticMode {
    /// Iterate the residual of the reaction-diffusion equation on the full
    /// grid, Laplacian evaluated with a boundary rule (reproduction mode).
    NeumannHomogeneous,
    /// Fix u = 1 on every boundary node and solve the interior system.
    /// This is the well-posed formulation and the pipeline default.
    AnchoredDirichlet,
};

const char* name(EllipticMode mode);
EllipticMode parse_elliptic_mode(std::string_view text);

/// One instance of the per-iteration subproblem
///   laplacian(u) - sigma^-4 * b * u = 0.
struct EllipticProblem {
    GridField b;      // data cost, elementwise >= 0
    double sigma;     // regularization, > 0
    EllipticMode mode;

    EllipticProblem(GridField cost, double sigma_in, EllipticMode mode_in);

    /// sigma^-4, the reaction coefficient multiplying b.
    double reaction_scale() const noexcept {
        const double s2 = sigma * sigma;
        return 1.0 / (s2 * s2);
    }
};

/// Richardson relaxation controls. `omega` empty selects the automatic
/// choice 1 / gershgorin_lambda_bound, which always satisfies the spectral
/// step bound 0 < omega < 2 / lambda_max.
struct SolverConfig {
    std::optional<double> omega{};
    double tol = 1e-8;        // l-inf norm of the iterate step
    int max_iter = 500;
    double u_min = 1e-8;      // positivity clip floor
    double u_max = 1e8;       // clip ceiling

    void validate() const;
};

struct SolveReport {
    int iterations = 0;
    double final_step_inf_norm = 0.0;
    double final_residual_l2 = 0.0;
    bool converged = false;
    /// Per-iteration l2 error ratios against `error_reference` when one is
    /// supplied (recorded only for clip-free steps), otherwise ratios of
    /// successive step norms.
    std::vector<double> contraction_samples;
    /// Total number of entries clamped into [u_min, u_max] over all steps.
    std::int64_t clip_events = 0;
};

/// Interior system A_II u_I = rhs for the anchored formulation:
/// diagonal 4/h^2 + sigma^-4 b, off-diagonal -1/h^2 per interior adjacency,
/// rhs entry = (#boundary neighbours)/h^2. Symmetric positive definite.
struct DenseOperator {
    Eigen::Index n = 0;
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
};

/// Largest interior-unknown count for which dense assembly is allowed.
inline constexpr Eigen::Index kDenseUnknownLimit = 4096;

class SolverDivergenceError : public std::runtime_error {
public:
    SolverDivergenceError(int iteration, const std::string& what_arg)
        : std::runtime_error(what_arg), iteration_(iteration) {}
    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

DenseOperator assemble_dense(const EllipticProblem& problem, double h);

/// Direct solve of the anchored system; boundary of the result is 1.
/// Serves as the correctness oracle for the iterative path.
GridField solve_direct(const EllipticProblem& problem, double h);

struct RichardsonResult {
    GridField u;
    SolveReport report;
};

/// Damped Richardson iteration u <- u - omega * (sigma^-4 b u - laplacian u)
/// with per-step clipping into [u_min, u_max] and l-inf step stopping.
///
/// AnchoredDirichlet: boundary nodes are frozen at 1 and only the interior
/// iterates (the update equals Richardson on the DenseOperator system).
/// NeumannHomogeneous: the whole grid iterates; the Laplacian is evaluated
/// with `neumann_rule` (InteriorZero reproduces the reference behaviour of
/// leaving boundary Laplacian rows at zero).
///
/// `initial` defaults to the all-ones field. `error_reference`, when given,
/// enables true error-ratio contraction samples in the report.
RichardsonResult solve_richardson(const EllipticProblem& problem, double h,
                                  const SolverConfig& config,
                                  const GridField* initial = nullptr,
                                  const GridField* error_reference = nullptr,
                                  BoundaryRule neumann_rule = BoundaryRule::InteriorZero);

/// Row-sum bound 8/h^2 + sigma^-4 * max(b) on the largest eigenvalue.
double gershgorin_lambda_bound(const EllipticProblem& problem, double h);

struct LambdaMaxEstimate {
    double estimate = 0.0;          // Rayleigh quotient after power iteration
    double gershgorin_bound = 0.0;
};

/// Power iteration (matrix-free, anchored interior operator) with a fixed
/// deterministic start vector; `iters` must be >= 1.
LambdaMaxEstimate estimate_lambda_max(const EllipticProblem& problem, double h, int iters);

/// 1 / gershgorin_lambda_bound; always below 2 / lambda_max.
double auto_omega(const EllipticProblem& problem, double h);

}  // namespace unshade
