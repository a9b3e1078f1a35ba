#include "unshade/elliptic.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace unshade {

namespace {

void check_mesh(double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw std::invalid_argument("mesh spacing must be positive and finite");
    }
}

// Interior unknown ordering: row-major over (i,j), i,j starting at 1.
inline Eigen::Index interior_index(int i, int j, int cols) noexcept {
    return static_cast<Eigen::Index>(i - 1) * (cols - 2) + (j - 1);
}

// splitmix64; fixed-seed deterministic start vector for power iteration.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// y = A_II x for the anchored interior operator, matrix-free.
void apply_anchored_operator(const GridField& b, double reaction, double h,
                             const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    const int rows = b.rows();
    const int cols = b.cols();
    const double inv_h2 = 1.0 / (h * h);
    auto at = [&](int i, int j) -> double {
        if (i < 1 || i > rows - 2 || j < 1 || j > cols - 2) return 0.0;
        return x[interior_index(i, j, cols)];
    };
    for (int i = 1; i < rows - 1; ++i) {
        for (int j = 1; j < cols - 1; ++j) {
            const double diag = 4.0 * inv_h2 + reaction * b(i, j);
            const double vert = at(i + 1, j) + at(i - 1, j);
            const double horiz = at(i, j + 1) + at(i, j - 1);
            y[interior_index(i, j, cols)] = diag * at(i, j) - (vert + horiz) * inv_h2;
        }
    }
}

}  // namespace

EllipticProblem::EllipticProblem(GridField cost, double sigma_in, EllipticMode mode_in)
    : b(std::move(cost)), sigma(sigma_in), mode(mode_in) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("EllipticProblem: sigma must be positive and finite");
    }
    if (min_value(b) < 0.0) {
        throw std::invalid_argument("EllipticProblem: cost field must be nonnegative");
    }
}

void SolverConfig::validate() const {
    if (omega && (!(*omega > 0.0) || !std::isfinite(*omega))) {
        throw std::invalid_argument("SolverConfig: omega must be positive");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
    if (!(u_min > 0.0)) throw std::invalid_argument("SolverConfig: u_min must be positive");
    if (!(u_max > u_min)) throw std::invalid_argument("SolverConfig: u_max must exceed u_min");
}

DenseOperator assemble_dense(const EllipticProblem& problem, double h) {
    check_mesh(h);
    if (problem.mode != EllipticMode::AnchoredDirichlet) {
        throw std::invalid_argument(
            "assemble_dense: only the AnchoredDirichlet mode has a dense interior form");
    }
    const int rows = problem.b.rows();
    const int cols = problem.b.cols();
    const Eigen::Index m =
        static_cast<Eigen::Index>(rows - 2) * static_cast<Eigen::Index>(cols - 2);
    if (m > kDenseUnknownLimit) {
        throw std::invalid_argument("assemble_dense: " + std::to_string(m) +
                                    " interior unknowns exceed the dense limit of " +
                                    std::to_string(kDenseUnknownLimit));
    }

    const double inv_h2 = 1.0 / (h * h);
    const double reaction = problem.reaction_scale();
    DenseOperator op;
    op.n = m;
    op.matrix = Eigen::MatrixXd::Zero(m, m);
    op.rhs = Eigen::VectorXd::Zero(m);

    for (int i = 1; i < rows - 1; ++i) {
        for (int j = 1; j < cols - 1; ++j) {
            const Eigen::Index k = interior_index(i, j, cols);
            op.matrix(k, k) = 4.0 * inv_h2 + reaction * problem.b(i, j);
            constexpr int kOffsets[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
            for (const auto& d : kOffsets) {
                const int ni = i + d[0];
                const int nj = j + d[1];
                if (ni >= 1 && ni <= rows - 2 && nj >= 1 && nj <= cols - 2) {
                    op.matrix(k, interior_index(ni, nj, cols)) = -inv_h2;
                } else {
                    op.rhs[k] += inv_h2;  // boundary neighbour carries u_B = 1
                }
            }
        }
    }
    return op;
}

GridField solve_direct(const EllipticProblem& problem, double h) {
    const DenseOperator op = assemble_dense(problem, h);
    Eigen::LLT<Eigen::MatrixXd> llt(op.matrix);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error(
            "solve_direct: Cholesky factorization failed on an SPD-by-construction system");
    }
    const Eigen::VectorXd interior = llt.solve(op.rhs);

    const int rows = problem.b.rows();
    const int cols = problem.b.cols();
    GridField u(rows, cols, h, 1.0);
    for (int i = 1; i < rows - 1; ++i) {
        for (int j = 1; j < cols - 1; ++j) {
            u(i, j) = interior[interior_index(i, j, cols)];
        }
    }
    require_all_finite(u, "solve_direct");
    return u;
}

RichardsonResult solve_richardson(const EllipticProblem& problem, double h,
                                  const SolverConfig& config, const GridField* initial,
                                  const GridField* error_reference, BoundaryRule neumann_rule) {
    check_mesh(h);
    config.validate();
    const int rows = problem.b.rows();
    const int cols = problem.b.cols();
    if (initial && !initial->same_shape(problem.b)) {
        throw std::invalid_argument("solve_richardson: initial guess shape mismatch");
    }
    if (error_reference && !error_reference->same_shape(problem.b)) {
        throw std::invalid_argument("solve_richardson: reference shape mismatch");
    }

    const bool anchored = problem.mode == EllipticMode::AnchoredDirichlet;
    const double omega = config.omega ? *config.omega : auto_omega(problem, h);
    const double reaction = problem.reaction_scale();
    const double inv_h2 = 1.0 / (h * h);

    GridField u = initial ? *initial : GridField(rows, cols, h, 1.0);
    if (anchored) {
        for (int i = 0; i < rows; ++i) {
            u(i, 0) = 1.0;
            u(i, cols - 1) = 1.0;
        }
        for (int j = 0; j < cols; ++j) {
            u(0, j) = 1.0;
            u(rows - 1, j) = 1.0;
        }
    }

    // Updated-node range: interior only when anchored, the whole grid otherwise.
    const int lo_i = anchored ? 1 : 0;
    const int hi_i = anchored ? rows - 1 : rows;
    const int lo_j = anchored ? 1 : 0;
    const int hi_j = anchored ? cols - 1 : cols;

    auto residual_at = [&](const GridField& v, int i, int j) -> double {
        double lap;
        if (anchored || (i > 0 && i < rows - 1 && j > 0 && j < cols - 1)) {
            const double vert = v(i + 1, j) + v(i - 1, j);
            const double horiz = v(i, j + 1) + v(i, j - 1);
            lap = (vert + horiz - 4.0 * v(i, j)) * inv_h2;
        } else if (neumann_rule == BoundaryRule::InteriorZero) {
            lap = 0.0;
        } else {
            auto cl = [](int k, int n) { return k < 0 ? 0 : (k >= n ? n - 1 : k); };
            const double vert = v(cl(i + 1, rows), j) + v(cl(i - 1, rows), j);
            const double horiz = v(i, cl(j + 1, cols)) + v(i, cl(j - 1, cols));
            lap = (vert + horiz - 4.0 * v(i, j)) * inv_h2;
        }
        return reaction * problem.b(i, j) * v(i, j) - lap;
    };

    auto error_l2 = [&](const GridField& v) -> double {
        double acc = 0.0;
        for (int i = lo_i; i < hi_i; ++i) {
            for (int j = lo_j; j < hi_j; ++j) {
                const double d = v(i, j) - (*error_reference)(i, j);
                acc += d * d;
            }
        }
        return std::sqrt(acc);
    };

    SolveReport report;
    GridField next = u;
    double prev_step_l2 = -1.0;
    double prev_error = error_reference ? error_l2(u) : 0.0;

    for (int n = 0; n < config.max_iter; ++n) {
        double step_inf = 0.0;
        double step_l2_sq = 0.0;
        std::int64_t clipped_this_step = 0;

        for (int i = lo_i; i < hi_i; ++i) {
            for (int j = lo_j; j < hi_j; ++j) {
                double value = u(i, j) - omega * residual_at(u, i, j);
                if (value < config.u_min) {
                    value = config.u_min;
                    ++clipped_this_step;
                } else if (value > config.u_max) {
                    value = config.u_max;
                    ++clipped_this_step;
                }
                if (!std::isfinite(value)) {
                    throw SolverDivergenceError(
                        n, "solve_richardson: non-finite iterate at iteration " + std::to_string(n));
                }
                next(i, j) = value;
                const double d = value - u(i, j);
                const double ad = std::abs(d);
                if (ad > step_inf) step_inf = ad;
                step_l2_sq += d * d;
            }
        }

        report.clip_events += clipped_this_step;
        report.iterations = n + 1;
        report.final_step_inf_norm = step_inf;

        if (error_reference) {
            const double err = error_l2(next);
            if (clipped_this_step == 0 && prev_error > 0.0) {
                report.contraction_samples.push_back(err / prev_error);
            }
            prev_error = err;
        } else {
            const double step_l2 = std::sqrt(step_l2_sq);
            if (prev_step_l2 > 0.0) {
                report.contraction_samples.push_back(step_l2 / prev_step_l2);
            }
            prev_step_l2 = step_l2;
        }

        std::swap(u, next);
        if (step_inf < config.tol) {
            report.converged = true;
            break;
        }
    }

    double res_sq = 0.0;
    for (int i = lo_i; i < hi_i; ++i) {
        for (int j = lo_j; j < hi_j; ++j) {
            const double r = residual_at(u, i, j);
            res_sq += r * r;
        }
    }
    report.final_residual_l2 = std::sqrt(res_sq);

    require_all_finite(u, "solve_richardson");
    return {std::move(u), std::move(report)};
}

double gershgorin_lambda_bound(const EllipticProblem& problem, double h) {
    check_mesh(h);
    return 8.0 / (h * h) + problem.reaction_scale() * max_value(problem.b);
}

LambdaMaxEstimate estimate_lambda_max(const EllipticProblem& problem, double h, int iters) {
    check_mesh(h);
    if (iters < 1) {
        throw std::invalid_argument("estimate_lambda_max: iters must be >= 1");
    }
    const int rows = problem.b.rows();
    const int cols = problem.b.cols();
    const Eigen::Index m =
        static_cast<Eigen::Index>(rows - 2) * static_cast<Eigen::Index>(cols - 2);

    SplitMix64 rng(0x853c49e6748fea9bULL);
    Eigen::VectorXd v(m);
    for (Eigen::Index k = 0; k < m; ++k) v[k] = 0.5 + rng.uniform01();
    v.normalize();

    Eigen::VectorXd w(m);
    for (int n = 0; n < iters; ++n) {
        apply_anchored_operator(problem.b, problem.reaction_scale(), h, v, w);
        const double norm = w.norm();
        if (norm == 0.0) break;  // degenerate start; Rayleigh quotient below still defined
        v = w / norm;
    }
    apply_anchored_operator(problem.b, problem.reaction_scale(), h, v, w);
    LambdaMaxEstimate out;
    out.estimate = v.dot(w);
    out.gershgorin_bound = gershgorin_lambda_bound(problem, h);
    return out;
}

double auto_omega(const EllipticProblem& problem, double h) {
    return 1.0 / gershgorin_lambda_bound(problem, h);
}

const char* name(EllipticMode mode) {
    return mode == EllipticMode::AnchoredDirichlet ? "anchored" : "neumann";
}

EllipticMode parse_elliptic_mode(std::string_view text) {
    if (text == "anchored") return EllipticMode::AnchoredDirichlet;
    if (text == "neumann") return EllipticMode::NeumannHomogeneous;
    throw std::invalid_argument("unknown elliptic mode: " + std::string(text));
}

}  // namespace unshade
