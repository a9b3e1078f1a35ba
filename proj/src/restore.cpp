#include "unshade/restore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace unshade {

void RestoreParams::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("RestoreParams: sigma must be positive");
    }
    if (!(dt >= 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("RestoreParams: dt must be nonnegative and finite");
    }
    if (global_steps < 1) {
        throw std::invalid_argument("RestoreParams: global_steps must be >= 1");
    }
    solver.validate();
}

FieldStats FieldStats::of(const GridField& f) {
    return {min_value(f), max_value(f), mean_value(f)};
}

GridField cost_field(const GridField& L, bool clamp) {
    GridField b(L.rows(), L.cols(), L.h());
    auto src = L.values();
    auto dst = b.values();
    if (clamp) {
        for (std::size_t k = 0; k < src.size(); ++k) {
            const double v = std::min(std::max(src[k], 0.0), 1.0);
            dst[k] = v * v;
        }
    } else {
        for (std::size_t k = 0; k < src.size(); ++k) {
            const double v = src[k];
            if (v < 0.0 || v > 1.0) {
                throw std::domain_error(
                    "cost_field: luminance outside [0,1] with clamping disabled");
            }
            dst[k] = v * v;
        }
    }
    return b;
}

GridField log_potential(const GridField& u, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("log_potential: sigma must be positive");
    }
    const double scale = -2.0 * sigma * sigma;
    GridField V(u.rows(), u.cols(), u.h());
    auto src = u.values();
    auto dst = V.values();
    for (std::size_t k = 0; k < src.size(); ++k) {
        if (!(src[k] > 0.0)) {
            throw std::domain_error("log_potential: u must be strictly positive everywhere");
        }
        dst[k] = scale * std::log(src[k]);
    }
    require_all_finite(V, "log_potential");
    return V;
}

std::pair<GridField, GridField> momentum(const GridField& V, BoundaryRule rule) {
    auto [gx, gy] = gradient(V, rule);
    for (double& v : gx.values()) v *= -0.5;
    for (double& v : gy.values()) v *= -0.5;
    return {std::move(gx), std::move(gy)};
}

GridField update_illumination(const GridField& L, const GridField& px, const GridField& py,
                              double dt, UpdateRule rule, BoundaryRule boundary, bool clamp) {
    if (!L.same_shape(px) || !L.same_shape(py)) {
        throw std::invalid_argument("update_illumination: shape mismatch");
    }
    if (L.h() != px.h() || L.h() != py.h()) {
        throw std::invalid_argument("update_illumination: mesh spacing mismatch");
    }
    GridField out(L.rows(), L.cols(), L.h());
    if (rule == UpdateRule::Divergence) {
        const GridField div = divergence(px, py, boundary);
        for (std::size_t k = 0; k < out.size(); ++k) {
            out.values()[k] = L.values()[k] + dt * div.values()[k];
        }
    } else {
        for (std::size_t k = 0; k < out.size(); ++k) {
            out.values()[k] = L.values()[k] + dt * (px.values()[k] + py.values()[k]);
        }
    }
    if (clamp) {
        for (double& v : out.values()) v = std::min(std::max(v, 0.0), 1.0);
    }
    require_all_finite(out, "update_illumination");
    return out;
}

RestoreResult restore(const GridField& L0, const RestoreParams& params) {
    params.validate();
    if (min_value(L0) < 0.0 || max_value(L0) > 1.0) {
        throw std::domain_error("restore: input luminance must lie in [0,1]");
    }

    GridField L = L0;
    RestoreTrace trace;
    trace.steps.reserve(static_cast<std::size_t>(params.global_steps));
    std::optional<GridField> warm;

    for (int t = 0; t < params.global_steps; ++t) {
        RichardsonResult solved{GridField(L.rows(), L.cols(), L.h(), 1.0), {}};
        try {
            const GridField b = cost_field(L, params.clamp_illumination);
            const EllipticProblem problem(b, params.sigma, params.mode);
            const GridField* u0 = (params.warm_start && warm) ? &*warm : nullptr;
            solved = solve_richardson(problem, L.h(), params.solver, u0, nullptr, params.boundary);
        } catch (const SolverDivergenceError& e) {
            // Stop instead of letting non-finite values reach the image.
            trace.aborted_step = t;
            trace.abort_reason = std::string("global step ") + std::to_string(t) + ": " + e.what();
            break;
        } catch (const std::domain_error& e) {
            trace.aborted_step = t;
            trace.abort_reason = std::string("global step ") + std::to_string(t) + ": " + e.what();
            break;
        }

        const GridField& u = solved.u;
        const GridField V = log_potential(u, params.sigma);
        auto [px, py] = momentum(V, params.boundary);
        GridField L_next = update_illumination(L, px, py, params.dt, params.update_rule,
                                               params.boundary, params.clamp_illumination);

        double inc_sq = 0.0;
        for (std::size_t k = 0; k < L.size(); ++k) {
            const double d = L_next.values()[k] - L.values()[k];
            inc_sq += d * d;
        }

        RestoreStep step;
        step.step = t;
        step.solve = std::move(solved.report);
        step.u = FieldStats::of(u);
        step.potential = FieldStats::of(V);
        step.illumination = FieldStats::of(L_next);
        step.increment_l2 = std::sqrt(inc_sq);
        trace.steps.push_back(std::move(step));

        if (params.warm_start) warm = u;
        L = std::move(L_next);
    }
    return {std::move(L), std::move(trace)};
}

const char* name(UpdateRule rule) {
    return rule == UpdateRule::Divergence ? "divergence" : "sum";
}

UpdateRule parse_update_rule(std::string_view text) {
    if (text == "divergence") return UpdateRule::Divergence;
    if (text == "sum") return UpdateRule::ComponentSum;
    throw std::invalid_argument("unknown update rule: " + std::string(text));
}

}  // namespace unshade
