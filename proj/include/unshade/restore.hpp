#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unshade/elliptic.hpp"
#include "unshade/grid.hpp"

namespace unshade {

enum class UpdateRule {
    Divergence,    // L += dt * div(p), the model form
    ComponentSum,  // L += dt * (p_x + p_y), reproduction mode
};

const char* name(UpdateRule rule);
UpdateRule parse_update_rule(std::string_view text);

struct RestoreParams {
    double sigma = 1e-6;
    double dt = 1e-4;
    int global_steps = 20;
    SolverConfig solver{};
    EllipticMode mode = EllipticMode::AnchoredDirichlet;
    UpdateRule update_rule = UpdateRule::Divergence;
    BoundaryRule boundary = BoundaryRule::InteriorZero;
    bool clamp_illumination = true;
    /// Start each elliptic solve from the previous step's u instead of ones.
    bool warm_start = false;

    void validate() const;
};

struct FieldStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;

    static FieldStats of(const GridField& f);
};

struct RestoreStep {
    int step = 0;
    SolveReport solve;
    FieldStats u;
    FieldStats potential;
    FieldStats illumination;
    double increment_l2 = 0.0;
};

struct RestoreTrace {
    std::vector<RestoreStep> steps;
    /// Global step at which the run aborted (solver divergence or a cost
    /// contract violation); empty for a full run.
    std::optional<int> aborted_step;
    std::string abort_reason;
};

struct RestoreResult {
    GridField illumination;
    RestoreTrace trace;
};

/// b = L^2 elementwise. With clamp on, L is clamped into [0,1] first;
/// with clamp off, out-of-range luminance is rejected.
GridField cost_field(const GridField& L, bool clamp = true);

/// V = -2 sigma^2 ln(u); every u entry must be strictly positive.
GridField log_potential(const GridField& u, double sigma);

/// p = -1/2 * gradient(V).
std::pair<GridField, GridField> momentum(const GridField& V, BoundaryRule rule);

GridField update_illumination(const GridField& L, const GridField& px, const GridField& py,
                              double dt, UpdateRule rule, BoundaryRule boundary,
                              bool clamp = true);

/// The outer loop: per global step, build the cost field, solve the elliptic
/// subproblem, form the logarithmic potential and momentum, and apply the
/// explicit illumination update. Deterministic for fixed inputs. On solver
/// divergence the loop stops and the partial trace is returned with
/// `aborted_step` set; no non-finite values ever reach the output.
RestoreResult restore(const GridField& L0, const RestoreParams& params);

}  // namespace unshade
