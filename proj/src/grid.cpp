#include "unshade/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace unshade {

namespace {

void check_shape(int rows, int cols, double h) {
    if (rows < 3 || cols < 3) {
        throw std::invalid_argument("GridField needs at least 3x3 nodes, got " +
                                    std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw std::invalid_argument("GridField mesh spacing must be positive and finite");
    }
}

// Edge-replicating index clamp used by the Reflect rule.
inline int clamp_index(int k, int n) noexcept {
    return k < 0 ? 0 : (k >= n ? n - 1 : k);
}

void check_pair(const GridField& a, const GridField& b, const char* op) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument(std::string(op) + ": shape mismatch");
    }
    if (a.h() != b.h()) {
        throw std::invalid_argument(std::string(op) + ": mesh spacing mismatch");
    }
}

}  // namespace

GridField::GridField(int rows, int cols, double h, double fill)
    : rows_(rows), cols_(cols), h_(h),
      values_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {
    check_shape(rows, cols, h);
    if (!std::isfinite(fill)) {
        throw std::invalid_argument("GridField fill value must be finite");
    }
}

GridField::GridField(int rows, int cols, double h, std::vector<double> values)
    : rows_(rows), cols_(cols), h_(h), values_(std::move(values)) {
    check_shape(rows, cols, h);
    if (values_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        throw std::invalid_argument("GridField value count does not match rows*cols");
    }
    require_all_finite(*this, "GridField construction");
}

double min_value(const GridField& f) {
    return *std::min_element(f.values().begin(), f.values().end());
}

double max_value(const GridField& f) {
    return *std::max_element(f.values().begin(), f.values().end());
}

double mean_value(const GridField& f) {
    const double sum = std::accumulate(f.values().begin(), f.values().end(), 0.0);
    return sum / static_cast<double>(f.size());
}

void require_all_finite(const GridField& f, const char* context) {
    for (double v : f.values()) {
        if (!std::isfinite(v)) {
            throw std::domain_error(std::string(context) + ": non-finite value in field");
        }
    }
}

GridField laplacian(const GridField& f, BoundaryRule rule) {
    const int rows = f.rows();
    const int cols = f.cols();
    const double inv_h2 = 1.0 / (f.h() * f.h());
    GridField out(rows, cols, f.h());

    // Axis pairs are summed before mixing so the stencil commutes bitwise
    // with grid transposition and 180-degree rotation.
    for (int i = 1; i < rows - 1; ++i) {
        for (int j = 1; j < cols - 1; ++j) {
            const double vert = f(i + 1, j) + f(i - 1, j);
            const double horiz = f(i, j + 1) + f(i, j - 1);
            out(i, j) = (vert + horiz - 4.0 * f(i, j)) * inv_h2;
        }
    }
    if (rule == BoundaryRule::Reflect) {
        for (int i = 0; i < rows; ++i) {
            const bool border_row = (i == 0 || i == rows - 1);
            for (int j = 0; j < cols; ++j) {
                if (!border_row && j != 0 && j != cols - 1) continue;
                const double vert = f(clamp_index(i + 1, rows), j) + f(clamp_index(i - 1, rows), j);
                const double horiz = f(i, clamp_index(j + 1, cols)) + f(i, clamp_index(j - 1, cols));
                out(i, j) = (vert + horiz - 4.0 * f(i, j)) * inv_h2;
            }
        }
    }
    require_all_finite(out, "laplacian");
    return out;
}

std::pair<GridField, GridField> gradient(const GridField& f, BoundaryRule rule) {
    const int rows = f.rows();
    const int cols = f.cols();
    const double inv_2h = 1.0 / (2.0 * f.h());
    GridField gx(rows, cols, f.h());
    GridField gy(rows, cols, f.h());

    for (int i = 1; i < rows - 1; ++i) {
        for (int j = 1; j < cols - 1; ++j) {
            gx(i, j) = (f(i, j + 1) - f(i, j - 1)) * inv_2h;
            gy(i, j) = (f(i + 1, j) - f(i - 1, j)) * inv_2h;
        }
    }
    if (rule == BoundaryRule::Reflect) {
        for (int i = 0; i < rows; ++i) {
            const bool border_row = (i == 0 || i == rows - 1);
            for (int j = 0; j < cols; ++j) {
                if (!border_row && j != 0 && j != cols - 1) continue;
                gx(i, j) = (f(i, clamp_index(j + 1, cols)) - f(i, clamp_index(j - 1, cols))) * inv_2h;
                gy(i, j) = (f(clamp_index(i + 1, rows), j) - f(clamp_index(i - 1, rows), j)) * inv_2h;
            }
        }
    }
    require_all_finite(gx, "gradient");
    require_all_finite(gy, "gradient");
    return {std::move(gx), std::move(gy)};
}

GridField divergence(const GridField& px, const GridField& py, BoundaryRule rule) {
    check_pair(px, py, "divergence");
    const int rows = px.rows();
    const int cols = px.cols();
    const double inv_2h = 1.0 / (2.0 * px.h());
    GridField out(rows, cols, px.h());

    for (int i = 1; i < rows - 1; ++i) {
        for (int j = 1; j < cols - 1; ++j) {
            const double dx = (px(i, j + 1) - px(i, j - 1)) * inv_2h;
            const double dy = (py(i + 1, j) - py(i - 1, j)) * inv_2h;
            out(i, j) = dx + dy;
        }
    }
    if (rule == BoundaryRule::Reflect) {
        for (int i = 0; i < rows; ++i) {
            const bool border_row = (i == 0 || i == rows - 1);
            for (int j = 0; j < cols; ++j) {
                if (!border_row && j != 0 && j != cols - 1) continue;
                const double dx =
                    (px(i, clamp_index(j + 1, cols)) - px(i, clamp_index(j - 1, cols))) * inv_2h;
                const double dy =
                    (py(clamp_index(i + 1, rows), j) - py(clamp_index(i - 1, rows), j)) * inv_2h;
                out(i, j) = dx + dy;
            }
        }
    }
    require_all_finite(out, "divergence");
    return out;
}

const char* name(BoundaryRule rule) {
    return rule == BoundaryRule::InteriorZero ? "interior-zero" : "reflect";
}

BoundaryRule parse_boundary_rule(std::string_view text) {
    if (text == "interior-zero") return BoundaryRule::InteriorZero;
    if (text == "reflect") return BoundaryRule::Reflect;
    throw std::invalid_argument("unknown boundary rule: " + std::string(text));
}

}  // namespace unshade
