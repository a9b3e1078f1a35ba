#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace unshade {

/// Mesh spacing used when none is given (pixel grids are usually loaded with
/// this value; every entry point accepts an override).
inline constexpr double kDefaultMeshSpacing = 2.0;

/// How stencil operators treat the one-node border of the grid.
enum class BoundaryRule {
    /// Outputs are computed on interior nodes only; border nodes of the
    /// output are set to zero.
    InteriorZero,
    /// Ghost nodes replicate the nearest in-grid value, which realizes a
    /// discrete zero-flux (homogeneous Neumann) boundary: the resulting
    /// Laplacian is symmetric and its grid sum telescopes to zero.
    Reflect,
};

const char* name(BoundaryRule rule);
BoundaryRule parse_boundary_rule(std::string_view text);

/// Real-valued function on a uniform 2-D grid, stored row-major.
///
/// Invariants: rows >= 3, cols >= 3 (the five-point stencil needs an
/// interior), h > 0, and every value finite. Construction validates all of
/// them; the exported operators re-validate their outputs. Fields are value
/// types and the operators below are pure, so sharing across threads is safe.
class GridField {
public:
    GridField(int rows, int cols, double h, double fill = 0.0);
    GridField(int rows, int cols, double h, std::vector<double> values);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    double h() const noexcept { return h_; }
    std::size_t size() const noexcept { return values_.size(); }

    double operator()(int i, int j) const noexcept { return values_[index(i, j)]; }
    double& operator()(int i, int j) noexcept { return values_[index(i, j)]; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    bool same_shape(const GridField& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(j);
    }

private:
    int rows_;
    int cols_;
    double h_;
    std::vector<double> values_;
};

double min_value(const GridField& f);
double max_value(const GridField& f);
double mean_value(const GridField& f);

/// Throws std::domain_error naming `context` if any value is NaN or Inf.
void require_all_finite(const GridField& f, const char* context);

/// Five-point Laplacian (f_N + f_S + f_E + f_W - 4 f) / h^2.
GridField laplacian(const GridField& f, BoundaryRule rule);

/// Central differences; first component is the column ('x') derivative
/// (f[i,j+1] - f[i,j-1]) / 2h, second the row ('y') derivative.
std::pair<GridField, GridField> gradient(const GridField& f, BoundaryRule rule);

/// d/dx px + d/dy py with the same axis convention as gradient().
/// px and py must agree in shape and mesh spacing.
GridField divergence(const GridField& px, const GridField& py, BoundaryRule rule);

}  // namespace unshade
