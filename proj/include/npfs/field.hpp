#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace npfs {

/// Uniform cell-centered tensor grid on a box (0,L_1) x ... x (0,L_d), d = 1 or 2.
///
/// Cell centers sit at (i + 1/2) * dx per axis; midpoint quadrature assigns
/// every cell the full volume prod(dx_i), so the total quadrature weight is
/// the box volume. In 1D the second axis degenerates to one cell of unit
/// length, which lets all loops run dimension-agnostically.
class Grid {
public:
    static Grid line(double length, int cells);
    static Grid box(double length_x, double length_y, int cells_x, int cells_y);

    int dim() const { return dim_; }
    int cells(int axis) const { return n_[axis]; }
    double length(int axis) const { return len_[axis]; }
    double spacing(int axis) const { return dx_[axis]; }

    /// Total number of cells.
    std::size_t size() const { return static_cast<std::size_t>(n_[0]) * n_[1]; }
    /// Midpoint quadrature weight per cell.
    double cell_volume() const { return vol_; }
    double volume() const { return len_[0] * len_[1]; }

    /// Cell-center coordinate along an axis.
    double coord(int axis, int index) const { return (index + 0.5) * dx_[axis]; }
    /// Row-major linear index, x fastest.
    std::size_t index(int i, int j = 0) const {
        return static_cast<std::size_t>(j) * n_[0] + i;
    }

    bool operator==(const Grid& other) const;
    bool operator!=(const Grid& other) const { return !(*this == other); }

private:
    Grid(int dim, std::array<double, 2> len, std::array<int, 2> n);

    int dim_;
    std::array<double, 2> len_;
    std::array<int, 2> n_;
    std::array<double, 2> dx_;
    double vol_;
};

/// Real-valued function sampled at the cell centers of a Grid.
/// Value semantics; the grid is stored by value (it is small).
class Field {
public:
    explicit Field(const Grid& grid, double fill = 0.0);

    /// Sample a callable f(x, y) at cell centers (y = 0.5 in 1D, unused by
    /// 1D profiles). Throws NumericalError if any sample is non-finite.
    static Field sample(const Grid& grid, const std::function<double(double, double)>& f);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double operator[](std::size_t k) const { return values_[k]; }
    double& operator[](std::size_t k) { return values_[k]; }
    double at(int i, int j = 0) const { return values_[grid_.index(i, j)]; }
    double& at(int i, int j = 0) { return values_[grid_.index(i, j)]; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    bool finite() const;
    /// Throws NumericalError naming `context` if any value is NaN/Inf.
    void require_finite(const char* context) const;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s);

private:
    Grid grid_;
    std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
/// Pointwise product a(x) * b(x).
Field cwise_mul(const Field& a, const Field& b);

/// Throws ConfigError unless both fields live on the same grid.
void require_same_grid(const Field& a, const Field& b, const char* op);

/// Midpoint-quadrature L2 inner product: cell_volume * sum_i a_i * b_i.
double l2_inner(const Field& a, const Field& b);
double l2_norm_sq(const Field& a);
double l2_norm(const Field& a);

/// Quadrature of the field itself: l2_inner(a, 1) without building the ones field.
double integral(const Field& a);

/// Squared discrete H1 seminorm: forward differences on interior cell faces,
/// zero flux across boundary faces. Chosen so that
///   grad_norm_sq(u) == l2_inner(-neumann_laplacian(u), u)
/// holds by summation by parts.
double grad_norm_sq(const Field& a);

/// Squared discrete H1 norm: grad_norm_sq + l2_norm_sq.
double v_norm_sq(const Field& a);
double v_norm(const Field& a);

double linf_norm(const Field& a);

/// Second-order centered Laplacian with mirror (ghost-cell reflection)
/// boundary closure, so the discrete normal derivative vanishes and the sum
/// of the stencil over all cells telescopes to zero.
Field neumann_laplacian(const Field& a);

}  // namespace npfs
