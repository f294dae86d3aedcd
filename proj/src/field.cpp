#include "npfs/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "npfs/errors.hpp"

namespace npfs {

Grid::Grid(int dim, std::array<double, 2> len, std::array<int, 2> n)
    : dim_(dim), len_(len), n_(n) {
    if (dim_ != 1 && dim_ != 2) {
        throw ConfigError("grid dimension must be 1 or 2");
    }
    for (int axis = 0; axis < dim_; ++axis) {
        if (!(len_[axis] > 0.0) || !std::isfinite(len_[axis])) {
            throw ConfigError("grid length must be positive and finite");
        }
        if (n_[axis] < 2) {
            throw ConfigError("grid needs at least 2 cells per axis");
        }
        dx_[axis] = len_[axis] / n_[axis];
        if (!(dx_[axis] > 0.0)) {
            throw ConfigError("grid spacing must be positive");
        }
    }
    if (dim_ == 1) {
        // Degenerate second axis: one cell of unit extent.
        len_[1] = 1.0;
        n_[1] = 1;
        dx_[1] = 1.0;
    }
    vol_ = dx_[0] * dx_[1];
    // Total quadrature weight must reproduce the box volume.
    const double total = vol_ * static_cast<double>(size());
    const double box = len_[0] * len_[1];
    if (std::abs(total - box) > 8.0 * std::numeric_limits<double>::epsilon() * box) {
        throw ConfigError("grid quadrature weight does not reproduce the box volume");
    }
}

Grid Grid::line(double length, int cells) {
    return Grid(1, {length, 1.0}, {cells, 1});
}

Grid Grid::box(double length_x, double length_y, int cells_x, int cells_y) {
    return Grid(2, {length_x, length_y}, {cells_x, cells_y});
}

bool Grid::operator==(const Grid& other) const {
    return dim_ == other.dim_ && len_ == other.len_ && n_ == other.n_;
}

Field::Field(const Grid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

Field Field::sample(const Grid& grid, const std::function<double(double, double)>& f) {
    Field out(grid);
    for (int j = 0; j < grid.cells(1); ++j) {
        const double y = grid.dim() == 2 ? grid.coord(1, j) : 0.5;
        for (int i = 0; i < grid.cells(0); ++i) {
            out.at(i, j) = f(grid.coord(0, i), y);
        }
    }
    out.require_finite("Field::sample");
    return out;
}

bool Field::finite() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return std::isfinite(v); });
}

void Field::require_finite(const char* context) const {
    if (!finite()) {
        throw NumericalError(std::string(context) + ": field contains non-finite values");
    }
}

Field& Field::operator+=(const Field& other) {
    require_same_grid(*this, other, "Field::operator+=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    require_same_grid(*this, other, "Field::operator-=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

Field& Field::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

Field operator+(Field a, const Field& b) {
    a += b;
    return a;
}

Field operator-(Field a, const Field& b) {
    a -= b;
    return a;
}

Field operator*(double s, Field a) {
    a *= s;
    return a;
}

Field cwise_mul(const Field& a, const Field& b) {
    require_same_grid(a, b, "cwise_mul");
    Field out = a;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= b[k];
    return out;
}

void require_same_grid(const Field& a, const Field& b, const char* op) {
    if (a.grid() != b.grid()) {
        throw ConfigError(std::string(op) + ": grid mismatch");
    }
}

double l2_inner(const Field& a, const Field& b) {
    require_same_grid(a, b, "l2_inner");
    long double acc = 0.0L;
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        acc += static_cast<long double>(a[k]) * b[k];
    }
    return static_cast<double>(acc * a.grid().cell_volume());
}

double l2_norm_sq(const Field& a) { return l2_inner(a, a); }

double l2_norm(const Field& a) { return std::sqrt(l2_norm_sq(a)); }

double integral(const Field& a) {
    long double acc = 0.0L;
    for (std::size_t k = 0; k < a.size(); ++k) acc += a[k];
    return static_cast<double>(acc * a.grid().cell_volume());
}

double grad_norm_sq(const Field& a) {
    const Grid& g = a.grid();
    const int nx = g.cells(0);
    const int ny = g.cells(1);
    long double acc = 0.0L;
    const double inv_dx = 1.0 / g.spacing(0);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const long double gx = (a.at(i + 1, j) - a.at(i, j)) * inv_dx;
            acc += gx * gx;
        }
    }
    if (g.dim() == 2) {
        const double inv_dy = 1.0 / g.spacing(1);
        for (int j = 0; j + 1 < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const long double gy = (a.at(i, j + 1) - a.at(i, j)) * inv_dy;
                acc += gy * gy;
            }
        }
    }
    return static_cast<double>(acc * g.cell_volume());
}

double v_norm_sq(const Field& a) { return grad_norm_sq(a) + l2_norm_sq(a); }

double v_norm(const Field& a) { return std::sqrt(v_norm_sq(a)); }

double linf_norm(const Field& a) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k]));
    return m;
}

Field neumann_laplacian(const Field& a) {
    const Grid& g = a.grid();
    const int nx = g.cells(0);
    const int ny = g.cells(1);
    const double ix2 = 1.0 / (g.spacing(0) * g.spacing(0));
    Field out(g);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            // Mirror closure: the ghost neighbor equals the boundary cell.
            const double left = i > 0 ? a.at(i - 1, j) : a.at(i, j);
            const double right = i + 1 < nx ? a.at(i + 1, j) : a.at(i, j);
            out.at(i, j) = (left - 2.0 * a.at(i, j) + right) * ix2;
        }
    }
    if (g.dim() == 2) {
        const double iy2 = 1.0 / (g.spacing(1) * g.spacing(1));
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const double down = j > 0 ? a.at(i, j - 1) : a.at(i, j);
                const double up = j + 1 < ny ? a.at(i, j + 1) : a.at(i, j);
                out.at(i, j) += (down - 2.0 * a.at(i, j) + up) * iy2;
            }
        }
    }
    return out;
}

}  // namespace npfs
