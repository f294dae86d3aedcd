#pragma once

#include <memory>
#include <string>
#include <vector>

#include "npfs/field.hpp"

namespace npfs {

/// Description of an even interaction kernel J with J(-x) = J(x).
/// Constant and gaussian kernels are symmetric by construction; tabulated
/// kernels (1D only) are given on the signed offset lattice
/// {-(n-1)dx, ..., (n-1)dx} and validated sample-by-sample.
struct KernelSpec {
    enum class Kind { Constant, Gaussian, Tabulated };

    Kind kind = Kind::Constant;
    double value = 0.0;       // Constant
    double amplitude = 0.0;   // Gaussian
    double width = 1.0;       // Gaussian
    std::vector<double> samples;  // Tabulated, length 2*cells - 1

    static KernelSpec constant(double value);
    static KernelSpec gaussian(double amplitude, double width);
    static KernelSpec tabulated(std::vector<double> samples);

    std::string kind_name() const;
};

enum class ConvPlan { Direct, Fft };

/// A kernel prepared for one grid: the tabulated difference lattice, the
/// precomputed field a(x) = integral of J(x-y) over the box, and a
/// convolution strategy.
///
/// The convolution integrates over the bounded box only (zero padding in the
/// FFT path, no wraparound). Both paths share the midpoint quadrature, and
/// a() is produced by convolving the constant-one field with the selected
/// path, so J*1 == a holds bit-for-bit.
///
/// The FFT path owns scratch buffers: convolve() is safe from one thread at
/// a time; clone() gives an independent copy for concurrent use.
class Kernel {
public:
    Kernel(const KernelSpec& spec, const Grid& grid, ConvPlan plan = ConvPlan::Fft);
    ~Kernel();
    Kernel(Kernel&&) noexcept;
    Kernel& operator=(Kernel&&) noexcept;
    Kernel(const Kernel&) = delete;
    Kernel& operator=(const Kernel&) = delete;

    const Grid& grid() const { return grid_; }
    const KernelSpec& spec() const { return spec_; }
    ConvPlan plan() const { return plan_; }
    Kernel clone() const { return Kernel(spec_, grid_, plan_); }

    /// a(x): the kernel integrated over the box, on the same quadrature as
    /// convolve().
    const Field& a() const { return a_; }

    /// (J * phi)(x_i) = sum_j J(x_i - x_j) phi(x_j) * cell_volume.
    Field convolve(const Field& phi) const;

    /// Value of J at a signed lattice offset (oi, oj), oi in [-(nx-1), nx-1].
    double table_at(int oi, int oj = 0) const;

    /// sup_i sum_j |J(x_i - x_j)| * cell_volume, the discrete operator norm
    /// of the convolution on L-infinity. O(N^2); intended for diagnostics.
    double abs_row_sum_sup() const;

private:
    struct FftWorkspace;

    Field convolve_direct(const Field& phi) const;
    Field convolve_fft(const Field& phi) const;
    void build_table();
    void setup_fft();

    KernelSpec spec_;
    Grid grid_;
    ConvPlan plan_;
    std::vector<double> table_;  // (2nx-1) x (2ny-1), row-major, x fastest
    Field a_;
    std::unique_ptr<FftWorkspace> fft_;
};

}  // namespace npfs
