#include "npfs/kernel.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "npfs/errors.hpp"

namespace npfs {

KernelSpec KernelSpec::constant(double value) {
    KernelSpec s;
    s.kind = Kind::Constant;
    s.value = value;
    return s;
}

KernelSpec KernelSpec::gaussian(double amplitude, double width) {
    KernelSpec s;
    s.kind = Kind::Gaussian;
    s.amplitude = amplitude;
    s.width = width;
    return s;
}

KernelSpec KernelSpec::tabulated(std::vector<double> samples) {
    KernelSpec s;
    s.kind = Kind::Tabulated;
    s.samples = std::move(samples);
    return s;
}

std::string KernelSpec::kind_name() const {
    switch (kind) {
        case Kind::Constant: return "constant";
        case Kind::Gaussian: return "gaussian";
        case Kind::Tabulated: return "tabulated";
    }
    return "?";
}

struct Kernel::FftWorkspace {
    int px = 0, py = 0;
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
    double* real = nullptr;
    fftw_complex* spectrum = nullptr;
    fftw_complex* kernel_hat = nullptr;

    ~FftWorkspace() {
        if (forward) fftw_destroy_plan(forward);
        if (inverse) fftw_destroy_plan(inverse);
        if (real) fftw_free(real);
        if (spectrum) fftw_free(spectrum);
        if (kernel_hat) fftw_free(kernel_hat);
    }
};

Kernel::Kernel(const KernelSpec& spec, const Grid& grid, ConvPlan plan)
    : spec_(spec), grid_(grid), plan_(plan), a_(grid) {
    build_table();
    if (plan_ == ConvPlan::Fft) setup_fft();
    a_ = convolve(Field(grid_, 1.0));
    a_.require_finite("Kernel: a(x)");
}

Kernel::~Kernel() = default;
Kernel::Kernel(Kernel&&) noexcept = default;
Kernel& Kernel::operator=(Kernel&&) noexcept = default;

void Kernel::build_table() {
    const int nx = grid_.cells(0);
    const int ny = grid_.cells(1);
    const int tx = 2 * nx - 1;
    const int ty = 2 * ny - 1;
    table_.assign(static_cast<std::size_t>(tx) * ty, 0.0);

    switch (spec_.kind) {
        case KernelSpec::Kind::Constant: {
            if (!std::isfinite(spec_.value)) throw ConfigError("constant kernel: non-finite value");
            for (double& v : table_) v = spec_.value;
            break;
        }
        case KernelSpec::Kind::Gaussian: {
            if (!std::isfinite(spec_.amplitude) || !std::isfinite(spec_.width) ||
                spec_.width <= 0.0) {
                throw ConfigError("gaussian kernel: amplitude must be finite, width positive");
            }
            const double inv2w2 = 1.0 / (2.0 * spec_.width * spec_.width);
            for (int mj = 0; mj < ty; ++mj) {
                const double dy = (mj - (ny - 1)) * grid_.spacing(1);
                const double ry2 = grid_.dim() == 2 ? dy * dy : 0.0;
                for (int mi = 0; mi < tx; ++mi) {
                    const double dx = (mi - (nx - 1)) * grid_.spacing(0);
                    table_[static_cast<std::size_t>(mj) * tx + mi] =
                        spec_.amplitude * std::exp(-(dx * dx + ry2) * inv2w2);
                }
            }
            break;
        }
        case KernelSpec::Kind::Tabulated: {
            if (grid_.dim() != 1) {
                throw ConfigError("tabulated kernels are supported on 1D grids only");
            }
            if (static_cast<int>(spec_.samples.size()) != tx) {
                throw ConfigError("tabulated kernel: expected " + std::to_string(tx) +
                                  " samples (2*cells - 1), got " +
                                  std::to_string(spec_.samples.size()));
            }
            double scale = 0.0;
            for (double v : spec_.samples) {
                if (!std::isfinite(v)) throw ConfigError("tabulated kernel: non-finite sample");
                scale = std::max(scale, std::abs(v));
            }
            for (int m = 0; m < tx; ++m) {
                const int mirror = tx - 1 - m;
                if (std::abs(spec_.samples[m] - spec_.samples[mirror]) >
                    1e-12 * std::max(1.0, scale)) {
                    throw ConfigError("tabulated kernel: asymmetric at offset index " +
                                      std::to_string(m - (nx - 1)));
                }
            }
            std::copy(spec_.samples.begin(), spec_.samples.end(), table_.begin());
            break;
        }
    }
    for (double v : table_) {
        if (!std::isfinite(v)) throw ConfigError("kernel table contains non-finite values");
    }
}

void Kernel::setup_fft() {
    const int nx = grid_.cells(0);
    const int ny = grid_.cells(1);
    auto ws = std::make_unique<FftWorkspace>();
    // Padding to (2n-1) per axis: the inputs have at most n nonzeros, so the
    // retained output slice never sees circular wraparound.
    ws->px = 2 * nx - 1;
    ws->py = 2 * ny - 1;
    const std::size_t real_n = static_cast<std::size_t>(ws->py) * ws->px;
    const std::size_t cplx_n = static_cast<std::size_t>(ws->py) * (ws->px / 2 + 1);
    ws->real = fftw_alloc_real(real_n);
    ws->spectrum = fftw_alloc_complex(cplx_n);
    ws->kernel_hat = fftw_alloc_complex(cplx_n);
    if (!ws->real || !ws->spectrum || !ws->kernel_hat) {
        throw NumericalError("Kernel: FFT buffer allocation failed");
    }
    // FFTW's first dimension is the slowest-varying one (y here).
    ws->forward = fftw_plan_dft_r2c_2d(ws->py, ws->px, ws->real, ws->spectrum, FFTW_ESTIMATE);
    ws->inverse = fftw_plan_dft_c2r_2d(ws->py, ws->px, ws->spectrum, ws->real, FFTW_ESTIMATE);
    if (!ws->forward || !ws->inverse) throw NumericalError("Kernel: FFT planning failed");

    // The difference table already spans the padded box exactly.
    std::memcpy(ws->real, table_.data(), real_n * sizeof(double));
    fftw_execute(ws->forward);
    std::memcpy(ws->kernel_hat, ws->spectrum, cplx_n * sizeof(fftw_complex));
    fft_ = std::move(ws);
}

double Kernel::table_at(int oi, int oj) const {
    const int nx = grid_.cells(0);
    const int ny = grid_.cells(1);
    const int tx = 2 * nx - 1;
    return table_[static_cast<std::size_t>(oj + ny - 1) * tx + (oi + nx - 1)];
}

Field Kernel::convolve(const Field& phi) const {
    if (phi.grid() != grid_) throw ConfigError("Kernel::convolve: grid mismatch");
    return plan_ == ConvPlan::Fft ? convolve_fft(phi) : convolve_direct(phi);
}

Field Kernel::convolve_direct(const Field& phi) const {
    const int nx = grid_.cells(0);
    const int ny = grid_.cells(1);
    Field out(grid_);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            long double acc = 0.0L;
            for (int jj = 0; jj < ny; ++jj) {
                for (int ii = 0; ii < nx; ++ii) {
                    acc += static_cast<long double>(table_at(i - ii, j - jj)) * phi.at(ii, jj);
                }
            }
            out.at(i, j) = static_cast<double>(acc * grid_.cell_volume());
        }
    }
    return out;
}

Field Kernel::convolve_fft(const Field& phi) const {
    const FftWorkspace& ws = *fft_;
    const int nx = grid_.cells(0);
    const int ny = grid_.cells(1);
    const std::size_t real_n = static_cast<std::size_t>(ws.py) * ws.px;
    const std::size_t cplx_n = static_cast<std::size_t>(ws.py) * (ws.px / 2 + 1);

    std::memset(ws.real, 0, real_n * sizeof(double));
    for (int j = 0; j < ny; ++j) {
        std::memcpy(ws.real + static_cast<std::size_t>(j) * ws.px,
                    phi.values().data() + static_cast<std::size_t>(j) * nx,
                    static_cast<std::size_t>(nx) * sizeof(double));
    }
    fftw_execute(ws.forward);
    const double scale = grid_.cell_volume() / (static_cast<double>(ws.px) * ws.py);
    for (std::size_t k = 0; k < cplx_n; ++k) {
        const double re = ws.spectrum[k][0] * ws.kernel_hat[k][0] -
                          ws.spectrum[k][1] * ws.kernel_hat[k][1];
        const double im = ws.spectrum[k][0] * ws.kernel_hat[k][1] +
                          ws.spectrum[k][1] * ws.kernel_hat[k][0];
        ws.spectrum[k][0] = re * scale;
        ws.spectrum[k][1] = im * scale;
    }
    fftw_execute(ws.inverse);

    Field out(grid_);
    for (int j = 0; j < ny; ++j) {
        const double* row = ws.real + static_cast<std::size_t>(j + ny - 1) * ws.px + (nx - 1);
        std::memcpy(out.values().data() + static_cast<std::size_t>(j) * nx, row,
                    static_cast<std::size_t>(nx) * sizeof(double));
    }
    return out;
}

double Kernel::abs_row_sum_sup() const {
    const int nx = grid_.cells(0);
    const int ny = grid_.cells(1);
    double sup = 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            long double acc = 0.0L;
            for (int jj = 0; jj < ny; ++jj) {
                for (int ii = 0; ii < nx; ++ii) {
                    acc += std::abs(table_at(i - ii, j - jj));
                }
            }
            sup = std::max(sup, static_cast<double>(acc * grid_.cell_volume()));
        }
    }
    return sup;
}

}  // namespace npfs
