#pragma once

#include <string>
#include <vector>

#include "npfs/field.hpp"
#include "npfs/kernel.hpp"
#include "npfs/nonlinearity.hpp"

namespace npfs {

/// Spatial profile presets for initial data and the spatial factor of the
/// forcing. Cosine modes use cos(k*pi*x/L) per axis and are compatible with
/// the zero-flux boundary.
struct ProfileSpec {
    enum class Kind { Zero, Constant, Cosine, Gaussian };

    Kind kind = Kind::Zero;
    double value = 0.0;                 // Constant
    double amplitude = 0.0;             // Cosine, Gaussian
    int kx = 0, ky = 0;                 // Cosine mode numbers
    double offset = 0.0;                // Cosine
    double cx = 0.0, cy = 0.0;          // Gaussian center
    double width = 1.0;                 // Gaussian

    static ProfileSpec zero();
    static ProfileSpec constant(double value);
    static ProfileSpec cosine(double amplitude, int kx, int ky = 0, double offset = 0.0);
    static ProfileSpec gaussian(double amplitude, double cx, double cy, double width);

    Field sample(const Grid& grid) const;
    /// The preset expression accepted back by the config parser.
    std::string to_expr() const;
};

/// Temporal factor presets. Averages over a step interval are computed with
/// 3-point Gauss-Legendre, exact for polynomials up to degree 5.
struct TemporalSpec {
    enum class Kind { One, Poly, Cosine, Sine };

    Kind kind = Kind::One;
    std::vector<double> coeffs;         // Poly: c0 + c1 t + ... (degree <= 5)
    double amplitude = 1.0, omega = 1.0, phase = 0.0;

    static TemporalSpec one();
    static TemporalSpec poly(std::vector<double> coeffs);
    static TemporalSpec cosine(double amplitude, double omega, double phase = 0.0);
    static TemporalSpec sine(double amplitude, double omega);

    double value(double t) const;
    double interval_average(double t0, double t1) const;
    std::string to_expr() const;
};

/// Separable forcing f(x, t) = spatial(x) * temporal(t).
struct ForcingSpec {
    ProfileSpec spatial;
    TemporalSpec temporal;

    Field at(const Grid& grid, double t) const;
    /// f_k: the temporal average over ((k-1)h, kh] applied to the spatial
    /// factor, k = 1..N.
    Field average(const Grid& grid, int k, double h) const;
};

/// Complete problem description for one discrete run.
struct Scenario {
    Grid grid;
    double T;
    int steps;  // N; the step size is h = T / N
    KernelSpec kernel;
    ConvPlan plan = ConvPlan::Fft;
    Nonlinearity nl;
    ForcingSpec forcing;
    ProfileSpec theta0, phi0, v0;

    double h() const { return T / steps; }
    Scenario with_steps(int n) const;
    /// Throws ConfigError on inadmissible h or invalid initial data.
    void validate() const;
};

/// One time level: the fields and, for n >= 1, the backward differences
/// v_n = (phi_n - phi_{n-1})/h and z_n = (v_n - v_{n-1})/h stored exactly as
/// computed. z is undefined at n = 0 (stored as zero, flagged).
struct StepState {
    int n = 0;
    Field theta, phi, v, z;
    bool z_defined = false;
};

/// H-norms of the two first-form equation residuals after a step:
///   heat: (theta_{n+1}-theta_n)/h + v_{n+1} - Lap theta_{n+1} - f_{n+1}
///   wave: z_{n+1} + v_{n+1} + a phi_n - J*phi_n + beta(phi_{n+1})
///         + pi(phi_{n+1}) - theta_n
struct StepResiduals {
    double heat = 0.0;
    double wave = 0.0;
};

enum class Quantity { Theta, Phi, V, Z, F };

/// The full discrete solution: states n = 0..N, the forcing averages
/// f_1..f_N, per-step residuals, and the time interpolants.
///
/// hat(q, t): piecewise-linear interpolant through the nodes, t in [0, T].
/// bar(q, t) / underline(q, t): right/left piecewise-constant values on the
/// half-open intervals (nh, (n+1)h]. Their value at t = 0 is taken from the
/// first interval (right-continuous extension; the scheme itself never needs
/// it).
class Trajectory {
public:
    Trajectory(Grid grid, double T, std::vector<StepState> states,
               std::vector<Field> forcing_averages, std::vector<StepResiduals> residuals);

    /// Build a trajectory from prescribed theta/phi node values and v0; the
    /// v and z sequences are derived by the exact backward differences.
    /// Intended for synthetic inputs in tests and diagnostics.
    static Trajectory from_nodes(const Grid& grid, double T, std::vector<Field> theta,
                                 std::vector<Field> phi, const Field& v0);

    const Grid& grid() const { return grid_; }
    double final_time() const { return T_; }
    int steps() const { return static_cast<int>(states_.size()) - 1; }
    double h() const { return T_ / steps(); }

    const StepState& state(int n) const { return states_[n]; }
    StepState& state(int n) { return states_[n]; }
    /// f_k for k = 1..N; empty when built from raw nodes.
    const Field& forcing_average(int k) const { return forcing_averages_[k - 1]; }
    bool has_forcing() const { return !forcing_averages_.empty(); }
    /// Residuals of step n (producing state n), n = 1..N; empty for raw nodes.
    const StepResiduals& residuals(int n) const { return residuals_[n - 1]; }
    bool has_residuals() const { return !residuals_.empty(); }

    Field hat(Quantity q, double t) const;
    Field bar(Quantity q, double t) const;
    Field underline(Quantity q, double t) const;

    /// Index of the interval (nh, (n+1)h] containing t (right-continuous at
    /// 0), clamped to [0, N-1].
    int interval_of(double t) const;

private:
    const Field& node(Quantity q, int n) const;

    Grid grid_;
    double T_;
    std::vector<StepState> states_;
    std::vector<Field> forcing_averages_;
    std::vector<StepResiduals> residuals_;
};

/// Advance one step: solves the pointwise scalar equation for phi_{n+1},
/// derives v_{n+1}, z_{n+1}, then the screened Neumann solve for theta_{n+1}.
/// f_next is the forcing average over the step interval.
StepState step(const StepState& prev, const Kernel& kernel, const Nonlinearity& nl,
               const Field& f_next, double h, int threads = 1,
               StepResiduals* residuals = nullptr);

Trajectory solve_trajectory(const Scenario& s, int threads = 1);

}  // namespace npfs
