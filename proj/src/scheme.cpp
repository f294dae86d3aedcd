#include "npfs/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "npfs/errors.hpp"
#include "npfs/helmholtz.hpp"
#include "npfs/util.hpp"

namespace npfs {

// ---------------------------------------------------------------------------
// Profiles and forcing
// ---------------------------------------------------------------------------

ProfileSpec ProfileSpec::zero() { return {}; }

ProfileSpec ProfileSpec::constant(double value) {
    ProfileSpec p;
    p.kind = Kind::Constant;
    p.value = value;
    return p;
}

ProfileSpec ProfileSpec::cosine(double amplitude, int kx, int ky, double offset) {
    ProfileSpec p;
    p.kind = Kind::Cosine;
    p.amplitude = amplitude;
    p.kx = kx;
    p.ky = ky;
    p.offset = offset;
    return p;
}

ProfileSpec ProfileSpec::gaussian(double amplitude, double cx, double cy, double width) {
    ProfileSpec p;
    p.kind = Kind::Gaussian;
    p.amplitude = amplitude;
    p.cx = cx;
    p.cy = cy;
    p.width = width;
    return p;
}

Field ProfileSpec::sample(const Grid& grid) const {
    switch (kind) {
        case Kind::Zero:
            return Field(grid, 0.0);
        case Kind::Constant:
            return Field(grid, value);
        case Kind::Cosine: {
            const double wx = kx * std::numbers::pi / grid.length(0);
            const double wy = grid.dim() == 2 ? ky * std::numbers::pi / grid.length(1) : 0.0;
            return Field::sample(grid, [&](double x, double y) {
                double v = amplitude * std::cos(wx * x);
                if (grid.dim() == 2) v *= std::cos(wy * y);
                return v + offset;
            });
        }
        case Kind::Gaussian: {
            if (!(width > 0.0)) throw ConfigError("gaussian profile: width must be positive");
            const double inv2w2 = 1.0 / (2.0 * width * width);
            return Field::sample(grid, [&](double x, double y) {
                double r2 = (x - cx) * (x - cx);
                if (grid.dim() == 2) r2 += (y - cy) * (y - cy);
                return amplitude * std::exp(-r2 * inv2w2);
            });
        }
    }
    throw ConfigError("unknown profile kind");
}

std::string ProfileSpec::to_expr() const {
    switch (kind) {
        case Kind::Zero:
            return "zero";
        case Kind::Constant:
            return "constant value=" + format_double(value);
        case Kind::Cosine:
            return "cosine amp=" + format_double(amplitude) + " kx=" + std::to_string(kx) +
                   " ky=" + std::to_string(ky) + " offset=" + format_double(offset);
        case Kind::Gaussian:
            return "gaussian amp=" + format_double(amplitude) + " cx=" + format_double(cx) +
                   " cy=" + format_double(cy) + " width=" + format_double(width);
    }
    return "?";
}

TemporalSpec TemporalSpec::one() { return {}; }

TemporalSpec TemporalSpec::poly(std::vector<double> coeffs) {
    TemporalSpec t;
    t.kind = Kind::Poly;
    t.coeffs = std::move(coeffs);
    return t;
}

TemporalSpec TemporalSpec::cosine(double amplitude, double omega, double phase) {
    TemporalSpec t;
    t.kind = Kind::Cosine;
    t.amplitude = amplitude;
    t.omega = omega;
    t.phase = phase;
    return t;
}

TemporalSpec TemporalSpec::sine(double amplitude, double omega) {
    TemporalSpec t;
    t.kind = Kind::Sine;
    t.amplitude = amplitude;
    t.omega = omega;
    return t;
}

double TemporalSpec::value(double t) const {
    switch (kind) {
        case Kind::One:
            return 1.0;
        case Kind::Poly: {
            double acc = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * t + coeffs[k];
            return acc;
        }
        case Kind::Cosine:
            return amplitude * std::cos(omega * t + phase);
        case Kind::Sine:
            return amplitude * std::sin(omega * t);
    }
    throw ConfigError("unknown temporal kind");
}

double TemporalSpec::interval_average(double t0, double t1) const {
    if (kind == Kind::One) return 1.0;
    // 3-point Gauss-Legendre, exact through degree 5.
    static const double node = std::sqrt(3.0 / 5.0);
    const double mid = 0.5 * (t0 + t1);
    const double half = 0.5 * (t1 - t0);
    return (5.0 * value(mid - node * half) + 8.0 * value(mid) +
            5.0 * value(mid + node * half)) /
           18.0;
}

std::string TemporalSpec::to_expr() const {
    switch (kind) {
        case Kind::One:
            return "one";
        case Kind::Poly: {
            std::string s = "poly";
            for (std::size_t k = 0; k < coeffs.size(); ++k) {
                s += " c" + std::to_string(k) + "=" + format_double(coeffs[k]);
            }
            return s;
        }
        case Kind::Cosine:
            return "cosine amp=" + format_double(amplitude) + " omega=" + format_double(omega) +
                   " phase=" + format_double(phase);
        case Kind::Sine:
            return "sine amp=" + format_double(amplitude) + " omega=" + format_double(omega);
    }
    return "?";
}

Field ForcingSpec::at(const Grid& grid, double t) const {
    Field f = spatial.sample(grid);
    f *= temporal.value(t);
    return f;
}

Field ForcingSpec::average(const Grid& grid, int k, double h) const {
    Field f = spatial.sample(grid);
    f *= temporal.interval_average((k - 1) * h, k * h);
    return f;
}

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

Scenario Scenario::with_steps(int n) const {
    Scenario s = *this;
    s.steps = n;
    return s;
}

void Scenario::validate() const {
    if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("scenario: T must be positive");
    if (steps < 1) throw ConfigError("scenario: N must be >= 1");
    const StepAdmissibility adm = admissible_h(nl);
    if (!adm.admits(h())) {
        throw ConfigError("scenario: step size h = T/N = " + format_double(h()) +
                          " is not admissible; the scalar solve requires h < min{1, 1/Lip(pi)} = " +
                          format_double(adm.h_max));
    }
    theta0.sample(grid).require_finite("scenario: theta0");
    phi0.sample(grid).require_finite("scenario: phi0");
    v0.sample(grid).require_finite("scenario: v0");
}

// ---------------------------------------------------------------------------
// Trajectory
// ---------------------------------------------------------------------------

Trajectory::Trajectory(Grid grid, double T, std::vector<StepState> states,
                       std::vector<Field> forcing_averages,
                       std::vector<StepResiduals> residuals)
    : grid_(grid),
      T_(T),
      states_(std::move(states)),
      forcing_averages_(std::move(forcing_averages)),
      residuals_(std::move(residuals)) {
    if (states_.size() < 2) throw ConfigError("trajectory: needs at least two time levels");
    if (!(T_ > 0.0)) throw ConfigError("trajectory: T must be positive");
    const std::size_t n = states_.size() - 1;
    if (!forcing_averages_.empty() && forcing_averages_.size() != n) {
        throw ConfigError("trajectory: forcing average count must equal the step count");
    }
    if (!residuals_.empty() && residuals_.size() != n) {
        throw ConfigError("trajectory: residual count must equal the step count");
    }
    for (const StepState& s : states_) {
        if (s.theta.grid() != grid_ || s.phi.grid() != grid_ || s.v.grid() != grid_ ||
            s.z.grid() != grid_) {
            throw ConfigError("trajectory: state fields on mismatched grids");
        }
    }
}

Trajectory Trajectory::from_nodes(const Grid& grid, double T, std::vector<Field> theta,
                                  std::vector<Field> phi, const Field& v0) {
    if (theta.size() != phi.size() || theta.size() < 2) {
        throw ConfigError("trajectory nodes: need equal theta/phi sequences of length N+1");
    }
    const int n_steps = static_cast<int>(theta.size()) - 1;
    const double h = T / n_steps;
    std::vector<StepState> states;
    states.reserve(theta.size());
    states.push_back({0, std::move(theta[0]), std::move(phi[0]), v0, Field(grid, 0.0), false});
    for (int n = 1; n <= n_steps; ++n) {
        Field v = phi[n];
        v -= states.back().phi;
        v *= 1.0 / h;
        Field z = v;
        z -= states.back().v;
        z *= 1.0 / h;
        states.push_back({n, std::move(theta[n]), std::move(phi[n]), std::move(v),
                          std::move(z), true});
    }
    return Trajectory(grid, T, std::move(states), {}, {});
}

const Field& Trajectory::node(Quantity q, int n) const {
    switch (q) {
        case Quantity::Theta: return states_[n].theta;
        case Quantity::Phi: return states_[n].phi;
        case Quantity::V: return states_[n].v;
        case Quantity::Z: return states_[n].z;
        case Quantity::F: break;
    }
    throw ConfigError("trajectory: forcing has no node values; use bar()");
}

namespace {

// Snap tolerance for locating t relative to the partition: evaluation times
// arrive as n*h products, whose rounding can be several ulps of n.
constexpr double kNodeSnap = 1e-9;

void require_time_in_range(double t, double T) {
    if (!(t >= -kNodeSnap * T) || !(t <= T * (1.0 + kNodeSnap))) {
        throw ConfigError("interpolant: time " + format_double(t) + " outside [0, " +
                          format_double(T) + "]");
    }
}

}  // namespace

int Trajectory::interval_of(double t) const {
    require_time_in_range(t, T_);
    const double u = t / h();
    const int n = static_cast<int>(std::ceil(u - kNodeSnap)) - 1;
    return std::clamp(n, 0, steps() - 1);
}

Field Trajectory::hat(Quantity q, double t) const {
    if (q != Quantity::Theta && q != Quantity::Phi && q != Quantity::V) {
        throw ConfigError("hat interpolant is defined for theta, phi, v only");
    }
    require_time_in_range(t, T_);
    const double u = t / h();
    int n = std::clamp(static_cast<int>(std::floor(u)), 0, steps() - 1);
    double s = u - n;
    if (s < kNodeSnap) return node(q, n);
    if (s > 1.0 - kNodeSnap) return node(q, n + 1);
    Field out = node(q, n + 1);
    out -= node(q, n);
    out *= s;
    out += node(q, n);
    return out;
}

Field Trajectory::bar(Quantity q, double t) const {
    const int n = interval_of(t);
    if (q == Quantity::F) {
        if (!has_forcing()) throw ConfigError("trajectory: no forcing averages stored");
        return forcing_average(n + 1);
    }
    return node(q, n + 1);
}

Field Trajectory::underline(Quantity q, double t) const {
    if (q != Quantity::Theta && q != Quantity::Phi) {
        throw ConfigError("underline interpolant is defined for theta, phi only");
    }
    return node(q, interval_of(t));
}

// ---------------------------------------------------------------------------
// Stepping
// ---------------------------------------------------------------------------

StepState step(const StepState& prev, const Kernel& kernel, const Nonlinearity& nl,
               const Field& f_next, double h, int threads, StepResiduals* residuals) {
    const Grid& grid = prev.theta.grid();
    require_same_grid(prev.theta, f_next, "step: forcing");
    if (!admissible_h(nl).admits(h)) {
        throw NumericalError("step: inadmissible step size h = " + format_double(h));
    }

    const Field conv = kernel.convolve(prev.phi);
    const Field& a = kernel.a();

    // Scalar-equation right-hand side
    //   g = h^2 theta_n + (1+h) phi_n + h v_n - h^2 a phi_n + h^2 (J*phi_n).
    // The wave-equation residual divides the defect of this combination by
    // h^2, so accumulate in extended precision and round once.
    Field g(grid);
    {
        const long double lh = h;
        const long double lh2 = lh * lh;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const long double acc = lh2 * prev.theta[k] + (1.0L + lh) * prev.phi[k] +
                                    lh * prev.v[k] -
                                    lh2 * static_cast<long double>(a[k]) * prev.phi[k] +
                                    lh2 * conv[k];
            g[k] = static_cast<double>(acc);
        }
    }

    Field phi_next = resolvent_field(g, h, nl, threads);

    Field v_next = phi_next;
    v_next -= prev.phi;
    v_next *= 1.0 / h;
    Field z_next = v_next;
    z_next -= prev.v;
    z_next *= 1.0 / h;

    // Screened Neumann solve: theta_{n+1} - h Lap theta_{n+1}
    //                          = h f_{n+1} + phi_n - phi_{n+1} + theta_n.
    Field rhs = f_next;
    rhs *= h;
    rhs += prev.phi;
    rhs -= phi_next;
    rhs += prev.theta;
    Field theta_next = helmholtz_solve(rhs, h);

    if (residuals) {
        const Field lap = neumann_laplacian(theta_next);
        Field heat(grid);
        Field wave(grid);
        for (std::size_t k = 0; k < heat.size(); ++k) {
            heat[k] = (theta_next[k] - prev.theta[k]) / h + v_next[k] - lap[k] - f_next[k];
            wave[k] = z_next[k] + v_next[k] + a[k] * prev.phi[k] - conv[k] +
                      nl.beta(phi_next[k]) + nl.pi(phi_next[k]) - prev.theta[k];
        }
        residuals->heat = l2_norm(heat);
        residuals->wave = l2_norm(wave);
    }

    theta_next.require_finite("step: theta");
    phi_next.require_finite("step: phi");
    return StepState{prev.n + 1, std::move(theta_next), std::move(phi_next),
                     std::move(v_next), std::move(z_next), true};
}

Trajectory solve_trajectory(const Scenario& s, int threads) {
    s.validate();
    const double h = s.h();
    const Kernel kernel(s.kernel, s.grid, s.plan);

    std::vector<Field> f_avgs;
    f_avgs.reserve(s.steps);
    for (int k = 1; k <= s.steps; ++k) f_avgs.push_back(s.forcing.average(s.grid, k, h));

    std::vector<StepState> states;
    states.reserve(s.steps + 1);
    states.push_back({0, s.theta0.sample(s.grid), s.phi0.sample(s.grid), s.v0.sample(s.grid),
                      Field(s.grid, 0.0), false});

    std::vector<StepResiduals> residuals(s.steps);
    for (int n = 0; n < s.steps; ++n) {
        try {
            states.push_back(step(states.back(), kernel, s.nl, f_avgs[n], h, threads,
                                  &residuals[n]));
        } catch (const NumericalError& e) {
            throw NumericalError("step " + std::to_string(n + 1) + ": " + e.what());
        }
    }
    return Trajectory(s.grid, s.T, std::move(states), std::move(f_avgs), std::move(residuals));
}

}  // namespace npfs
