#include "npfs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "npfs/errors.hpp"

namespace npfs {

namespace {

double safe_rel(double mismatch, double scale) {
    return scale > 0.0 ? mismatch / scale : mismatch;
}

// ||a - b||_H without building the difference field.
double l2_diff_norm(const Field& a, const Field& b) {
    long double acc = 0.0L;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const long double d = static_cast<long double>(a[k]) - b[k];
        acc += d * d;
    }
    return std::sqrt(static_cast<double>(acc * a.grid().cell_volume()));
}

double grad_diff_norm_sq(const Field& a, const Field& b) {
    const Grid& g = a.grid();
    const int nx = g.cells(0);
    const int ny = g.cells(1);
    long double acc = 0.0L;
    const double inv_dx = 1.0 / g.spacing(0);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const long double gx =
                ((a.at(i + 1, j) - b.at(i + 1, j)) - (a.at(i, j) - b.at(i, j))) * inv_dx;
            acc += gx * gx;
        }
    }
    if (g.dim() == 2) {
        const double inv_dy = 1.0 / g.spacing(1);
        for (int j = 0; j + 1 < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const long double gy =
                    ((a.at(i, j + 1) - b.at(i, j + 1)) - (a.at(i, j) - b.at(i, j))) * inv_dy;
                acc += gy * gy;
            }
        }
    }
    return static_cast<double>(acc * g.cell_volume());
}

}  // namespace

bool EstimateReport::all_finite() const {
    for (double v : {e1, e2, e3, e4, e5, e6, under}) {
        if (!std::isfinite(v) || v < 0.0) return false;
    }
    return true;
}

EstimateReport apriori_report(const Trajectory& traj) {
    const int n_steps = traj.steps();
    const double h = traj.h();
    EstimateReport r;

    double sup_v_h = 0.0, sup_phi_h = 0.0, sup_theta_v = 0.0;
    double sup_v_inf = 0.0, sup_phi_inf = 0.0, sup_z_h = 0.0;
    double dt_theta_l2 = 0.0, lap_l2 = 0.0, z_l2_inf = 0.0;
    for (int n = 1; n <= n_steps; ++n) {
        const StepState& s = traj.state(n);
        sup_v_h = std::max(sup_v_h, l2_norm(s.v));
        sup_phi_h = std::max(sup_phi_h, l2_norm(s.phi));
        sup_theta_v = std::max(sup_theta_v, v_norm(s.theta));
        sup_v_inf = std::max(sup_v_inf, linf_norm(s.v));
        sup_phi_inf = std::max(sup_phi_inf, linf_norm(s.phi));
        sup_z_h = std::max(sup_z_h, l2_norm(s.z));
        z_l2_inf += h * linf_norm(s.z) * linf_norm(s.z);
        lap_l2 += h * l2_norm_sq(neumann_laplacian(s.theta));
        const double slice = l2_diff_norm(s.theta, traj.state(n - 1).theta) / h;
        dt_theta_l2 += h * slice * slice;
    }
    r.e1 = sup_v_h * sup_v_h + sup_phi_h * sup_phi_h + dt_theta_l2 + sup_theta_v * sup_theta_v;
    r.e2 = std::sqrt(lap_l2);
    r.e3 = sup_v_inf * sup_v_inf + sup_phi_inf * sup_phi_inf;
    r.e4 = z_l2_inf;
    r.e5 = sup_z_h * sup_z_h;

    // Composite hat-interpolant norm.
    double theta_hat_l2 = 0.0;       // exact quadratic closed form per interval
    double v_hat_env_l2_inf = 0.0;   // endpoint envelope of the sup norm
    double sup_theta_node_v = 0.0, sup_phi_node_inf = 0.0;
    double sup_v_node_h = 0.0, sup_v_node_inf = 0.0;
    for (int n = 0; n <= n_steps; ++n) {
        const StepState& s = traj.state(n);
        sup_theta_node_v = std::max(sup_theta_node_v, v_norm(s.theta));
        sup_phi_node_inf = std::max(sup_phi_node_inf, linf_norm(s.phi));
        sup_v_node_h = std::max(sup_v_node_h, l2_norm(s.v));
        sup_v_node_inf = std::max(sup_v_node_inf, linf_norm(s.v));
        if (n < n_steps) {
            const Field& a = traj.state(n).theta;
            const Field& b = traj.state(n + 1).theta;
            theta_hat_l2 += h / 3.0 * (l2_norm_sq(a) + l2_inner(a, b) + l2_norm_sq(b));
            const double env =
                std::max(linf_norm(traj.state(n).v), linf_norm(traj.state(n + 1).v));
            v_hat_env_l2_inf += h * env * env;
        }
    }
    r.e6 = theta_hat_l2 + dt_theta_l2 + sup_theta_node_v * sup_theta_node_v +
           sup_phi_node_inf * sup_phi_node_inf + sup_v_inf * sup_v_inf +
           sup_v_node_h * sup_v_node_h + sup_z_h * sup_z_h + v_hat_env_l2_inf + z_l2_inf +
           sup_v_node_inf * sup_v_node_inf;

    double sup_phi_under = 0.0, sup_theta_under_v = 0.0, theta_under_l2_inf = 0.0;
    for (int n = 0; n < n_steps; ++n) {
        const StepState& s = traj.state(n);
        sup_phi_under = std::max(sup_phi_under, linf_norm(s.phi));
        sup_theta_under_v = std::max(sup_theta_under_v, v_norm(s.theta));
        theta_under_l2_inf += h * linf_norm(s.theta) * linf_norm(s.theta);
    }
    r.under = sup_phi_under * sup_phi_under + sup_theta_under_v * sup_theta_under_v +
              theta_under_l2_inf;
    return r;
}

// ---------------------------------------------------------------------------
// Distances on the common refinement
// ---------------------------------------------------------------------------

namespace {

struct UnionPartition {
    long long levels;  // L: number of union subintervals
    long long ratio_a; // L / N_a
    long long ratio_b; // L / N_b
};

UnionPartition make_union(const Trajectory& a, const Trajectory& b) {
    if (a.grid() != b.grid()) throw ConfigError("trajectory distance: grid mismatch");
    if (a.final_time() != b.final_time()) {
        throw ConfigError("trajectory distance: final times differ");
    }
    const long long na = a.steps(), nb = b.steps();
    const long long l = std::lcm(na, nb);
    if (l > (1LL << 24)) {
        throw ConfigError("trajectory distance: union time partition too fine (lcm of step "
                          "counts exceeds 2^24)");
    }
    return {l, l / na, l / nb};
}

// Node value of the piecewise-linear interpolant at union node m, written
// into `out`. Exact at the trajectory's own nodes.
void hat_at_union_node(const Trajectory& t, Quantity q, long long m, long long ratio,
                       std::vector<double>& out) {
    const long long n = m / ratio;
    const long long rem = m % ratio;
    if (rem == 0) {
        const Field& f = (q == Quantity::Theta)  ? t.state(static_cast<int>(n)).theta
                         : (q == Quantity::Phi) ? t.state(static_cast<int>(n)).phi
                                                : t.state(static_cast<int>(n)).v;
        std::copy(f.values().begin(), f.values().end(), out.begin());
        return;
    }
    const double s = static_cast<double>(rem) / static_cast<double>(ratio);
    const StepState& lo = t.state(static_cast<int>(n));
    const StepState& hi = t.state(static_cast<int>(n) + 1);
    const Field& flo = (q == Quantity::Theta) ? lo.theta : (q == Quantity::Phi) ? lo.phi : lo.v;
    const Field& fhi = (q == Quantity::Theta) ? hi.theta : (q == Quantity::Phi) ? hi.phi : hi.v;
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = flo[k] + s * (fhi[k] - flo[k]);
    }
}

ErrorMetrics five_term_distance(const Trajectory& a, const Trajectory& b) {
    const UnionPartition u = make_union(a, b);
    const Grid& grid = a.grid();
    const std::size_t m = grid.size();
    const double tau = a.final_time() / static_cast<double>(u.levels);

    ErrorMetrics em;
    std::vector<double> buf_a(m), buf_b(m);

    // Sup-in-time terms: the hat differences are piecewise linear on the
    // union partition and t -> ||.||_H is convex per subinterval, so the
    // suprema are attained at union nodes.
    for (Quantity q : {Quantity::V, Quantity::Phi, Quantity::Theta}) {
        double sup = 0.0;
        for (long long node = 0; node <= u.levels; ++node) {
            hat_at_union_node(a, q, node, u.ratio_a, buf_a);
            hat_at_union_node(b, q, node, u.ratio_b, buf_b);
            long double acc = 0.0L;
            for (std::size_t k = 0; k < m; ++k) {
                const long double d = static_cast<long double>(buf_a[k]) - buf_b[k];
                acc += d * d;
            }
            sup = std::max(sup, std::sqrt(static_cast<double>(acc * grid.cell_volume())));
        }
        (q == Quantity::V ? em.v_sup : q == Quantity::Phi ? em.phi_sup : em.theta_sup) = sup;
    }

    // L2-in-time terms: bar functions are constant on union subintervals.
    long double v_l2 = 0.0L, grad_l2 = 0.0L;
    for (long long iv = 0; iv < u.levels; ++iv) {
        const int na = static_cast<int>(iv / u.ratio_a) + 1;
        const int nb = static_cast<int>(iv / u.ratio_b) + 1;
        const double dv = l2_diff_norm(a.state(na).v, b.state(nb).v);
        v_l2 += static_cast<long double>(tau) * dv * dv;
        grad_l2 += static_cast<long double>(tau) *
                   grad_diff_norm_sq(a.state(na).theta, b.state(nb).theta);
    }
    em.v_l2 = std::sqrt(static_cast<double>(v_l2));
    em.grad_l2 = std::sqrt(static_cast<double>(grad_l2));
    return em;
}

}  // namespace

ErrorMetrics discrete_error(const Trajectory& coarse, const Trajectory& ref) {
    const long long na = coarse.steps(), nb = ref.steps();
    if (na % nb != 0 && nb % na != 0) {
        throw ConfigError("discrete_error: step counts must be nested (one divides the other)");
    }
    return five_term_distance(coarse, ref);
}

double cauchy_check(const Trajectory& a, const Trajectory& b) {
    return five_term_distance(a, b).total();
}

RateTable convergence_study(const Scenario& s, const std::vector<int>& n_list, int n_ref,
                            int threads) {
    if (n_list.empty()) throw ConfigError("convergence_study: empty step-count list");
    for (int n : n_list) {
        if (n < 1 || n_ref % n != 0) {
            throw ConfigError("convergence_study: every N must divide N_ref (got N=" +
                              std::to_string(n) + ", N_ref=" + std::to_string(n_ref) + ")");
        }
    }

    const Trajectory ref = solve_trajectory(s.with_steps(n_ref), threads);

    RateTable table;
    std::vector<int> sorted = n_list;
    std::sort(sorted.begin(), sorted.end());  // ascending N = descending h
    for (int n : sorted) {
        const Trajectory traj = solve_trajectory(s.with_steps(n), threads);
        table.rows.push_back({n, s.T / n, discrete_error(traj, ref)});
    }

    std::vector<double> lx, ly;
    for (const RateRow& row : table.rows) {
        if (row.metrics.total() > 0.0) {
            lx.push_back(std::log(row.h));
            ly.push_back(std::log(row.metrics.total()));
        }
    }
    table.degenerate = lx.empty();
    if (lx.size() >= 2) {
        const double n = static_cast<double>(lx.size());
        const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
        const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t k = 0; k < lx.size(); ++k) {
            sxy += (lx[k] - mx) * (ly[k] - my);
            sxx += (lx[k] - mx) * (lx[k] - mx);
        }
        if (sxx > 0.0) {
            table.has_fit = true;
            table.slope = sxy / sxx;
            table.m_hat = std::exp(my - table.slope * mx);
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Structural identities and per-step inequalities
// ---------------------------------------------------------------------------

double IdentityResiduals::max() const { return *std::max_element(rel.begin(), rel.end()); }

IdentityResiduals interpolant_identities(const Trajectory& traj) {
    const int n_steps = traj.steps();
    const double h = traj.h();
    IdentityResiduals out;

    // Sup-norm maxima: the hat sup over [0,T] equals the max of the initial
    // value and the bar sup (norm convexity puts suprema at nodes).
    auto sup_identity = [&](Quantity q, double (*norm)(const Field&)) {
        double all = 0.0, bar = 0.0;
        for (int n = 0; n <= n_steps; ++n) {
            const StepState& s = traj.state(n);
            const Field& f = (q == Quantity::Theta) ? s.theta
                             : (q == Quantity::Phi) ? s.phi
                                                    : s.v;
            const double v = norm(f);
            all = std::max(all, v);
            if (n >= 1) bar = std::max(bar, v);
        }
        const double initial =
            norm(q == Quantity::Theta ? traj.state(0).theta
                 : q == Quantity::Phi ? traj.state(0).phi
                                      : traj.state(0).v);
        return safe_rel(std::abs(all - std::max(initial, bar)), all);
    };
    out.rel[0] = sup_identity(Quantity::Theta, v_norm);
    out.rel[1] = sup_identity(Quantity::Phi, linf_norm);
    out.rel[2] = sup_identity(Quantity::V, linf_norm);

    // ||theta_bar - theta_hat||^2_{L2 H} against (h^2/3)||d/dt theta_hat||^2_{L2 H},
    // both by their own closed forms.
    {
        double lhs = 0.0, dt_sq = 0.0;
        for (int n = 0; n < n_steps; ++n) {
            Field d = traj.state(n + 1).theta;
            d -= traj.state(n).theta;
            lhs += h / 3.0 * l2_norm_sq(d);
            d *= 1.0 / h;
            dt_sq += h * l2_norm_sq(d);
        }
        const double rhs = h * h / 3.0 * dt_sq;
        out.rel[3] = safe_rel(std::abs(lhs - rhs), std::max(lhs, rhs));
    }

    // ||phi_bar - phi_hat||_{Linf Linf} = h ||d/dt phi_hat|| = h ||v_bar||.
    {
        double lhs = 0.0, mid = 0.0, rhs = 0.0;
        for (int n = 0; n < n_steps; ++n) {
            Field d = traj.state(n + 1).phi;
            d -= traj.state(n).phi;
            lhs = std::max(lhs, linf_norm(d));
            d *= 1.0 / h;
            mid = std::max(mid, h * linf_norm(d));
            rhs = std::max(rhs, h * linf_norm(traj.state(n + 1).v));
        }
        out.rel[4] = safe_rel(std::max(std::abs(lhs - mid), std::abs(lhs - rhs)),
                              std::max({lhs, mid, rhs}));
    }

    // ||v_bar - v_hat||_{Linf H} = h ||d/dt v_hat|| = h ||z_bar||.
    {
        double lhs = 0.0, mid = 0.0, rhs = 0.0;
        for (int n = 0; n < n_steps; ++n) {
            Field d = traj.state(n + 1).v;
            d -= traj.state(n).v;
            lhs = std::max(lhs, l2_norm(d));
            d *= 1.0 / h;
            mid = std::max(mid, h * l2_norm(d));
            rhs = std::max(rhs, h * l2_norm(traj.state(n + 1).z));
        }
        out.rel[5] = safe_rel(std::max(std::abs(lhs - mid), std::abs(lhs - rhs)),
                              std::max({lhs, mid, rhs}));
    }

    // h * (slope of the hat) recovers bar - underline per interval.
    auto slope_identity = [&](Quantity q) {
        double mismatch = 0.0, scale = 0.0;
        for (int n = 0; n < n_steps; ++n) {
            const Field& lo = q == Quantity::Theta ? traj.state(n).theta : traj.state(n).phi;
            const Field& hi =
                q == Quantity::Theta ? traj.state(n + 1).theta : traj.state(n + 1).phi;
            Field slope = hi;
            slope -= lo;
            slope *= 1.0 / h;  // d/dt of the hat on this interval
            for (std::size_t k = 0; k < slope.size(); ++k) {
                mismatch = std::max(mismatch, std::abs(h * slope[k] - (hi[k] - lo[k])));
                scale = std::max(scale, std::abs(hi[k] - lo[k]));
            }
        }
        return safe_rel(mismatch, scale);
    };
    out.rel[6] = slope_identity(Quantity::Theta);
    out.rel[7] = slope_identity(Quantity::Phi);
    return out;
}

double mass_balance_max(const Trajectory& traj) {
    if (!traj.has_forcing()) {
        throw ConfigError("mass_balance_max: trajectory carries no forcing averages");
    }
    const double h = traj.h();
    double worst = 0.0;
    double mass_prev = integral(traj.state(0).theta) + integral(traj.state(0).phi);
    for (int n = 1; n <= traj.steps(); ++n) {
        const double mass = integral(traj.state(n).theta) + integral(traj.state(n).phi);
        const double defect = mass - mass_prev - h * integral(traj.forcing_average(n));
        worst = std::max(worst, std::abs(defect) / (1.0 + std::abs(mass_prev)));
        mass_prev = mass;
    }
    return worst;
}

double subdifferential_min_slack(const Trajectory& traj, const Nonlinearity& nl) {
    double min_slack = std::numeric_limits<double>::infinity();
    Field beta_next(traj.grid());
    Field hat_vals(traj.grid());
    double hat_prev = 0.0;
    {
        const Field& phi0 = traj.state(0).phi;
        for (std::size_t k = 0; k < hat_vals.size(); ++k) {
            hat_vals[k] = nl.beta_hat(phi0[k]);
        }
        hat_prev = integral(hat_vals);
    }
    for (int n = 0; n < traj.steps(); ++n) {
        const Field& phi_next = traj.state(n + 1).phi;
        Field diff = phi_next;
        diff -= traj.state(n).phi;
        for (std::size_t k = 0; k < beta_next.size(); ++k) {
            beta_next[k] = nl.beta(phi_next[k]);
            hat_vals[k] = nl.beta_hat(phi_next[k]);
        }
        const double hat_next = integral(hat_vals);
        min_slack = std::min(min_slack, l2_inner(beta_next, diff) - (hat_next - hat_prev));
        hat_prev = hat_next;
    }
    return min_slack;
}

std::vector<InvariantCheck> invariant_suite(const Trajectory& traj, const Nonlinearity& nl) {
    std::vector<InvariantCheck> checks;
    auto add = [&](std::string name, double residual, double tol) {
        checks.push_back({std::move(name), residual, tol, residual <= tol});
    };

    static const char* kIdentityNames[8] = {
        "interpolant_sup_theta_V",  "interpolant_sup_phi_Linf", "interpolant_sup_v_Linf",
        "interpolant_l2_gap_theta", "interpolant_gap_phi",      "interpolant_gap_v",
        "interpolant_slope_theta",  "interpolant_slope_phi"};
    const IdentityResiduals ids = interpolant_identities(traj);
    for (int k = 0; k < 8; ++k) add(kIdentityNames[k], ids.rel[k], 1e-12);

    if (traj.has_forcing()) {
        add("mass_balance", mass_balance_max(traj), 1e-10);
    }
    add("subdifferential_slack", std::max(0.0, -subdifferential_min_slack(traj, nl)), 1e-10);

    if (traj.has_residuals()) {
        double heat = 0.0, wave = 0.0;
        for (int n = 1; n <= traj.steps(); ++n) {
            heat = std::max(heat, traj.residuals(n).heat);
            wave = std::max(wave, traj.residuals(n).wave);
        }
        add("step_residual_heat", heat, 1e-9);
        add("step_residual_wave", wave, 1e-9);
    }

    // Backward-difference construction of v and z.
    {
        const double h = traj.h();
        double worst = 0.0, scale = 1.0;
        for (int n = 1; n <= traj.steps(); ++n) {
            const StepState& s = traj.state(n);
            const StepState& p = traj.state(n - 1);
            for (std::size_t k = 0; k < s.v.size(); ++k) {
                worst = std::max(worst, std::abs(s.v[k] - (s.phi[k] - p.phi[k]) / h));
                worst = std::max(worst, std::abs(s.z[k] - (s.v[k] - p.v[k]) / h));
                scale = std::max({scale, std::abs(s.v[k]), std::abs(s.z[k])});
            }
        }
        add("difference_construction", worst / scale, 1e-12);
    }

    add("estimates_finite", apriori_report(traj).all_finite() ? 0.0 : 1.0, 0.5);
    return checks;
}

}  // namespace npfs
