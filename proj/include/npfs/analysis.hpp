#pragma once

#include <array>
#include <string>
#include <vector>

#include "npfs/scheme.hpp"

namespace npfs {

/// Uniform-in-h boundedness monitors. Sup-in-time norms are exact maxima
/// over nodes/intervals; L2-in-time norms of piecewise-constant functions
/// are exact h-weighted sums; L2-in-time norms of piecewise-linear functions
/// use the per-interval quadratic closed form.
struct EstimateReport {
    /// sup ||v_bar||_H^2 + sup ||phi_bar||_H^2 + int ||d/dt theta_hat||_H^2
    /// + sup ||theta_bar||_V^2.
    double e1 = 0.0;
    /// ||Lap theta_bar||_{L2(0,T;H)}.
    double e2 = 0.0;
    /// sup ||v_bar||_Linf^2 + sup ||phi_bar||_Linf^2 (space-time sup).
    double e3 = 0.0;
    /// ||z_bar||^2_{L2(0,T;Linf)}.
    double e4 = 0.0;
    /// ||z_bar||^2_{Linf(0,T;H)}.
    double e5 = 0.0;
    /// Composite squared norm of the hat interpolants:
    /// theta_hat in H1(0,T;H) and Linf(0,T;V), phi_hat in W1inf(0,T;Linf),
    /// v_hat in W1inf(0,T;H), W12(0,T;Linf) and Linf(0,T;Linf); intersection
    /// norms are taken as sums of squared component norms, and the
    /// L2(0,T;Linf) piece of v_hat integrates the per-interval endpoint
    /// envelope of the sup norm.
    double e6 = 0.0;
    /// Underline-interpolant monitor: sup ||phi_under||_Linf^2
    /// + sup ||theta_under||_V^2 + ||theta_under||^2_{L2(0,T;Linf)}.
    double under = 0.0;

    bool all_finite() const;
};

EstimateReport apriori_report(const Trajectory& traj);

/// The five error terms between two trajectories of the same scenario,
/// evaluated exactly on the common refinement of the two time partitions:
/// sup norms at union nodes (the differences are piecewise linear there),
/// L2-in-time terms as exact sums over union subintervals.
struct ErrorMetrics {
    double v_sup = 0.0;      ///< ||v_hat_a - v_hat_b||_{C([0,T];H)}
    double v_l2 = 0.0;       ///< ||v_bar_a - v_bar_b||_{L2(0,T;H)}
    double phi_sup = 0.0;    ///< ||phi_hat_a - phi_hat_b||_{C([0,T];H)}
    double theta_sup = 0.0;  ///< ||theta_hat_a - theta_hat_b||_{C([0,T];H)}
    double grad_l2 = 0.0;    ///< ||grad(theta_bar_a - theta_bar_b)||_{L2(0,T;H)}

    double total() const { return v_sup + v_l2 + phi_sup + theta_sup + grad_l2; }
};

/// Errors of a coarse run against a fine-step reference of the same
/// scenario. Step counts must be nested (one divides the other); the values
/// are symmetric in the arguments.
ErrorMetrics discrete_error(const Trajectory& coarse, const Trajectory& ref);

/// The five-term distance between two discretizations of the same scenario
/// (arbitrary step counts); equals discrete_error(...).total() when the step
/// counts are nested.
double cauchy_check(const Trajectory& a, const Trajectory& b);

struct RateRow {
    int steps;
    double h;
    ErrorMetrics metrics;
};

/// Log-log rate fit of total error against h.
struct RateTable {
    std::vector<RateRow> rows;  // sorted by decreasing h
    bool degenerate = false;    // all errors zero; no slope
    bool has_fit = false;
    double slope = 0.0;
    double m_hat = 0.0;  // fitted constant in total ~ m_hat * h^slope
};

/// Runs the scenario at every step count in n_list (each must divide n_ref),
/// measures errors against the n_ref reference, and fits the rate.
RateTable convergence_study(const Scenario& s, const std::vector<int>& n_list, int n_ref,
                            int threads = 1);

/// Relative residuals of the eight structural interpolant identities
/// (hat/bar/underline), each computable in closed form from node values:
///   [0] sup-V of theta_hat equals max of initial and bar values
///   [1] sup-Linf of phi_hat likewise
///   [2] sup-Linf of v_hat likewise
///   [3] ||theta_bar - theta_hat||^2_{L2 H} = h^2/3 ||d/dt theta_hat||^2_{L2 H}
///   [4] ||phi_bar - phi_hat||_{Linf Linf} = h ||v_bar||_{Linf Linf}
///   [5] ||v_bar - v_hat||_{Linf H} = h ||z_bar||_{Linf H}
///   [6] h d/dt theta_hat = theta_bar - theta_under on every interval
///   [7] h d/dt phi_hat = phi_bar - phi_under on every interval
struct IdentityResiduals {
    std::array<double, 8> rel{};
    double max() const;
};

IdentityResiduals interpolant_identities(const Trajectory& traj);

/// Largest scaled per-step defect of the balance
/// int(theta_{n+1}+phi_{n+1}) - int(theta_n+phi_n) - h int(f_{n+1}).
double mass_balance_max(const Trajectory& traj);

/// Smallest per-step slack of
/// (beta(phi_{n+1}), phi_{n+1}-phi_n)_H - [int beta_hat(phi_{n+1}) - int beta_hat(phi_n)];
/// convexity of the primitive makes this nonnegative up to rounding.
double subdifferential_min_slack(const Trajectory& traj, const Nonlinearity& nl);

struct InvariantCheck {
    std::string name;
    double residual;
    double tolerance;
    bool pass;
};

/// The named invariant battery run by the `check` subcommand.
std::vector<InvariantCheck> invariant_suite(const Trajectory& traj, const Nonlinearity& nl);

}  // namespace npfs
