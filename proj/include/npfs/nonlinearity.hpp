#pragma once

#include <utility>
#include <vector>

#include "npfs/field.hpp"

namespace npfs {

/// The nonlinear pair (beta, pi):
///   beta  - odd-power polynomial with nonnegative monotone behaviour,
///           beta(0) = 0, together with its convex primitive beta_hat
///           (beta_hat(0) = 0, beta_hat' = beta);
///   pi    - affine perturbation pi(r) = slope * r + offset.
///
/// Construction validates the structure: powers must be odd, beta must be
/// nondecreasing on a sample grid over [-check_radius, check_radius],
/// beta_hat must be nonnegative there, and a finite-difference check ties
/// beta_hat' to beta.
class Nonlinearity {
public:
    using Terms = std::vector<std::pair<int, double>>;  // (odd power, coefficient)

    Nonlinearity(Terms beta_terms, double pi_slope, double pi_offset,
                 double check_radius = 10.0);

    /// Canonical cubic case beta(r) = a r^3 with pi(r) = b r + c.
    static Nonlinearity cubic(double a, double b, double c);

    double beta(double r) const;
    double beta_prime(double r) const;
    /// Primitive of beta with beta_hat(0) = 0.
    double beta_hat(double r) const;
    double pi(double r) const { return pi_slope_ * r + pi_offset_; }

    const Terms& beta_terms() const { return beta_terms_; }
    double pi_slope() const { return pi_slope_; }
    double pi_offset() const { return pi_offset_; }
    double lipschitz_pi() const;
    double check_radius() const { return check_radius_; }

private:
    void validate() const;

    Terms beta_terms_;
    double pi_slope_;
    double pi_offset_;
    double check_radius_;
};

/// Largest admissible time step for the per-step scalar equation:
/// h_max = min{1, 1/Lip(pi)}; steps must stay strictly below it.
struct StepAdmissibility {
    double h_max;
    bool admits(double h) const { return h > 0.0 && h < h_max; }
};

StepAdmissibility admissible_h(const Nonlinearity& nl);

/// Solve (1 + h) r + h^2 beta(r) + h^2 pi(r) = g for the unique root.
///
/// The residual function is strictly increasing for admissible h, so a sign
/// bracket always exists; Newton iterates are safeguarded by bisection and
/// the result satisfies |F(root)| <= 1e-12 * (1 + |g|).
double resolvent_solve(double g, double h, const Nonlinearity& nl);

/// Apply resolvent_solve cell-wise. Deterministic for any thread count.
Field resolvent_field(const Field& g, double h, const Nonlinearity& nl, int threads = 1);

}  // namespace npfs
