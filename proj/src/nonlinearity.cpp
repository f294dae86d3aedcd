#include "npfs/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "npfs/errors.hpp"
#include "npfs/parallel.hpp"

namespace npfs {

Nonlinearity::Nonlinearity(Terms beta_terms, double pi_slope, double pi_offset,
                           double check_radius)
    : beta_terms_(std::move(beta_terms)),
      pi_slope_(pi_slope),
      pi_offset_(pi_offset),
      check_radius_(check_radius) {
    validate();
}

Nonlinearity Nonlinearity::cubic(double a, double b, double c) {
    return Nonlinearity({{3, a}}, b, c);
}

double Nonlinearity::beta(double r) const {
    double acc = 0.0;
    for (const auto& [p, c] : beta_terms_) acc += c * std::pow(r, p);
    return acc;
}

double Nonlinearity::beta_prime(double r) const {
    double acc = 0.0;
    for (const auto& [p, c] : beta_terms_) acc += c * p * std::pow(r, p - 1);
    return acc;
}

double Nonlinearity::beta_hat(double r) const {
    double acc = 0.0;
    for (const auto& [p, c] : beta_terms_) acc += c / (p + 1) * std::pow(r, p + 1);
    return acc;
}

double Nonlinearity::lipschitz_pi() const { return std::abs(pi_slope_); }

void Nonlinearity::validate() const {
    if (!std::isfinite(pi_slope_) || !std::isfinite(pi_offset_)) {
        throw ConfigError("nonlinearity: pi coefficients must be finite");
    }
    if (!(check_radius_ > 0.0) || !std::isfinite(check_radius_)) {
        throw ConfigError("nonlinearity: check radius must be positive");
    }
    for (const auto& [p, c] : beta_terms_) {
        if (p < 1 || p % 2 == 0) {
            throw ConfigError("nonlinearity: beta powers must be odd and >= 1, got " +
                              std::to_string(p));
        }
        if (!std::isfinite(c)) throw ConfigError("nonlinearity: non-finite beta coefficient");
    }

    // Sampled structural checks over [-R, R].
    const int samples = 1000;
    double prev = beta(-check_radius_);
    for (int k = 0; k <= samples; ++k) {
        const double r = -check_radius_ + 2.0 * check_radius_ * k / samples;
        const double b = beta(r);
        const double bh = beta_hat(r);
        if (!std::isfinite(b) || !std::isfinite(bh)) {
            throw ConfigError("nonlinearity: beta overflows on the check interval");
        }
        if (k > 0 && b < prev - 1e-12 * std::max(1.0, std::abs(prev))) {
            throw ConfigError("nonlinearity: beta is not nondecreasing on the check interval");
        }
        if (bh < -1e-12) {
            throw ConfigError("nonlinearity: beta primitive is negative on the check interval");
        }
        // beta_hat' == beta, central finite difference.
        const double d = 1e-6 * std::max(1.0, std::abs(r));
        const double fd = (beta_hat(r + d) - beta_hat(r - d)) / (2.0 * d);
        const double scale = std::max({1.0, std::abs(b), std::abs(fd)});
        if (std::abs(fd - b) > 1e-6 * scale) {
            throw ConfigError("nonlinearity: primitive derivative check failed");
        }
        prev = k > 0 ? std::max(prev, b) : b;
    }
    if (beta(0.0) != 0.0 || beta_hat(0.0) != 0.0) {
        throw ConfigError("nonlinearity: beta(0) and beta_hat(0) must vanish");
    }
}

StepAdmissibility admissible_h(const Nonlinearity& nl) {
    const double lip = nl.lipschitz_pi();
    return StepAdmissibility{lip > 0.0 ? std::min(1.0, 1.0 / lip) : 1.0};
}

namespace {

struct Residual {
    double h, h2, g;
    const Nonlinearity* nl;
    double operator()(double r) const {
        return (1.0 + h) * r + h2 * (nl->beta(r) + nl->pi(r)) - g;
    }
    double derivative(double r) const {
        return (1.0 + h) + h2 * (nl->beta_prime(r) + nl->pi_slope());
    }
};

}  // namespace

double resolvent_solve(double g, double h, const Nonlinearity& nl) {
    if (!std::isfinite(g)) throw NumericalError("resolvent_solve: non-finite right-hand side");
    if (!admissible_h(nl).admits(h)) {
        throw NumericalError("resolvent_solve: step size " + std::to_string(h) +
                             " not admissible (needs 0 < h < min{1, 1/Lip(pi)} = " +
                             std::to_string(admissible_h(nl).h_max) + ")");
    }
    const Residual f{h, h * h, g, &nl};
    const double tol = 1e-12 * (1.0 + std::abs(g));

    // Guaranteed sign bracket: expand until F(lo) <= 0 <= F(hi).
    double radius = 1.0 + std::abs(g);
    double lo = -radius, hi = radius;
    double flo = f(lo), fhi = f(hi);
    for (int k = 0; (flo > 0.0 || fhi < 0.0) && k < 200; ++k) {
        radius *= 2.0;
        lo = -radius;
        hi = radius;
        flo = f(lo);
        fhi = f(hi);
        if (!std::isfinite(flo) || !std::isfinite(fhi)) {
            throw NumericalError("resolvent_solve: residual overflow while bracketing");
        }
    }
    if (flo > 0.0 || fhi < 0.0) {
        throw NumericalError("resolvent_solve: failed to bracket a root");
    }
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;

    // Newton from the linear-part guess, bisection whenever the Newton step
    // leaves the bracket. Iterate to the last representable digit: the step
    // residual of the full scheme divides |F| by h^2, so stopping early at
    // `tol` would be far too coarse there.
    double x = std::clamp(g / (1.0 + h), lo, hi);
    double fx = f(x);
    for (int it = 0; it < 100; ++it) {
        if (fx == 0.0) return x;
        if (fx > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        double next = x - fx / f.derivative(x);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x || lo >= hi) break;  // stagnated at double resolution
        x = next;
        fx = f(x);
    }
    if (std::abs(fx) > tol) {
        throw NumericalError("resolvent_solve: residual " + std::to_string(std::abs(fx)) +
                             " above tolerance after iteration cap");
    }
    return x;
}

Field resolvent_field(const Field& g, double h, const Nonlinearity& nl, int threads) {
    Field out(g.grid());
    parallel_for(g.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            out[k] = resolvent_solve(g[k], h, nl);
        }
    });
    out.require_finite("resolvent_field");
    return out;
}

}  // namespace npfs
