// Shared helpers for the test suites: deterministic random fields and
// synthetic trajectories.
#pragma once

#include <random>
#include <vector>

#include "npfs/field.hpp"
#include "npfs/scheme.hpp"

namespace npfs::test {

inline Field random_field(const Grid& g, std::mt19937& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Field f(g);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = dist(rng);
    return f;
}

/// Random node sequences for theta/phi with v and z derived by the exact
/// backward differences, so the structural interpolant identities apply.
inline Trajectory random_trajectory(const Grid& g, double T, int n_steps, std::mt19937& rng) {
    std::vector<Field> theta, phi;
    for (int n = 0; n <= n_steps; ++n) {
        theta.push_back(random_field(g, rng));
        phi.push_back(random_field(g, rng));
    }
    return Trajectory::from_nodes(g, T, std::move(theta), std::move(phi),
                                  random_field(g, rng));
}

inline double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

}  // namespace npfs::test
