#pragma once

#include "npfs/field.hpp"

namespace npfs {

/// Screened Neumann problem (I - h * Lap) theta = rhs on the mirror-closure
/// stencil of neumann_laplacian.
struct HelmholtzProblem {
    Field rhs;
    double h;
};

/// Diagonally preconditioned conjugate gradients. The operator is symmetric
/// positive definite with spectrum in [1, 1 + 4h*d/min(dx)^2], so convergence
/// is fast; non-convergence within the iteration budget raises NumericalError.
Field helmholtz_solve(const HelmholtzProblem& p);
Field helmholtz_solve(const Field& rhs, double h);

/// Direct solve in the Neumann cosine eigenbasis (DCT-II). Exact for the
/// mirror stencil on uniform grids; serves as the machine-precision
/// cross-check for the CG path.
Field helmholtz_solve_dct(const HelmholtzProblem& p);
Field helmholtz_solve_dct(const Field& rhs, double h);

}  // namespace npfs
