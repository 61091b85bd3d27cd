#pragma once

#include <span>
#include <vector>

#include "fvg/exec.hpp"
#include "fvg/ldu.hpp"

namespace fvg {

struct SolverControls {
    double tolerance = 1e-6;
    int maxIterations = 1000;
    /// Absolute floor under the initial residual norm in the stopping test.
    double residualFloor = 1e-20;
};

struct SolverStats {
    int iterations = 0;
    double initialResidual = 0.0;
    double finalResidual = 0.0;
    bool converged = false;
};

struct SolveResult {
    std::vector<double> x;
    SolverStats stats;
};

/// Conjugate gradients with diagonal (Jacobi) preconditioning. Stops when
/// ||b - A x||_2 <= tolerance * max(||b - A x0||_2, residualFloor).
///
/// Dot products use the fixed-order reduction, so iterates are bitwise
/// identical under every execution policy. Throws NumericalError for a
/// non-positive diagonal or a breakdown (p.Ap <= 0); on hitting maxIterations
/// returns converged = false and the iterate with the smallest residual.
SolveResult pcgSolve(const LduSystem& sys, std::span<const double> x0, const SolverControls& controls = {},
                     const ExecPolicy& policy = {});

} // namespace fvg
