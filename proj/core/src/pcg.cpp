#include "fvg/pcg.hpp"

#include <algorithm>
#include <string>

#include "fvg/error.hpp"

namespace fvg {

SolveResult pcgSolve(const LduSystem& sys, std::span<const double> x0, const SolverControls& controls,
                     const ExecPolicy& policy) {
    const std::size_t n = sys.nCells();
    if (x0.size() != n) {
        throw std::invalid_argument("pcgSolve: initial guess has " + std::to_string(x0.size()) + " entries, expected " +
                                    std::to_string(n));
    }
    if (!(controls.tolerance > 0.0)) {
        throw std::invalid_argument("pcgSolve: tolerance must be positive");
    }
    for (std::size_t c = 0; c < n; ++c) {
        if (!(sys.diag[c] > 0.0)) {
            throw NumericalError("pcgSolve: non-positive diagonal " + std::to_string(sys.diag[c]) + " in row " +
                                 std::to_string(c));
        }
    }

    SolveResult out;
    out.x.assign(x0.begin(), x0.end());
    std::vector<double>& x = out.x;
    SolverStats& stats = out.stats;

    std::vector<double> r = residual(sys, x, policy);
    double rNorm = norm2(r, policy);
    stats.initialResidual = rNorm;
    stats.finalResidual = rNorm;
    const double target = controls.tolerance * std::max(rNorm, controls.residualFloor);
    if (rNorm <= target) {
        stats.converged = true;
        return out;
    }

    std::vector<double> z(n);
    std::vector<double> p(n);
    policy.forEach(n, [&](std::size_t c) {
        z[c] = r[c] / sys.diag[c];
        p[c] = z[c];
    });
    double rz = dotProduct(r, z, policy);

    std::vector<double> best = x;
    double bestNorm = rNorm;

    for (int it = 0; it < controls.maxIterations; ++it) {
        const std::vector<double> q = spmv(sys, p, policy);
        const double pq = dotProduct(p, q, policy);
        if (!(pq > 0.0)) {
            throw NumericalError("pcgSolve: breakdown (p.Ap = " + std::to_string(pq) + ") at iteration " +
                                 std::to_string(it + 1) + "; matrix is not positive definite");
        }
        const double alpha = rz / pq;
        policy.forEach(n, [&](std::size_t c) {
            x[c] += alpha * p[c];
            r[c] -= alpha * q[c];
        });
        ++stats.iterations;
        rNorm = norm2(r, policy);
        stats.finalResidual = rNorm;
        if (rNorm <= target) {
            stats.converged = true;
            return out;
        }
        if (rNorm < bestNorm) {
            bestNorm = rNorm;
            best = x;
        }

        policy.forEach(n, [&](std::size_t c) { z[c] = r[c] / sys.diag[c]; });
        const double rzNew = dotProduct(r, z, policy);
        const double beta = rzNew / rz;
        rz = rzNew;
        policy.forEach(n, [&](std::size_t c) { p[c] = z[c] + beta * p[c]; });
    }

    x = std::move(best);
    stats.finalResidual = bestNorm;
    return out;
}

} // namespace fvg
