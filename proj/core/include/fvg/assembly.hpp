#pragma once

#include <optional>

#include "fvg/adjacency.hpp"
#include "fvg/exec.hpp"
#include "fvg/fields.hpp"
#include "fvg/ldu.hpp"
#include "fvg/mesh.hpp"

namespace fvg {

/// Denominator threshold below which a face weight falls back to 0.5.
inline constexpr double kRootVSmall = 1e-150;

/// Linear interpolation factors. An internal face value is
/// w*(v_owner - v_neighbour) + v_neighbour, so w is the owner's share.
/// Boundary weights are 1.
struct InterpolationWeights {
    SurfaceScalarField w;
};

/// SfdNei / (SfdOwn + SfdNei) with SfdOwn = |Sf.(Cf - C_own)| and
/// SfdNei = |Sf.(C_nei - Cf)|; 0.5 when the sum is not above kRootVSmall.
double faceWeight(const Vec3& sf, const Vec3& ownerCentre, const Vec3& faceCentre, const Vec3& neighbourCentre);

InterpolationWeights computeWeights(const Mesh& mesh, const MeshGeometry& geo, const ExecPolicy& policy = {});

/// Internal faces from the weights; boundary faces take the field's boundary values.
template <class T>
SurfaceField<T> interpolateToFaces(const CellField<T>& vf, const InterpolationWeights& weights, const Mesh& mesh,
                                   const ExecPolicy& policy = {}) {
    SurfaceField<T> out;
    out.internal.resize(mesh.neighbour.size());
    const auto& w = weights.w.internal;
    policy.forEach(out.internal.size(), [&](std::size_t f) {
        const T& vo = vf.internal[static_cast<std::size_t>(mesh.owner[f])];
        const T& vn = vf.internal[static_cast<std::size_t>(mesh.neighbour[f])];
        out.internal[f] = w[f] * (vo - vn) + vn;
    });
    out.boundary = vf.boundary;
    return out;
}

/// Sf . face value on every face.
SurfaceScalarField dotWithArea(const SurfaceVectorField& faceValues, const Mesh& mesh, const MeshGeometry& geo,
                               const ExecPolicy& policy = {});

/// Face flux Sf . interpolate(vf).
SurfaceScalarField dotInterpolate(const VectorField& vf, const InterpolationWeights& weights, const Mesh& mesh,
                                  const MeshGeometry& geo, const ExecPolicy& policy = {});

/// Green-Gauss gradient by a sequential loop over faces that adds each face
/// contribution to both adjacent cells. Reference for gradGaussGather.
/// Boundary values of the result are the adjacent cell gradients.
VectorField gradGaussScatter(const SurfaceScalarField& ssf, const Mesh& mesh, const MeshGeometry& geo);

/// Green-Gauss gradient computed per cell from the owner/neighbour face
/// groups, then per patch from the cell groups of its patch compression.
/// Each output cell is written by a single task; the summation order is fixed
/// by the adjacency, so results do not depend on the policy. Throws
/// std::invalid_argument if `adj` does not fit `mesh`.
VectorField gradGaussGather(const SurfaceScalarField& ssf, const Mesh& mesh, const MeshGeometry& geo,
                            const CellFaceAdjacency& adj, const ExecPolicy& policy = {});

/// gb + n (snGrad - n.gb)
Vec3 correctedBoundaryGradient(const Vec3& gb, const Vec3& n, double snGrad);

/// Replaces the normal component of every boundary gradient value with the
/// patch normal gradient: (T_b - T_cell)/|Cf - C| on fixedValue patches, 0
/// on zeroGradient patches. Throws GeometryError on a zero-area face.
void correctBoundaryGradient(VectorField& grad, const ScalarField& vsf, const Mesh& mesh, const MeshGeometry& geo,
                             const ExecPolicy& policy = {});

/// interpolate, gradGaussGather and correctBoundaryGradient in sequence.
VectorField gaussGradient(const ScalarField& vsf, const Mesh& mesh, const MeshGeometry& geo,
                          const InterpolationWeights& weights, const CellFaceAdjacency& adj,
                          const ExecPolicy& policy = {});

struct DiffusionProblem {
    double diffusivity = 1.0;            ///< DT
    std::optional<double> timeStep{0.2}; ///< dt; empty for the steady operator
    double source = 0.0;                 ///< constant volumetric source S_T
};

/// Implicit Euler + orthogonal two-point Laplacian for dT/dt - div(DT grad T) = S_T:
///   internal face:   a = DT |Sf| / |C_nei - C_own|, off = -a, both diagonals += a
///   fixedValue face: a = DT |Sf| / |Cf - C|, diag += a, rhs += a Tb
///   time term:       diag += V/dt, rhs += V/dt Told
///   source:          rhs += S_T V
/// Diagonal and right-hand side are gathered per cell. Throws
/// std::invalid_argument for DT <= 0 or dt <= 0, GeometryError for coincident centres.
LduSystem assembleLaplacianDdt(const ScalarField& told, const DiffusionProblem& problem, const Mesh& mesh,
                               const MeshGeometry& geo, const CellFaceAdjacency& adj, const ExecPolicy& policy = {});

/// Same system by a sequential face loop scattering into cells.
LduSystem assembleLaplacianDdtScatter(const ScalarField& told, const DiffusionProblem& problem, const Mesh& mesh,
                                      const MeshGeometry& geo, const CellFaceAdjacency& adj);

} // namespace fvg
