#include "fvg/assembly.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fvg/error.hpp"

namespace fvg {

double faceWeight(const Vec3& sf, const Vec3& ownerCentre, const Vec3& faceCentre, const Vec3& neighbourCentre) {
    const double sfdOwn = std::fabs(dot(sf, faceCentre - ownerCentre));
    const double sfdNei = std::fabs(dot(sf, neighbourCentre - faceCentre));
    if (std::fabs(sfdOwn + sfdNei) > kRootVSmall) {
        return sfdNei / (sfdOwn + sfdNei);
    }
    return 0.5;
}

InterpolationWeights computeWeights(const Mesh& mesh, const MeshGeometry& geo, const ExecPolicy& policy) {
    InterpolationWeights out{SurfaceScalarField(mesh, 1.0, policy)};
    auto& w = out.w.internal;
    policy.forEach(w.size(), [&](std::size_t f) {
        w[f] = faceWeight(geo.faceArea[f], geo.cellCentre[static_cast<std::size_t>(mesh.owner[f])], geo.faceCentre[f],
                          geo.cellCentre[static_cast<std::size_t>(mesh.neighbour[f])]);
    });
    return out;
}

SurfaceScalarField dotWithArea(const SurfaceVectorField& faceValues, const Mesh& mesh, const MeshGeometry& geo,
                               const ExecPolicy& policy) {
    SurfaceScalarField out;
    out.internal.resize(faceValues.internal.size());
    policy.forEach(out.internal.size(),
                   [&](std::size_t f) { out.internal[f] = dot(geo.faceArea[f], faceValues.internal[f]); });
    out.boundary.resize(mesh.patches.size());
    for (std::size_t p = 0; p < mesh.patches.size(); ++p) {
        const auto start = static_cast<std::size_t>(mesh.patches[p].startFace);
        const auto& in = faceValues.boundary[p];
        auto& dst = out.boundary[p];
        dst.resize(in.size());
        policy.forEach(in.size(), [&](std::size_t i) { dst[i] = dot(geo.faceArea[start + i], in[i]); });
    }
    return out;
}

SurfaceScalarField dotInterpolate(const VectorField& vf, const InterpolationWeights& weights, const Mesh& mesh,
                                  const MeshGeometry& geo, const ExecPolicy& policy) {
    return dotWithArea(interpolateToFaces(vf, weights, mesh, policy), mesh, geo, policy);
}

namespace {

void extrapolateBoundary(VectorField& grad, const Mesh& mesh, const ExecPolicy& policy) {
    grad.boundary.resize(mesh.patches.size());
    for (std::size_t p = 0; p < mesh.patches.size(); ++p) {
        const auto cells = mesh.faceCells(p);
        auto& gb = grad.boundary[p];
        gb.resize(cells.size());
        policy.forEach(cells.size(), [&](std::size_t i) { gb[i] = grad.internal[static_cast<std::size_t>(cells[i])]; });
    }
}

void checkSurfaceField(const SurfaceScalarField& ssf, const Mesh& mesh) {
    bool ok = ssf.internal.size() == mesh.neighbour.size() && ssf.boundary.size() == mesh.patches.size();
    for (std::size_t p = 0; ok && p < mesh.patches.size(); ++p) {
        ok = ssf.boundary[p].size() == static_cast<std::size_t>(mesh.patches[p].nFaces);
    }
    if (!ok) {
        throw std::invalid_argument("surface field does not match the mesh");
    }
}

} // namespace

VectorField gradGaussScatter(const SurfaceScalarField& ssf, const Mesh& mesh, const MeshGeometry& geo) {
    checkSurfaceField(ssf, mesh);
    VectorField grad;
    grad.internal.assign(static_cast<std::size_t>(mesh.nCells), Vec3{});
    auto& ig = grad.internal;
    for (std::size_t f = 0; f < mesh.neighbour.size(); ++f) {
        const Vec3 sfssf = geo.faceArea[f] * ssf.internal[f];
        ig[static_cast<std::size_t>(mesh.owner[f])] += sfssf;
        ig[static_cast<std::size_t>(mesh.neighbour[f])] -= sfssf;
    }
    for (std::size_t p = 0; p < mesh.patches.size(); ++p) {
        const auto cells = mesh.faceCells(p);
        const auto start = static_cast<std::size_t>(mesh.patches[p].startFace);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            ig[static_cast<std::size_t>(cells[i])] += geo.faceArea[start + i] * ssf.boundary[p][i];
        }
    }
    for (std::size_t c = 0; c < ig.size(); ++c) {
        ig[c] /= geo.cellVolume[c];
    }
    extrapolateBoundary(grad, mesh, ExecPolicy::seq());
    return grad;
}

VectorField gradGaussGather(const SurfaceScalarField& ssf, const Mesh& mesh, const MeshGeometry& geo,
                            const CellFaceAdjacency& adj, const ExecPolicy& policy) {
    if (!adj.matches(mesh)) {
        throw std::invalid_argument("gradGaussGather: adjacency was built for a different mesh");
    }
    checkSurfaceField(ssf, mesh);

    VectorField grad;
    grad.internal = fillField(static_cast<std::size_t>(mesh.nCells), Vec3{}, policy);
    auto& ig = grad.internal;
    const auto nInternal = mesh.nInternalFaces();
    const Label* ol = adj.owner.items.data();
    const Label* os = adj.owner.starts.data();
    const Label* nl = adj.neighbour.items.data();
    const Label* ns = adj.neighbour.starts.data();
    const Vec3* sf = geo.faceArea.data();
    const double* is = ssf.internal.data();

    policy.forEach(ig.size(), [&](std::size_t c) {
        Vec3 acc;
        for (Label i = os[c]; i < os[c + 1]; ++i) {
            const Label f = ol[i];
            // Internal faces precede boundary faces within an owner group.
            if (f >= nInternal) {
                break;
            }
            acc += sf[f] * is[f];
        }
        for (Label i = ns[c]; i < ns[c + 1]; ++i) {
            acc -= sf[nl[i]] * is[nl[i]];
        }
        ig[c] = acc;
    });

    // One task per (patch, cell group); patches in turn since a cell may touch several.
    for (std::size_t p = 0; p < mesh.patches.size(); ++p) {
        const PatchCompression& pc = adj.patches[p];
        const Label* faceCells = mesh.faceCells(p).data();
        const Vec3* psf = geo.faceArea.data() + mesh.patches[p].startFace;
        const double* pssf = ssf.boundary[p].data();
        const Label* pidx = pc.faceIndex.data();
        const Label* pstr = pc.faceStart.data();
        policy.forEach(pc.nGroups(), [&](std::size_t g) {
            const auto id = static_cast<std::size_t>(faceCells[pidx[pstr[g]]]);
            Vec3 acc = ig[id];
            for (Label i = pstr[g]; i < pstr[g + 1]; ++i) {
                acc += psf[pidx[i]] * pssf[pidx[i]];
            }
            ig[id] = acc;
        });
    }

    zipDivideInPlace(std::span<Vec3>(ig), std::span<const double>(geo.cellVolume), policy);
    extrapolateBoundary(grad, mesh, policy);
    return grad;
}

Vec3 correctedBoundaryGradient(const Vec3& gb, const Vec3& n, double snGrad) {
    return gb + n * (snGrad - dot(n, gb));
}

void correctBoundaryGradient(VectorField& grad, const ScalarField& vsf, const Mesh& mesh, const MeshGeometry& geo,
                             const ExecPolicy& policy) {
    if (grad.boundary.size() != mesh.patches.size()) {
        throw std::invalid_argument("correctBoundaryGradient: gradient boundary not allocated");
    }
    for (std::size_t p = 0; p < mesh.patches.size(); ++p) {
        const Patch& patch = mesh.patches[p];
        const auto cells = mesh.faceCells(p);
        const auto start = static_cast<std::size_t>(patch.startFace);
        auto& gb = grad.boundary[p];
        const auto& tb = vsf.boundary[p];
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (!(mag(geo.faceArea[start + i]) > 0.0)) {
                throw GeometryError("correctBoundaryGradient: face " + std::to_string(start + i) + " on patch '" +
                                    patch.name + "' has zero area");
            }
        }
        policy.forEach(cells.size(), [&](std::size_t i) {
            const Vec3& sf = geo.faceArea[start + i];
            const Vec3 n = sf / mag(sf);
            double snGrad = 0.0;
            if (patch.bc.isFixedValue()) {
                const auto c = static_cast<std::size_t>(cells[i]);
                snGrad = (tb[i] - vsf.internal[c]) / mag(geo.faceCentre[start + i] - geo.cellCentre[c]);
            }
            gb[i] = correctedBoundaryGradient(gb[i], n, snGrad);
        });
    }
}

VectorField gaussGradient(const ScalarField& vsf, const Mesh& mesh, const MeshGeometry& geo,
                          const InterpolationWeights& weights, const CellFaceAdjacency& adj,
                          const ExecPolicy& policy) {
    VectorField grad = gradGaussGather(interpolateToFaces(vsf, weights, mesh, policy), mesh, geo, adj, policy);
    correctBoundaryGradient(grad, vsf, mesh, geo, policy);
    return grad;
}

namespace {

void checkProblem(const DiffusionProblem& problem, const ScalarField& told, const Mesh& mesh) {
    if (!(problem.diffusivity > 0.0)) {
        throw std::invalid_argument("diffusivity must be positive");
    }
    if (problem.timeStep && !(*problem.timeStep > 0.0)) {
        throw std::invalid_argument("time step must be positive");
    }
    if (told.internal.size() != static_cast<std::size_t>(mesh.nCells)) {
        throw std::invalid_argument("old-time field does not match the mesh");
    }
}

double distance(const Vec3& a, const Vec3& b, const char* what, std::size_t face) {
    const double d = mag(a - b);
    if (!(d > 0.0)) {
        throw GeometryError(std::string("coincident ") + what + " centres at face " + std::to_string(face));
    }
    return d;
}

/// DT |Sf| / |d| for every internal face.
std::vector<double> internalCoefficients(double diffusivity, const Mesh& mesh, const MeshGeometry& geo,
                                         const ExecPolicy& policy) {
    std::vector<double> a(mesh.neighbour.size());
    policy.forEach(a.size(), [&](std::size_t f) {
        const Vec3& co = geo.cellCentre[static_cast<std::size_t>(mesh.owner[f])];
        const Vec3& cn = geo.cellCentre[static_cast<std::size_t>(mesh.neighbour[f])];
        a[f] = diffusivity * mag(geo.faceArea[f]) / distance(cn, co, "cell", f);
    });
    return a;
}

/// DT |Sf| / |Cf - C| for every face of a fixedValue patch.
std::vector<double> boundaryCoefficients(double diffusivity, std::size_t p, const Mesh& mesh, const MeshGeometry& geo,
                                         const ExecPolicy& policy) {
    const auto cells = mesh.faceCells(p);
    const auto start = static_cast<std::size_t>(mesh.patches[p].startFace);
    std::vector<double> a(cells.size());
    policy.forEach(a.size(), [&](std::size_t i) {
        const Vec3& c = geo.cellCentre[static_cast<std::size_t>(cells[i])];
        a[i] = diffusivity * mag(geo.faceArea[start + i]) / distance(geo.faceCentre[start + i], c, "face and cell", start + i);
    });
    return a;
}

} // namespace

LduSystem assembleLaplacianDdt(const ScalarField& told, const DiffusionProblem& problem, const Mesh& mesh,
                               const MeshGeometry& geo, const CellFaceAdjacency& adj, const ExecPolicy& policy) {
    checkProblem(problem, told, mesh);
    LduSystem sys(LduAddressing::of(mesh, adj));

    const std::vector<double> a = internalCoefficients(problem.diffusivity, mesh, geo, policy);
    policy.forEach(a.size(), [&](std::size_t f) { sys.offDiag[f] = -a[f]; });

    const auto nInternal = mesh.nInternalFaces();
    const Label* ol = adj.owner.items.data();
    const Label* os = adj.owner.starts.data();
    const Label* nl = adj.neighbour.items.data();
    const Label* ns = adj.neighbour.starts.data();
    policy.forEach(sys.nCells(), [&](std::size_t c) {
        double d = 0.0;
        for (Label i = os[c]; i < os[c + 1] && ol[i] < nInternal; ++i) {
            d += a[static_cast<std::size_t>(ol[i])];
        }
        for (Label i = ns[c]; i < ns[c + 1]; ++i) {
            d += a[static_cast<std::size_t>(nl[i])];
        }
        sys.diag[c] = d;
    });

    for (std::size_t p = 0; p < mesh.patches.size(); ++p) {
        const BoundaryCondition& bc = mesh.patches[p].bc;
        if (!bc.isFixedValue()) {
            continue;
        }
        const std::vector<double> ab = boundaryCoefficients(problem.diffusivity, p, mesh, geo, policy);
        const PatchCompression& pc = adj.patches[p];
        const auto cells = mesh.faceCells(p);
        policy.forEach(pc.nGroups(), [&](std::size_t g) {
            const auto id = static_cast<std::size_t>(cells[static_cast<std::size_t>(pc.faceIndex[pc.faceStart[g]])]);
            double sum = 0.0;
            for (Label i = pc.faceStart[g]; i < pc.faceStart[g + 1]; ++i) {
                sum += ab[static_cast<std::size_t>(pc.faceIndex[i])];
            }
            sys.diag[id] += sum;
            sys.rhs[id] += sum * bc.value;
        });
    }

    policy.forEach(sys.nCells(), [&](std::size_t c) {
        const double v = geo.cellVolume[c];
        if (problem.timeStep) {
            const double rdt = v / *problem.timeStep;
            sys.diag[c] += rdt;
            sys.rhs[c] += rdt * told.internal[c];
        }
        sys.rhs[c] += problem.source * v;
    });
    return sys;
}

LduSystem assembleLaplacianDdtScatter(const ScalarField& told, const DiffusionProblem& problem, const Mesh& mesh,
                                      const MeshGeometry& geo, const CellFaceAdjacency& adj) {
    checkProblem(problem, told, mesh);
    LduSystem sys(LduAddressing::of(mesh, adj));
    const ExecPolicy seq;

    const std::vector<double> a = internalCoefficients(problem.diffusivity, mesh, geo, seq);
    for (std::size_t f = 0; f < a.size(); ++f) {
        sys.offDiag[f] = -a[f];
        sys.diag[static_cast<std::size_t>(mesh.owner[f])] += a[f];
        sys.diag[static_cast<std::size_t>(mesh.neighbour[f])] += a[f];
    }
    for (std::size_t p = 0; p < mesh.patches.size(); ++p) {
        const BoundaryCondition& bc = mesh.patches[p].bc;
        if (!bc.isFixedValue()) {
            continue;
        }
        const std::vector<double> ab = boundaryCoefficients(problem.diffusivity, p, mesh, geo, seq);
        const auto cells = mesh.faceCells(p);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto c = static_cast<std::size_t>(cells[i]);
            sys.diag[c] += ab[i];
            sys.rhs[c] += ab[i] * bc.value;
        }
    }
    for (std::size_t c = 0; c < sys.nCells(); ++c) {
        const double v = geo.cellVolume[c];
        if (problem.timeStep) {
            sys.diag[c] += v / *problem.timeStep;
            sys.rhs[c] += v / *problem.timeStep * told.internal[c];
        }
        sys.rhs[c] += problem.source * v;
    }
    return sys;
}

} // namespace fvg
