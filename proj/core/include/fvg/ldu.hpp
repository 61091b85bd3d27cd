#pragma once

#include <span>
#include <vector>

#include "fvg/adjacency.hpp"
#include "fvg/exec.hpp"
#include "fvg/mesh.hpp"

namespace fvg {

/// Non-owning view of the face addressing a symmetric LDU matrix needs:
/// lower/upper cell of every internal face, plus the cell -> face groups used
/// by the gather product. The referenced storage must outlive the view.
struct LduAddressing {
    Label nCells = 0;
    std::span<const Label> lower; ///< owner of internal face f
    std::span<const Label> upper; ///< neighbour of internal face f
    const CompressedLists* ownerLists = nullptr;     ///< faces grouped by owner (internal faces first in a group)
    const CompressedLists* neighbourLists = nullptr; ///< internal faces grouped by neighbour

    std::size_t nFaces() const noexcept { return upper.size(); }

    static LduAddressing of(const Mesh& mesh, const CellFaceAdjacency& adj);
};

/// Owning addressing for matrices that do not come from a mesh.
class LduPattern {
public:
    LduPattern(Label nCells, std::vector<Label> lower, std::vector<Label> upper, const ExecPolicy& policy = {});

    LduAddressing view() const;

private:
    Label nCells_;
    std::vector<Label> lower_;
    std::vector<Label> upper_;
    CompressedLists ownerLists_;
    CompressedLists neighbourLists_;
};

/// Symmetric face-addressed matrix A = diag + offDiag (one coefficient per
/// internal face serving both triangles) with right-hand side.
struct LduSystem {
    LduAddressing addr;
    std::vector<double> diag;
    std::vector<double> offDiag;
    std::vector<double> rhs;

    LduSystem() = default;
    explicit LduSystem(const LduAddressing& a)
        : addr(a),
          diag(static_cast<std::size_t>(a.nCells), 0.0),
          offDiag(a.nFaces(), 0.0),
          rhs(static_cast<std::size_t>(a.nCells), 0.0) {}

    std::size_t nCells() const noexcept { return diag.size(); }
};

/// y = A x, one task per cell gathering over its face groups.
std::vector<double> spmv(const LduSystem& sys, std::span<const double> x, const ExecPolicy& policy = {});

/// y = A x by a sequential face loop scattering into both cells.
std::vector<double> spmvFaceLoop(const LduSystem& sys, std::span<const double> x);

/// b - A x
std::vector<double> residual(const LduSystem& sys, std::span<const double> x, const ExecPolicy& policy = {});

/// Fixed-order dot product and 2-norm (see orderedSum).
double dotProduct(std::span<const double> a, std::span<const double> b, const ExecPolicy& policy = {});
double norm2(std::span<const double> a, const ExecPolicy& policy = {});

} // namespace fvg
