#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "fvg/types.hpp"

namespace fvg {

/// Boundary condition attached to a patch. Values come from the case
/// configuration; polyMesh files only carry the patch layout.
struct BoundaryCondition {
    enum class Kind { zeroGradient, fixedValue };

    Kind kind = Kind::zeroGradient;
    double value = 0.0;

    static BoundaryCondition zeroGradient() { return {}; }
    static BoundaryCondition fixedValue(double v) { return {Kind::fixedValue, v}; }

    bool isFixedValue() const noexcept { return kind == Kind::fixedValue; }

    friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;
};

struct Patch {
    std::string name;
    BoundaryCondition bc;
    Label startFace = 0;
    Label nFaces = 0;

    Label endFace() const noexcept { return startFace + nFaces; }

    friend bool operator==(const Patch&, const Patch&) = default;
};

/// Faces as ordered vertex-label lists, stored compressed (offsets + labels).
class FaceList {
public:
    FaceList() : offsets_{0} {}

    std::size_t size() const noexcept { return offsets_.size() - 1; }
    bool empty() const noexcept { return size() == 0; }

    std::span<const Label> operator[](std::size_t f) const {
        return {vertices_.data() + offsets_[f], static_cast<std::size_t>(offsets_[f + 1] - offsets_[f])};
    }

    void push_back(std::span<const Label> face);
    void push_back(std::initializer_list<Label> face) { push_back(std::span<const Label>(face.begin(), face.size())); }
    void reserve(std::size_t nFaces, std::size_t nVertices);

    const std::vector<Label>& offsets() const noexcept { return offsets_; }
    const std::vector<Label>& vertices() const noexcept { return vertices_; }

    friend bool operator==(const FaceList&, const FaceList&) = default;

private:
    std::vector<Label> offsets_;
    std::vector<Label> vertices_;
};

/// Face-addressed polyhedral mesh. Internal faces come first (the first
/// `neighbour.size()` faces), followed by the patches in order.
struct Mesh {
    std::vector<Vec3> points;
    FaceList faces;
    std::vector<Label> owner;     ///< one per face
    std::vector<Label> neighbour; ///< one per internal face
    std::vector<Patch> patches;
    Label nCells = 0;

    Label nPoints() const noexcept { return static_cast<Label>(points.size()); }
    Label nFaces() const noexcept { return static_cast<Label>(owner.size()); }
    Label nInternalFaces() const noexcept { return static_cast<Label>(neighbour.size()); }

    /// Cells adjacent to the faces of patch `patchi` (OpenFOAM's faceCells).
    std::span<const Label> faceCells(std::size_t patchi) const {
        const Patch& p = patches[patchi];
        return {owner.data() + p.startFace, static_cast<std::size_t>(p.nFaces)};
    }

    /// Index of the patch called `name`, or -1.
    int findPatch(const std::string& name) const;

    friend bool operator==(const Mesh&, const Mesh&) = default;
};

/// Throws ValidationError naming the first violated invariant.
void validate(const Mesh& mesh);

/// Structured hexahedral block [0,extent] split into nx*ny*nz cells with six
/// zeroGradient patches xmin, xmax, ymin, ymax, zmin, zmax. Internal faces are
/// in upper-triangular order (owner < neighbour, sorted by owner then
/// neighbour). Throws std::invalid_argument for non-positive sizes.
Mesh generateBlockMesh(Label nx, Label ny, Label nz, const Vec3& extent = {1.0, 1.0, 1.0});

/// Derived geometry. Face area vectors point owner -> neighbour, and outwards
/// on the boundary.
struct MeshGeometry {
    std::vector<Vec3> faceArea;
    std::vector<Vec3> faceCentre;
    std::vector<Vec3> cellCentre;
    std::vector<double> cellVolume;

    /// |Sf| per face.
    std::vector<double> faceAreaMagnitude() const;
};

/// Face areas and centroids by triangulation about the vertex average; cell
/// volumes and centroids by pyramid decomposition about the face-centre
/// average. Throws GeometryError on zero-area faces or non-positive volumes.
MeshGeometry computeGeometry(const Mesh& mesh);

} // namespace fvg
