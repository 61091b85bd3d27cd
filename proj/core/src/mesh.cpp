#include "fvg/mesh.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "fvg/error.hpp"

namespace fvg {

void FaceList::push_back(std::span<const Label> face) {
    vertices_.insert(vertices_.end(), face.begin(), face.end());
    offsets_.push_back(static_cast<Label>(vertices_.size()));
}

void FaceList::reserve(std::size_t nFaces, std::size_t nVertices) {
    offsets_.reserve(nFaces + 1);
    vertices_.reserve(nVertices);
}

int Mesh::findPatch(const std::string& name) const {
    for (std::size_t i = 0; i < patches.size(); ++i) {
        if (patches[i].name == name) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

namespace {

[[noreturn]] void fail(const std::string& what) {
    throw ValidationError("invalid mesh: " + what);
}

} // namespace

void validate(const Mesh& mesh) {
    const auto nFaces = static_cast<std::size_t>(mesh.nFaces());
    const auto nInternal = mesh.neighbour.size();
    const auto nPoints = mesh.points.size();

    if (mesh.faces.size() != nFaces) {
        fail("face count " + std::to_string(mesh.faces.size()) + " differs from owner count " +
             std::to_string(nFaces));
    }
    if (nInternal > nFaces) {
        fail("more neighbour entries than faces");
    }
    if (mesh.nCells < 0) {
        fail("negative cell count");
    }
    for (std::size_t p = 0; p < nPoints; ++p) {
        if (!isFinite(mesh.points[p])) {
            fail("point " + std::to_string(p) + " is not finite");
        }
    }
    std::vector<Label> sorted;
    for (std::size_t f = 0; f < nFaces; ++f) {
        const auto face = mesh.faces[f];
        if (face.size() < 3) {
            fail("face " + std::to_string(f) + " has fewer than 3 vertices");
        }
        for (Label v : face) {
            if (v < 0 || static_cast<std::size_t>(v) >= nPoints) {
                fail("face " + std::to_string(f) + " references point " + std::to_string(v) +
                     " outside [0, nPoints)");
            }
        }
        sorted.assign(face.begin(), face.end());
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            fail("face " + std::to_string(f) + " repeats a vertex");
        }
    }

    std::vector<char> used(static_cast<std::size_t>(mesh.nCells), 0);
    for (std::size_t f = 0; f < nFaces; ++f) {
        const Label o = mesh.owner[f];
        if (o < 0 || o >= mesh.nCells) {
            fail("owner of face " + std::to_string(f) + " outside [0, nCells)");
        }
        used[static_cast<std::size_t>(o)] = 1;
    }
    for (std::size_t f = 0; f < nInternal; ++f) {
        const Label n = mesh.neighbour[f];
        if (n < 0 || n >= mesh.nCells) {
            fail("neighbour of face " + std::to_string(f) + " outside [0, nCells)");
        }
        if (n == mesh.owner[f]) {
            fail("face " + std::to_string(f) + " has owner equal to neighbour");
        }
        used[static_cast<std::size_t>(n)] = 1;
    }
    const auto orphan = std::find(used.begin(), used.end(), 0);
    if (orphan != used.end()) {
        fail("cell " + std::to_string(orphan - used.begin()) + " is referenced by no face (orphan cell)");
    }

    // Patches must tile [nInternal, nFaces) in order.
    auto expected = static_cast<Label>(nInternal);
    for (const Patch& p : mesh.patches) {
        if (p.nFaces < 0) {
            fail("patch '" + p.name + "' has negative size");
        }
        if (p.startFace < static_cast<Label>(nInternal)) {
            fail("patch '" + p.name + "' starts inside the internal faces");
        }
        if (p.startFace < expected) {
            fail("patch '" + p.name + "' overlaps the previous patch range");
        }
        if (p.startFace > expected) {
            fail("gap before patch '" + p.name + "': boundary faces " + std::to_string(expected) + ".." +
                 std::to_string(p.startFace - 1) + " belong to no patch");
        }
        expected = p.endFace();
    }
    if (expected != static_cast<Label>(nFaces)) {
        fail("patches cover boundary faces up to " + std::to_string(expected) + " but the mesh has " +
             std::to_string(nFaces) + " faces");
    }
}

Mesh generateBlockMesh(Label nx, Label ny, Label nz, const Vec3& extent) {
    if (nx < 1 || ny < 1 || nz < 1) {
        throw std::invalid_argument("block mesh dimensions must be >= 1");
    }
    if (!(extent.x > 0.0 && extent.y > 0.0 && extent.z > 0.0) || !isFinite(extent)) {
        throw std::invalid_argument("block mesh extent must be positive and finite");
    }
    const std::int64_t X = nx, Y = ny, Z = nz;
    const std::int64_t nPoints = (X + 1) * (Y + 1) * (Z + 1);
    const std::int64_t nInternal = (X - 1) * Y * Z + X * (Y - 1) * Z + X * Y * (Z - 1);
    const std::int64_t nBoundary = 2 * (Y * Z + X * Z + X * Y);
    if (nPoints > std::numeric_limits<Label>::max() || nInternal + nBoundary > std::numeric_limits<Label>::max()) {
        throw std::invalid_argument("block mesh too large for 32-bit labels");
    }

    Mesh mesh;
    mesh.nCells = nx * ny * nz;

    mesh.points.reserve(static_cast<std::size_t>(nPoints));
    for (Label k = 0; k <= nz; ++k) {
        for (Label j = 0; j <= ny; ++j) {
            for (Label i = 0; i <= nx; ++i) {
                mesh.points.emplace_back(extent.x * i / nx, extent.y * j / ny, extent.z * k / nz);
            }
        }
    }

    const auto pt = [=](Label i, Label j, Label k) { return i + (nx + 1) * (j + (ny + 1) * k); };
    const auto cell = [=](Label i, Label j, Label k) { return i + nx * (j + ny * k); };

    // Vertex loops whose right-hand normal points to +x, +y, +z respectively.
    const auto xFace = [&](Label i, Label j, Label k) {
        return std::array<Label, 4>{pt(i, j, k), pt(i, j + 1, k), pt(i, j + 1, k + 1), pt(i, j, k + 1)};
    };
    const auto yFace = [&](Label i, Label j, Label k) {
        return std::array<Label, 4>{pt(i, j, k), pt(i, j, k + 1), pt(i + 1, j, k + 1), pt(i + 1, j, k)};
    };
    const auto zFace = [&](Label i, Label j, Label k) {
        return std::array<Label, 4>{pt(i, j, k), pt(i + 1, j, k), pt(i + 1, j + 1, k), pt(i, j + 1, k)};
    };
    const auto reversed = [](std::array<Label, 4> f) {
        std::reverse(f.begin(), f.end());
        return f;
    };

    const auto nFaces = static_cast<std::size_t>(nInternal + nBoundary);
    mesh.faces.reserve(nFaces, 4 * nFaces);
    mesh.owner.reserve(nFaces);
    mesh.neighbour.reserve(static_cast<std::size_t>(nInternal));

    // Cell order, then +x, +y, +z neighbour: sorted by owner, then neighbour.
    for (Label k = 0; k < nz; ++k) {
        for (Label j = 0; j < ny; ++j) {
            for (Label i = 0; i < nx; ++i) {
                const Label c = cell(i, j, k);
                if (i + 1 < nx) {
                    mesh.faces.push_back(xFace(i + 1, j, k));
                    mesh.owner.push_back(c);
                    mesh.neighbour.push_back(cell(i + 1, j, k));
                }
                if (j + 1 < ny) {
                    mesh.faces.push_back(yFace(i, j + 1, k));
                    mesh.owner.push_back(c);
                    mesh.neighbour.push_back(cell(i, j + 1, k));
                }
                if (k + 1 < nz) {
                    mesh.faces.push_back(zFace(i, j, k + 1));
                    mesh.owner.push_back(c);
                    mesh.neighbour.push_back(cell(i, j, k + 1));
                }
            }
        }
    }

    const auto addPatch = [&](std::string name, auto&& emit) {
        Patch p;
        p.name = std::move(name);
        p.startFace = static_cast<Label>(mesh.owner.size());
        emit();
        p.nFaces = static_cast<Label>(mesh.owner.size()) - p.startFace;
        mesh.patches.push_back(std::move(p));
    };
    const auto boundaryFace = [&](const std::array<Label, 4>& f, Label c) {
        mesh.faces.push_back(f);
        mesh.owner.push_back(c);
    };

    addPatch("xmin", [&] {
        for (Label k = 0; k < nz; ++k)
            for (Label j = 0; j < ny; ++j) boundaryFace(reversed(xFace(0, j, k)), cell(0, j, k));
    });
    addPatch("xmax", [&] {
        for (Label k = 0; k < nz; ++k)
            for (Label j = 0; j < ny; ++j) boundaryFace(xFace(nx, j, k), cell(nx - 1, j, k));
    });
    addPatch("ymin", [&] {
        for (Label k = 0; k < nz; ++k)
            for (Label i = 0; i < nx; ++i) boundaryFace(reversed(yFace(i, 0, k)), cell(i, 0, k));
    });
    addPatch("ymax", [&] {
        for (Label k = 0; k < nz; ++k)
            for (Label i = 0; i < nx; ++i) boundaryFace(yFace(i, ny, k), cell(i, ny - 1, k));
    });
    addPatch("zmin", [&] {
        for (Label j = 0; j < ny; ++j)
            for (Label i = 0; i < nx; ++i) boundaryFace(reversed(zFace(i, j, 0)), cell(i, j, 0));
    });
    addPatch("zmax", [&] {
        for (Label j = 0; j < ny; ++j)
            for (Label i = 0; i < nx; ++i) boundaryFace(zFace(i, j, nz), cell(i, j, nz - 1));
    });

    return mesh;
}

} // namespace fvg
