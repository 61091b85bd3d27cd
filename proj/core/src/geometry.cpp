#include <cmath>
#include <string>

#include "fvg/error.hpp"
#include "fvg/mesh.hpp"

namespace fvg {

std::vector<double> MeshGeometry::faceAreaMagnitude() const {
    std::vector<double> out(faceArea.size());
    for (std::size_t f = 0; f < faceArea.size(); ++f) {
        out[f] = mag(faceArea[f]);
    }
    return out;
}

MeshGeometry computeGeometry(const Mesh& mesh) {
    const auto nFaces = static_cast<std::size_t>(mesh.nFaces());
    const auto nCells = static_cast<std::size_t>(mesh.nCells);
    const auto nInternal = mesh.neighbour.size();

    MeshGeometry geo;
    geo.faceArea.resize(nFaces);
    geo.faceCentre.resize(nFaces);
    geo.cellCentre.assign(nCells, Vec3{});
    geo.cellVolume.assign(nCells, 0.0);

    // Work in offsets from a local origin (first vertex of a face, a vertex
    // of a cell) so small cells far from the origin keep full precision.
    std::vector<Vec3> faceOffset(nFaces);
    for (std::size_t f = 0; f < nFaces; ++f) {
        const auto face = mesh.faces[f];
        const auto n = face.size();
        const Vec3& origin = mesh.points[static_cast<std::size_t>(face[0])];
        const auto local = [&](std::size_t i) { return mesh.points[static_cast<std::size_t>(face[i % n])] - origin; };
        Vec3 estimate;
        for (std::size_t i = 1; i < n; ++i) {
            estimate += local(i);
        }
        estimate /= static_cast<double>(n);

        Vec3 sumN;
        Vec3 sumAc;
        double sumA = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 p = local(i);
            const Vec3 q = local(i + 1);
            const Vec3 triNormal = cross(q - p, estimate - p);
            const double a = mag(triNormal);
            sumN += triNormal;
            sumA += a;
            sumAc += a * (p + q + estimate);
        }
        if (!(sumA > 0.0)) {
            throw GeometryError("face " + std::to_string(f) + " has zero area");
        }
        faceOffset[f] = sumAc / (3.0 * sumA);
        geo.faceCentre[f] = origin + faceOffset[f];
        geo.faceArea[f] = 0.5 * sumN;
    }

    std::vector<Label> cellOrigin(nCells, -1);
    for (std::size_t f = 0; f < nFaces; ++f) {
        auto& o = cellOrigin[static_cast<std::size_t>(mesh.owner[f])];
        if (o < 0) {
            o = mesh.faces[f][0];
        }
    }
    for (std::size_t f = 0; f < nInternal; ++f) {
        auto& o = cellOrigin[static_cast<std::size_t>(mesh.neighbour[f])];
        if (o < 0) {
            o = mesh.faces[f][0];
        }
    }
    // Face centre relative to the origin of cell c.
    const auto relCentre = [&](std::size_t c, std::size_t f) {
        return (mesh.points[static_cast<std::size_t>(mesh.faces[f][0])] -
                mesh.points[static_cast<std::size_t>(cellOrigin[c])]) +
               faceOffset[f];
    };

    // Cell centre estimate: mean of the face centres.
    std::vector<Vec3> estimate(nCells);
    std::vector<int> nCellFaces(nCells, 0);
    for (std::size_t f = 0; f < nFaces; ++f) {
        const auto o = static_cast<std::size_t>(mesh.owner[f]);
        estimate[o] += relCentre(o, f);
        ++nCellFaces[o];
    }
    for (std::size_t f = 0; f < nInternal; ++f) {
        const auto nb = static_cast<std::size_t>(mesh.neighbour[f]);
        estimate[nb] += relCentre(nb, f);
        ++nCellFaces[nb];
    }
    for (std::size_t c = 0; c < nCells; ++c) {
        estimate[c] /= static_cast<double>(nCellFaces[c]);
    }

    // Pyramids with apex at the estimate; 3*volume and volume-weighted centroid.
    const auto addPyramid = [&](std::size_t c, const Vec3& outwardArea, std::size_t f) {
        const Vec3 fc = relCentre(c, f) - estimate[c];
        const double vol3 = dot(outwardArea, fc);
        geo.cellVolume[c] += vol3;
        geo.cellCentre[c] += vol3 * (0.75 * fc);
    };
    for (std::size_t f = 0; f < nFaces; ++f) {
        addPyramid(static_cast<std::size_t>(mesh.owner[f]), geo.faceArea[f], f);
    }
    for (std::size_t f = 0; f < nInternal; ++f) {
        addPyramid(static_cast<std::size_t>(mesh.neighbour[f]), -geo.faceArea[f], f);
    }
    for (std::size_t c = 0; c < nCells; ++c) {
        if (!(geo.cellVolume[c] > 0.0)) {
            throw GeometryError("cell " + std::to_string(c) + " has non-positive volume");
        }
        geo.cellCentre[c] = mesh.points[static_cast<std::size_t>(cellOrigin[c])] +
                            (estimate[c] + geo.cellCentre[c] / geo.cellVolume[c]);
        geo.cellVolume[c] /= 3.0;
    }
    return geo;
}

} // namespace fvg
