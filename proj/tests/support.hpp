#pragma once

// Test-only oracles and generators. Nothing here calls the code paths it is
// used to check.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "fvg/adjacency.hpp"
#include "fvg/ldu.hpp"
#include "fvg/mesh.hpp"

namespace fvg::test {

/// Groups indices by key with buckets filled in input order.
inline CompressedLists groupingOracle(const std::vector<Label>& keys, Label nCells) {
    std::vector<std::vector<Label>> buckets(static_cast<std::size_t>(nCells));
    for (std::size_t i = 0; i < keys.size(); ++i) {
        buckets[static_cast<std::size_t>(keys[i])].push_back(static_cast<Label>(i));
    }
    CompressedLists out;
    out.items.clear();
    out.starts.assign(1, 0);
    for (const auto& b : buckets) {
        out.items.insert(out.items.end(), b.begin(), b.end());
        out.starts.push_back(static_cast<Label>(out.items.size()));
    }
    return out;
}

/// Sorted distinct cells with their faces in input order.
inline PatchCompression runLengthOracle(const std::vector<Label>& faceCells) {
    std::map<Label, std::vector<Label>> runs;
    for (std::size_t i = 0; i < faceCells.size(); ++i) {
        runs[faceCells[i]].push_back(static_cast<Label>(i));
    }
    PatchCompression out;
    out.faceIndex.clear();
    out.faceStart.assign(1, 0);
    for (const auto& [cell, faces] : runs) {
        out.faceIndex.insert(out.faceIndex.end(), faces.begin(), faces.end());
        out.faceStart.push_back(static_cast<Label>(out.faceIndex.size()));
    }
    return out;
}

/// Stable argsort by insertion into per-key buckets.
inline std::vector<Label> argsortOracle(const std::vector<Label>& keys) {
    std::map<Label, std::vector<Label>> buckets;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        buckets[keys[i]].push_back(static_cast<Label>(i));
    }
    std::vector<Label> out;
    for (const auto& [k, idx] : buckets) {
        out.insert(out.end(), idx.begin(), idx.end());
    }
    return out;
}

using Dense = std::vector<std::vector<double>>;

inline Dense denseMatrix(const LduSystem& sys) {
    const std::size_t n = sys.nCells();
    Dense a(n, std::vector<double>(n, 0.0));
    for (std::size_t c = 0; c < n; ++c) {
        a[c][c] = sys.diag[c];
    }
    for (std::size_t f = 0; f < sys.addr.nFaces(); ++f) {
        const auto l = static_cast<std::size_t>(sys.addr.lower[f]);
        const auto u = static_cast<std::size_t>(sys.addr.upper[f]);
        a[l][u] += sys.offDiag[f];
        a[u][l] += sys.offDiag[f];
    }
    return a;
}

inline std::vector<double> denseMultiply(const Dense& a, const std::vector<double>& x) {
    std::vector<double> y(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            y[i] += a[i][j] * x[j];
        }
    }
    return y;
}

/// Gaussian elimination with partial pivoting.
inline std::vector<double> denseSolve(Dense a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::fabs(a[i][k]) > std::fabs(a[piv][k])) {
                piv = i;
            }
        }
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) {
                a[i][j] -= m * a[k][j];
            }
            b[i] -= m * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            s -= a[i][j] * x[j];
        }
        x[i] = s / a[i][i];
    }
    return x;
}

/// Random block mesh with dimensions in [1, maxN] and extents in [0.5, 2].
inline Mesh randomBlockMesh(std::mt19937_64& rng, Label maxN = 6) {
    std::uniform_int_distribution<Label> n(1, maxN);
    std::uniform_real_distribution<double> e(0.5, 2.0);
    return generateBlockMesh(n(rng), n(rng), n(rng), {e(rng), e(rng), e(rng)});
}

/// Same cells, renumbered faces: internal faces permuted with random
/// orientation flips, boundary faces permuted within their patch. The result
/// is valid but no longer upper-triangular, which exercises non-trivial
/// group orders in the adjacency.
inline Mesh scrambleFaces(const Mesh& m, std::mt19937_64& rng) {
    Mesh out;
    out.points = m.points;
    out.nCells = m.nCells;
    out.patches = m.patches;
    std::vector<Label> perm(m.neighbour.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::bernoulli_distribution flip(0.5);
    std::vector<Label> verts;
    for (Label f : perm) {
        const auto face = m.faces[static_cast<std::size_t>(f)];
        verts.assign(face.begin(), face.end());
        Label o = m.owner[static_cast<std::size_t>(f)];
        Label n = m.neighbour[static_cast<std::size_t>(f)];
        if (flip(rng)) {
            std::reverse(verts.begin(), verts.end());
            std::swap(o, n);
        }
        out.faces.push_back(std::span<const Label>(verts));
        out.owner.push_back(o);
        out.neighbour.push_back(n);
    }
    for (const Patch& p : m.patches) {
        std::vector<Label> local(static_cast<std::size_t>(p.nFaces));
        std::iota(local.begin(), local.end(), p.startFace);
        std::shuffle(local.begin(), local.end(), rng);
        for (Label f : local) {
            out.faces.push_back(m.faces[static_cast<std::size_t>(f)]);
            out.owner.push_back(m.owner[static_cast<std::size_t>(f)]);
        }
    }
    return out;
}

/// Moves every interior point by up to `amount` times the local spacing,
/// producing general (non-orthogonal) hexahedra.
inline Mesh jitterInteriorPoints(Mesh m, std::mt19937_64& rng, double amount) {
    Vec3 lo = m.points.front(), hi = m.points.front();
    for (const Vec3& p : m.points) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    std::uniform_real_distribution<double> u(-amount, amount);
    const double h = std::cbrt((hi.x - lo.x) * (hi.y - lo.y) * (hi.z - lo.z) / m.nCells);
    const auto interior = [&](double v, double a, double b) { return v > a && v < b; };
    for (Vec3& p : m.points) {
        if (interior(p.x, lo.x, hi.x) && interior(p.y, lo.y, hi.y) && interior(p.z, lo.z, hi.z)) {
            p += Vec3{u(rng), u(rng), u(rng)} * h;
        }
    }
    return m;
}

inline double relInfError(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, maxAbs(a[i] - b[i]));
        den = std::max(den, maxAbs(b[i]));
    }
    return den > 0.0 ? num / den : num;
}

inline double relInfError(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::fabs(a[i] - b[i]));
        den = std::max(den, std::fabs(b[i]));
    }
    return den > 0.0 ? num / den : num;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratchDir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("fvg_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace fvg::test
