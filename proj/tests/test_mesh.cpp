#include "doctest.h"

#include <random>

#include "fvg/error.hpp"
#include "fvg/mesh.hpp"
#include "support.hpp"

using namespace fvg;

namespace {

// Counting formulas for an N^3 block.
std::int64_t cubeInternalFaces(std::int64_t n) { return 3 * n * n * (n - 1); }
std::int64_t cubeFaces(std::int64_t n) { return 3 * n * n * (n + 1); }
std::int64_t cubePoints(std::int64_t n) { return (n + 1) * (n + 1) * (n + 1); }

std::vector<Vec3> signedAreaSums(const Mesh& m, const MeshGeometry& g) {
    std::vector<Vec3> sum(static_cast<std::size_t>(m.nCells));
    for (std::size_t f = 0; f < m.owner.size(); ++f) {
        sum[static_cast<std::size_t>(m.owner[f])] += g.faceArea[f];
    }
    for (std::size_t f = 0; f < m.neighbour.size(); ++f) {
        sum[static_cast<std::size_t>(m.neighbour[f])] -= g.faceArea[f];
    }
    return sum;
}

} // namespace

TEST_CASE("block mesh counts follow the cube formulas") {
    for (Label n : {1, 2, 3, 4, 7}) {
        const Mesh m = generateBlockMesh(n, n, n);
        CHECK(m.nCells == n * n * n);
        CHECK(m.nInternalFaces() == cubeInternalFaces(n));
        CHECK(m.nFaces() == cubeFaces(n));
        CHECK(m.nPoints() == cubePoints(n));
    }
    SUBCASE("2x2x2") {
        const Mesh m = generateBlockMesh(2, 2, 2);
        CHECK(m.nCells == 8);
        CHECK(m.nPoints() == 27);
        CHECK(m.nInternalFaces() == 12);
        CHECK(m.nFaces() == 36);
    }
    SUBCASE("single cell") {
        const Mesh m = generateBlockMesh(1, 1, 1);
        CHECK(m.nCells == 1);
        CHECK(m.nInternalFaces() == 0);
        CHECK(m.nFaces() == 6);
    }
    SUBCASE("anisotropic") {
        const Mesh m = generateBlockMesh(3, 2, 5);
        CHECK(m.nInternalFaces() == 2 * 2 * 5 + 3 * 1 * 5 + 3 * 2 * 4);
        CHECK(m.nFaces() - m.nInternalFaces() == 2 * (2 * 5 + 3 * 5 + 3 * 2));
    }
}

TEST_CASE("block mesh ordering and patches") {
    const Mesh m = generateBlockMesh(3, 4, 2);
    REQUIRE_NOTHROW(validate(m));
    for (std::size_t f = 0; f < m.neighbour.size(); ++f) {
        CHECK(m.owner[f] < m.neighbour[f]);
        if (f > 0) {
            // Upper-triangular order: by owner, then neighbour.
            const bool sorted = m.owner[f - 1] < m.owner[f] ||
                                (m.owner[f - 1] == m.owner[f] && m.neighbour[f - 1] < m.neighbour[f]);
            CHECK(sorted);
        }
    }
    REQUIRE(m.patches.size() == 6);
    const char* names[] = {"xmin", "xmax", "ymin", "ymax", "zmin", "zmax"};
    for (std::size_t p = 0; p < 6; ++p) {
        CHECK(m.patches[p].name == names[p]);
        CHECK(m.patches[p].bc == BoundaryCondition::zeroGradient());
    }
    CHECK(m.patches[0].startFace == m.nInternalFaces());
    CHECK(m.patches[0].nFaces == 4 * 2);
    CHECK(m.patches[2].nFaces == 3 * 2);
    CHECK(m.patches[4].nFaces == 3 * 4);
    CHECK(m.findPatch("zmax") == 5);
    CHECK(m.findPatch("nope") == -1);
}

TEST_CASE("block mesh rejects bad dimensions") {
    CHECK_THROWS_AS(generateBlockMesh(0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(generateBlockMesh(1, -2, 1), std::invalid_argument);
    CHECK_THROWS_AS(generateBlockMesh(1, 1, 1, {1.0, 0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(generateBlockMesh(1, 1, 1, {1.0, 1.0, -1.0}), std::invalid_argument);
}

TEST_CASE("geometry of a single unit cell") {
    const Mesh m = generateBlockMesh(1, 1, 1);
    const MeshGeometry g = computeGeometry(m);
    CHECK(g.cellVolume[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(maxAbs(g.cellCentre[0] - Vec3{0.5, 0.5, 0.5}) < 1e-15);
    for (const Vec3& sf : g.faceArea) {
        CHECK(mag(sf) == doctest::Approx(1.0).epsilon(1e-15));
    }
    // xmin face points outwards
    CHECK(maxAbs(g.faceArea[0] - Vec3{-1, 0, 0}) < 1e-15);
    CHECK(maxAbs(g.faceCentre[0] - Vec3{0, 0.5, 0.5}) < 1e-15);
}

TEST_CASE("geometry of a split box") {
    const Mesh m = generateBlockMesh(2, 1, 1);
    const MeshGeometry g = computeGeometry(m);
    REQUIRE(m.nInternalFaces() == 1);
    CHECK(m.owner[0] == 0);
    CHECK(m.neighbour[0] == 1);
    CHECK(maxAbs(g.faceArea[0] - Vec3{1, 0, 0}) < 1e-15);
    CHECK(maxAbs(g.faceCentre[0] - Vec3{0.5, 0.5, 0.5}) < 1e-15);
    CHECK(g.cellVolume[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(maxAbs(g.cellCentre[1] - Vec3{0.75, 0.5, 0.5}) < 1e-15);
}

TEST_CASE("unit cube cell volumes are exact") {
    // Power-of-two spacings are representable, so (1/N)^3 is exact.
    for (Label n : {1, 2, 4, 8, 16}) {
        const MeshGeometry g = computeGeometry(generateBlockMesh(n, n, n));
        const double expected = 1.0 / (double(n) * n * n);
        double worst = 0.0;
        for (double v : g.cellVolume) {
            worst = std::max(worst, std::fabs(v - expected) / expected);
        }
        INFO("N = " << n);
        CHECK(worst <= 1e-15);
    }
    // Otherwise the stored coordinates i/N already carry rounding, so compare
    // with the box those coordinates span.
    for (Label n : {3, 5, 7, 10, 12}) {
        const Mesh m = generateBlockMesh(n, n, n);
        const MeshGeometry g = computeGeometry(m);
        const auto coord = [&](Label i) { return m.points[static_cast<std::size_t>(i)].x; };
        double worst = 0.0;
        for (Label k = 0; k < n; ++k) {
            for (Label j = 0; j < n; ++j) {
                for (Label i = 0; i < n; ++i) {
                    const double box = (coord(i + 1) - coord(i)) * (coord(j + 1) - coord(j)) * (coord(k + 1) - coord(k));
                    const double v = g.cellVolume[static_cast<std::size_t>(i + n * (j + n * k))];
                    worst = std::max(worst, std::fabs(v - box) / box);
                }
            }
        }
        INFO("N = " << n);
        CHECK(worst <= 1e-15);
    }
}

TEST_CASE("closure and volume sum on random meshes") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        Mesh m = test::randomBlockMesh(rng);
        Vec3 extent = m.points.back();
        if (trial % 2) {
            m = test::scrambleFaces(test::jitterInteriorPoints(m, rng, 0.15), rng);
        }
        REQUIRE_NOTHROW(validate(m));
        const MeshGeometry g = computeGeometry(m);
        double maxSf = 0.0;
        for (const Vec3& sf : g.faceArea) {
            maxSf = std::max(maxSf, mag(sf));
        }
        for (const Vec3& s : signedAreaSums(m, g)) {
            CHECK(maxAbs(s) <= 1e-12 * maxSf);
        }
        double vol = 0.0;
        for (double v : g.cellVolume) {
            CHECK(v > 0.0);
            vol += v;
        }
        const double box = extent.x * extent.y * extent.z;
        CHECK(std::fabs(vol - box) <= 1e-12 * box);
    }
}

TEST_CASE("degenerate face is a geometry error") {
    Mesh m = generateBlockMesh(1, 1, 1);
    const auto face = m.faces[0];
    for (Label v : face) {
        m.points[static_cast<std::size_t>(v)] = Vec3{0.0, 0.0, 0.0};
    }
    try {
        computeGeometry(m);
        FAIL("expected GeometryError");
    } catch (const GeometryError& e) {
        CHECK(std::string(e.what()).find("face 0") != std::string::npos);
    }
}

TEST_CASE("validate reports broken invariants") {
    const Mesh good = generateBlockMesh(2, 1, 1);
    const auto expectInvalid = [](const Mesh& m, const std::string& fragment) {
        try {
            validate(m);
            FAIL("expected ValidationError containing: " << fragment);
        } catch (const ValidationError& e) {
            INFO(e.what());
            CHECK(std::string(e.what()).find(fragment) != std::string::npos);
        }
    };
    {
        Mesh m = good;
        m.neighbour[0] = 0;
        expectInvalid(m, "owner equal to neighbour");
    }
    {
        Mesh m = good;
        m.owner[3] = 7;
        expectInvalid(m, "outside [0, nCells)");
    }
    {
        Mesh m = good;
        m.nCells = 3;
        expectInvalid(m, "orphan");
    }
    {
        Mesh m = good;
        m.patches[1].startFace -= 1;
        expectInvalid(m, "overlaps");
    }
    {
        Mesh m = good;
        m.patches[0].startFace = 0;
        expectInvalid(m, "inside the internal faces");
    }
    {
        Mesh m = good;
        m.patches.pop_back();
        expectInvalid(m, "patches cover");
    }
}
