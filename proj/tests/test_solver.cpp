#include "doctest.h"

#include <cstring>
#include <random>
#include <set>

#include "fvg/assembly.hpp"
#include "fvg/error.hpp"
#include "fvg/pcg.hpp"
#include "support.hpp"

using namespace fvg;

namespace {

// Random symmetric diagonally dominant pattern on n cells.
struct RandomSpd {
    LduPattern pattern;
    LduSystem sys;
};

RandomSpd makeRandomSpd(std::mt19937_64& rng, Label n, double density) {
    std::set<std::pair<Label, Label>> pairs;
    std::bernoulli_distribution take(density);
    for (Label i = 0; i < n; ++i) {
        for (Label j = i + 1; j < n; ++j) {
            if (take(rng)) {
                pairs.emplace(i, j);
            }
        }
    }
    std::vector<Label> lower, upper;
    for (auto [l, u] : pairs) {
        lower.push_back(l);
        upper.push_back(u);
    }
    RandomSpd out{LduPattern(n, lower, upper), {}};
    out.sys = LduSystem(out.pattern.view());
    std::uniform_real_distribution<double> c(0.1, 2.0), b(-5.0, 5.0);
    for (std::size_t f = 0; f < lower.size(); ++f) {
        out.sys.offDiag[f] = -c(rng);
        out.sys.diag[static_cast<std::size_t>(lower[f])] += -out.sys.offDiag[f];
        out.sys.diag[static_cast<std::size_t>(upper[f])] += -out.sys.offDiag[f];
    }
    for (auto& d : out.sys.diag) {
        d += c(rng);
    }
    for (auto& r : out.sys.rhs) {
        r = b(rng);
    }
    return out;
}

} // namespace

TEST_CASE("spmv small examples") {
    const LduPattern none(3, {}, {});
    LduSystem id(none.view());
    id.diag = {1, 1, 1};
    const std::vector<double> x{0.5, -2.0, 7.0};
    CHECK(spmv(id, x) == x);

    const LduPattern two(2, {0}, {1});
    LduSystem a(two.view());
    a.diag = {1, 1};
    a.offDiag = {-1};
    CHECK(spmv(a, std::vector<double>{1, 0}) == std::vector<double>{1, -1});
    CHECK(spmvFaceLoop(a, std::vector<double>{1, 0}) == std::vector<double>{1, -1});
    CHECK(residual(a, std::vector<double>{1, 0}) == std::vector<double>{-1, 1});
}

TEST_CASE("LduPattern rejects bad addressing") {
    CHECK_THROWS_AS(LduPattern(2, {0}, {}), std::invalid_argument);
    CHECK_THROWS_AS(LduPattern(2, {1}, {1}), std::invalid_argument);
    const Mesh a = generateBlockMesh(2, 1, 1);
    const Mesh b = generateBlockMesh(3, 1, 1);
    CHECK_THROWS_AS(LduAddressing::of(a, buildAdjacency(b)), std::invalid_argument);
}

TEST_CASE("gather spmv equals the face loop and dense product") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Mesh m = test::randomBlockMesh(rng);
        if (trial % 2) {
            m = test::scrambleFaces(m, rng);
        }
        const auto adj = buildAdjacency(m);
        LduSystem sys(LduAddressing::of(m, adj));
        for (auto& v : sys.diag) {
            v = u(rng);
        }
        for (auto& v : sys.offDiag) {
            v = u(rng);
        }
        std::vector<double> x(sys.nCells());
        for (auto& v : x) {
            v = u(rng);
        }
        const auto gather = spmv(sys, x);
        const auto dense = test::denseMultiply(test::denseMatrix(sys), x);
        CHECK(test::relInfError(gather, spmvFaceLoop(sys, x)) <= 1e-14);
        CHECK(test::relInfError(gather, dense) <= 1e-14);
        for (int t : {2, 8}) {
            const auto par = spmv(sys, x, ExecPolicy::par(t));
            CHECK(std::memcmp(par.data(), gather.data(), par.size() * sizeof(double)) == 0);
        }
    }
}

TEST_CASE("dot product is policy independent") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1e3);
    std::vector<double> a(100003), b(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = n(rng);
        b[i] = n(rng);
    }
    const double s = dotProduct(a, b);
    for (int t : {1, 2, 8}) {
        const double p = dotProduct(a, b, ExecPolicy::par(t));
        CHECK(std::memcmp(&p, &s, sizeof s) == 0);
    }
    double naive = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        naive += a[i] * b[i];
    }
    CHECK(s == doctest::Approx(naive).epsilon(1e-10));
    CHECK(norm2(std::vector<double>{3, 4}) == 5.0);
}

TEST_CASE("PCG hand-worked systems") {
    SolverControls tight;
    tight.tolerance = 1e-14;

    const LduPattern none(2, {}, {});
    LduSystem d(none.view());
    d.diag = {2, 3};
    d.rhs = {2, 6};
    const auto r1 = pcgSolve(d, std::vector<double>{0, 0}, tight);
    CHECK(r1.stats.converged);
    CHECK(r1.stats.iterations <= 2);
    CHECK(std::fabs(r1.x[0] - 1.0) <= 1e-10);
    CHECK(std::fabs(r1.x[1] - 2.0) <= 1e-10);

    const LduPattern two(2, {0}, {1});
    LduSystem a(two.view());
    a.diag = {4, 3};
    a.offDiag = {1};
    a.rhs = {1, 2};
    const auto r2 = pcgSolve(a, std::vector<double>{0, 0}, tight);
    CHECK(r2.stats.converged);
    CHECK(std::fabs(r2.x[0] - 1.0 / 11.0) <= 1e-10);
    CHECK(std::fabs(r2.x[1] - 7.0 / 11.0) <= 1e-10);

    a.rhs = {0, 0};
    const auto r3 = pcgSolve(a, std::vector<double>{0, 0});
    CHECK(r3.stats.iterations == 0);
    CHECK(r3.stats.converged);
    CHECK(r3.x == std::vector<double>{0, 0});
}

TEST_CASE("PCG failure modes") {
    const LduPattern two(2, {0}, {1});
    LduSystem a(two.view());
    a.diag = {0, 1};
    a.rhs = {1, 1};
    CHECK_THROWS_AS(pcgSolve(a, std::vector<double>{0, 0}), NumericalError);
    a.diag = {-1, 1};
    CHECK_THROWS_AS(pcgSolve(a, std::vector<double>{0, 0}), NumericalError);
    a.diag = {1, 1};
    CHECK_THROWS_AS(pcgSolve(a, std::vector<double>{0}), std::invalid_argument);
    SolverControls bad;
    bad.tolerance = 0.0;
    CHECK_THROWS_AS(pcgSolve(a, std::vector<double>{0, 0}, bad), std::invalid_argument);

    std::mt19937_64 rng(5);
    auto spd = makeRandomSpd(rng, 60, 0.2);
    SolverControls few;
    few.maxIterations = 2;
    few.tolerance = 1e-14;
    const auto r = pcgSolve(spd.sys, std::vector<double>(60, 0.0), few);
    CHECK_FALSE(r.stats.converged);
    CHECK(r.stats.iterations == 2);
    CHECK(r.stats.finalResidual <= r.stats.initialResidual);
}

TEST_CASE("PCG converges on random SPD systems") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<Label> size(1, 64);
    SolverControls ctl;
    ctl.tolerance = 1e-12;
    for (int trial = 0; trial < 40; ++trial) {
        const Label n = size(rng);
        auto spd = makeRandomSpd(rng, n, 0.15);
        const auto r = pcgSolve(spd.sys, std::vector<double>(static_cast<std::size_t>(n), 0.0), ctl);
        CHECK(r.stats.converged);
        CHECK(r.stats.iterations <= n + 5);
        const auto exact = test::denseSolve(test::denseMatrix(spd.sys), spd.sys.rhs);
        CHECK(test::relInfError(r.x, exact) <= 1e-10);
        CHECK(norm2(residual(spd.sys, r.x)) <= ctl.tolerance * r.stats.initialResidual);
    }
}

TEST_CASE("Jacobi preconditioning is invariant to row-column scaling by powers of two") {
    std::mt19937_64 rng(17);
    auto spd = makeRandomSpd(rng, 40, 0.2);
    auto scaled = makeRandomSpd(rng, 40, 0.2);
    scaled.sys = spd.sys;
    for (auto& v : scaled.sys.diag) {
        v *= 4.0;
    }
    for (auto& v : scaled.sys.offDiag) {
        v *= 4.0;
    }
    for (auto& v : scaled.sys.rhs) {
        v *= 4.0;
    }
    const std::vector<double> x0(40, 0.0);
    const auto a = pcgSolve(spd.sys, x0);
    const auto b = pcgSolve(scaled.sys, x0);
    CHECK(a.stats.iterations == b.stats.iterations);
    CHECK(a.x == b.x);
}

TEST_CASE("PCG iterates are bitwise identical under every policy") {
    const Mesh m = generateBlockMesh(12, 11, 10);
    const auto g = computeGeometry(m);
    const auto adj = buildAdjacency(m);
    ScalarField told(m, 0.0);
    for (std::size_t c = 0; c < told.internal.size(); ++c) {
        told.internal[c] = std::sin(3.0 * g.cellCentre[c].x) + g.cellCentre[c].y;
    }
    const auto sys = assembleLaplacianDdt(told, {1.0, 0.2, 0.0}, m, g, adj);
    const auto ref = pcgSolve(sys, told.internal);
    CHECK(ref.stats.converged);
    for (int t : {1, 2, 8}) {
        const auto par = pcgSolve(sys, told.internal, {}, ExecPolicy::par(t));
        CHECK(par.stats.iterations == ref.stats.iterations);
        CHECK(std::memcmp(par.x.data(), ref.x.data(), par.x.size() * sizeof(double)) == 0);
    }
}
