// Kernel timings on N^3 block meshes. Arguments: {N, threads}, threads 0 = sequential.

#include <benchmark/benchmark.h>

#include <cmath>
#include <map>
#include <memory>

#include "fvg/assembly.hpp"
#include "fvg/pcg.hpp"

using namespace fvg;

namespace {

struct Setup {
    Mesh mesh;
    MeshGeometry geo;
    CellFaceAdjacency adj;
    InterpolationWeights weights;
    ScalarField T;

    explicit Setup(Label n)
        : mesh(generateBlockMesh(n, n, n)),
          geo(computeGeometry(mesh)),
          adj(buildAdjacency(mesh)),
          weights(computeWeights(mesh, geo)),
          T(mesh, 0.0) {
        mesh.patches[0].bc = BoundaryCondition::fixedValue(1.0);
        for (std::size_t c = 0; c < T.internal.size(); ++c) {
            const Vec3& p = geo.cellCentre[c];
            T.internal[c] = std::sin(3.0 * p.x) * std::cos(2.0 * p.y) + p.z;
        }
        updateBoundaryValues(T, mesh);
    }
};

// One setup per mesh size, reused across policies.
const Setup& setupFor(Label n) {
    static std::map<Label, std::unique_ptr<Setup>> cache;
    auto& s = cache[n];
    if (!s) {
        s = std::make_unique<Setup>(n);
    }
    return *s;
}

ExecPolicy policyFor(const benchmark::State& state) {
    const auto threads = static_cast<int>(state.range(1));
    return threads == 0 ? ExecPolicy::seq() : ExecPolicy::par(threads);
}

void label(benchmark::State& state, const Setup& s) {
    state.SetLabel(policyFor(state).isParallel() ? "par" : "seq");
    state.counters["cells"] = static_cast<double>(s.mesh.nCells);
}

void BM_Adjacency(benchmark::State& state) {
    const Setup& s = setupFor(static_cast<Label>(state.range(0)));
    const ExecPolicy policy = policyFor(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(buildAdjacency(s.mesh, policy));
    }
    label(state, s);
}

void BM_GradScatter(benchmark::State& state) {
    const Setup& s = setupFor(static_cast<Label>(state.range(0)));
    const auto ssf = interpolateToFaces(s.T, s.weights, s.mesh);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gradGaussScatter(ssf, s.mesh, s.geo));
    }
    label(state, s);
}

void BM_GradGather(benchmark::State& state) {
    const Setup& s = setupFor(static_cast<Label>(state.range(0)));
    const ExecPolicy policy = policyFor(state);
    const auto ssf = interpolateToFaces(s.T, s.weights, s.mesh, policy);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gradGaussGather(ssf, s.mesh, s.geo, s.adj, policy));
    }
    label(state, s);
}

void BM_AssemblyScatter(benchmark::State& state) {
    const Setup& s = setupFor(static_cast<Label>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(assembleLaplacianDdtScatter(s.T, {}, s.mesh, s.geo, s.adj));
    }
    label(state, s);
}

void BM_AssemblyGather(benchmark::State& state) {
    const Setup& s = setupFor(static_cast<Label>(state.range(0)));
    const ExecPolicy policy = policyFor(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(assembleLaplacianDdt(s.T, {}, s.mesh, s.geo, s.adj, policy));
    }
    label(state, s);
}

void BM_Spmv(benchmark::State& state) {
    const Setup& s = setupFor(static_cast<Label>(state.range(0)));
    const ExecPolicy policy = policyFor(state);
    const auto sys = assembleLaplacianDdt(s.T, {}, s.mesh, s.geo, s.adj);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spmv(sys, s.T.internal, policy));
    }
    label(state, s);
}

void BM_SpmvFaceLoop(benchmark::State& state) {
    const Setup& s = setupFor(static_cast<Label>(state.range(0)));
    const auto sys = assembleLaplacianDdt(s.T, {}, s.mesh, s.geo, s.adj);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spmvFaceLoop(sys, s.T.internal));
    }
    label(state, s);
}

void BM_Pcg(benchmark::State& state) {
    const Setup& s = setupFor(static_cast<Label>(state.range(0)));
    const ExecPolicy policy = policyFor(state);
    const auto sys = assembleLaplacianDdt(s.T, {}, s.mesh, s.geo, s.adj);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pcgSolve(sys, s.T.internal, {}, policy));
    }
    label(state, s);
}

void policyArgs(benchmark::internal::Benchmark* b) {
    for (long n : {32, 64}) {
        for (long threads : {0, 1, 2, 4, 8}) {
            b->Args({n, threads});
        }
    }
    b->Unit(benchmark::kMillisecond);
}

void sequentialArgs(benchmark::internal::Benchmark* b) {
    b->Args({32, 0})->Args({64, 0})->Unit(benchmark::kMillisecond);
}

} // namespace

BENCHMARK(BM_Adjacency)->Apply(policyArgs);
BENCHMARK(BM_GradScatter)->Apply(sequentialArgs);
BENCHMARK(BM_GradGather)->Apply(policyArgs);
BENCHMARK(BM_AssemblyScatter)->Apply(sequentialArgs);
BENCHMARK(BM_AssemblyGather)->Apply(policyArgs);
BENCHMARK(BM_SpmvFaceLoop)->Apply(sequentialArgs);
BENCHMARK(BM_Spmv)->Apply(policyArgs);
BENCHMARK(BM_Pcg)->Apply(policyArgs);

BENCHMARK_MAIN();
