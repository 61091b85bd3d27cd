#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "fvg/fields.hpp"
#include "fvg/mesh.hpp"
#include "fvg/pcg.hpp"

namespace fvg {

struct GeneratedMesh {
    Label nx = 10;
    Label ny = 10;
    Label nz = 10;
    Vec3 extent{1.0, 1.0, 1.0};
};

struct PolyMeshDir {
    std::filesystem::path dir;
};

/// Everything a run needs. Parsed from flat `key = value` files:
///
///   mesh.nx / mesh.ny / mesh.nz / mesh.extent (x y z)   or   mesh.dir
///   physics.DT, physics.source
///   time.dt, time.endTime, time.writeInterval
///   init.T
///   bc.<patch> = fixedValue:<v> | zeroGradient
///   solver.tol, solver.maxIter
///   exec.policy = seq | par, exec.threads
///   output.dir, output.vtk
///
/// `#` starts a comment. Patches without a bc entry stay zeroGradient.
struct CaseConfig {
    std::variant<GeneratedMesh, PolyMeshDir> mesh = GeneratedMesh{};
    double diffusivity = 1.0;
    double timeStep = 0.2;
    double endTime = 100.0;
    int writeInterval = 0;
    double source = 0.0;
    std::map<std::string, BoundaryCondition> boundaryConditions;
    double initialT = 0.0;
    SolverControls solver;
    std::string policy = "seq";
    int threads = 1;
    std::filesystem::path outputDir;
    bool writeVtk = false;

    /// Throws std::invalid_argument on dt <= 0, endTime < dt, threads < 1 and similar.
    void check() const;

    /// Number of steps t = dt, 2dt, ... <= endTime.
    int stepCount() const;
};

/// Throws ParseError with the offending line. Relative mesh directories are
/// resolved against `baseDir`.
CaseConfig parseCaseConfig(std::istream& in, const std::filesystem::path& baseDir = {});
CaseConfig loadCaseConfig(const std::filesystem::path& file);

/// Wall-clock seconds per phase, accumulated over the run.
struct PhaseTimers {
    double io = 0.0;       ///< mesh, geometry, addressing, fields; field writes
    double assembly = 0.0; ///< matrix assembly and gradient evaluation
    double solver = 0.0;   ///< linear solves
    double total = 0.0;

    /// total minus the attributed phases.
    double unattributed() const noexcept { return total - io - assembly - solver; }

    static constexpr const char* phaseNames[] = {"io", "assembly", "solver", "total"};
    double phase(std::size_t i) const;
};

struct RunHooks {
    /// Overrides init.T with a per-cell-centre profile.
    std::function<double(const Vec3&)> initialProfile;
    /// Called after every step with the step number (1-based) and new field.
    std::function<void(int step, double time, const ScalarField& field, const MeshGeometry& geo)> onStep;
};

struct RunResult {
    Mesh mesh;
    ScalarField field;
    VectorField gradient;
    PhaseTimers timers;
    std::vector<SolverStats> stats; ///< one per step
};

/// Builds the mesh and its addressing once, then advances
/// dT/dt - div(DT grad T) = S_T with one implicit Euler solve per step.
/// Throws NumericalError naming the step when a solve does not converge.
RunResult runCase(const CaseConfig& config, const RunHooks& hooks = {});

struct PolicySpec {
    std::string kind = "seq";
    int threads = 1;

    std::string label() const;
};

/// "seq", "par" (uses `defaultThreads`) or "par:N", comma separated.
std::vector<PolicySpec> parsePolicyList(const std::string& text, int defaultThreads);

struct BenchmarkRun {
    PolicySpec policy;
    std::vector<PhaseTimers> samples;
    std::vector<double> finalField;
    std::vector<int> iterations;
};

struct BenchmarkRow {
    std::string policy;
    int threads = 1;
    std::string phase;
    double mean = 0.0;
    double stddev = 0.0; ///< sample standard deviation, 0 for one sample
    std::size_t samples = 0;
};

struct BenchmarkReport {
    std::vector<BenchmarkRun> runs;
    std::vector<BenchmarkRow> rows;

    /// Final fields and iteration counts bitwise equal across all runs.
    bool identicalOutputs() const;
    const BenchmarkRow* find(const std::string& policy, int threads, const std::string& phase) const;
};

/// runCase for every policy, `repeats` times each, with field writes off.
BenchmarkReport benchmark(const CaseConfig& config, const std::vector<PolicySpec>& policies, int repeats);

/// policy,threads,phase,mean_s,std_s
void writeBenchmarkCsv(const BenchmarkReport& report, std::ostream& out);

/// Physical cores usable by this process (affinity mask and SMT aware), at least 1.
int usablePhysicalCores();

} // namespace fvg
