#include "fvg/case.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <sched.h>

#include "fvg/adjacency.hpp"
#include "fvg/assembly.hpp"
#include "fvg/error.hpp"
#include "fvg/field_io.hpp"
#include "fvg/polymesh_io.hpp"

namespace fvg {

// ---------------------------------------------------------------------------
// configuration

void CaseConfig::check() const {
    if (!(diffusivity > 0.0)) {
        throw std::invalid_argument("physics.DT must be positive");
    }
    if (!(timeStep > 0.0)) {
        throw std::invalid_argument("time.dt must be positive");
    }
    if (!(endTime >= timeStep)) {
        throw std::invalid_argument("time.endTime must be >= time.dt");
    }
    if (writeInterval < 0) {
        throw std::invalid_argument("time.writeInterval must be >= 0");
    }
    if (threads < 1) {
        throw std::invalid_argument("exec.threads must be >= 1");
    }
    if (policy != "seq" && policy != "par") {
        throw std::invalid_argument("exec.policy must be seq or par");
    }
    if (!(solver.tolerance > 0.0) || solver.maxIterations < 1) {
        throw std::invalid_argument("solver.tol must be positive and solver.maxIter >= 1");
    }
    if (const auto* g = std::get_if<GeneratedMesh>(&mesh)) {
        if (g->nx < 1 || g->ny < 1 || g->nz < 1) {
            throw std::invalid_argument("mesh.nx, mesh.ny, mesh.nz must be >= 1");
        }
        if (!(g->extent.x > 0.0 && g->extent.y > 0.0 && g->extent.z > 0.0)) {
            throw std::invalid_argument("mesh.extent components must be positive");
        }
    }
}

int CaseConfig::stepCount() const {
    // Tolerate round-off in endTime/dt, e.g. 100/0.2.
    return static_cast<int>(std::floor(endTime / timeStep * (1.0 + 1e-12)));
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T number(const std::string& value, const std::string& key, std::size_t line) {
    T out{};
    const char* first = value.data();
    const char* last = first + value.size();
    if (first != last && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last || value.empty()) {
        throw ParseError("invalid value '" + value + "' for " + key, line);
    }
    return out;
}

bool boolean(const std::string& value, const std::string& key, std::size_t line) {
    if (value == "true" || value == "yes" || value == "on" || value == "1") {
        return true;
    }
    if (value == "false" || value == "no" || value == "off" || value == "0") {
        return false;
    }
    throw ParseError("invalid boolean '" + value + "' for " + key, line);
}

BoundaryCondition boundaryCondition(const std::string& value, const std::string& key, std::size_t line) {
    if (value == "zeroGradient") {
        return BoundaryCondition::zeroGradient();
    }
    const std::string prefix = "fixedValue:";
    if (value.rfind(prefix, 0) == 0) {
        return BoundaryCondition::fixedValue(number<double>(trim(value.substr(prefix.size())), key, line));
    }
    throw ParseError("invalid boundary condition '" + value + "' for " + key +
                         " (expected fixedValue:<value> or zeroGradient)",
                     line);
}

Vec3 vector3(const std::string& value, const std::string& key, std::size_t line) {
    std::string v = value;
    std::replace(v.begin(), v.end(), ',', ' ');
    std::istringstream ss(v);
    std::string a, b, c, extra;
    if (!(ss >> a >> b >> c) || (ss >> extra)) {
        throw ParseError("expected three components for " + key, line);
    }
    return {number<double>(a, key, line), number<double>(b, key, line), number<double>(c, key, line)};
}

} // namespace

CaseConfig parseCaseConfig(std::istream& in, const std::filesystem::path& baseDir) {
    CaseConfig cfg;
    GeneratedMesh gen;
    std::optional<std::filesystem::path> meshDir;
    bool haveGenerateKeys = false;
    std::set<std::string> seen;

    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        const std::string text = trim(raw);
        if (text.empty()) {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected key = value", line);
        }
        const std::string key = trim(std::string_view(text).substr(0, eq));
        const std::string value = trim(std::string_view(text).substr(eq + 1));
        if (key.empty()) {
            throw ParseError("missing key", line);
        }
        if (!seen.insert(key).second) {
            throw ParseError("duplicate key " + key, line);
        }

        if (key == "mesh.nx") {
            gen.nx = number<Label>(value, key, line);
            haveGenerateKeys = true;
        } else if (key == "mesh.ny") {
            gen.ny = number<Label>(value, key, line);
            haveGenerateKeys = true;
        } else if (key == "mesh.nz") {
            gen.nz = number<Label>(value, key, line);
            haveGenerateKeys = true;
        } else if (key == "mesh.extent") {
            gen.extent = vector3(value, key, line);
            haveGenerateKeys = true;
        } else if (key == "mesh.dir") {
            std::filesystem::path p(value);
            meshDir = p.is_relative() && !baseDir.empty() ? baseDir / p : p;
        } else if (key == "physics.DT") {
            cfg.diffusivity = number<double>(value, key, line);
        } else if (key == "physics.source") {
            cfg.source = number<double>(value, key, line);
        } else if (key == "time.dt") {
            cfg.timeStep = number<double>(value, key, line);
        } else if (key == "time.endTime") {
            cfg.endTime = number<double>(value, key, line);
        } else if (key == "time.writeInterval") {
            cfg.writeInterval = number<int>(value, key, line);
        } else if (key == "init.T") {
            cfg.initialT = number<double>(value, key, line);
        } else if (key.rfind("bc.", 0) == 0 && key.size() > 3) {
            cfg.boundaryConditions[key.substr(3)] = boundaryCondition(value, key, line);
        } else if (key == "solver.tol") {
            cfg.solver.tolerance = number<double>(value, key, line);
        } else if (key == "solver.maxIter") {
            cfg.solver.maxIterations = number<int>(value, key, line);
        } else if (key == "exec.policy") {
            cfg.policy = value;
        } else if (key == "exec.threads") {
            cfg.threads = number<int>(value, key, line);
        } else if (key == "output.dir") {
            cfg.outputDir = value;
        } else if (key == "output.vtk") {
            cfg.writeVtk = boolean(value, key, line);
        } else {
            throw ParseError("unknown key " + key, line);
        }
    }

    if (meshDir && haveGenerateKeys) {
        throw ParseError("mesh.dir cannot be combined with mesh.nx/ny/nz/extent", 0);
    }
    if (meshDir) {
        cfg.mesh = PolyMeshDir{*meshDir};
    } else {
        cfg.mesh = gen;
    }
    try {
        cfg.check();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), 0);
    }
    return cfg;
}

CaseConfig loadCaseConfig(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw IoError("cannot open case file " + file.string());
    }
    return parseCaseConfig(in, file.parent_path());
}

// ---------------------------------------------------------------------------
// time loop

double PhaseTimers::phase(std::size_t i) const {
    switch (i) {
    case 0: return io;
    case 1: return assembly;
    case 2: return solver;
    case 3: return total;
    default: throw std::out_of_range("phase index");
    }
}

namespace {

using Clock = std::chrono::steady_clock;

class Stopwatch {
public:
    explicit Stopwatch(double& sink) : sink_(sink), start_(Clock::now()) {}
    ~Stopwatch() { sink_ += std::chrono::duration<double>(Clock::now() - start_).count(); }
    Stopwatch(const Stopwatch&) = delete;
    Stopwatch& operator=(const Stopwatch&) = delete;

private:
    double& sink_;
    Clock::time_point start_;
};

Mesh loadMesh(const CaseConfig& cfg) {
    Mesh mesh;
    if (const auto* g = std::get_if<GeneratedMesh>(&cfg.mesh)) {
        mesh = generateBlockMesh(g->nx, g->ny, g->nz, g->extent);
    } else {
        mesh = readPolyMesh(std::get<PolyMeshDir>(cfg.mesh).dir);
    }
    for (const auto& [name, bc] : cfg.boundaryConditions) {
        const int p = mesh.findPatch(name);
        if (p < 0) {
            throw std::invalid_argument("boundary condition for unknown patch '" + name + "'");
        }
        mesh.patches[static_cast<std::size_t>(p)].bc = bc;
    }
    return mesh;
}

std::string stepName(int step) {
    std::string s = std::to_string(step);
    return std::string(s.size() < 6 ? 6 - s.size() : 0, '0') + s;
}

void writeFields(const CaseConfig& cfg, const ScalarField& field, const VectorField& grad, const std::string& tag) {
    writeFieldCsv(cfg.outputDir / ("T_" + tag + ".csv"), field.internal);
    writeFieldCsv(cfg.outputDir / ("gradT_" + tag + ".csv"), grad.internal);
    if (cfg.writeVtk) {
        if (const auto* g = std::get_if<GeneratedMesh>(&cfg.mesh)) {
            writeVtkStructuredPoints(cfg.outputDir / ("T_" + tag + ".vtk"), "T", field.internal, g->nx, g->ny, g->nz,
                                     g->extent);
        }
    }
}

} // namespace

RunResult runCase(const CaseConfig& config, const RunHooks& hooks) {
    config.check();
    RunResult result;
    PhaseTimers& timers = result.timers;
    const auto start = Clock::now();
    const ExecPolicy policy = makePolicy(config.policy, config.threads);

    MeshGeometry geo;
    CellFaceAdjacency adj;
    InterpolationWeights weights;
    {
        Stopwatch sw(timers.io);
        result.mesh = loadMesh(config);
        geo = computeGeometry(result.mesh);
        adj = buildAdjacency(result.mesh, policy);
        weights = computeWeights(result.mesh, geo, policy);
        result.field = ScalarField(result.mesh, config.initialT, policy);
        if (hooks.initialProfile) {
            policy.forEach(result.field.internal.size(),
                           [&](std::size_t c) { result.field.internal[c] = hooks.initialProfile(geo.cellCentre[c]); });
        }
        updateBoundaryValues(result.field, result.mesh, policy);
    }
    const Mesh& mesh = result.mesh;
    ScalarField& T = result.field;

    const DiffusionProblem problem{config.diffusivity, config.timeStep, config.source};
    const int nSteps = config.stepCount();
    result.stats.reserve(static_cast<std::size_t>(nSteps));

    for (int step = 1; step <= nSteps; ++step) {
        LduSystem sys;
        {
            Stopwatch sw(timers.assembly);
            sys = assembleLaplacianDdt(T, problem, mesh, geo, adj, policy);
        }
        SolveResult solved;
        {
            Stopwatch sw(timers.solver);
            solved = pcgSolve(sys, T.internal, config.solver, policy);
        }
        result.stats.push_back(solved.stats);
        if (!solved.stats.converged) {
            throw NumericalError("solver did not converge at step " + std::to_string(step) + " (residual " +
                                 std::to_string(solved.stats.finalResidual) + " after " +
                                 std::to_string(solved.stats.iterations) + " iterations)");
        }
        {
            Stopwatch sw(timers.assembly);
            T.internal = std::move(solved.x);
            updateBoundaryValues(T, mesh, policy);
            result.gradient = gaussGradient(T, mesh, geo, weights, adj, policy);
        }
        if (config.writeInterval > 0 && step % config.writeInterval == 0 && !config.outputDir.empty()) {
            Stopwatch sw(timers.io);
            writeFields(config, T, result.gradient, stepName(step));
        }
        if (hooks.onStep) {
            hooks.onStep(step, step * config.timeStep, T, geo);
        }
    }
    timers.total = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
}

// ---------------------------------------------------------------------------
// benchmark

std::string PolicySpec::label() const {
    return kind == "seq" ? kind : kind + ":" + std::to_string(threads);
}

std::vector<PolicySpec> parsePolicyList(const std::string& text, int defaultThreads) {
    std::vector<PolicySpec> out;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            continue;
        }
        PolicySpec spec;
        const auto colon = item.find(':');
        spec.kind = item.substr(0, colon);
        if (spec.kind != "seq" && spec.kind != "par") {
            throw std::invalid_argument("unknown policy '" + spec.kind + "'");
        }
        if (spec.kind == "par") {
            spec.threads = defaultThreads;
            if (colon != std::string::npos) {
                spec.threads = number<int>(item.substr(colon + 1), "policy thread count", 0);
            }
            if (spec.threads < 1) {
                throw std::invalid_argument("policy thread count must be >= 1");
            }
        } else if (colon != std::string::npos) {
            throw std::invalid_argument("seq takes no thread count");
        }
        out.push_back(spec);
    }
    if (out.empty()) {
        throw std::invalid_argument("empty policy list");
    }
    return out;
}

bool BenchmarkReport::identicalOutputs() const {
    for (const BenchmarkRun& run : runs) {
        if (run.finalField != runs.front().finalField || run.iterations != runs.front().iterations) {
            return false;
        }
    }
    return true;
}

const BenchmarkRow* BenchmarkReport::find(const std::string& policy, int threads, const std::string& phase) const {
    for (const BenchmarkRow& row : rows) {
        if (row.policy == policy && row.threads == threads && row.phase == phase) {
            return &row;
        }
    }
    return nullptr;
}

BenchmarkReport benchmark(const CaseConfig& config, const std::vector<PolicySpec>& policies, int repeats) {
    if (repeats < 1) {
        throw std::invalid_argument("repeats must be >= 1");
    }
    BenchmarkReport report;
    for (const PolicySpec& spec : policies) {
        CaseConfig cfg = config;
        cfg.policy = spec.kind;
        cfg.threads = spec.threads;
        cfg.writeInterval = 0;

        BenchmarkRun run;
        run.policy = spec;
        for (int r = 0; r < repeats; ++r) {
            RunResult res = runCase(cfg);
            run.samples.push_back(res.timers);
            if (r == 0) {
                run.finalField = std::move(res.field.internal);
                for (const SolverStats& s : res.stats) {
                    run.iterations.push_back(s.iterations);
                }
            }
        }
        for (std::size_t ph = 0; ph < std::size(PhaseTimers::phaseNames); ++ph) {
            std::vector<double> xs;
            for (const PhaseTimers& t : run.samples) {
                xs.push_back(t.phase(ph));
            }
            const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
            double ss = 0.0;
            for (double x : xs) {
                ss += (x - mean) * (x - mean);
            }
            BenchmarkRow row;
            row.policy = spec.kind;
            row.threads = spec.threads;
            row.phase = PhaseTimers::phaseNames[ph];
            row.mean = mean;
            row.stddev = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
            row.samples = xs.size();
            report.rows.push_back(row);
        }
        report.runs.push_back(std::move(run));
    }
    return report;
}

void writeBenchmarkCsv(const BenchmarkReport& report, std::ostream& out) {
    out << "policy,threads,phase,mean_s,std_s\n";
    char buf[32];
    const auto put = [&](double v) {
        const auto res = std::to_chars(buf, buf + sizeof(buf), v);
        out.write(buf, res.ptr - buf);
    };
    for (const BenchmarkRow& row : report.rows) {
        out << row.policy << ',' << row.threads << ',' << row.phase << ',';
        put(row.mean);
        out << ',';
        put(row.stddev);
        out << '\n';
    }
}

int usablePhysicalCores() {
    cpu_set_t mask;
    CPU_ZERO(&mask);
    std::set<int> allowed;
    if (sched_getaffinity(0, sizeof(mask), &mask) == 0) {
        for (int cpu = 0; cpu < CPU_SETSIZE; ++cpu) {
            if (CPU_ISSET(cpu, &mask)) {
                allowed.insert(cpu);
            }
        }
    }
    std::ifstream info("/proc/cpuinfo");
    std::set<std::pair<int, int>> cores;
    int processor = -1, physical = 0;
    std::string line;
    while (std::getline(info, line)) {
        const auto colon = line.find(':');
        if (colon == std::string::npos) {
            continue;
        }
        const std::string key = trim(std::string_view(line).substr(0, colon));
        const std::string value = trim(std::string_view(line).substr(colon + 1));
        try {
            if (key == "processor") {
                processor = std::stoi(value);
            } else if (key == "physical id") {
                physical = std::stoi(value);
            } else if (key == "core id" && (allowed.empty() || allowed.count(processor))) {
                cores.emplace(physical, std::stoi(value));
            }
        } catch (const std::exception&) {
        }
    }
    int n = static_cast<int>(cores.size());
    if (n == 0) {
        n = allowed.empty() ? static_cast<int>(std::thread::hardware_concurrency()) : static_cast<int>(allowed.size());
    }
    return std::max(n, 1);
}

} // namespace fvg
