// fvgather command line: run a case, benchmark policies, generate or check meshes.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "fvg/case.hpp"
#include "fvg/error.hpp"
#include "fvg/field_io.hpp"
#include "fvg/polymesh_io.hpp"

namespace fs = std::filesystem;
using namespace fvg;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kNumericalError = 2;

std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, res.ptr};
}

std::ofstream openOutput(const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

void writeTiming(const fs::path& path, const CaseConfig& cfg, const PhaseTimers& t) {
    auto out = openOutput(path);
    out << "policy,threads,phase,mean_s,std_s\n";
    for (std::size_t i = 0; i < std::size(PhaseTimers::phaseNames); ++i) {
        out << cfg.policy << ',' << cfg.threads << ',' << PhaseTimers::phaseNames[i] << ',' << shortest(t.phase(i)) << ",0\n";
    }
}

void writeSolverLog(const fs::path& path, const std::vector<SolverStats>& stats) {
    auto out = openOutput(path);
    out << "step,iterations,initial_residual,final_residual,converged\n";
    for (std::size_t s = 0; s < stats.size(); ++s) {
        const auto& st = stats[s];
        out << s + 1 << ',' << st.iterations << ',' << shortest(st.initialResidual) << ',' << shortest(st.finalResidual) << ','
            << (st.converged ? 1 : 0) << '\n';
    }
}

struct RunOptions {
    fs::path casePath;
    std::string policy;
    int threads = 0;
    fs::path out;
};

int run(const RunOptions& opt) {
    CaseConfig cfg = loadCaseConfig(opt.casePath);
    if (!opt.policy.empty()) {
        cfg.policy = opt.policy;
    }
    if (opt.threads > 0) {
        cfg.threads = opt.threads;
    }
    if (!opt.out.empty()) {
        cfg.outputDir = opt.out;
    }
    if (cfg.outputDir.empty()) {
        cfg.outputDir = ".";
    }
    cfg.check();
    fs::create_directories(cfg.outputDir);

    const RunResult r = runCase(cfg);
    writeFieldCsv(cfg.outputDir / "T.csv", r.field.internal);
    writeFieldCsv(cfg.outputDir / "gradT.csv", r.gradient.internal);
    writeTiming(cfg.outputDir / "timing.csv", cfg, r.timers);
    writeSolverLog(cfg.outputDir / "solver.csv", r.stats);

    int iterations = 0;
    for (const auto& s : r.stats) {
        iterations += s.iterations;
    }
    std::printf("%zu cells, %zu steps, %d solver iterations\n", r.field.internal.size(), r.stats.size(), iterations);
    std::printf("io %.4f s  assembly %.4f s  solver %.4f s  total %.4f s  (unattributed %.4f s)\n", r.timers.io,
                r.timers.assembly, r.timers.solver, r.timers.total, r.timers.unattributed());
    std::printf("results in %s\n", cfg.outputDir.string().c_str());
    return kOk;
}

struct BenchOptions {
    fs::path casePath;
    std::string policies = "seq,par";
    int repeats = 5;
    int threads = 0;
    fs::path csv;
};

int bench(const BenchOptions& opt) {
    const CaseConfig cfg = loadCaseConfig(opt.casePath);
    const int threads = opt.threads > 0 ? opt.threads : std::max(cfg.threads, usablePhysicalCores());
    const auto report = benchmark(cfg, parsePolicyList(opt.policies, threads), opt.repeats);
    if (opt.csv.empty()) {
        writeBenchmarkCsv(report, std::cout);
    } else {
        auto out = openOutput(opt.csv);
        writeBenchmarkCsv(report, out);
    }
    for (const auto& row : report.rows) {
        std::fprintf(stderr, "%-8s %-9s %9.4f s +- %.4f\n", PolicySpec{row.policy, row.threads}.label().c_str(),
                     row.phase.c_str(), row.mean, row.stddev);
    }
    if (!report.identicalOutputs()) {
        std::fprintf(stderr, "warning: final fields differ between policies\n");
        return kNumericalError;
    }
    return kOk;
}

struct MeshGenOptions {
    Label nx = 10, ny = 10, nz = 10;
    std::vector<double> extent{1.0, 1.0, 1.0};
    fs::path out;
};

int meshGen(const MeshGenOptions& opt) {
    const Mesh m = generateBlockMesh(opt.nx, opt.ny, opt.nz, {opt.extent[0], opt.extent[1], opt.extent[2]});
    writePolyMesh(m, opt.out);
    std::printf("wrote %d cells, %d faces to %s\n", m.nCells, m.nFaces(), opt.out.string().c_str());
    return kOk;
}

int meshCheck(const fs::path& dir) {
    const Mesh m = readPolyMesh(dir);
    const MeshGeometry g = computeGeometry(m);
    double volume = 0.0;
    for (double v : g.cellVolume) {
        volume += v;
    }
    std::printf("points %d\nfaces %d\ninternal faces %d\ncells %d\ntotal volume %.12g\n", m.nPoints(), m.nFaces(),
                m.nInternalFaces(), m.nCells, volume);
    for (const auto& p : m.patches) {
        std::printf("patch %s: %d faces from %d\n", p.name.c_str(), p.nFaces, p.startFace);
    }
    std::printf("mesh OK\n");
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-volume heat diffusion with gather-based assembly"};
    app.require_subcommand(1);

    RunOptions runOpt;
    auto* runCmd = app.add_subcommand("run", "Run a case and write fields, timing and solver logs");
    runCmd->add_option("--case", runOpt.casePath, "Case file")->required()->check(CLI::ExistingFile);
    runCmd->add_option("--policy", runOpt.policy, "Execution policy")->check(CLI::IsMember({"seq", "par"}));
    runCmd->add_option("--threads", runOpt.threads, "Worker threads for par")->check(CLI::PositiveNumber);
    runCmd->add_option("--out", runOpt.out, "Output directory (default: output.dir or .)");

    BenchOptions benchOpt;
    auto* benchCmd = app.add_subcommand("bench", "Time each phase under several execution policies");
    benchCmd->add_option("--case", benchOpt.casePath, "Case file")->required()->check(CLI::ExistingFile);
    benchCmd->add_option("--policies", benchOpt.policies, "Comma separated: seq, par, par:N")
        ->capture_default_str();
    benchCmd->add_option("--repeats", benchOpt.repeats, "Runs per policy")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    benchCmd->add_option("--threads", benchOpt.threads, "Threads for plain par (default: physical cores)");
    benchCmd->add_option("--csv", benchOpt.csv, "Write the report here instead of stdout");

    auto* meshCmd = app.add_subcommand("mesh", "Generate or check polyMesh directories");
    meshCmd->require_subcommand(1);
    MeshGenOptions genOpt;
    auto* genCmd = meshCmd->add_subcommand("gen", "Write a structured block mesh");
    genCmd->add_option("--nx", genOpt.nx)->check(CLI::PositiveNumber)->capture_default_str();
    genCmd->add_option("--ny", genOpt.ny)->check(CLI::PositiveNumber)->capture_default_str();
    genCmd->add_option("--nz", genOpt.nz)->check(CLI::PositiveNumber)->capture_default_str();
    genCmd->add_option("--extent", genOpt.extent, "Box size x y z")->expected(3)->capture_default_str();
    genCmd->add_option("--out", genOpt.out, "polyMesh directory")->required();
    fs::path checkDir;
    auto* checkCmd = meshCmd->add_subcommand("check", "Read, validate and summarise a polyMesh directory");
    checkCmd->add_option("dir", checkDir, "polyMesh directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*runCmd) {
            return run(runOpt);
        }
        if (*benchCmd) {
            return bench(benchOpt);
        }
        if (*genCmd) {
            return meshGen(genOpt);
        }
        return meshCheck(checkDir);
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kNumericalError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    }
}
