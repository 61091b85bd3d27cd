#include "doctest.h"

#include <fstream>
#include <sstream>

#include "fvg/case.hpp"
#include "fvg/error.hpp"
#include "fvg/polymesh_io.hpp"
#include "support.hpp"

using namespace fvg;

namespace {

CaseConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parseCaseConfig(in);
}

int parseErrorLine(const std::string& text) {
    try {
        parse(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

} // namespace

TEST_CASE("case config parsing") {
    const CaseConfig c = parse(R"(# hot plate
mesh.nx = 4
mesh.ny = 5
mesh.nz = 6
mesh.extent = 1, 2, 3
physics.DT = 0.5
physics.source = 2   # trailing comment
time.dt = 0.1
time.endTime = 1
time.writeInterval = 5
init.T = 0.25
bc.xmin = fixedValue:1
bc.xmax = zeroGradient
solver.tol = 1e-8
solver.maxIter = 50
exec.policy = par
exec.threads = 3
output.dir = out
output.vtk = true
)");
    const auto& g = std::get<GeneratedMesh>(c.mesh);
    CHECK(g.nx == 4);
    CHECK(g.ny == 5);
    CHECK(g.nz == 6);
    CHECK(g.extent == Vec3{1, 2, 3});
    CHECK(c.diffusivity == 0.5);
    CHECK(c.source == 2.0);
    CHECK(c.timeStep == 0.1);
    CHECK(c.endTime == 1.0);
    CHECK(c.writeInterval == 5);
    CHECK(c.initialT == 0.25);
    CHECK(c.boundaryConditions.at("xmin").isFixedValue());
    CHECK(c.boundaryConditions.at("xmin").value == 1.0);
    CHECK_FALSE(c.boundaryConditions.at("xmax").isFixedValue());
    CHECK(c.solver.tolerance == 1e-8);
    CHECK(c.solver.maxIterations == 50);
    CHECK(c.policy == "par");
    CHECK(c.threads == 3);
    CHECK(c.outputDir == "out");
    CHECK(c.writeVtk);
    CHECK(c.stepCount() == 10);

    const CaseConfig d = parse("mesh.extent = 1 2 3\n");
    CHECK(std::get<GeneratedMesh>(d.mesh).extent == Vec3{1, 2, 3});
    CHECK(d.stepCount() == 500);
}

TEST_CASE("case config errors carry the line") {
    CHECK(parseErrorLine("mesh.nx = 4\nbogus.key = 1\n") == 2);
    CHECK(parseErrorLine("mesh.nx = 4\nmesh.nx = 5\n") == 2);
    CHECK(parseErrorLine("\n\nmesh.nx = four\n") == 3);
    CHECK(parseErrorLine("no equals sign\n") == 1);
    CHECK(parseErrorLine("bc.xmin = fixedValue\n") == 1);
    CHECK(parseErrorLine("bc.xmin = robin:1\n") == 1);
    CHECK(parseErrorLine("mesh.extent = 1 2\n") == 1);
    CHECK(parseErrorLine("output.vtk = maybe\n") == 1);
    CHECK(parseErrorLine("time.dt = -1\n") == 0);
    CHECK(parseErrorLine("exec.threads = 0\n") == 0);
    CHECK(parseErrorLine("mesh.dir = m\nmesh.nx = 2\n") == 0);
    CHECK_THROWS_AS(loadCaseConfig("/nonexistent/case.file"), IoError);
}

TEST_CASE("policy lists") {
    const auto p = parsePolicyList("seq,par,par:8", 4);
    REQUIRE(p.size() == 3);
    CHECK(p[0].kind == "seq");
    CHECK(p[0].threads == 1);
    CHECK(p[1].kind == "par");
    CHECK(p[1].threads == 4);
    CHECK(p[2].threads == 8);
    CHECK(p[2].label() == "par:8");
    CHECK_THROWS(parsePolicyList("fast", 2));
    CHECK_THROWS(parsePolicyList("par:0", 2));
    CHECK_THROWS(parsePolicyList("", 2));
}

TEST_CASE("a constant field with insulated walls stays constant") {
    CaseConfig c;
    c.mesh = GeneratedMesh{4, 3, 2, {1, 1, 1}};
    c.initialT = 0.7;
    c.endTime = 1.0;
    const RunResult r = runCase(c);
    CHECK(r.stats.size() == 5);
    for (double t : r.field.internal) {
        CHECK(std::fabs(t - 0.7) <= 1e-12);
    }
}

TEST_CASE("insulated box conserves heat and smooths a bump") {
    CaseConfig c;
    c.mesh = GeneratedMesh{3, 3, 3, {1, 1, 1}};
    c.endTime = 2.0;
    c.solver.tolerance = 1e-10;
    RunHooks hooks;
    hooks.initialProfile = [](const Vec3& p) { return p.x < 0.34 ? 1.0 : 0.0; };
    double initial = 9.0 / 27.0;
    double lastSpread = 1.0;
    bool monotone = true;
    hooks.onStep = [&](int, double, const ScalarField& f, const MeshGeometry& g) {
        double total = 0.0;
        for (std::size_t i = 0; i < f.internal.size(); ++i) {
            total += f.internal[i] * g.cellVolume[i];
        }
        CHECK(std::fabs(total - initial) <= 10.0 * c.solver.tolerance * initial);
        const auto [lo, hi] = std::minmax_element(f.internal.begin(), f.internal.end());
        const double spread = *hi - *lo;
        monotone = monotone && spread <= lastSpread + 1e-14;
        lastSpread = spread;
    };
    runCase(c, hooks);
    CHECK(monotone);
    CHECK(lastSpread < 0.1);
}

TEST_CASE("run writes fields at the configured interval") {
    const auto dir = test::scratchDir("case_out");
    CaseConfig c;
    c.mesh = GeneratedMesh{2, 2, 2, {1, 1, 1}};
    c.endTime = 1.0;
    c.writeInterval = 2;
    c.outputDir = dir;
    c.writeVtk = true;
    runCase(c);
    CHECK(std::filesystem::exists(dir / "T_000002.csv"));
    CHECK(std::filesystem::exists(dir / "gradT_000004.csv"));
    CHECK(std::filesystem::exists(dir / "T_000004.vtk"));
    CHECK_FALSE(std::filesystem::exists(dir / "T_000003.csv"));
    std::ifstream in(dir / "T_000002.csv");
    int lines = 0;
    for (std::string s; std::getline(in, s);) {
        ++lines;
    }
    CHECK(lines == 8);
}

TEST_CASE("run reads a polyMesh directory") {
    const auto dir = test::scratchDir("case_poly");
    writePolyMesh(generateBlockMesh(3, 1, 1), dir / "polyMesh");
    std::ofstream(dir / "bar.case") << "mesh.dir = polyMesh\nbc.xmin = fixedValue:1\nbc.xmax = fixedValue:0\n"
                                       "time.endTime = 0.4\n";
    const CaseConfig c = loadCaseConfig(dir / "bar.case");
    const RunResult r = runCase(c);
    CHECK(r.mesh.nCells == 3);
    CHECK(r.field.internal[0] > r.field.internal[2]);
}

TEST_CASE("unknown patch and failed solves are reported") {
    CaseConfig c;
    c.mesh = GeneratedMesh{2, 2, 2, {1, 1, 1}};
    c.endTime = 0.2;
    c.boundaryConditions["nowhere"] = BoundaryCondition::fixedValue(1.0);
    CHECK_THROWS_AS(runCase(c), std::invalid_argument);

    c.boundaryConditions = {{"xmin", BoundaryCondition::fixedValue(1.0)}};
    c.solver.maxIterations = 1;
    c.solver.tolerance = 1e-14;
    c.mesh = GeneratedMesh{6, 6, 6, {1, 1, 1}};
    CHECK_THROWS_AS(runCase(c), NumericalError);
}

TEST_CASE("benchmark report schema") {
    CaseConfig c;
    c.mesh = GeneratedMesh{4, 4, 4, {1, 1, 1}};
    c.endTime = 0.6;
    c.boundaryConditions = {{"xmin", BoundaryCondition::fixedValue(1.0)}};
    const auto report = benchmark(c, parsePolicyList("seq,par:2", 2), 5);
    CHECK(report.runs.size() == 2);
    CHECK(report.rows.size() == 8);
    CHECK(report.identicalOutputs());
    const BenchmarkRow* row = report.find("par", 2, "solver");
    REQUIRE(row != nullptr);
    CHECK(row->samples == 5);
    CHECK(row->stddev >= 0.0);
    for (const auto& run : report.runs) {
        for (const auto& s : run.samples) {
            CHECK(s.unattributed() >= -1e-9);
        }
    }
    std::ostringstream out;
    writeBenchmarkCsv(report, out);
    std::istringstream lines(out.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header == "policy,threads,phase,mean_s,std_s");
    int n = 0;
    for (std::string s; std::getline(lines, s);) {
        ++n;
    }
    CHECK(n == 8);
    CHECK(usablePhysicalCores() >= 1);
}

TEST_CASE("cold walls give monotone decay of max |T|") {
    CaseConfig c;
    c.mesh = GeneratedMesh{5, 4, 3, {1, 1, 1}};
    c.endTime = 4.0;
    for (const char* p : {"xmin", "xmax", "ymin", "ymax", "zmin", "zmax"}) {
        c.boundaryConditions[p] = BoundaryCondition::fixedValue(0.0);
    }
    RunHooks hooks;
    hooks.initialProfile = [](const Vec3& p) { return std::sin(7.0 * p.x + 2.0 * p.y) - 0.3 * p.z; };
    double last = 1e300;
    bool monotone = true;
    hooks.onStep = [&](int, double, const ScalarField& f, const MeshGeometry&) {
        double m = 0.0;
        for (double t : f.internal) {
            m = std::max(m, std::fabs(t));
        }
        monotone = monotone && m <= last * (1.0 + c.solver.tolerance);
        last = m;
    };
    runCase(c, hooks);
    CHECK(monotone);
    CHECK(last < 0.05);
}
