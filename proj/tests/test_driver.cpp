#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tbc/driver.hpp"
#include "tbc/trajectory_io.hpp"

using namespace tbc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path dir;
    TempDir() : dir(fs::temp_directory_path() / "tbc_driver_test") { fs::create_directories(dir); }
    ~TempDir() { fs::remove_all(dir); }
    std::string p(const char* name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

SimulationConfig desk_config(const TempDir& td, int N, const char* tag) {
    std::ostringstream ss;
    ss << "grid.x0 = 1.0\ngrid.J = 400\ntime.T = 0.02\ntime.N = " << N
       << "\nvector_potential.kind = pulse\nvector_potential.A0 = 10\nvector_potential.omega = "
          "40\nvector_potential.T = 0.1\ninitial.alpha = 0.08\ninitial.k = -10\n"
          "boundary.leaf = 16\nboundary.operator_path = "
       << td.p("op") << N << tag << ".stbc\noutput.snapshot_stride = " << N / 8
       << "\noutput.snapshot_path = " << td.p("snap") << N << tag << ".bin\n";
    return SimulationConfig::parse_string(ss.str());
}

}  // namespace

TEST_CASE("precompute is deterministic and run consumes the operator") {
    TempDir td;
    SimulationConfig c = desk_config(td, 256, "a");
    std::string rep = cmd_precompute(c, c.operator_path);
    CHECK(rep.find("operator_hash") != std::string::npos);
    std::string bytes1 = slurp(c.operator_path);
    cmd_precompute(c, td.p("again.stbc"));
    CHECK(slurp(td.p("again.stbc")) == bytes1);

    std::string summary = cmd_run(c);
    CHECK(summary.find("mode = tbc_butterfly") != std::string::npos);
    SnapshotStream s = read_snapshots(c.snapshot_path);
    CHECK(s.frames.size() == 9);  // t = 0 plus 8 strides
    CHECK(s.J == 400);
}

TEST_CASE("mismatched operators are refused with a diff") {
    TempDir td;
    SimulationConfig c = desk_config(td, 256, "a");
    cmd_precompute(c, c.operator_path);
    SimulationConfig other = desk_config(td, 128, "b");
    try {
        cmd_run(other, c.operator_path);
        FAIL("expected OperatorMismatchError");
    } catch (const OperatorMismatchError& e) {
        CHECK(std::string(e.what()).find("N") != std::string::npos);
    }
}

TEST_CASE("identical trajectories compare to zero; a point defect is measured") {
    TempDir td;
    SimulationConfig c = desk_config(td, 256, "a");
    cmd_precompute(c, c.operator_path);
    cmd_run(c);
    CompareReport same = cmd_compare(c.snapshot_path, c.snapshot_path, 0, 0, td.p("curve.csv"));
    CHECK(same.max_l2 == 0.0);
    {
        std::ifstream f(td.p("curve.csv"));
        std::string line;
        std::getline(f, line);
        CHECK(line == "t,l2_error");
        int rows = 0;
        while (std::getline(f, line))
            if (!line.empty()) ++rows;
        CHECK(rows == 9);
    }

    // perturb one node of one frame by c0 = 1: the L2 distance is sqrt(dx)
    SnapshotStream s = read_snapshots(c.snapshot_path);
    {
        SnapshotWriter w(td.p("pert.bin"), SpatialGrid::make(s.x0, s.J), s.stride, s.N);
        for (size_t fidx = 0; fidx < s.frames.size(); ++fidx) {
            auto u = s.frames[fidx];
            if (fidx == 4) u[200] += cdouble(1.0, 0.0);
            w.write(s.times[fidx], u);
        }
    }
    CompareReport pert = cmd_compare(c.snapshot_path, td.p("pert.bin"));
    CHECK(pert.max_l2 == doctest::Approx(std::sqrt(s.dx)).epsilon(1e-12));
    // restricting the domain away from the defect hides it
    CompareReport away = cmd_compare(c.snapshot_path, td.p("pert.bin"), -1.0, -0.5);
    CHECK(away.max_l2 == 0.0);
}

TEST_CASE("analytic reference and series comparison show second order") {
    TempDir td;
    std::vector<std::string> snaps;
    SimulationConfig fine = desk_config(td, 512, "r");
    for (int N : {128, 256, 512}) {
        SimulationConfig c = desk_config(td, N, "s");
        cmd_precompute(c, c.operator_path);
        cmd_run(c);
        snaps.push_back(c.snapshot_path);
    }
    fine.snapshot_path = td.p("ref.bin");
    cmd_reference(fine, "analytic");
    snaps.push_back(fine.snapshot_path);
    CompareReport rep = cmd_compare_series(snaps);
    CHECK(rep.text.find("order") != std::string::npos);
    // errors from the two coarser runs against the reference
    double e0 = cmd_compare(snaps[0], snaps[3]).max_l2;
    double e1 = cmd_compare(snaps[1], snaps[3]).max_l2;
    CHECK(e0 > 0.0);
    CHECK(e1 > 0.0);
    CHECK(e0 / e1 > 2.0);  // second order in dt until dx error saturates
}

TEST_CASE("dirichlet reference runs on the enlarged box") {
    TempDir td;
    SimulationConfig c = desk_config(td, 128, "d");
    c.snapshot_path = td.p("dir.bin");
    c.L = 3.0;
    std::string rep = cmd_reference(c, "dirichlet");
    CHECK(rep.find("dirichlet") != std::string::npos);
    SnapshotStream s = read_snapshots(c.snapshot_path);
    CHECK(s.J == 400);  // restricted to [-x0, x0]
    CHECK(s.frames.size() == 9);
}

TEST_CASE("analytic reference requires a zero binding potential") {
    TempDir td;
    SimulationConfig c = desk_config(td, 128, "e");
    c.bp_kind = "gaussian";
    c.Vmax = 10.0;
    c.beta = 0.1;
    CHECK_THROWS(cmd_reference(c, "analytic"));
}
