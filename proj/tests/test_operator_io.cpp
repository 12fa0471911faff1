#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tbc/operator_io.hpp"

using namespace tbc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spill(const fs::path& p, const std::string& bytes) {
    std::ofstream(p, std::ios::binary).write(bytes.data(), std::streamsize(bytes.size()));
}

BoundaryOperator small_op() {
    VectorPotential vp = VectorPotential::pulse({3000.0, 300.0, 0.1});
    QuadConfig q;
    q.tol = 1e-11;
    q.base_order = 16;
    q.max_subdiv = 12;
    q.phase_budget = 2.0 * M_PI;
    q.adaptive = false;
    CompressionConfig c;
    c.leaf = 16;
    return BoundaryOperator::precompute(300, 1e-5, vp, q, c);
}

struct TempDir {
    fs::path dir;
    TempDir() : dir(fs::temp_directory_path() / "tbc_opio_test") { fs::create_directories(dir); }
    ~TempDir() { fs::remove_all(dir); }
};

}  // namespace

TEST_CASE("save / load / save is bit-identical and equivalent") {
    TempDir td;
    VectorPotential vp = VectorPotential::pulse({3000.0, 300.0, 0.1});
    BoundaryOperator op = small_op();
    save_operator(op, (td.dir / "a.stbc").string());
    BoundaryOperator op2 = load_operator((td.dir / "a.stbc").string());
    save_operator(op2, (td.dir / "b.stbc").string());
    CHECK(slurp(td.dir / "a.stbc") == slurp(td.dir / "b.stbc"));
    CHECK(op2.N == op.N);
    CHECK(op2.grid.N == op.grid.N);
    CHECK(op2.grid.dt == op.grid.dt);
    CHECK(op2.leaf_eff == op.leaf_eff);
    CHECK(op2.eps == op.eps);
    CHECK(op2.descriptor == op.descriptor);

    BoundaryHistory h1(op), h2(op2);
    for (int m = 1; m <= op.N; ++m) {
        CHECK(h1.rhs(m) == h2.rhs(m));
        cdouble u{std::sin(0.1 * m), 0.3}, v{0.2, std::cos(0.2 * m)};
        double A = vp.eval_A(m * 1e-5);
        h1.push_step(u, v, A);
        h2.push_step(u, v, A);
    }
}

TEST_CASE("corrupted files are rejected with typed errors") {
    TempDir td;
    BoundaryOperator op = small_op();
    save_operator(op, (td.dir / "a.stbc").string());
    std::string a = slurp(td.dir / "a.stbc");

    SUBCASE("header byte flip -> checksum error") {
        std::string t = a;
        t[10] ^= 1;
        spill(td.dir / "c.stbc", t);
        CHECK_THROWS_AS(load_operator((td.dir / "c.stbc").string()), OperatorChecksumError);
    }
    SUBCASE("truncation") {
        spill(td.dir / "c.stbc", a.substr(0, a.size() - 5));
        CHECK_THROWS_AS(load_operator((td.dir / "c.stbc").string()), OperatorTruncatedError);
    }
    SUBCASE("unsupported version") {
        std::string t = a;
        t[4] = 9;
        spill(td.dir / "c.stbc", t);
        CHECK_THROWS_AS(load_operator((td.dir / "c.stbc").string()), OperatorVersionError);
    }
    SUBCASE("payload byte flip -> checksum error") {
        std::string t = a;
        t[t.size() / 2] ^= 0x40;
        spill(td.dir / "c.stbc", t);
        CHECK_THROWS_AS(load_operator((td.dir / "c.stbc").string()), OperatorIOError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_operator((td.dir / "absent.stbc").string()), OperatorIOError);
    }
    SUBCASE("wrong magic") {
        spill(td.dir / "c.stbc", "NOPE" + a.substr(4));
        CHECK_THROWS_AS(load_operator((td.dir / "c.stbc").string()), OperatorIOError);
    }
}
