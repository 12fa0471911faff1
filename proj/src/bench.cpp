#include "tbc/bench.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace tbc {

namespace {

using clock_t_ = std::chrono::steady_clock;

double secs(clock_t_::time_point a, clock_t_::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

// deterministic synthetic trace streams (values are timing-irrelevant)
cdouble synth_u(int m) { return std::polar(1.0, 0.37 * m) * (1.0 + 0.1 * std::sin(0.011 * m)); }
cdouble synth_v(int m) { return std::polar(2.0, -0.23 * m); }

// J-point complex Thomas solve standing in for the interior step
double interior_solve(int J, std::vector<cdouble>& b, std::vector<cdouble>& r) {
    auto t0 = clock_t_::now();
    const cdouble off(-1.0, 0.0), diag(2.0, 0.7);
    b.assign(size_t(J), diag);
    for (int j = 0; j < J; ++j) r[size_t(j)] = synth_u(j);
    for (int j = 1; j < J; ++j) {
        cdouble f = off / b[size_t(j) - 1];
        b[size_t(j)] -= f * off;
        r[size_t(j)] -= f * r[size_t(j) - 1];
    }
    r[size_t(J) - 1] /= b[size_t(J) - 1];
    for (int j = J - 2; j >= 0; --j)
        r[size_t(j)] = (r[size_t(j)] - off * r[size_t(j) + 1]) / b[size_t(j)];
    return secs(t0, clock_t_::now());
}

}  // namespace

BenchReport bench_butterfly(const BoundaryOperator& op, int J) {
    BenchReport rep;
    rep.N = op.N;
    rep.config_hash = op.descriptor;
    CompressedBlock::reset_apply_flops();
    BoundaryHistory hist(op);
    std::vector<cdouble> b(size_t(J), cdouble(0.0)), r(size_t(J), cdouble(0.0));
    for (int m = 1; m <= op.N; ++m) {
        auto t0 = clock_t_::now();
        volatile double sink = std::abs(hist.robin_coeffs(m, Side::Right, 0.0).gamma);
        (void)sink;
        auto t1 = clock_t_::now();
        rep.march_s += interior_solve(J, b, r);
        auto t2 = clock_t_::now();
        hist.push_step(synth_u(m), synth_v(m), 0.0);
        rep.tbc_s += secs(t0, t1) + secs(t2, clock_t_::now());
    }
    rep.flops = CompressedBlock::apply_flops();
    CompressedBlock::Storage st = op.block_storage();
    rep.storage_bytes = st.factor_complexes * 16;
    rep.dense_bytes = st.dense_equivalent * 16;
    return rep;
}

BenchReport bench_direct(int N, double dt, int J, const std::string& scratch_path) {
    BenchReport rep;
    rep.N = N;
    rep.config_hash = "direct";

    // A = 0 hat-basis Abel coefficients; S is Toeplitz, D vanishes. Row m of
    // the triangle stores S(m,1..m-1) then D(m,1..m-1) as complex<float>.
    std::vector<std::complex<float>> coef(size_t(N) + 1);
    {
        cdouble pref = std::polar(std::sqrt(dt / M_PI) / 3.0, -M_PI / 4.0);
        auto p32 = [](double d) { return d * std::sqrt(d); };
        for (int d = 1; d <= N; ++d)
            coef[size_t(d)] = std::complex<float>(pref * (p32(d + 1.0) - 2.0 * p32(double(d)) +
                                                          p32(d - 1.0)));
    }
    auto t0 = clock_t_::now();
    std::FILE* f = std::fopen(scratch_path.c_str(), "wb");
    if (!f) throw std::runtime_error("bench_direct: cannot open " + scratch_path);
    {
        std::vector<std::complex<float>> row(2 * size_t(N));
        for (int m = 2; m <= N; ++m) {
            size_t len = size_t(m) - 1;
            for (size_t n = 1; n <= len; ++n) row[n - 1] = coef[size_t(m) - n];
            for (size_t n = 0; n < len; ++n) row[len + n] = std::complex<float>(0.0f);
            if (std::fwrite(row.data(), sizeof(std::complex<float>), 2 * len, f) != 2 * len) {
                std::fclose(f);
                throw std::runtime_error("bench_direct: short write (disk full?)");
            }
        }
    }
    std::fclose(f);
    rep.precompute_s = secs(t0, clock_t_::now());

    f = std::fopen(scratch_path.c_str(), "rb");
    if (!f) throw std::runtime_error("bench_direct: cannot reopen " + scratch_path);
    std::vector<cdouble> u(size_t(N) + 1), q(size_t(N) + 1);
    for (int m = 1; m <= N; ++m) {
        u[size_t(m)] = synth_u(m);
        q[size_t(m)] = synth_v(m);
    }
    std::vector<std::complex<float>> row(2 * size_t(N));
    std::vector<cdouble> b(size_t(J), cdouble(0.0)), r(size_t(J), cdouble(0.0));
    for (int m = 2; m <= N; ++m) {
        size_t len = size_t(m) - 1;
        auto tr = clock_t_::now();
        if (std::fread(row.data(), sizeof(std::complex<float>), 2 * len, f) != 2 * len) {
            std::fclose(f);
            throw std::runtime_error("bench_direct: short read");
        }
        cdouble acc = 0.0;
        for (size_t n = 0; n < len; ++n) acc += cdouble(row[n]) * q[n + 1];
        for (size_t n = 0; n < len; ++n) acc += cdouble(row[len + n]) * u[n + 1];
        volatile double sink = std::abs(acc);
        (void)sink;
        rep.tbc_s += secs(tr, clock_t_::now());
        rep.flops += 2 * len;
        rep.march_s += interior_solve(J, b, r);
    }
    std::fclose(f);
    std::remove(scratch_path.c_str());
    rep.storage_bytes = std::uint64_t(N) * (N - 1) * sizeof(std::complex<float>);
    rep.dense_bytes = rep.storage_bytes;
    return rep;
}

}  // namespace tbc
