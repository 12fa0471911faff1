#ifndef TBC_BENCH_HPP
#define TBC_BENCH_HPP

#include <cstdint>
#include <string>

#include "tbc/boundary_operator.hpp"

namespace tbc {

/// Per-phase timings for one boundary-history march of N steps. tbc_s is
/// the time spent obtaining the boundary data (rhs/robin evaluation and
/// push_step folding), measured exclusive of the per-step interior solve
/// (march_s), mirroring the timing separation of the reference tables.
struct BenchReport {
    int N = 0;
    double precompute_s = 0.0;  // operator construction / triangle generation
    double tbc_s = 0.0;         // boundary-data obtain time over the march
    double march_s = 0.0;       // interior tridiagonal solves
    std::uint64_t flops = 0;    // complex multiply-adds in the boundary apply
    std::uint64_t storage_bytes = 0;
    std::uint64_t dense_bytes = 0;  // dense equivalent of the history blocks
    std::string config_hash;
};

/// March N steps with the compressed operator on synthetic trace data,
/// timing boundary work against a J-point interior solve.
BenchReport bench_butterfly(const BoundaryOperator& op, int J);

/// Same march with the history blocks applied densely from a disk-streamed
/// triangle (complex<float> entries, written by this call into scratch_path
/// and removed afterwards). The entry values are the A=0 closed-form
/// coefficients: the streamed apply is value-oblivious, so the timing and
/// scaling are those of a dense direct application at this N.
BenchReport bench_direct(int N, double dt, int J, const std::string& scratch_path);

}  // namespace tbc

#endif
