#ifndef TBC_OPERATOR_IO_HPP
#define TBC_OPERATOR_IO_HPP

#include <stdexcept>
#include <string>

#include "tbc/boundary_operator.hpp"

namespace tbc {

struct OperatorIOError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OperatorVersionError : OperatorIOError {
    using OperatorIOError::OperatorIOError;
};
struct OperatorTruncatedError : OperatorIOError {
    using OperatorIOError::OperatorIOError;
};
struct OperatorChecksumError : OperatorIOError {
    using OperatorIOError::OperatorIOError;
};

// Operator container, little-endian. Magic "STBC", version u32 = 1; header
// (padded step count, dt, T = logical N * dt, quadrature tol, eps, leaf,
// max_rank, length-prefixed canonical potential descriptor) guarded by CRC64;
// then one record per stored matrix piece (square blocks, strips, diagonals),
// each with its own payload CRC64. save -> load -> save is bit-identical.
void save_operator(const BoundaryOperator& op, const std::string& path);
BoundaryOperator load_operator(const std::string& path);

}  // namespace tbc

#endif
