#ifndef TBC_CRC64_HPP
#define TBC_CRC64_HPP

#include <cstddef>
#include <cstdint>

namespace tbc {

/// CRC-64/ECMA-182 (poly 0x42F0E1EBA9EA3693, MSB-first, init 0, no xorout).
std::uint64_t crc64(const void* data, size_t len, std::uint64_t seed = 0);

}  // namespace tbc

#endif
