#include "tbc/crc64.hpp"

#include <array>

namespace tbc {

namespace {

constexpr std::uint64_t kPoly = 0x42F0E1EBA9EA3693ULL;

constexpr std::array<std::uint64_t, 256> make_table() {
    std::array<std::uint64_t, 256> t{};
    for (int i = 0; i < 256; ++i) {
        std::uint64_t c = std::uint64_t(i) << 56;
        for (int k = 0; k < 8; ++k) c = (c & 0x8000000000000000ULL) ? (c << 1) ^ kPoly : c << 1;
        t[size_t(i)] = c;
    }
    return t;
}

constexpr auto kTable = make_table();

}  // namespace

std::uint64_t crc64(const void* data, size_t len, std::uint64_t seed) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t c = seed;
    for (size_t i = 0; i < len; ++i) c = (c << 8) ^ kTable[size_t((c >> 56) ^ p[i]) & 0xff];
    return c;
}

}  // namespace tbc
