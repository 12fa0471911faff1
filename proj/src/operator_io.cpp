#include "tbc/operator_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "tbc/crc64.hpp"

namespace tbc {

namespace {

constexpr char kMagic[4] = {'S', 'T', 'B', 'C'};
constexpr std::uint32_t kVersion = 1;

// record kinds; square blocks carry their partition index as id
enum : std::uint8_t {
    kBlock = 0,  // paired (S, D) compressed block
    kSStrip = 2,
    kDStrip = 3,
    kSDiag = 4,
    kDDiag = 5,
};

void put_u32(std::string& s, std::uint32_t v) { s.append(reinterpret_cast<char*>(&v), 4); }
void put_u64(std::string& s, std::uint64_t v) { s.append(reinterpret_cast<char*>(&v), 8); }
void put_f64(std::string& s, double v) { s.append(reinterpret_cast<char*>(&v), 8); }

std::string pack_cvec(const std::vector<cdouble>& v) {
    std::string s;
    s.reserve(v.size() * 16);
    for (const cdouble& z : v) {
        put_f64(s, z.real());
        put_f64(s, z.imag());
    }
    return s;
}

std::vector<cdouble> unpack_cvec(const std::string& s) {
    if (s.size() % 16 != 0) throw OperatorTruncatedError("operator file: odd payload size");
    std::vector<cdouble> v(s.size() / 16);
    for (size_t k = 0; k < v.size(); ++k) {
        double re, im;
        std::memcpy(&re, s.data() + 16 * k, 8);
        std::memcpy(&im, s.data() + 16 * k + 8, 8);
        v[k] = {re, im};
    }
    return v;
}

struct FileWriter {
    std::ofstream f;
    explicit FileWriter(const std::string& path) : f(path, std::ios::binary | std::ios::trunc) {
        if (!f) throw OperatorIOError("operator file: cannot open for writing");
    }
    void bytes(const void* p, size_t n) { f.write(static_cast<const char*>(p), std::streamsize(n)); }
    void record(std::uint32_t id, std::uint8_t kind, std::uint8_t flag, std::uint32_t rows,
                std::uint32_t cols, const std::string& payload) {
        std::string hdr;
        put_u32(hdr, id);
        hdr.push_back(char(kind));
        hdr.push_back(char(flag));
        put_u32(hdr, rows);
        put_u32(hdr, cols);
        put_u64(hdr, payload.size());
        bytes(hdr.data(), hdr.size());
        bytes(payload.data(), payload.size());
        std::uint64_t crc = crc64(payload.data(), payload.size());
        bytes(&crc, 8);
    }
};

struct FileReader {
    std::ifstream f;
    explicit FileReader(const std::string& path) : f(path, std::ios::binary) {
        if (!f) throw OperatorIOError("operator file: cannot open for reading");
    }
    void bytes(void* p, size_t n) {
        f.read(static_cast<char*>(p), std::streamsize(n));
        if (size_t(f.gcount()) != n) throw OperatorTruncatedError("operator file: truncated");
    }
    std::uint32_t u32() {
        std::uint32_t v;
        bytes(&v, 4);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        bytes(&v, 8);
        return v;
    }
    double f64() {
        double v;
        bytes(&v, 8);
        return v;
    }
    std::uint8_t u8() {
        std::uint8_t v;
        bytes(&v, 1);
        return v;
    }
    /// Reads one record, checking its payload checksum and expected identity.
    std::string record(std::uint32_t id, std::uint8_t kind, std::uint8_t* flag = nullptr) {
        std::uint32_t rid = u32();
        std::uint8_t rkind = u8(), rflag = u8();
        u32();  // rows, informational
        u32();  // cols
        std::uint64_t len = u64();
        if (rid != id || rkind != kind)
            throw OperatorIOError("operator file: unexpected record order");
        if (len > (1ull << 62)) throw OperatorTruncatedError("operator file: absurd record size");
        std::string payload(size_t(len), '\0');
        bytes(payload.data(), payload.size());
        std::uint64_t crc = u64();
        if (crc != crc64(payload.data(), payload.size()))
            throw OperatorChecksumError("operator file: payload checksum mismatch");
        if (flag) *flag = rflag;
        return payload;
    }
};

std::string header_bytes(const BoundaryOperator& op) {
    std::string h;
    h.append(kMagic, 4);
    put_u32(h, kVersion);
    put_u64(h, std::uint64_t(op.grid.N));
    put_f64(h, op.grid.dt);
    put_f64(h, double(op.N) * op.grid.dt);
    put_f64(h, op.quad_tol);
    put_f64(h, op.eps);
    put_u32(h, std::uint32_t(op.leaf_eff));
    put_u32(h, std::uint32_t(op.max_rank));
    put_u32(h, std::uint32_t(op.descriptor.size()));
    h.append(op.descriptor);
    return h;
}

}  // namespace

void save_operator(const BoundaryOperator& op, const std::string& path) {
    FileWriter w(path);
    std::string h = header_bytes(op);
    w.bytes(h.data(), h.size());
    std::uint64_t hcrc = crc64(h.data(), h.size());
    w.bytes(&hcrc, 8);

    w.record(0, kSDiag, 0, std::uint32_t(op.sdiag.size()), 1, pack_cvec(op.sdiag));
    w.record(0, kDDiag, 0, std::uint32_t(op.ddiag.size()), 1, pack_cvec(op.ddiag));
    for (size_t k = 0; k < op.part.strips.size(); ++k) {
        if (op.part.strips[k].lo > op.N) break;  // padding-only strips omitted
        std::uint32_t len = std::uint32_t(op.part.strips[k].hi - op.part.strips[k].lo + 1);
        w.record(std::uint32_t(k), kSStrip, 0, len, len, pack_cvec(op.sstrip[k]));
        w.record(std::uint32_t(k), kDStrip, 0, len, len, pack_cvec(op.dstrip[k]));
    }
    for (size_t k = 0; k < op.part.blocks.size(); ++k) {
        const Block& blk = op.part.blocks[k];
        if (blk.row_lo > op.N) continue;  // padding-only blocks omitted
        const CompressedBlock& cb = op.blocks[k];
        std::string payload;
        cb.serialize(payload);
        w.record(std::uint32_t(k), kBlock, cb.is_dense() ? 0 : 1, std::uint32_t(cb.rows()),
                 std::uint32_t(cb.cols()), payload);
    }
    w.f.flush();
    if (!w.f) throw OperatorIOError("operator file: write failed");
}

BoundaryOperator load_operator(const std::string& path) {
    FileReader r(path);
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw OperatorIOError("operator file: bad magic");
    std::uint32_t version = r.u32();
    if (version != kVersion) throw OperatorVersionError("operator file: unsupported version");

    BoundaryOperator op;
    std::uint64_t npad = r.u64();
    op.grid.dt = r.f64();
    double T = r.f64();
    op.quad_tol = r.f64();
    op.eps = r.f64();
    op.leaf_eff = int(r.u32());
    op.max_rank = int(r.u32());
    std::uint32_t dlen = r.u32();
    if (dlen > (1u << 24)) throw OperatorTruncatedError("operator file: absurd descriptor");
    op.descriptor.assign(size_t(dlen), '\0');
    r.bytes(op.descriptor.data(), dlen);
    if (npad > (1ull << 31) || op.grid.dt <= 0.0 || op.leaf_eff < 1)
        throw OperatorIOError("operator file: malformed header");
    op.grid.N = int(npad);
    op.N = int(std::llround(T / op.grid.dt));

    std::string h = header_bytes(op);
    std::uint64_t hcrc = r.u64();
    if (hcrc != crc64(h.data(), h.size()))
        throw OperatorChecksumError("operator file: header checksum mismatch");

    op.part = build_partition(op.grid.N, op.leaf_eff);
    if (op.N < 1 || op.N > op.grid.N) throw OperatorIOError("operator file: malformed header");

    op.sdiag = unpack_cvec(r.record(0, kSDiag));
    op.ddiag = unpack_cvec(r.record(0, kDDiag));
    if (op.sdiag.size() != size_t(op.grid.N) + 1 || op.ddiag.size() != size_t(op.grid.N) + 1)
        throw OperatorIOError("operator file: diagonal size mismatch");

    op.sstrip.resize(op.part.strips.size());
    op.dstrip.resize(op.part.strips.size());
    for (size_t k = 0; k < op.part.strips.size(); ++k) {
        if (op.part.strips[k].lo > op.N) break;
        size_t len = size_t(op.part.strips[k].hi - op.part.strips[k].lo + 1);
        op.sstrip[k] = unpack_cvec(r.record(std::uint32_t(k), kSStrip));
        op.dstrip[k] = unpack_cvec(r.record(std::uint32_t(k), kDStrip));
        if (op.sstrip[k].size() != len * (len - 1) / 2 || op.dstrip[k].size() != op.sstrip[k].size())
            throw OperatorIOError("operator file: strip size mismatch");
    }

    op.blocks.resize(op.part.blocks.size());
    for (size_t k = 0; k < op.part.blocks.size(); ++k) {
        const Block& blk = op.part.blocks[k];
        if (blk.row_lo > op.N) continue;
        std::string payload = r.record(std::uint32_t(k), kBlock);
        CompressedBlock cb = CompressedBlock::deserialize(payload.data(), payload.size());
        if (cb.rows() != blk.row_hi - blk.row_lo + 1 || cb.cols() != blk.col_hi - blk.col_lo + 1)
            throw OperatorIOError("operator file: block shape mismatch");
        op.blocks[k] = std::move(cb);
    }
    // must be exactly at EOF
    char extra;
    r.f.read(&extra, 1);
    if (r.f.gcount() != 0) throw OperatorIOError("operator file: trailing data");
    return op;
}

}  // namespace tbc
