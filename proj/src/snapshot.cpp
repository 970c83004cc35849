#include "banditnav/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

namespace banditnav {
namespace {

constexpr char kMagic[] = {'G', 'S', 'M', 'A', 'P', '1'};
constexpr std::size_t kHeaderBytes = sizeof kMagic + 4 + 4 + 8 * 3;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& out, double d) {
    const auto v = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}

double get_f64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return std::bit_cast<double>(v);
}

}  // namespace

std::vector<unsigned char> encode_snapshot(const OccupancyMap& occ, const SemanticMap& sem) {
    if (!(occ.spec() == sem.spec())) {
        throw SnapshotError(SnapshotError::Kind::dimension, "snapshot: map layers differ in spec");
    }
    const GridSpec& s = occ.spec();
    std::vector<unsigned char> out;
    out.reserve(kHeaderBytes + s.cell_count() * 24);
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    put_u32(out, static_cast<std::uint32_t>(s.width));
    put_u32(out, static_cast<std::uint32_t>(s.height));
    put_f64(out, s.resolution);
    put_f64(out, s.origin.x);
    put_f64(out, s.origin.y);
    for (double v : occ.log_odds()) put_f64(out, v);
    for (double v : sem.means()) put_f64(out, v);
    for (double v : sem.variances()) put_f64(out, v);
    return out;
}

MapSnapshot decode_snapshot(const std::vector<unsigned char>& bytes) {
    using Kind = SnapshotError::Kind;
    if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
        throw SnapshotError(Kind::version, "snapshot: bad magic or unsupported format version");
    }
    if (bytes.size() < kHeaderBytes) throw SnapshotError(Kind::truncated, "snapshot: truncated header");
    const unsigned char* p = bytes.data() + sizeof kMagic;
    GridSpec spec;
    const std::uint32_t w = get_u32(p);
    const std::uint32_t h = get_u32(p + 4);
    spec.resolution = get_f64(p + 8);
    spec.origin = {get_f64(p + 16), get_f64(p + 24)};
    if (w == 0 || h == 0 || w > (1u << 20) || h > (1u << 20) ||
        static_cast<std::uint64_t>(w) * h > (1ull << 28)) {
        throw SnapshotError(Kind::dimension, "snapshot: invalid grid dimensions");
    }
    spec.width = static_cast<int>(w);
    spec.height = static_cast<int>(h);
    if (!(spec.resolution > 0.0)) throw SnapshotError(Kind::dimension, "snapshot: invalid resolution");
    const std::size_t n = spec.cell_count();
    const std::size_t expected = kHeaderBytes + n * 24;
    if (bytes.size() < expected) throw SnapshotError(Kind::truncated, "snapshot: truncated payload");
    if (bytes.size() > expected) {
        throw SnapshotError(Kind::dimension, "snapshot: payload larger than the header dimensions");
    }

    MapSnapshot snap{OccupancyMap(spec), SemanticMap(spec)};
    const unsigned char* data = bytes.data() + kHeaderBytes;
    auto lo = snap.occupancy.log_odds_mut();
    auto mu = snap.semantic.means_mut();
    auto var = snap.semantic.variances_mut();
    for (std::size_t i = 0; i < n; ++i) lo[i] = get_f64(data + 8 * i);
    for (std::size_t i = 0; i < n; ++i) mu[i] = get_f64(data + 8 * (n + i));
    for (std::size_t i = 0; i < n; ++i) var[i] = get_f64(data + 8 * (2 * n + i));
    return snap;
}

void save_snapshot(const std::string& path, const OccupancyMap& occ, const SemanticMap& sem) {
    const auto bytes = encode_snapshot(occ, sem);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw SnapshotError(SnapshotError::Kind::io, "cannot write snapshot '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw SnapshotError(SnapshotError::Kind::io, "short write to '" + path + "'");
}

MapSnapshot load_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SnapshotError(SnapshotError::Kind::io, "cannot open snapshot '" + path + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    return decode_snapshot(bytes);
}

}  // namespace banditnav
