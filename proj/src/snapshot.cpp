#include "vpmf/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");
static_assert(sizeof(double) == 8, "snapshot I/O assumes 64-bit IEEE doubles");

namespace vpmf {

namespace {
constexpr char kMagic[4] = {'V', 'P', 'M', 'F'};
}

void atomic_write_file(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for write: " + tmp);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            out.close();
            std::remove(tmp.c_str());
            throw std::runtime_error("write failed: " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("rename failed: " + path);
    }
}

void write_snapshot(const std::string& path, const Snapshot& s) {
    const TorusGrid& g = s.field.grid;
    const std::uint32_t dim = static_cast<std::uint32_t>(g.dim);
    const std::uint32_t n = static_cast<std::uint32_t>(g.n);
    std::string buf;
    buf.reserve(20 + 8 * s.field.size());
    buf.append(kMagic, 4);
    buf.append(reinterpret_cast<const char*>(&dim), 4);
    buf.append(reinterpret_cast<const char*>(&n), 4);
    buf.append(reinterpret_cast<const char*>(&s.time), 8);
    buf.append(reinterpret_cast<const char*>(s.field.v.data()), 8 * s.field.size());
    atomic_write_file(path, buf);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot: " + path);
    char magic[4];
    std::uint32_t dim = 0, n = 0;
    double t = 0.0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&dim), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&t), 8);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("bad snapshot header: " + path);
    if (dim != 2 && dim != 3) throw std::runtime_error("bad snapshot dim: " + path);
    Snapshot s;
    s.time = t;
    s.field = ScalarField(TorusGrid::make(static_cast<int>(dim), static_cast<int>(n)));
    in.read(reinterpret_cast<char*>(s.field.v.data()),
            static_cast<std::streamsize>(8 * s.field.size()));
    if (!in) throw std::runtime_error("snapshot truncated: " + path);
    return s;
}

}  // namespace vpmf
