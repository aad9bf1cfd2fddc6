#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "pnkit/io/atomic_write.hpp"
#include "pnkit/timegen/series.hpp"

namespace pnkit {

// Compact binary time-series format for large runs. 16-byte little-endian
// header, then the samples:
//   bytes 0..3   magic "PNA1"
//   bytes 4..11  dt as IEEE-754 binary64
//   bytes 12..15 n as uint32
//   then n binary64 samples.
inline constexpr char kAlphaBinMagic[4] = {'P', 'N', 'A', '1'};

static_assert(std::endian::native == std::endian::little,
              "alpha binary format is defined little-endian");

inline void write_alpha_binary(const TimeShiftSeries& s, const std::filesystem::path& path) {
    validate(s);
    require(s.samples.size() <= 0xFFFFFFFFull, "alpha binary: series too long for the format");
    std::string out;
    out.reserve(16 + 8 * s.samples.size());
    out.append(kAlphaBinMagic, 4);
    const double dt = s.dt;
    const uint32_t n = static_cast<uint32_t>(s.samples.size());
    out.append(reinterpret_cast<const char*>(&dt), 8);
    out.append(reinterpret_cast<const char*>(&n), 4);
    out.append(reinterpret_cast<const char*>(s.samples.data()), 8 * s.samples.size());
    atomic_write_file(path, out, /*binary=*/true);
}

inline TimeShiftSeries read_alpha_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open: " + path.string());
    char header[16];
    if (!in.read(header, sizeof(header))) throw error(path.string() + ": truncated header");
    if (std::memcmp(header, kAlphaBinMagic, 4) != 0)
        throw error(path.string() + ": bad magic, not an alpha series file");
    TimeShiftSeries s;
    uint32_t n = 0;
    std::memcpy(&s.dt, header + 4, 8);
    std::memcpy(&n, header + 12, 4);
    require(s.dt > 0.0, path.string() + ": invalid dt");
    s.samples.resize(n);
    if (!in.read(reinterpret_cast<char*>(s.samples.data()),
                 static_cast<std::streamsize>(8ull * n)))
        throw error(path.string() + ": truncated samples");
    s.kind = "file";
    validate(s);
    return s;
}

}  // namespace pnkit
