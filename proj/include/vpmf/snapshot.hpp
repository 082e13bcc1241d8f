#pragma once
// Binary snapshot format, little-endian:
//   bytes 0-3   magic "VPMF"
//   bytes 4-7   u32 dim
//   bytes 8-11  u32 n
//   bytes 12-19 f64 time
//   then n^dim f64 values, row-major, axis 0 slowest.

#include <string>

#include "vpmf/grid.hpp"

namespace vpmf {

struct Snapshot {
    double time = 0.0;
    ScalarField field;
};

void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);

// Writes via a temp file in the same directory plus rename, so a crash never
// leaves a truncated file at `path`. The temp file is removed on failure.
void atomic_write_file(const std::string& path, const std::string& bytes);

}  // namespace vpmf
