#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pks/run.hpp"

namespace pks::harness {

inline constexpr int kCheckpointFormatVersion = 1;

/// Checkpoint bytes: an 8-byte little-endian header length L, L bytes of JSON header (grid,
/// params, t, counters, format version), then the N and Omega coefficient arrays as
/// little-endian doubles (re, im interleaved, row-major). Identical input gives identical bytes.
std::vector<unsigned char> encode_checkpoint(const RunCheckpoint& ck);
RunCheckpoint decode_checkpoint(const std::vector<unsigned char>& bytes);

/// Writes atomically (temporary file then rename).
void write_checkpoint(const std::filesystem::path& path, const RunCheckpoint& ck);
RunCheckpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace pks::harness
