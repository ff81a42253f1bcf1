#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "busp/record.hpp"

namespace busp {

inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr std::string_view kCheckpointMagic = "BUSP";

// Resumable search state. records hold exactly the hits in [lo, watermark].
struct Checkpoint {
  std::uint32_t format_version = kCheckpointVersion;
  std::uint64_t lo = 1;
  std::uint64_t hi = 0;
  std::uint64_t watermark = 0;
  std::vector<SearchRecord> records;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The file was written by a different format version.
class CheckpointVersionError : public CheckpointError {
 public:
  using CheckpointError::CheckpointError;
};

// The file belongs to a different search interval.
class CheckpointMismatchError : public CheckpointError {
 public:
  using CheckpointError::CheckpointError;
};

// Little-endian layout:
//   "BUSP" | version u32 | lo u64 | hi u64 | watermark u64 | record_count u64
//   | record_count x { n u64 | s1 u64 | s2 u64 | k u32 }
//   | crc32 u32 over every preceding byte
std::string encode_checkpoint(const Checkpoint& checkpoint);

// Validates magic, version, length, CRC and the record invariants.
Checkpoint decode_checkpoint(std::string_view bytes);

// Writes to a sibling temporary file and renames it over path.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace busp
