#include "busp/checkpoint.hpp"

#include <fstream>
#include <iterator>
#include <system_error>

#include <zlib.h>

namespace busp {
namespace {

constexpr std::size_t kHeaderSize = 4 + 4 + 8 + 8 + 8 + 8;
constexpr std::size_t kRecordSize = 8 + 8 + 8 + 4;
constexpr std::size_t kTrailerSize = 4;

template <class T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
}

template <class T>
T get_le(std::string_view bytes, std::size_t& pos) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(static_cast<unsigned char>(bytes[pos + i])) << (8 * i);
  }
  pos += sizeof(T);
  return value;
}

std::uint32_t crc_of(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::string encode_checkpoint(const Checkpoint& checkpoint) {
  std::string out;
  out.reserve(kHeaderSize + checkpoint.records.size() * kRecordSize + kTrailerSize);
  out.append(kCheckpointMagic);
  put_le<std::uint32_t>(out, checkpoint.format_version);
  put_le<std::uint64_t>(out, checkpoint.lo);
  put_le<std::uint64_t>(out, checkpoint.hi);
  put_le<std::uint64_t>(out, checkpoint.watermark);
  put_le<std::uint64_t>(out, checkpoint.records.size());
  for (const SearchRecord& r : checkpoint.records) {
    put_le<std::uint64_t>(out, r.n);
    put_le<std::uint64_t>(out, r.s1);
    put_le<std::uint64_t>(out, r.s2);
    put_le<std::uint32_t>(out, r.k);
  }
  put_le<std::uint32_t>(out, crc_of(out));
  return out;
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  if (bytes.size() < kHeaderSize + kTrailerSize) throw CheckpointError("checkpoint truncated");
  if (bytes.substr(0, 4) != kCheckpointMagic) throw CheckpointError("bad checkpoint magic");
  std::size_t pos = 4;
  Checkpoint c;
  c.format_version = get_le<std::uint32_t>(bytes, pos);
  if (c.format_version != kCheckpointVersion) {
    throw CheckpointVersionError("checkpoint format version " + std::to_string(c.format_version) + ", expected " +
                                 std::to_string(kCheckpointVersion));
  }
  c.lo = get_le<std::uint64_t>(bytes, pos);
  c.hi = get_le<std::uint64_t>(bytes, pos);
  c.watermark = get_le<std::uint64_t>(bytes, pos);
  const auto count = get_le<std::uint64_t>(bytes, pos);
  if (count > (bytes.size() - kHeaderSize - kTrailerSize) / kRecordSize ||
      bytes.size() != kHeaderSize + count * kRecordSize + kTrailerSize) {
    throw CheckpointError("checkpoint length does not match its record count");
  }
  const std::size_t payload = bytes.size() - kTrailerSize;
  std::size_t crc_pos = payload;
  if (get_le<std::uint32_t>(bytes, crc_pos) != crc_of(bytes.substr(0, payload))) {
    throw CheckpointError("checkpoint CRC mismatch");
  }

  if (c.lo == 0 || c.lo > c.hi) throw CheckpointError("checkpoint interval is invalid");
  if (c.watermark + 1 < c.lo || c.watermark > c.hi) throw CheckpointError("checkpoint watermark outside interval");
  c.records.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    SearchRecord r;
    r.n = get_le<std::uint64_t>(bytes, pos);
    r.s1 = get_le<std::uint64_t>(bytes, pos);
    r.s2 = get_le<std::uint64_t>(bytes, pos);
    r.k = get_le<std::uint32_t>(bytes, pos);
    if (r.n < c.lo || r.n > c.watermark) throw CheckpointError("checkpoint record beyond watermark");
    if (!c.records.empty() && c.records.back().n >= r.n) throw CheckpointError("checkpoint records not ascending");
    if (static_cast<unsigned __int128>(r.k) * r.n != r.s2) throw CheckpointError("checkpoint record has s2 != k*n");
    c.records.push_back(r);
  }
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  const std::string bytes = encode_checkpoint(checkpoint);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw CheckpointError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CheckpointError("cannot move checkpoint into place: " + ec.message());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return decode_checkpoint(bytes);
}

}  // namespace busp
