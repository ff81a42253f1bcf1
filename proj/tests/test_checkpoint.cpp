#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "busp/checkpoint.hpp"

using namespace busp;

namespace {

Checkpoint sample() {
  Checkpoint c;
  c.lo = 1;
  c.hi = 1000;
  c.watermark = 600;
  c.records = {{1, 1, 1, 1}, {2, 3, 4, 2}, {9, 10, 18, 2}, {512, 1023, 1536, 3}};
  return c;
}

}  // namespace

TEST_CASE("checkpoint encoding round-trips") {
  const Checkpoint c = sample();
  const std::string bytes = encode_checkpoint(c);
  CHECK(bytes.size() == 40 + 4 * 28 + 4);
  CHECK(bytes.substr(0, 4) == "BUSP");
  CHECK(decode_checkpoint(bytes) == c);
}

TEST_CASE("empty checkpoint round-trips") {
  Checkpoint c;
  c.lo = 5;
  c.hi = 10;
  c.watermark = 4;
  CHECK(decode_checkpoint(encode_checkpoint(c)) == c);
}

TEST_CASE("corrupted checkpoints are rejected") {
  const std::string good = encode_checkpoint(sample());

  std::string flipped = good;
  flipped[50] ^= 0x01;
  CHECK_THROWS_WITH_AS(decode_checkpoint(flipped), "checkpoint CRC mismatch", CheckpointError);

  CHECK_THROWS_AS(decode_checkpoint(good.substr(0, good.size() - 1)), CheckpointError);
  CHECK_THROWS_AS(decode_checkpoint(good.substr(0, 10)), CheckpointError);

  std::string magic = good;
  magic[0] = 'X';
  CHECK_THROWS_AS(decode_checkpoint(magic), CheckpointError);
}

TEST_CASE("a different format version gets its own error") {
  Checkpoint c = sample();
  c.format_version = 2;
  CHECK_THROWS_AS(decode_checkpoint(encode_checkpoint(c)), CheckpointVersionError);
}

TEST_CASE("record invariants are validated") {
  Checkpoint beyond = sample();
  beyond.records.push_back({700, 1, 700, 1});
  CHECK_THROWS_AS(decode_checkpoint(encode_checkpoint(beyond)), CheckpointError);

  Checkpoint unordered = sample();
  std::swap(unordered.records[1], unordered.records[2]);
  CHECK_THROWS_AS(decode_checkpoint(encode_checkpoint(unordered)), CheckpointError);

  Checkpoint wrong_k = sample();
  wrong_k.records[1].k = 3;
  CHECK_THROWS_AS(decode_checkpoint(encode_checkpoint(wrong_k)), CheckpointError);

  Checkpoint watermark = sample();
  watermark.watermark = 1001;
  CHECK_THROWS_AS(decode_checkpoint(encode_checkpoint(watermark)), CheckpointError);
}

TEST_CASE("save and load through the filesystem") {
  const auto dir = std::filesystem::temp_directory_path() / "busp_checkpoint_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "state.bin";
  save_checkpoint(path, sample());
  CHECK_FALSE(std::filesystem::exists(dir / "state.bin.tmp"));
  CHECK(load_checkpoint(path) == sample());
  CHECK_THROWS_AS(load_checkpoint(dir / "missing.bin"), CheckpointError);
  std::filesystem::remove_all(dir);
}
