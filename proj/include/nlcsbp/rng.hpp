#pragma once

#include <array>
#include <cstdint>

namespace nlcsbp {

// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

// Counter-based stream. The Philox key is the seed; the 128-bit Philox counter holds
// the block index (low 64 bits) and the stream id (high 64 bits).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t block = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1), 53 bits.
  double uniform();
  double exponential();
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }
  std::uint64_t block() const { return block_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_;
  std::array<std::uint32_t, 4> buf_{};
  int used_ = 4;
};

}  // namespace nlcsbp
