#pragma once

#include <array>
#include <cstdint>

namespace censfit {

// Philox4x32-10 counter-based generator (Salmon et al. constants).
//
// The 128-bit counter is split into a 64-bit draw index (words 0-1) and a
// 64-bit stream id (words 2-3); the 64-bit user seed is the key. Streams
// are therefore independent of evaluation order and thread count, which is
// what makes simulation output reproducible under --threads.
struct Philox4x32 {
  static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                            const std::array<std::uint32_t, 2>& key);
};

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  // Uniform on the open interval (0,1); 53-bit resolution, centered so the
  // endpoints are never produced and quantile transforms stay finite.
  double uniform01();

  // Uniform on (a,b).
  double uniform(double a, double b);

  // Standard normal via the inverse CDF (deterministic draw count).
  double normal();

  double normal(double mean, double sd);

 private:
  std::uint64_t next_u64();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_u64_ = 0;  // 0, 1 or 2 unconsumed 64-bit lanes in buffer_
};

}  // namespace censfit
