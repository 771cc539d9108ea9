#pragma once

#include <array>
#include <cmath>
#include <cstdint>

// Philox4x32-10 counter-based generator (Salmon et al. constants).
// Streams are addressed by (key, counter); no state is carried between
// draws, so results are independent of evaluation order and thread count.

namespace ryd {

struct Philox4x32 {
  static constexpr uint32_t kMul0 = 0xD2511F53u;
  static constexpr uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr,
                                       std::array<uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const uint64_t p0 = uint64_t(kMul0) * ctr[0];
      const uint64_t p1 = uint64_t(kMul1) * ctr[2];
      const uint32_t hi0 = uint32_t(p0 >> 32), lo0 = uint32_t(p0);
      const uint32_t hi1 = uint32_t(p1 >> 32), lo1 = uint32_t(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

// One substream per (seed, realization); `index` advances within the stream.
class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream)
      : key_{uint32_t(seed), uint32_t(seed >> 32)},
        stream_lo_(uint32_t(stream)),
        stream_hi_(uint32_t(stream >> 32)) {}

  // uniform in (0, 1)
  double uniform(uint64_t index) {
    const auto out = Philox4x32::block(
        {uint32_t(index), uint32_t(index >> 32), stream_lo_, stream_hi_}, key_);
    const uint64_t bits = (uint64_t(out[0]) << 32) | out[1];
    return (double(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  // standard normal truncated at +-4, via Box-Muller with rejection
  double truncated_normal(uint64_t index) {
    for (uint64_t attempt = 0;; ++attempt) {
      const uint64_t base = index * 2048 + attempt * 2;
      const double u1 = uniform(base);
      const double u2 = uniform(base + 1);
      const double z =
          std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
      if (std::abs(z) <= 4.0) return z;
    }
  }

 private:
  std::array<uint32_t, 2> key_;
  uint32_t stream_lo_, stream_hi_;
};

}  // namespace ryd
