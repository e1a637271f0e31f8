#include "dplab/rng.hpp"

#include <cmath>

namespace dplab {
namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

__extension__ using Uint128 = unsigned __int128;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const Uint128 product = static_cast<Uint128>(a) * b;
  hi = static_cast<std::uint64_t>(product >> 64);
  lo = static_cast<std::uint64_t>(product);
}

inline PhiloxCounter round(const PhiloxCounter& x, const PhiloxKey& k) {
  std::uint64_t hi0, lo0, hi1, lo1;
  mulhilo(kMul0, x[0], hi0, lo0);
  mulhilo(kMul1, x[2], hi1, lo1);
  return {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
}

}  // namespace

PhiloxCounter philox4x64_10(PhiloxCounter counter, PhiloxKey key) {
  counter = round(counter, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kWeyl0;
    key[1] += kWeyl1;
    counter = round(counter, key);
  }
  return counter;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : key_{master_seed, stream_index} {}

RngStream RngStream::substream(std::uint64_t tag_hi, std::uint64_t tag_lo) const {
  RngStream child(key_[0], key_[1]);
  // Word 1 stays free so the block counter can carry into it; the tags
  // occupy the upper two words.
  child.counter_ = {0, 0, tag_lo, tag_hi ^ 0x8000000000000000ULL};
  return child;
}

std::uint64_t RngStream::next_u64() {
  if (buffer_pos_ == 4) {
    if (++counter_[0] == 0) ++counter_[1];
    buffer_ = philox4x64_10(counter_, key_);
    buffer_pos_ = 0;
  }
  return buffer_[buffer_pos_++];
}

double RngStream::uniform() {
  // 53 random bits centred in their bucket: strictly inside (0, 1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  for (;;) {
    const double x = 2.0 * uniform() - 1.0;
    const double y = 2.0 * uniform() - 1.0;
    const double s = x * x + y * y;
    if (s < 1.0 && s > 0.0) return x * std::sqrt(-2.0 * std::log(s) / s);
  }
}

}  // namespace dplab
