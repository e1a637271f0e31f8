#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace dplab {

using PhiloxCounter = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;

/// Philox4x64-10 block function (Salmon et al., SC'11). Pure: same inputs, same block.
PhiloxCounter philox4x64_10(PhiloxCounter counter, PhiloxKey key);

/// A reproducible random stream addressed by (master_seed, stream_index).
///
/// The stream is counter based: the Philox key is (master_seed, stream_index)
/// and the counter walks through blocks, so any stream can be created
/// directly without advancing another one. Streams with different indices
/// use different keys. A substream further tags the upper counter words and
/// gives a second level of addressing (used for lazily refined processes,
/// where each refinement node draws from its own substream).
///
/// A single RngStream is not thread safe; copy it or create one per thread.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  /// Independent stream addressed by two extra 64-bit tags.
  [[nodiscard]] RngStream substream(std::uint64_t tag_hi, std::uint64_t tag_lo) const;

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform();
  /// Standard normal via the Marsaglia polar method.
  double normal();

  [[nodiscard]] std::uint64_t master_seed() const { return key_[0]; }
  [[nodiscard]] std::uint64_t stream_index() const { return key_[1]; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

 private:
  PhiloxKey key_;
  PhiloxCounter counter_{};
  PhiloxCounter buffer_{};
  unsigned buffer_pos_ = 4;
};

}  // namespace dplab
