#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace stagavg {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3", SC'11). Exposed for known-answer testing.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based random stream.
///
/// The key is the 64-bit seed; the upper two counter words hold the 64-bit
/// stream id and the lower two count blocks. Every block yields two 64-bit
/// outputs. The output sequence is therefore a pure function of
/// (seed, stream_id), and distinct stream ids address disjoint regions of the
/// same keyed permutation.
///
/// Satisfies std::uniform_random_bit_generator. Single owner: never share one
/// instance between threads; create one stream per trial instead.
class RandomSource {
 public:
  using result_type = std::uint64_t;

  RandomSource(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (next_ == 2) refill();
    return buffer_[next_++];
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi). Throws InvalidArgument unless lo < hi.
  double uniform(double lo, double hi);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  unsigned next_ = 2;
};

RandomSource make_stream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

double uniform(RandomSource& src, double lo, double hi);

}  // namespace stagavg
