#include "stagavg/random.hpp"

#include <cmath>
#include <string>

#include "stagavg/errors.hpp"

namespace stagavg {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed), stream_(stream_id) {}

void RandomSource::refill() noexcept {
  const std::array<std::uint32_t, 4> ctr{
      static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_),
                                         static_cast<std::uint32_t>(seed_ >> 32)};
  const auto out = philox4x32_10(ctr, key);
  buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  ++block_;
  next_ = 0;
}

double RandomSource::uniform(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidArgument("uniform: invalid range [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + ")");
  }
  const double x = lo + (hi - lo) * next_unit();
  // lo + (hi - lo) * u can round up to hi when u is close to 1.
  return x < hi ? x : std::nextafter(hi, lo);
}

RandomSource make_stream(std::uint64_t seed, std::uint64_t stream_id) noexcept {
  return RandomSource(seed, stream_id);
}

double uniform(RandomSource& src, double lo, double hi) { return src.uniform(lo, hi); }

}  // namespace stagavg
