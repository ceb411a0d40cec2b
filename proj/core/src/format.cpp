#include "stagavg/format.hpp"

#include <array>
#include <charconv>

namespace stagavg {

std::string format_real(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

}  // namespace stagavg
