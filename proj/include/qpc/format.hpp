#ifndef QPC_FORMAT_HPP
#define QPC_FORMAT_HPP

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qpc {

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  double v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace qpc

#endif  // QPC_FORMAT_HPP
