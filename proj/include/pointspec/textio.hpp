#ifndef POINTSPEC_TEXTIO_HPP
#define POINTSPEC_TEXTIO_HPP

// Locale-independent numeric text: shortest round-trip decimals via
// std::to_chars, LF-only output. Keeps repeated runs byte-identical.

#include <charconv>
#include <string>
#include <system_error>

namespace pointspec {

inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_int(long long v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, bool& ok) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  const auto res = std::from_chars(b, e, v);
  ok = res.ec == std::errc();
  return v;
}

}  // namespace pointspec

#endif
