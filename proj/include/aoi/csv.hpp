#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace aoi::csv {

// shortest round-trip representation; locale-independent
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_unsigned(std::uint64_t v) { return std::to_string(v); }

inline std::string quote_if_needed(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}

  void write_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os_ << ',';
      os_ << quote_if_needed(fields[i]);
    }
    os_ << '\n';
  }

 private:
  std::ostream& os_;
};

}  // namespace aoi::csv
