#include "accentshift/utf8.hpp"

#include <cstdio>
#include <stdexcept>

namespace accentshift::utf8 {

std::size_t decode(std::string_view s, std::size_t pos, char32_t& cp) {
  const auto lead = static_cast<unsigned char>(s[pos]);
  std::size_t n = 0;
  if (lead < 0x80) {
    cp = lead;
    return 1;
  } else if ((lead & 0xE0) == 0xC0) {
    cp = lead & 0x1F;
    n = 2;
  } else if ((lead & 0xF0) == 0xE0) {
    cp = lead & 0x0F;
    n = 3;
  } else if ((lead & 0xF8) == 0xF0) {
    cp = lead & 0x07;
    n = 4;
  } else {
    throw std::runtime_error("invalid UTF-8 lead byte at offset " + std::to_string(pos));
  }
  if (pos + n > s.size()) {
    throw std::runtime_error("truncated UTF-8 sequence at offset " + std::to_string(pos));
  }
  for (std::size_t i = 1; i < n; ++i) {
    const auto c = static_cast<unsigned char>(s[pos + i]);
    if ((c & 0xC0) != 0x80) {
      throw std::runtime_error("invalid UTF-8 continuation byte at offset " +
                               std::to_string(pos + i));
    }
    cp = (cp << 6) | (c & 0x3F);
  }
  return n;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::vector<char32_t> codepoints(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  for (std::size_t pos = 0; pos < s.size();) {
    char32_t cp = 0;
    pos += decode(s, pos, cp);
    out.push_back(cp);
  }
  return out;
}

std::size_t length(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t pos = 0; pos < s.size(); ++n) {
    char32_t cp = 0;
    pos += decode(s, pos, cp);
  }
  return n;
}

std::string encode(const std::vector<char32_t>& cps) {
  std::string out;
  for (char32_t cp : cps) append(out, cp);
  return out;
}

std::string describe(char32_t cp) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(cp));
  return buf;
}

bool is_space(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == 0x00A0 ||
         cp == 0x3000;
}

}  // namespace accentshift::utf8
