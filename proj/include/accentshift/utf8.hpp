#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace accentshift::utf8 {

// Decodes one codepoint starting at byte offset `pos`. Returns the number of
// bytes consumed and writes the codepoint to `cp`. Throws std::runtime_error
// on malformed input.
std::size_t decode(std::string_view s, std::size_t pos, char32_t& cp);

void append(std::string& out, char32_t cp);

std::vector<char32_t> codepoints(std::string_view s);

std::size_t length(std::string_view s);

std::string encode(const std::vector<char32_t>& cps);

// "U+0279" style rendering, used in diagnostics.
std::string describe(char32_t cp);

bool is_space(char32_t cp);

}  // namespace accentshift::utf8
