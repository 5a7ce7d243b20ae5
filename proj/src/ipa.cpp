#include "accentshift/ipa.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "accentshift/utf8.hpp"
#include "embedded_data.hpp"

namespace accentshift {

namespace {

constexpr std::pair<TokenClass, std::string_view> kClassLabels[] = {
    {TokenClass::Vowel, "vowel"},
    {TokenClass::Consonant, "consonant"},
    {TokenClass::LengthMark, "length-mark"},
    {TokenClass::StressMark, "stress-mark"},
    {TokenClass::WordBoundary, "word-boundary"},
    {TokenClass::Other, "other"},
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Token make_boundary() { return Token{" ", TokenClass::WordBoundary, 1}; }

}  // namespace

std::string_view to_string(TokenClass c) {
  for (const auto& [cls, label] : kClassLabels) {
    if (cls == c) return label;
  }
  return "other";
}

std::optional<TokenClass> parse_token_class(std::string_view label) {
  for (const auto& [cls, name] : kClassLabels) {
    if (name == label) return cls;
  }
  return std::nullopt;
}

void PhonemeInventory::add(std::string symbol, TokenClass cls) {
  if (symbol.empty()) throw InventoryError("empty symbol");
  const auto cps = utf8::codepoints(symbol);
  if (cps.size() > kMaxSymbolCodepoints) {
    throw InventoryError("symbol '" + symbol + "' exceeds " +
                         std::to_string(kMaxSymbolCodepoints) + " codepoints");
  }
  if (std::any_of(cps.begin(), cps.end(), utf8::is_space)) {
    throw InventoryError("symbol '" + symbol + "' contains whitespace");
  }
  if (cls == TokenClass::WordBoundary) {
    throw InventoryError("word boundaries come from whitespace and cannot be listed ('" +
                         symbol + "')");
  }
  if (!entries_.emplace(symbol, cls).second) {
    throw InventoryError("duplicate symbol '" + symbol + "'");
  }
}

std::optional<TokenClass> PhonemeInventory::class_of(std::string_view symbol) const {
  const auto it = entries_.find(symbol);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

PhonemeInventory load_inventory(std::string_view definition_text) {
  PhonemeInventory inv;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= definition_text.size()) {
    auto nl = definition_text.find('\n', pos);
    if (nl == std::string_view::npos) nl = definition_text.size();
    auto line = definition_text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto sep = line.find_first_of(" \t");
    if (sep == std::string_view::npos) {
      throw InventoryError("line " + std::to_string(line_no) + ": expected '<symbol> <class>'");
    }
    const auto symbol = line.substr(0, sep);
    const auto label = trim(line.substr(sep));
    const auto cls = parse_token_class(label);
    if (!cls) {
      throw InventoryError("line " + std::to_string(line_no) + ": unknown class label '" +
                           std::string(label) + "'");
    }
    try {
      inv.add(std::string(symbol), *cls);
    } catch (const InventoryError& e) {
      throw InventoryError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return inv;
}

PhonemeInventory load_inventory_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open inventory file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_inventory(ss.str());
}

std::string_view default_inventory_text() { return embedded::kInventoryTsv; }

const PhonemeInventory& default_inventory() {
  static const PhonemeInventory inv = load_inventory(embedded::kInventoryTsv);
  return inv;
}

std::size_t PhonemeSequence::codepoint_count() const {
  std::size_t n = 0;
  for (const auto& t : tokens) n += t.codepoint_len;
  return n;
}

std::size_t PhonemeSequence::segment_count() const {
  return static_cast<std::size_t>(std::count_if(tokens.begin(), tokens.end(), [](const Token& t) {
    return t.cls != TokenClass::WordBoundary;
  }));
}

TokenizeError::TokenizeError(char32_t codepoint, std::size_t index)
    : std::runtime_error("unknown symbol " + utf8::describe(codepoint) + " at codepoint index " +
                         std::to_string(index)),
      codepoint_(codepoint),
      index_(index) {}

PhonemeSequence tokenize(std::string_view ipa, const PhonemeInventory& inv) {
  const auto cps = utf8::codepoints(ipa);
  PhonemeSequence seq;
  std::vector<WordSpan> spans;
  constexpr auto kNoWord = static_cast<std::size_t>(-1);
  std::size_t word_start = kNoWord;

  auto close_word = [&] {
    if (word_start != kNoWord) {
      spans.push_back(WordSpan{word_start, seq.tokens.size(), {}});
      word_start = kNoWord;
    }
  };

  for (std::size_t i = 0; i < cps.size();) {
    if (utf8::is_space(cps[i])) {
      close_word();
      seq.tokens.push_back(make_boundary());
      ++i;
      continue;
    }
    const std::size_t max_len = std::min(PhonemeInventory::kMaxSymbolCodepoints, cps.size() - i);
    bool matched = false;
    for (std::size_t len = max_len; len >= 1; --len) {
      std::string candidate;
      for (std::size_t k = 0; k < len; ++k) utf8::append(candidate, cps[i + k]);
      if (const auto cls = inv.class_of(candidate)) {
        if (word_start == kNoWord) word_start = seq.tokens.size();
        seq.tokens.push_back(Token{std::move(candidate), *cls, len});
        i += len;
        matched = true;
        break;
      }
    }
    if (!matched) throw TokenizeError(cps[i], i);
  }
  close_word();
  if (!seq.tokens.empty()) seq.word_spans = std::move(spans);
  return seq;
}

std::string detokenize(const PhonemeSequence& seq) {
  std::string out;
  for (const auto& t : seq.tokens) {
    if (t.cls == TokenClass::WordBoundary) {
      out.push_back(' ');
    } else {
      out += t.symbol;
    }
  }
  return out;
}

std::string normalize_word(std::string_view word) {
  auto keep = [](unsigned char c) { return std::isalnum(c) || c == '\'' || c >= 0x80; };
  std::size_t b = 0;
  std::size_t e = word.size();
  while (b < e && !keep(static_cast<unsigned char>(word[b]))) ++b;
  while (e > b && !keep(static_cast<unsigned char>(word[e - 1]))) --e;
  while (e > b && word[e - 1] == '\'') --e;
  while (b < e && word[b] == '\'') ++b;
  std::string out(word.substr(b, e - b));
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void attach_words(PhonemeSequence& seq, std::string_view text) {
  std::vector<std::string> words;
  std::istringstream ss{std::string(text)};
  for (std::string w; ss >> w;) {
    auto norm = normalize_word(w);
    if (!norm.empty()) words.push_back(std::move(norm));
  }
  if (!seq.word_spans) seq.word_spans.emplace();
  auto& spans = *seq.word_spans;
  if (spans.size() != words.size()) {
    throw std::invalid_argument("word alignment failed: " + std::to_string(spans.size()) +
                                " phoneme words vs " + std::to_string(words.size()) +
                                " orthographic words");
  }
  for (std::size_t i = 0; i < spans.size(); ++i) spans[i].word = words[i];
}

PhonemeContext window_context(const std::vector<Token>& tokens, std::size_t first,
                              std::size_t last) {
  PhonemeContext ctx;

  for (std::size_t i = first; i-- > 0;) {
    if (is_mark(tokens[i].cls)) continue;
    ctx.prev_class = tokens[i].cls;
    break;
  }
  ctx.is_post_vocalic = ctx.prev_class == TokenClass::Vowel;

  std::size_t j = last + 1;
  while (j < tokens.size() && is_mark(tokens[j].cls)) ++j;
  if (j < tokens.size()) ctx.next_class = tokens[j].cls;
  ctx.is_pre_vocalic = ctx.next_class == TokenClass::Vowel;

  if (!ctx.next_class || *ctx.next_class == TokenClass::Consonant) {
    ctx.is_coda = true;
  } else if (*ctx.next_class == TokenClass::WordBoundary) {
    // Across a boundary: coda unless the next word starts with a vowel
    // (linking r).
    while (j < tokens.size() &&
           (is_mark(tokens[j].cls) || tokens[j].cls == TokenClass::WordBoundary)) {
      ++j;
    }
    ctx.is_coda = j == tokens.size() || tokens[j].cls == TokenClass::Consonant;
  }
  return ctx;
}

PhonemeContext context_at(const PhonemeSequence& seq, std::size_t index) {
  if (index >= seq.tokens.size()) {
    throw std::out_of_range("token index " + std::to_string(index) + " out of range (size " +
                            std::to_string(seq.tokens.size()) + ")");
  }
  return window_context(seq.tokens, index, index);
}

}  // namespace accentshift
