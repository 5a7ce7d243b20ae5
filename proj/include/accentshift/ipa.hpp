#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace accentshift {

enum class TokenClass { Vowel, Consonant, LengthMark, StressMark, WordBoundary, Other };

std::string_view to_string(TokenClass c);
std::optional<TokenClass> parse_token_class(std::string_view label);

inline bool is_mark(TokenClass c) {
  return c == TokenClass::LengthMark || c == TokenClass::StressMark;
}

class InventoryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The phoneme alphabet: every symbol the tokenizer may emit, with its class.
///
/// Symbols are 1 to 3 codepoints long. Whitespace is not an entry; the
/// tokenizer maps it to word-boundary tokens directly.
class PhonemeInventory {
 public:
  static constexpr std::size_t kMaxSymbolCodepoints = 3;

  PhonemeInventory() = default;

  /// Adds an entry; throws InventoryError on empty, over-long, whitespace-bearing
  /// or duplicate symbols.
  void add(std::string symbol, TokenClass cls);

  std::optional<TokenClass> class_of(std::string_view symbol) const;
  bool contains(std::string_view symbol) const { return class_of(symbol).has_value(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, TokenClass, std::less<>>& entries() const { return entries_; }

 private:
  std::map<std::string, TokenClass, std::less<>> entries_;
};

/// Parses `symbol<TAB>class` lines. Any run of blanks also separates the two
/// fields; `#` starts a comment.
PhonemeInventory load_inventory(std::string_view definition_text);
PhonemeInventory load_inventory_file(const std::string& path);

/// The built-in General American + RP inventory (same content as
/// data/inventory.tsv).
const PhonemeInventory& default_inventory();
std::string_view default_inventory_text();

struct Token {
  std::string symbol;
  TokenClass cls = TokenClass::Other;
  std::size_t codepoint_len = 0;

  bool operator==(const Token&) const = default;
};

/// Half-open token range [start, end) belonging to one whitespace-delimited
/// word. `word` holds the orthographic form once attached, and is empty
/// straight out of the tokenizer.
struct WordSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string word;

  bool operator==(const WordSpan&) const = default;
};

struct PhonemeSequence {
  std::vector<Token> tokens;
  std::optional<std::vector<WordSpan>> word_spans;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  std::size_t codepoint_count() const;
  /// Tokens that are not word boundaries; durations are indexed by these.
  std::size_t segment_count() const;

  bool operator==(const PhonemeSequence&) const = default;
};

class TokenizeError : public std::runtime_error {
 public:
  TokenizeError(char32_t codepoint, std::size_t index);

  char32_t codepoint() const { return codepoint_; }
  /// Codepoint offset into the input string.
  std::size_t index() const { return index_; }

 private:
  char32_t codepoint_;
  std::size_t index_;
};

/// Greedy longest-match segmentation, left to right. Every whitespace
/// codepoint becomes its own word-boundary token.
PhonemeSequence tokenize(std::string_view ipa, const PhonemeInventory& inv);

/// Concatenates symbols; boundaries render as a single space.
std::string detokenize(const PhonemeSequence& seq);

/// Fills the orthographic word of each span from whitespace-split `text`.
/// Words are lower-cased and stripped of surrounding punctuation. Throws
/// std::invalid_argument when the word counts disagree.
void attach_words(PhonemeSequence& seq, std::string_view text);

std::string normalize_word(std::string_view word);

struct PhonemeContext {
  std::optional<TokenClass> prev_class;  // nullopt: sequence start
  std::optional<TokenClass> next_class;  // nullopt: sequence end
  bool is_post_vocalic = false;
  bool is_pre_vocalic = false;
  bool is_coda = false;
};

/// Context of the token at `index`. Length and stress marks are skipped.
/// Throws std::out_of_range.
PhonemeContext context_at(const PhonemeSequence& seq, std::size_t index);

/// Context of the window [first, last]: left side taken from `first`, right
/// side from `last`.
PhonemeContext window_context(const std::vector<Token>& tokens, std::size_t first,
                              std::size_t last);

}  // namespace accentshift
