#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "accentshift/ipa.hpp"

namespace accentshift {

enum class Family { Flapping, Rhoticity, Vowel };

inline constexpr std::array<Family, 3> kAllFamilies = {Family::Flapping, Family::Rhoticity,
                                                       Family::Vowel};

std::string_view to_string(Family f);
/// Accepts "flapping", "rhoticity", "vowel" in any letter case.
std::optional<Family> parse_family(std::string_view name);

struct RuleCondition {
  enum class Kind { Unconditional, PostVocalicCoda, Intervocalic, LexiconGated };

  Kind kind = Kind::Unconditional;
  std::string lexicon;  // set for LexiconGated only

  static RuleCondition unconditional() { return {}; }
  static RuleCondition post_vocalic_coda() { return {Kind::PostVocalicCoda, {}}; }
  static RuleCondition intervocalic() { return {Kind::Intervocalic, {}}; }
  static RuleCondition lexicon_gated(std::string name) {
    return {Kind::LexiconGated, std::move(name)};
  }

  bool operator==(const RuleCondition&) const = default;
};

std::string to_string(const RuleCondition& c);
std::optional<RuleCondition> parse_condition(std::string_view text);

struct SubstitutionRule {
  std::string id;
  Family family = Family::Vowel;
  std::vector<std::string> pattern;
  std::vector<std::string> replacement;
  RuleCondition condition;
};

struct RuleSet {
  std::vector<SubstitutionRule> rules;
  std::string direction_label;
  std::map<std::string, std::set<std::string>> lexicons;

  bool uses_lexicons() const;
};

/// Subset of rule families enabled for one run. Empty means no rewriting.
class RuleConfig {
 public:
  RuleConfig() = default;
  RuleConfig(std::initializer_list<Family> families) : families_(families) {}
  explicit RuleConfig(std::set<Family> families) : families_(std::move(families)) {}

  static RuleConfig all() { return RuleConfig(std::set<Family>(kAllFamilies.begin(), kAllFamilies.end())); }
  static RuleConfig none() { return {}; }
  static RuleConfig only(Family f) { return {f}; }

  bool enabled(Family f) const { return families_.count(f) != 0; }
  bool empty() const { return families_.empty(); }
  const std::set<Family>& families() const { return families_; }

  /// "flapping,vowel"; "none" when empty.
  std::string to_string() const;
  /// Comma separated family names, or "all" / "none" / "".
  static RuleConfig parse(std::string_view list);

  bool operator==(const RuleConfig&) const = default;

 private:
  std::set<Family> families_;
};

struct FamilyCounts {
  std::size_t flapping = 0;
  std::size_t rhoticity = 0;
  std::size_t vowel = 0;

  std::size_t& operator[](Family f);
  std::size_t operator[](Family f) const;
  std::size_t total() const { return flapping + rhoticity + vowel; }
  FamilyCounts& operator+=(const FamilyCounts& o);

  bool operator==(const FamilyCounts&) const = default;
};

struct TraceEntry {
  std::size_t token_index = 0;
  std::string rule_id;

  bool operator==(const TraceEntry&) const = default;
};

struct TransformResult {
  PhonemeSequence output;
  std::vector<TraceEntry> trace;
  FamilyCounts count_by_family;
  std::size_t n_total = 0;
};

struct Violation {
  std::string rule_id;
  std::string message;
};

/// Checks per-rule length and codepoint preservation, inventory membership,
/// lexicon references, duplicate ids and pairwise disjointness of pattern
/// symbols across rules. Never throws.
std::vector<Violation> validate(const RuleSet& rs, const PhonemeInventory& inv);

class RuleSetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses the tab-separated rule format (see data/rules/na_to_b.rules).
/// Lexicon paths in `@lexicon` directives resolve against `base_dir`.
RuleSet parse_ruleset(std::string_view text, const std::filesystem::path& base_dir = {});
RuleSet load_ruleset_file(const std::filesystem::path& path);
std::set<std::string> load_lexicon_file(const std::filesystem::path& path);

/// Serializes back to the same format. Lexicons are not written.
std::string format_ruleset(const RuleSet& rs);

/// The shipped NA→B rules.
const RuleSet& default_ruleset();
std::string_view default_ruleset_text();

class ApplyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binds a validated rule set to the inventory its symbols come from.
///
/// Application is a single left-to-right pass. At each position the first
/// enabled rule whose pattern matches and whose condition holds fires; the
/// window is replaced and scanning resumes after it. Conditions are evaluated
/// on the partially rewritten sequence, so context to the left of the cursor
/// reflects earlier firings.
class RuleEngine {
 public:
  /// Throws RuleSetError listing every violation when `rs` does not validate.
  RuleEngine(RuleSet rs, PhonemeInventory inv);

  const RuleSet& ruleset() const { return rs_; }
  const PhonemeInventory& inventory() const { return inv_; }

  TransformResult apply(const PhonemeSequence& seq, const RuleConfig& cfg) const;
  FamilyCounts count_applicable(const PhonemeSequence& seq, const RuleConfig& cfg) const;

  /// True when any enabled rule needs orthographic words.
  bool needs_words(const RuleConfig& cfg) const;

  const SubstitutionRule* find_rule(std::string_view id) const;

 private:
  struct CompiledRule {
    const SubstitutionRule* rule;
    std::vector<Token> replacement;
  };

  bool condition_holds(const SubstitutionRule& rule, const std::vector<Token>& tokens,
                       std::size_t start, std::size_t end,
                       const std::vector<const WordSpan*>& word_of) const;

  RuleSet rs_;
  PhonemeInventory inv_;
  std::vector<CompiledRule> compiled_;
};

/// Engine over the shipped rules and inventory.
const RuleEngine& default_engine();

/// Re-applies a trace to `input`: at each recorded index the rule's
/// replacement overwrites the pattern window.
PhonemeSequence replay_trace(const PhonemeSequence& input, const std::vector<TraceEntry>& trace,
                             const RuleEngine& engine);

}  // namespace accentshift
