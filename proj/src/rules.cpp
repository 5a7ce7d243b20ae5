#include "accentshift/rules.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "accentshift/utf8.hpp"
#include "embedded_data.hpp"

namespace accentshift {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::vector<std::string> split_symbols(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream ss{std::string(s)};
  for (std::string sym; ss >> sym;) out.push_back(sym);
  return out;
}

std::string join(const std::vector<std::string>& v, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

std::size_t total_codepoints(const std::vector<std::string>& symbols) {
  std::size_t n = 0;
  for (const auto& s : symbols) n += utf8::length(s);
  return n;
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::Flapping:
      return "flapping";
    case Family::Rhoticity:
      return "rhoticity";
    case Family::Vowel:
      return "vowel";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view name) {
  const auto n = lower(trim(name));
  for (Family f : kAllFamilies) {
    if (to_string(f) == n) return f;
  }
  return std::nullopt;
}

std::string to_string(const RuleCondition& c) {
  switch (c.kind) {
    case RuleCondition::Kind::Unconditional:
      return "unconditional";
    case RuleCondition::Kind::PostVocalicCoda:
      return "post-vocalic-coda";
    case RuleCondition::Kind::Intervocalic:
      return "intervocalic";
    case RuleCondition::Kind::LexiconGated:
      return "lexicon:" + c.lexicon;
  }
  return "?";
}

std::optional<RuleCondition> parse_condition(std::string_view text) {
  const auto t = trim(text);
  if (t == "unconditional") return RuleCondition::unconditional();
  if (t == "post-vocalic-coda") return RuleCondition::post_vocalic_coda();
  if (t == "intervocalic") return RuleCondition::intervocalic();
  if (t.starts_with("lexicon:") && t.size() > 8) {
    return RuleCondition::lexicon_gated(std::string(t.substr(8)));
  }
  return std::nullopt;
}

bool RuleSet::uses_lexicons() const {
  return std::any_of(rules.begin(), rules.end(), [](const SubstitutionRule& r) {
    return r.condition.kind == RuleCondition::Kind::LexiconGated;
  });
}

std::string RuleConfig::to_string() const {
  if (families_.empty()) return "none";
  std::string out;
  for (Family f : families_) {
    if (!out.empty()) out += ',';
    out += accentshift::to_string(f);
  }
  return out;
}

RuleConfig RuleConfig::parse(std::string_view list) {
  const auto t = lower(trim(list));
  if (t.empty() || t == "none") return none();
  if (t == "all") return all();
  std::set<Family> fams;
  for (auto part : split(t, ',')) {
    const auto f = parse_family(part);
    if (!f) throw std::invalid_argument("unknown rule family '" + std::string(trim(part)) + "'");
    fams.insert(*f);
  }
  return RuleConfig(std::move(fams));
}

std::size_t& FamilyCounts::operator[](Family f) {
  switch (f) {
    case Family::Flapping:
      return flapping;
    case Family::Rhoticity:
      return rhoticity;
    case Family::Vowel:
      break;
  }
  return vowel;
}

std::size_t FamilyCounts::operator[](Family f) const {
  return const_cast<FamilyCounts&>(*this)[f];
}

FamilyCounts& FamilyCounts::operator+=(const FamilyCounts& o) {
  flapping += o.flapping;
  rhoticity += o.rhoticity;
  vowel += o.vowel;
  return *this;
}

std::vector<Violation> validate(const RuleSet& rs, const PhonemeInventory& inv) {
  std::vector<Violation> out;
  std::set<std::string> seen_ids;

  for (const auto& r : rs.rules) {
    auto report = [&](std::string msg) { out.push_back({r.id, std::move(msg)}); };

    if (r.id.empty()) report("rule id is empty");
    if (!r.id.empty() && !seen_ids.insert(r.id).second) report("duplicate rule id");
    if (r.pattern.empty()) report("empty pattern");
    if (r.pattern.size() != r.replacement.size()) {
      report("length preservation: pattern has " + std::to_string(r.pattern.size()) +
             " tokens, replacement has " + std::to_string(r.replacement.size()));
    }
    const auto pat_cp = total_codepoints(r.pattern);
    const auto rep_cp = total_codepoints(r.replacement);
    if (pat_cp != rep_cp) {
      report("codepoint preservation: pattern has " + std::to_string(pat_cp) +
             " codepoints, replacement has " + std::to_string(rep_cp));
    }
    for (const auto* side : {&r.pattern, &r.replacement}) {
      for (const auto& sym : *side) {
        if (!inv.contains(sym)) report("symbol '" + sym + "' is not in the inventory");
      }
    }
    if (r.condition.kind == RuleCondition::Kind::LexiconGated &&
        rs.lexicons.find(r.condition.lexicon) == rs.lexicons.end()) {
      report("unknown lexicon '" + r.condition.lexicon + "'");
    }
  }

  for (std::size_t i = 0; i < rs.rules.size(); ++i) {
    const auto& a = rs.rules[i];
    const std::set<std::string> a_syms(a.pattern.begin(), a.pattern.end());
    for (std::size_t j = i + 1; j < rs.rules.size(); ++j) {
      const auto& b = rs.rules[j];
      for (const auto& sym : b.pattern) {
        if (a_syms.count(sym)) {
          out.push_back({b.id, "pattern overlaps rule '" + a.id + "' on symbol '" + sym + "'"});
          break;
        }
      }
    }
  }
  return out;
}

std::set<std::string> load_lexicon_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open lexicon file '" + path.string() + "'");
  std::set<std::string> words;
  for (std::string line; std::getline(in, line);) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto w = normalize_word(trim(line));
    if (!w.empty()) words.insert(w);
  }
  return words;
}

RuleSet parse_ruleset(std::string_view text, const std::filesystem::path& base_dir) {
  RuleSet rs;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw RuleSetError("line " + std::to_string(line_no) + ": " + msg);
  };

  for (auto raw : split(text, '\n')) {
    ++line_no;
    auto line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    auto fields = split(line, '\t');
    if (trim(fields[0]).starts_with('@')) {
      const auto directive = trim(fields[0]);
      if (directive == "@direction") {
        if (fields.size() != 2) fail("@direction takes one value");
        rs.direction_label = std::string(trim(fields[1]));
      } else if (directive == "@lexicon") {
        if (fields.size() != 3) fail("@lexicon takes a name and a path");
        const auto name = std::string(trim(fields[1]));
        const std::filesystem::path p(std::string(trim(fields[2])));
        rs.lexicons[name] = load_lexicon_file(p.is_absolute() ? p : base_dir / p);
      } else {
        fail("unknown directive '" + std::string(directive) + "'");
      }
      continue;
    }

    if (fields.size() != 5) {
      fail("expected 5 tab-separated fields, got " + std::to_string(fields.size()));
    }
    SubstitutionRule r;
    r.id = std::string(trim(fields[0]));
    const auto fam = parse_family(fields[1]);
    if (!fam) fail("unknown family '" + std::string(trim(fields[1])) + "'");
    r.family = *fam;
    r.pattern = split_symbols(fields[2]);
    r.replacement = split_symbols(fields[3]);
    const auto cond = parse_condition(fields[4]);
    if (!cond) fail("unknown condition '" + std::string(trim(fields[4])) + "'");
    r.condition = *cond;
    rs.rules.push_back(std::move(r));
  }
  return rs;
}

RuleSet load_ruleset_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open rule file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_ruleset(ss.str(), path.parent_path());
}

std::string format_ruleset(const RuleSet& rs) {
  std::ostringstream out;
  if (!rs.direction_label.empty()) out << "@direction\t" << rs.direction_label << '\n';
  for (const auto& r : rs.rules) {
    out << r.id << '\t' << to_string(r.family) << '\t' << join(r.pattern, " ") << '\t'
        << join(r.replacement, " ") << '\t' << to_string(r.condition) << '\n';
  }
  return out.str();
}

std::string_view default_ruleset_text() { return embedded::kDefaultRules; }

const RuleSet& default_ruleset() {
  static const RuleSet rs = parse_ruleset(embedded::kDefaultRules);
  return rs;
}

RuleEngine::RuleEngine(RuleSet rs, PhonemeInventory inv) : rs_(std::move(rs)), inv_(std::move(inv)) {
  const auto violations = validate(rs_, inv_);
  if (!violations.empty()) {
    std::string msg = "invalid rule set:";
    for (const auto& v : violations) msg += "\n  " + v.rule_id + ": " + v.message;
    throw RuleSetError(msg);
  }
  for (const auto& r : rs_.rules) {
    CompiledRule c{&r, {}};
    for (const auto& sym : r.replacement) {
      c.replacement.push_back(Token{sym, *inv_.class_of(sym), utf8::length(sym)});
    }
    compiled_.push_back(std::move(c));
  }
}

bool RuleEngine::needs_words(const RuleConfig& cfg) const {
  return std::any_of(rs_.rules.begin(), rs_.rules.end(), [&](const SubstitutionRule& r) {
    return cfg.enabled(r.family) && r.condition.kind == RuleCondition::Kind::LexiconGated;
  });
}

const SubstitutionRule* RuleEngine::find_rule(std::string_view id) const {
  for (const auto& r : rs_.rules) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

bool RuleEngine::condition_holds(const SubstitutionRule& rule, const std::vector<Token>& tokens,
                                 std::size_t start, std::size_t end,
                                 const std::vector<const WordSpan*>& word_of) const {
  switch (rule.condition.kind) {
    case RuleCondition::Kind::Unconditional:
      return true;
    case RuleCondition::Kind::PostVocalicCoda: {
      const auto ctx = window_context(tokens, start, end - 1);
      return ctx.is_post_vocalic && ctx.is_coda;
    }
    case RuleCondition::Kind::Intervocalic: {
      const auto ctx = window_context(tokens, start, end - 1);
      return ctx.is_post_vocalic && ctx.is_pre_vocalic;
    }
    case RuleCondition::Kind::LexiconGated: {
      const auto* span = word_of[start];
      if (!span) return false;
      const auto& lex = rs_.lexicons.at(rule.condition.lexicon);
      return lex.count(span->word) != 0;
    }
  }
  return false;
}

TransformResult RuleEngine::apply(const PhonemeSequence& seq, const RuleConfig& cfg) const {
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    const auto& t = seq.tokens[i];
    if (t.cls == TokenClass::WordBoundary) continue;
    if (!inv_.contains(t.symbol)) {
      throw ApplyError("token " + std::to_string(i) + " ('" + t.symbol +
                       "') is not in the inventory");
    }
  }

  std::vector<const WordSpan*> word_of(seq.tokens.size(), nullptr);
  if (needs_words(cfg)) {
    if (!seq.word_spans) throw ApplyError("lexicon-gated rule enabled but sequence has no word spans");
    for (const auto& span : *seq.word_spans) {
      if (span.word.empty()) {
        throw ApplyError("lexicon-gated rule enabled but word spans carry no orthographic words");
      }
      for (std::size_t k = span.start; k < span.end && k < word_of.size(); ++k) word_of[k] = &span;
    }
  }

  TransformResult res;
  res.output = seq;
  auto& tokens = res.output.tokens;

  for (std::size_t i = 0; i < tokens.size();) {
    bool fired = false;
    for (const auto& c : compiled_) {
      const auto& rule = *c.rule;
      if (!cfg.enabled(rule.family)) continue;
      const auto n = rule.pattern.size();
      if (i + n > tokens.size()) continue;
      bool match = true;
      for (std::size_t k = 0; k < n && match; ++k) match = tokens[i + k].symbol == rule.pattern[k];
      if (!match || !condition_holds(rule, tokens, i, i + n, word_of)) continue;

      std::copy(c.replacement.begin(), c.replacement.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i));
      res.trace.push_back(TraceEntry{i, rule.id});
      ++res.count_by_family[rule.family];
      i += n;
      fired = true;
      break;
    }
    if (!fired) ++i;
  }
  res.n_total = res.trace.size();
  return res;
}

FamilyCounts RuleEngine::count_applicable(const PhonemeSequence& seq, const RuleConfig& cfg) const {
  return apply(seq, cfg).count_by_family;
}

const RuleEngine& default_engine() {
  static const RuleEngine engine(default_ruleset(), default_inventory());
  return engine;
}

PhonemeSequence replay_trace(const PhonemeSequence& input, const std::vector<TraceEntry>& trace,
                             const RuleEngine& engine) {
  PhonemeSequence out = input;
  for (const auto& e : trace) {
    const auto* rule = engine.find_rule(e.rule_id);
    if (!rule) throw std::invalid_argument("trace names unknown rule '" + e.rule_id + "'");
    if (e.token_index + rule->replacement.size() > out.tokens.size()) {
      throw std::out_of_range("trace index past end of sequence");
    }
    for (std::size_t k = 0; k < rule->replacement.size(); ++k) {
      const auto& sym = rule->replacement[k];
      out.tokens[e.token_index + k] =
          Token{sym, *engine.inventory().class_of(sym), utf8::length(sym)};
    }
  }
  return out;
}

}  // namespace accentshift
