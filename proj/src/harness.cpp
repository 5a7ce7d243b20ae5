#include "accentshift/harness.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>

#include "accentshift/report.hpp"

namespace accentshift {

namespace {

using json = nlohmann::ordered_json;

RuleConfig count_config(CountMode mode, const RuleConfig& applied) {
  return mode == CountMode::FullSet ? RuleConfig::all() : applied;
}

PhonemeSequence prepare(std::string_view ipa, const ManifestRow& row, const RuleEngine& engine,
                        bool needs_words) {
  auto seq = tokenize(ipa, engine.inventory());
  if (needs_words) attach_words(seq, row.text);
  return seq;
}

std::string display_name(Family f) {
  std::string s(to_string(f));
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

}  // namespace

std::optional<CountMode> parse_count_mode(std::string_view s) {
  if (s == "full") return CountMode::FullSet;
  if (s == "applied") return CountMode::Applied;
  return std::nullopt;
}

TransformOutcome transform_manifest(const std::vector<ManifestRow>& rows, const RuleEngine& engine,
                                    const RuleConfig& cfg, CountMode mode) {
  TransformOutcome out;
  const auto count_cfg = count_config(mode, cfg);
  const bool needs_words = engine.needs_words(cfg) || engine.needs_words(count_cfg);

  for (const auto& row : rows) {
    try {
      const auto seq = prepare(row.ipa_source, row, engine, needs_words);
      if (row.durations && row.durations->size() != seq.segment_count()) {
        out.quarantined.push_back({row.utt_id, 0,
                                   "durations has " + std::to_string(row.durations->size()) +
                                       " entries for " + std::to_string(seq.segment_count()) +
                                       " phoneme tokens"});
        continue;
      }
      const auto res = engine.apply(seq, cfg);
      const auto n1 = count_cfg == cfg ? res.count_by_family : engine.count_applicable(seq, count_cfg);

      ManifestRow r = row;
      r.ipa_transformed = detokenize(res.output);
      r.n1 = n1.total();
      r.n1_by_family = n1;
      out.applied += res.count_by_family;
      out.n1 += n1;
      out.rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      out.quarantined.push_back({row.utt_id, 0, std::string("ipa_source: ") + e.what()});
    }
  }
  return out;
}

ScoreOutcome score_manifest(const std::vector<ManifestRow>& rows, const RuleEngine& engine,
                            const ScoreOptions& opts) {
  const bool any_recognized = std::any_of(rows.begin(), rows.end(),
                                          [](const ManifestRow& r) { return r.recognized_ipa.has_value(); });
  if (!any_recognized) throw ScoreError("no row carries recognized_ipa; nothing to score");

  ScoreOutcome out;
  auto& rep = out.row;
  rep.condition = opts.condition;
  rep.voice = opts.voice;
  rep.families = opts.applied.to_string();
  rep.coverage.rows = rows.size();

  const auto count_cfg = count_config(opts.mode, opts.applied);
  const bool needs_words = engine.needs_words(count_cfg);

  std::vector<ProbabilityTriple> probs;
  std::vector<double> sims_na, sims_b, utmos;

  for (const auto& row : rows) {
    ManifestRow r = row;

    if (!row.recognized_ipa) {
      ++rep.coverage.missing_recognized;
    } else {
      try {
        FamilyCounts n1;
        if (!row.ipa_source.empty()) {
          n1 = engine.count_applicable(prepare(row.ipa_source, row, engine, needs_words), count_cfg);
        } else if (row.n1_by_family) {
          n1 = *row.n1_by_family;
        } else {
          throw std::invalid_argument("neither ipa_source nor n1_by_family present");
        }
        const auto n2 =
            engine.count_applicable(prepare(*row.recognized_ipa, row, engine, needs_words), count_cfg);
        r.n1 = n1.total();
        r.n1_by_family = n1;
        r.n2 = n2.total();
        r.n2_by_family = n2;
        rep.n1 += n1;
        rep.n2 += n2;
        ++rep.coverage.psr_rows;
        out.details.push_back({row.utt_id, n1, n2});
      } catch (const std::exception& e) {
        out.quarantined.push_back({row.utt_id, 0, std::string("excluded from PSR: ") + e.what()});
      }
    }

    if (row.logits) {
      try {
        probs.push_back(softmax(*row.logits));
      } catch (const MetricError& e) {
        out.quarantined.push_back({row.utt_id, 0, std::string("logits: ") + e.what()});
      }
    }

    if (row.embedding_ref && opts.embeddings && (opts.reference_na || opts.reference_b)) {
      const auto it = opts.embeddings->find(*row.embedding_ref);
      if (it == opts.embeddings->end()) {
        out.quarantined.push_back({row.utt_id, 0, "embedding ref '" + *row.embedding_ref + "' not found"});
      } else {
        try {
          const double na = opts.reference_na ? cosine(it->second, *opts.reference_na) : 0.0;
          const double b = opts.reference_b ? cosine(it->second, *opts.reference_b) : 0.0;
          if (opts.reference_na) sims_na.push_back(na);
          if (opts.reference_b) sims_b.push_back(b);
          ++rep.coverage.embedding_rows;
        } catch (const MetricError& e) {
          out.quarantined.push_back({row.utt_id, 0, std::string("embedding: ") + e.what()});
        }
      }
    }

    if (row.utmos) {
      if (*row.utmos >= 1.0 && *row.utmos <= 5.0) {
        utmos.push_back(*row.utmos);
      } else {
        out.quarantined.push_back({row.utt_id, 0, "utmos outside [1, 5]"});
      }
    }

    out.rows.push_back(std::move(r));
  }

  rep.coverage.logits_rows = probs.size();
  rep.coverage.utmos_rows = utmos.size();
  if (rep.n1.total() > 0) rep.psr = corpus_psr(rep.n1.total(), rep.n2.total());
  if (!probs.empty()) {
    rep.accent_prob_na = mean_target_prob(probs, Accent::NorthAmerican);
    rep.accent_prob_b = mean_target_prob(probs, Accent::BritishIsles);
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  if (!sims_na.empty()) rep.accent_sim_na = mean(sims_na);
  if (!sims_b.empty()) rep.accent_sim_b = mean(sims_b);
  if (!utmos.empty()) rep.utmos_mean = mean_utmos(utmos);
  return out;
}

std::string condition_key(std::string_view name) {
  std::string raw;
  for (char ch : name) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      raw.push_back(static_cast<char>(std::tolower(c)));
    } else if (c == '+') {
      raw += "plus_";
    } else if (c == '-') {
      raw += "minus_";
    } else {
      raw.push_back('_');
    }
  }
  std::string key;
  for (char c : raw) {
    if (c == '_' && (key.empty() || key.back() == '_')) continue;
    key.push_back(c);
  }
  while (!key.empty() && key.back() == '_') key.pop_back();
  return key.empty() ? "condition" : key;
}

std::vector<ExperimentConfig> ablation_suite(const ExperimentConfig& base) {
  auto derive = [&](std::string name, std::string key, RuleConfig fams) {
    ExperimentConfig c = base;
    c.name = std::move(name);
    c.key = std::move(key);
    c.families = std::move(fams);
    auto in = base.manifest_in.string();
    if (const auto pos = in.find("{condition}"); pos != std::string::npos) {
      in.replace(pos, 11, c.key);
    }
    c.manifest_in = in;
    return c;
  };

  std::vector<ExperimentConfig> out;
  out.push_back(derive(base.name, "baseline", RuleConfig::none()));
  for (Family f : kAllFamilies) {
    out.push_back(derive("+ " + display_name(f), "plus_" + std::string(to_string(f)), RuleConfig::only(f)));
  }
  out.push_back(derive("+ All", "plus_all", RuleConfig::all()));
  for (Family f : kAllFamilies) {
    std::set<Family> rest(kAllFamilies.begin(), kAllFamilies.end());
    rest.erase(f);
    out.push_back(derive("- " + display_name(f), "minus_" + std::string(to_string(f)),
                         RuleConfig(std::move(rest))));
  }
  return out;
}

namespace {

RuleConfig families_from_json(const json& j) {
  if (j.is_string()) return RuleConfig::parse(j.get<std::string>());
  if (!j.is_array()) throw ConfigError("families must be a list or a string");
  std::set<Family> fams;
  for (const auto& f : j) {
    const auto fam = parse_family(f.get<std::string>());
    if (!fam) throw ConfigError("unknown family '" + f.get<std::string>() + "'");
    fams.insert(*fam);
  }
  return RuleConfig(std::move(fams));
}

}  // namespace

SuiteConfig load_suite_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open suite config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }

  const auto dir = path.parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : (dir / fp).lexically_normal();
  };

  SuiteConfig cfg;
  try {
    cfg.name = j.value("name", path.stem().string());
    cfg.ruleset_path = resolve(j.at("rules").get<std::string>());
    if (j.contains("inventory")) cfg.inventory_path = resolve(j["inventory"].get<std::string>());
    if (j.contains("embeddings")) cfg.embeddings_path = resolve(j["embeddings"].get<std::string>());
    if (j.contains("references")) {
      const auto& refs = j["references"];
      if (refs.contains("na")) cfg.reference_na_path = resolve(refs["na"].get<std::string>());
      if (refs.contains("b")) cfg.reference_b_path = resolve(refs["b"].get<std::string>());
    }
    if (j.contains("n1_mode")) {
      const auto m = parse_count_mode(j["n1_mode"].get<std::string>());
      if (!m) throw ConfigError("n1_mode must be 'full' or 'applied'");
      cfg.mode = *m;
    }
    cfg.kde_grid_points = j.value("kde_grid_points", cfg.kde_grid_points);

    auto base_of = [&](const json& c) {
      ExperimentConfig e;
      e.name = c.at("name").get<std::string>();
      e.key = c.contains("key") ? c["key"].get<std::string>() : condition_key(e.name);
      e.voice_label = c.value("voice", "");
      e.ruleset_path = c.contains("rules") ? resolve(c["rules"].get<std::string>()) : cfg.ruleset_path;
      e.manifest_in = resolve(c.at("manifest").get<std::string>());
      return e;
    };

    for (const auto& c : j.value("conditions", json::array())) {
      auto e = base_of(c);
      e.families = families_from_json(c.value("families", json::array()));
      cfg.conditions.push_back(std::move(e));
    }
    for (const auto& a : j.value("ablations", json::array())) {
      for (auto& e : ablation_suite(base_of(a))) cfg.conditions.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }

  if (cfg.conditions.empty()) throw ConfigError(path.string() + ": suite has no conditions");
  std::set<std::string> names, keys;
  for (const auto& c : cfg.conditions) {
    if (!names.insert(c.name).second) throw ConfigError("duplicate condition name '" + c.name + "'");
    if (!keys.insert(c.key).second) throw ConfigError("duplicate condition key '" + c.key + "'");
  }
  return cfg;
}

std::size_t SuiteResult::quarantined_total() const {
  std::size_t n = 0;
  for (const auto& c : conditions) n += c.quarantined.size();
  return n;
}

SuiteResult run_suite(const SuiteConfig& cfg, const std::filesystem::path& out_dir) {
  const auto inv = cfg.inventory_path ? load_inventory_file(cfg.inventory_path->string())
                                      : default_inventory();
  std::map<std::filesystem::path, RuleEngine> engines;
  auto engine_for = [&](const std::filesystem::path& p) -> const RuleEngine& {
    auto it = engines.find(p);
    if (it == engines.end()) it = engines.emplace(p, RuleEngine(load_ruleset_file(p), inv)).first;
    return it->second;
  };

  std::optional<EmbeddingTable> embeddings;
  if (cfg.embeddings_path) embeddings = read_embeddings_file(*cfg.embeddings_path);
  auto reference = [](const std::optional<std::filesystem::path>& p) -> std::optional<AccentEmbedding> {
    if (!p) return std::nullopt;
    const auto table = read_embeddings_file(*p);
    std::vector<AccentEmbedding> vecs;
    for (const auto& [ref, v] : table) vecs.push_back(v);
    return group_reference(vecs);
  };
  const auto ref_na = reference(cfg.reference_na_path);
  const auto ref_b = reference(cfg.reference_b_path);

  std::filesystem::create_directories(out_dir / "manifests");

  SuiteResult result;
  for (auto c : cfg.conditions) {
    const auto& engine = engine_for(c.ruleset_path);
    auto manifest = read_manifest_file(c.manifest_in);
    auto transformed = transform_manifest(manifest.rows, engine, c.families, cfg.mode);

    ScoreOptions opts;
    opts.condition = c.name;
    opts.voice = c.voice_label;
    opts.applied = c.families;
    opts.mode = cfg.mode;
    opts.embeddings = embeddings ? &*embeddings : nullptr;
    opts.reference_na = ref_na;
    opts.reference_b = ref_b;
    auto scored = score_manifest(transformed.rows, engine, opts);

    c.manifest_out = out_dir / "manifests" / (c.key + ".jsonl");
    write_manifest_file(c.manifest_out, scored.rows);

    ConditionResult cr;
    cr.config = c;
    cr.row = std::move(scored.row);
    cr.details = std::move(scored.details);
    cr.quarantined = std::move(manifest.quarantined);
    for (auto* q : {&transformed.quarantined, &scored.quarantined}) {
      cr.quarantined.insert(cr.quarantined.end(), q->begin(), q->end());
    }
    result.conditions.push_back(std::move(cr));
  }

  emit_reports(out_dir, result.conditions, cfg.kde_grid_points);
  return result;
}

}  // namespace accentshift
