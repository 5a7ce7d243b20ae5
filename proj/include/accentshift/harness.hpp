#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "accentshift/manifest.hpp"
#include "accentshift/metrics.hpp"
#include "accentshift/rules.hpp"

namespace accentshift {

/// Which families the N1/N2 counts are taken over.
enum class CountMode {
  FullSet,  // every family in the rule set, whatever was applied
  Applied,  // only the families enabled for the condition
};

std::optional<CountMode> parse_count_mode(std::string_view s);

// ---------------------------------------------------------------------------
// transform

struct TransformOutcome {
  std::vector<ManifestRow> rows;
  std::vector<QuarantineEntry> quarantined;
  FamilyCounts applied;  // substitutions actually made
  FamilyCounts n1;       // N1 totals under the count mode
};

/// Rewrites ipa_source into ipa_transformed and records N1 per row. Rows that
/// fail to tokenize, align or match their duration list are quarantined.
TransformOutcome transform_manifest(const std::vector<ManifestRow>& rows, const RuleEngine& engine,
                                    const RuleConfig& cfg, CountMode mode = CountMode::FullSet);

// ---------------------------------------------------------------------------
// score

struct Coverage {
  std::size_t rows = 0;
  std::size_t psr_rows = 0;
  std::size_t missing_recognized = 0;
  std::size_t logits_rows = 0;
  std::size_t embedding_rows = 0;
  std::size_t utmos_rows = 0;
};

/// One line of the condition summary plus the per-family totals behind it.
struct ReportRow {
  std::string condition;
  std::string families;  // RuleConfig::to_string of the applied set
  std::string voice;
  std::optional<double> utmos_mean;
  std::optional<double> accent_prob_na;
  std::optional<double> accent_prob_b;
  std::optional<double> accent_sim_na;
  std::optional<double> accent_sim_b;
  std::optional<double> psr;
  FamilyCounts n1;
  FamilyCounts n2;
  Coverage coverage;
};

struct DetailRow {
  std::string utt_id;
  FamilyCounts n1;
  FamilyCounts n2;

  bool operator==(const DetailRow&) const = default;
};

struct ScoreOptions {
  std::string condition = "default";
  std::string voice;
  RuleConfig applied;  // reported only; also the count set under CountMode::Applied
  CountMode mode = CountMode::FullSet;
  const EmbeddingTable* embeddings = nullptr;
  std::optional<AccentEmbedding> reference_na;
  std::optional<AccentEmbedding> reference_b;
};

struct ScoreOutcome {
  ReportRow row;
  std::vector<DetailRow> details;  // rows that entered the PSR
  std::vector<ManifestRow> rows;   // input rows with n1/n2 filled
  std::vector<QuarantineEntry> quarantined;
};

class ScoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Re-applies the rules to each recognized transcript (N2) and aggregates
/// PSR, accent probability, accent similarity and UTMOS over the rows that
/// carry each input. Throws ScoreError when no row has recognized_ipa.
ScoreOutcome score_manifest(const std::vector<ManifestRow>& rows, const RuleEngine& engine,
                            const ScoreOptions& opts);

// ---------------------------------------------------------------------------
// suites

struct ExperimentConfig {
  std::string name;
  std::string key;  // file-name-safe identifier
  RuleConfig families;
  std::string voice_label;
  std::filesystem::path ruleset_path;
  std::filesystem::path manifest_in;
  std::filesystem::path manifest_out;
};

/// "+ Flapping" -> "plus_flapping", "B Spk Emb" -> "b_spk_emb".
std::string condition_key(std::string_view name);

/// Baseline, each single family, all families and each leave-one-out: eight
/// configs. A `{condition}` placeholder in `base.manifest_in` is replaced by
/// each config's key ("baseline", "plus_vowel", "minus_flapping", ...).
std::vector<ExperimentConfig> ablation_suite(const ExperimentConfig& base);

struct SuiteConfig {
  std::string name;
  std::filesystem::path ruleset_path;
  std::optional<std::filesystem::path> inventory_path;
  std::optional<std::filesystem::path> embeddings_path;
  std::optional<std::filesystem::path> reference_na_path;
  std::optional<std::filesystem::path> reference_b_path;
  CountMode mode = CountMode::FullSet;
  std::size_t kde_grid_points = 256;
  std::vector<ExperimentConfig> conditions;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a JSON suite file. Relative paths resolve against the file's
/// directory; ablation blocks are expanded. Throws ConfigError.
SuiteConfig load_suite_config(const std::filesystem::path& path);

struct ConditionResult {
  ExperimentConfig config;
  ReportRow row;
  std::vector<DetailRow> details;
  std::vector<QuarantineEntry> quarantined;
};

struct SuiteResult {
  std::vector<ConditionResult> conditions;
  std::size_t quarantined_total() const;
};

/// Runs transform and score for every condition, writes each condition's
/// manifest to `out_dir/manifests/<key>.jsonl`, then emits the reports.
SuiteResult run_suite(const SuiteConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace accentshift
