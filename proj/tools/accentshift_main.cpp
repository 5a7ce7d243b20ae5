// accentshift: rule-based accent rewriting and phoneme shift rate scoring.
//
//   accentshift validate <ruleset>
//   accentshift transform <manifest> --rules <file> --families <list>
//   accentshift score <manifest> --rules <file>
//   accentshift suite <config> --out <dir>
//   accentshift hist <detail-file> --out <file>
//
// Exit codes: 0 success, 1 validation failure, 2 I/O failure, 3 partial
// failure (quarantined rows present).

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "accentshift/harness.hpp"
#include "accentshift/report.hpp"

namespace {

using namespace accentshift;

enum ExitCode : int { kOk = 0, kValidation = 1, kIo = 2, kPartial = 3 };

PhonemeInventory inventory_from(const std::string& path) {
  return path.empty() ? default_inventory() : load_inventory_file(path);
}

void report_quarantine(const std::vector<QuarantineEntry>& q) {
  for (const auto& e : q) {
    std::cerr << "quarantined " << (e.utt_id.empty() ? "?" : e.utt_id);
    if (e.line) std::cerr << " (line " << e.line << ")";
    std::cerr << ": " << e.reason << '\n';
  }
}

CountMode count_mode_from(const std::string& s) {
  const auto m = parse_count_mode(s);
  if (!m) throw ConfigError("--n1-mode must be 'full' or 'applied'");
  return *m;
}

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write '" + path + "'");
  return out;
}

int run_validate(const std::string& rules_path, const std::string& inv_path) {
  const auto rs = load_ruleset_file(rules_path);
  const auto violations = validate(rs, inventory_from(inv_path));
  for (const auto& v : violations) std::cout << v.rule_id << ": " << v.message << '\n';
  if (!violations.empty()) return kValidation;
  std::cout << "ok: " << rs.rules.size() << " rules";
  if (!rs.direction_label.empty()) std::cout << " (" << rs.direction_label << ")";
  std::cout << '\n';
  return kOk;
}

int run_transform(const std::string& manifest_path, const std::string& rules_path,
                  const std::string& families, const std::string& inv_path,
                  const std::string& out_path, const std::string& mode) {
  const RuleEngine engine(load_ruleset_file(rules_path), inventory_from(inv_path));
  const auto cfg = RuleConfig::parse(families);
  auto manifest = read_manifest_file(manifest_path);
  auto res = transform_manifest(manifest.rows, engine, cfg, count_mode_from(mode));

  if (out_path.empty() || out_path == "-") {
    write_manifest(std::cout, res.rows);
  } else {
    write_manifest_file(out_path, res.rows);
  }
  report_quarantine(manifest.quarantined);
  report_quarantine(res.quarantined);
  std::cerr << res.rows.size() << " rows transformed (" << cfg.to_string() << "), "
            << res.applied.total() << " substitutions, N1 = " << res.n1.total() << '\n';
  return manifest.quarantined.empty() && res.quarantined.empty() ? kOk : kPartial;
}

struct ScoreArgs {
  std::string manifest;
  std::string rules;
  std::string inventory;
  std::string families = "all";
  std::string name = "default";
  std::string voice;
  std::string mode = "full";
  std::string embeddings;
  std::string ref_na;
  std::string ref_b;
  std::string detail;
  std::string out;
};

std::optional<AccentEmbedding> reference_from(const std::string& path) {
  if (path.empty()) return std::nullopt;
  std::vector<AccentEmbedding> vecs;
  for (const auto& [ref, v] : read_embeddings_file(path)) vecs.push_back(v);
  return group_reference(vecs);
}

int run_score(const ScoreArgs& a) {
  const RuleEngine engine(load_ruleset_file(a.rules), inventory_from(a.inventory));
  auto manifest = read_manifest_file(a.manifest);

  std::optional<EmbeddingTable> embeddings;
  if (!a.embeddings.empty()) embeddings = read_embeddings_file(a.embeddings);
  ScoreOptions opts;
  opts.condition = a.name;
  opts.voice = a.voice;
  opts.applied = RuleConfig::parse(a.families);
  opts.mode = count_mode_from(a.mode);
  opts.embeddings = embeddings ? &*embeddings : nullptr;
  opts.reference_na = reference_from(a.ref_na);
  opts.reference_b = reference_from(a.ref_b);

  const auto res = score_manifest(manifest.rows, engine, opts);
  write_table1(std::cout, {res.row});
  if (!a.detail.empty()) {
    auto out = open_or_throw(a.detail);
    write_detail(out, res.details);
  }
  if (!a.out.empty()) write_manifest_file(a.out, res.rows);

  report_quarantine(manifest.quarantined);
  report_quarantine(res.quarantined);
  if (res.row.coverage.missing_recognized) {
    std::cerr << "warning: " << res.row.coverage.missing_recognized
              << " rows without recognized_ipa excluded from PSR\n";
  }
  return manifest.quarantined.empty() && res.quarantined.empty() ? kOk : kPartial;
}

int run_suite_cmd(const std::string& config_path, const std::string& out_dir) {
  const auto cfg = load_suite_config(config_path);
  const auto res = run_suite(cfg, out_dir);
  std::vector<ReportRow> rows;
  for (const auto& c : res.conditions) rows.push_back(c.row);
  write_table1(std::cout, rows);
  for (const auto& c : res.conditions) report_quarantine(c.quarantined);
  return res.quarantined_total() == 0 ? kOk : kPartial;
}

int run_hist(const std::string& detail_path, const std::string& out_path, const std::string& column,
             std::size_t grid) {
  if (column != "n1" && column != "n2") throw ConfigError("--column must be n1 or n2");
  const auto rows = read_detail_file(detail_path);
  if (rows.empty()) throw ConfigError("detail file has no rows");
  auto out = open_or_throw(out_path);
  write_changes_distribution(out, rows, column == "n1" ? ChangeColumn::N1 : ChangeColumn::N2, grid);
  out.close();
  if (!out) throw std::ios_base::failure("write failed for '" + out_path + "'");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rule-based American-to-British phoneme rewriting and phoneme shift rate scoring"};
  app.require_subcommand(1);

  std::string inv_path;
  app.add_option("--inventory", inv_path, "Phoneme inventory file (default: built-in)");

  std::string v_rules;
  auto* validate_cmd = app.add_subcommand("validate", "Check a rule file against the inventory");
  validate_cmd->add_option("ruleset", v_rules)->required();

  std::string t_manifest, t_rules, t_families, t_out, t_mode = "full";
  auto* transform_cmd = app.add_subcommand("transform", "Fill ipa_transformed and N1 in a manifest");
  transform_cmd->add_option("manifest", t_manifest)->required();
  transform_cmd->add_option("--rules", t_rules)->required();
  transform_cmd->add_option("--families", t_families, "e.g. flapping,vowel | all | none")->required();
  transform_cmd->add_option("--out", t_out, "Output manifest (default: stdout)");
  transform_cmd->add_option("--n1-mode", t_mode, "full | applied");

  ScoreArgs s;
  auto* score_cmd = app.add_subcommand("score", "Compute N2, PSR and model-output aggregates");
  score_cmd->add_option("manifest", s.manifest)->required();
  score_cmd->add_option("--rules", s.rules)->required();
  score_cmd->add_option("--families", s.families, "Families applied at synthesis time");
  score_cmd->add_option("--name", s.name, "Condition name for the report row");
  score_cmd->add_option("--voice", s.voice);
  score_cmd->add_option("--n1-mode", s.mode, "full | applied");
  score_cmd->add_option("--embeddings", s.embeddings, "Embedding sidecar (JSONL)");
  score_cmd->add_option("--ref-na", s.ref_na, "North American reference embeddings");
  score_cmd->add_option("--ref-b", s.ref_b, "British reference embeddings");
  score_cmd->add_option("--detail", s.detail, "Write per-utterance counts here");
  score_cmd->add_option("--out", s.out, "Write the manifest with n1/n2 filled here");

  std::string su_config, su_out;
  auto* suite_cmd = app.add_subcommand("suite", "Run every condition of a suite and write reports");
  suite_cmd->add_option("config", su_config)->required();
  suite_cmd->add_option("--out", su_out)->required();

  std::string h_detail, h_out, h_column = "n2";
  std::size_t h_grid = 256;
  auto* hist_cmd = app.add_subcommand("hist", "Histogram and KDE of per-utterance change counts");
  hist_cmd->add_option("detail", h_detail)->required();
  hist_cmd->add_option("--out", h_out)->required();
  hist_cmd->add_option("--column", h_column, "n1 | n2");
  hist_cmd->add_option("--grid", h_grid, "Minimum KDE grid points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }
  s.inventory = inv_path;

  try {
    if (*validate_cmd) return run_validate(v_rules, inv_path);
    if (*transform_cmd) return run_transform(t_manifest, t_rules, t_families, inv_path, t_out, t_mode);
    if (*score_cmd) return run_score(s);
    if (*suite_cmd) return run_suite_cmd(su_config, su_out);
    if (*hist_cmd) return run_hist(h_detail, h_out, h_column, h_grid);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
