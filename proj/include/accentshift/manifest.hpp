#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "accentshift/metrics.hpp"
#include "accentshift/rules.hpp"

namespace accentshift {

/// One utterance in a line-delimited JSON manifest.
///
/// Keys the harness does not know about (audio paths written by the model
/// adapters, for instance) are kept in `source` and written back unchanged.
struct ManifestRow {
  std::string utt_id;
  std::string text;
  std::string ipa_source;
  std::optional<std::string> ipa_transformed;
  std::optional<std::vector<double>> durations;
  std::string voice_label;
  std::optional<std::string> recognized_ipa;
  std::optional<ClassifierLogits> logits;
  std::optional<std::string> embedding_ref;
  std::optional<double> utmos;
  std::optional<std::uint64_t> n1;
  std::optional<std::uint64_t> n2;
  std::optional<FamilyCounts> n1_by_family;
  std::optional<FamilyCounts> n2_by_family;

  nlohmann::ordered_json source = nlohmann::ordered_json::object();
};

/// A row the harness skipped, with the reason. `line` is 1-based, or 0 when
/// the row did not come from a file.
struct QuarantineEntry {
  std::string utt_id;
  std::size_t line = 0;
  std::string reason;
};

struct Manifest {
  std::vector<ManifestRow> rows;
  std::vector<QuarantineEntry> quarantined;
};

ManifestRow row_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json row_to_json(const ManifestRow& row);

/// Malformed lines and duplicate utt_ids are quarantined, not fatal.
Manifest read_manifest(std::istream& in);
/// Throws std::ios_base::failure when the file cannot be opened.
Manifest read_manifest_file(const std::filesystem::path& path);

void write_manifest(std::ostream& out, const std::vector<ManifestRow>& rows);
void write_manifest_file(const std::filesystem::path& path, const std::vector<ManifestRow>& rows);

/// Embedding sidecar: one `{"ref": ..., "embedding": [...]}` object per line.
using EmbeddingTable = std::map<std::string, AccentEmbedding>;
EmbeddingTable read_embeddings_file(const std::filesystem::path& path);

}  // namespace accentshift
