#include "accentshift/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace accentshift {

namespace {

using json = nlohmann::ordered_json;

template <typename T>
std::optional<T> opt(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->template get<T>();
}

std::optional<FamilyCounts> opt_counts(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  FamilyCounts c;
  for (Family f : kAllFamilies) {
    c[f] = it->value(std::string(to_string(f)), std::uint64_t{0});
  }
  return c;
}

json counts_json(const FamilyCounts& c) {
  json j = json::object();
  for (Family f : kAllFamilies) j[std::string(to_string(f))] = c[f];
  return j;
}

}  // namespace

ManifestRow row_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("manifest record is not an object");
  ManifestRow r;
  r.source = j;
  const auto id = opt<std::string>(j, "utt_id");
  if (!id || id->empty()) throw std::invalid_argument("missing utt_id");
  r.utt_id = *id;
  r.text = opt<std::string>(j, "text").value_or("");
  r.ipa_source = opt<std::string>(j, "ipa_source").value_or("");
  r.ipa_transformed = opt<std::string>(j, "ipa_transformed");
  r.durations = opt<std::vector<double>>(j, "durations");
  r.voice_label = opt<std::string>(j, "voice_label").value_or("");
  r.recognized_ipa = opt<std::string>(j, "recognized_ipa");
  if (const auto logits = opt<std::vector<double>>(j, "logits")) {
    if (logits->size() != 3) {
      throw std::invalid_argument("logits must have 3 entries, got " +
                                  std::to_string(logits->size()));
    }
    r.logits = ClassifierLogits{(*logits)[0], (*logits)[1], (*logits)[2]};
  }
  r.embedding_ref = opt<std::string>(j, "embedding_ref");
  r.utmos = opt<double>(j, "utmos");
  r.n1 = opt<std::uint64_t>(j, "n1");
  r.n2 = opt<std::uint64_t>(j, "n2");
  r.n1_by_family = opt_counts(j, "n1_by_family");
  r.n2_by_family = opt_counts(j, "n2_by_family");
  return r;
}

json row_to_json(const ManifestRow& r) {
  json j = r.source.is_object() ? r.source : json::object();
  j["utt_id"] = r.utt_id;
  j["text"] = r.text;
  j["ipa_source"] = r.ipa_source;
  if (r.ipa_transformed) j["ipa_transformed"] = *r.ipa_transformed;
  // Durations are opaque; keep the original JSON numbers when present.
  if (r.durations && !j.contains("durations")) j["durations"] = *r.durations;
  if (!r.voice_label.empty() || j.contains("voice_label")) j["voice_label"] = r.voice_label;
  if (r.recognized_ipa) j["recognized_ipa"] = *r.recognized_ipa;
  if (r.logits) j["logits"] = *r.logits;
  if (r.embedding_ref) j["embedding_ref"] = *r.embedding_ref;
  if (r.utmos) j["utmos"] = *r.utmos;
  if (r.n1) j["n1"] = *r.n1;
  if (r.n2) j["n2"] = *r.n2;
  if (r.n1_by_family) j["n1_by_family"] = counts_json(*r.n1_by_family);
  if (r.n2_by_family) j["n2_by_family"] = counts_json(*r.n2_by_family);
  return j;
}

Manifest read_manifest(std::istream& in) {
  Manifest m;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    std::string utt_id;
    try {
      const auto j = json::parse(line);
      if (j.is_object() && j.contains("utt_id") && j["utt_id"].is_string()) {
        utt_id = j["utt_id"].get<std::string>();
      }
      auto row = row_from_json(j);
      if (!seen.insert(row.utt_id).second) {
        m.quarantined.push_back({row.utt_id, line_no, "duplicate utt_id"});
        continue;
      }
      m.rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      m.quarantined.push_back({utt_id, line_no, std::string("malformed record: ") + e.what()});
    }
  }
  return m;
}

Manifest read_manifest_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open manifest '" + path.string() + "'");
  return read_manifest(in);
}

void write_manifest(std::ostream& out, const std::vector<ManifestRow>& rows) {
  for (const auto& r : rows) out << row_to_json(r).dump() << '\n';
}

void write_manifest_file(const std::filesystem::path& path, const std::vector<ManifestRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write manifest '" + path.string() + "'");
  write_manifest(out, rows);
  if (!out) throw std::ios_base::failure("write failed for '" + path.string() + "'");
}

EmbeddingTable read_embeddings_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open embeddings '" + path.string() + "'");
  EmbeddingTable table;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      auto ref = j.at("ref").get<std::string>();
      auto vec = j.at("embedding").get<AccentEmbedding>();
      if (!table.emplace(std::move(ref), std::move(vec)).second) {
        throw std::invalid_argument("duplicate ref");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return table;
}

}  // namespace accentshift
