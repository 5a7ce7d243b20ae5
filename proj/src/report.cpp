#include "accentshift/report.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace accentshift {

namespace {

std::string fixed(std::optional<double> v, int decimals) {
  if (!v) return "-";
  // Avoid "-0.00" for tiny negatives.
  auto s = fmt::format("{:.{}f}", *v, decimals);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write '" + p.string() + "'");
  return out;
}

void close_checked(std::ofstream& out, const std::filesystem::path& p) {
  out.close();
  if (!out) throw std::ios_base::failure("write failed for '" + p.string() + "'");
}

std::vector<std::uint64_t> column_values(const std::vector<DetailRow>& rows, ChangeColumn col) {
  std::vector<std::uint64_t> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(col == ChangeColumn::N1 ? r.n1.total() : r.n2.total());
  return v;
}

}  // namespace

std::string format_utmos(std::optional<double> v) { return fixed(v, 2); }
std::string format_prob(std::optional<double> v) { return fixed(v, 1); }
std::string format_sim(std::optional<double> v) { return fixed(v, 2); }
std::string format_psr(std::optional<double> v) { return fixed(v, 3); }

void write_table1(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "condition\tvoice\tfamilies\tutmos\tprob_na\tprob_b\tsim_na\tsim_b\tpsr\n";
  for (const auto& r : rows) {
    out << r.condition << '\t' << r.voice << '\t' << r.families << '\t' << format_utmos(r.utmos_mean)
        << '\t' << format_prob(r.accent_prob_na) << '\t' << format_prob(r.accent_prob_b) << '\t'
        << format_sim(r.accent_sim_na) << '\t' << format_sim(r.accent_sim_b) << '\t'
        << format_psr(r.psr) << '\n';
  }
}

void write_table2(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "condition\tquantity\tflapping\trhoticity\tvowel\tall\n";
  for (const auto& r : rows) {
    for (const auto& [label, counts] : {std::pair{"N1", &r.n1}, std::pair{"N2", &r.n2}}) {
      out << r.condition << '\t' << label << '\t' << counts->flapping << '\t' << counts->rhoticity
          << '\t' << counts->vowel << '\t' << counts->total() << '\n';
    }
  }
}

void write_detail(std::ostream& out, const std::vector<DetailRow>& rows) {
  out << "utt_id\tn1\tn2\tn1_flapping\tn1_rhoticity\tn1_vowel\tn2_flapping\tn2_rhoticity\tn2_vowel\n";
  for (const auto& r : rows) {
    out << r.utt_id << '\t' << r.n1.total() << '\t' << r.n2.total() << '\t' << r.n1.flapping << '\t'
        << r.n1.rhoticity << '\t' << r.n1.vowel << '\t' << r.n2.flapping << '\t' << r.n2.rhoticity
        << '\t' << r.n2.vowel << '\n';
  }
}

std::vector<DetailRow> read_detail(std::istream& in) {
  std::vector<DetailRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.starts_with("utt_id\t")) continue;
    std::istringstream ss(line);
    DetailRow r;
    std::uint64_t n1 = 0, n2 = 0;
    std::getline(ss, r.utt_id, '\t');
    ss >> n1 >> n2 >> r.n1.flapping >> r.n1.rhoticity >> r.n1.vowel >> r.n2.flapping >>
        r.n2.rhoticity >> r.n2.vowel;
    if (!ss || n1 != r.n1.total() || n2 != r.n2.total()) {
      throw std::runtime_error("detail line " + std::to_string(line_no) + ": malformed or inconsistent totals");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<DetailRow> read_detail_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open detail file '" + path.string() + "'");
  return read_detail(in);
}

void write_changes_distribution(std::ostream& out, const std::vector<DetailRow>& rows,
                                ChangeColumn column, std::size_t grid_points) {
  const auto values = column_values(rows, column);
  out << "series\tx\tvalue\n";
  if (values.empty()) return;
  std::map<std::uint64_t, std::size_t> hist;
  for (auto v : values) ++hist[v];
  for (const auto& [x, n] : hist) out << "hist\t" << x << '\t' << n << '\n';
  const auto kde = utterance_changes_kde(values, grid_points);
  for (std::size_t i = 0; i < kde.grid.size(); ++i) {
    out << "kde\t" << fmt::format("{:.6f}", kde.grid[i]) << '\t'
        << fmt::format("{:.8f}", kde.density[i]) << '\n';
  }
}

void emit_reports(const std::filesystem::path& out_dir, std::vector<ConditionResult> results,
                  std::size_t kde_grid_points) {
  std::stable_sort(results.begin(), results.end(), [](const ConditionResult& a, const ConditionResult& b) {
    return a.config.name < b.config.name;
  });
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "detail", ec);
  if (ec) throw std::ios_base::failure("cannot create '" + (out_dir / "detail").string() + "': " + ec.message());

  std::vector<ReportRow> rows;
  for (const auto& r : results) rows.push_back(r.row);

  {
    const auto p = out_dir / "table1.tsv";
    auto out = open_out(p);
    write_table1(out, rows);
    close_checked(out, p);
  }
  {
    const auto p = out_dir / "table2.tsv";
    auto out = open_out(p);
    write_table2(out, rows);
    close_checked(out, p);
  }
  {
    const auto p = out_dir / "changes.tsv";
    auto out = open_out(p);
    out << "condition\tutt_id\tn1\tn2\n";
    for (const auto& r : results) {
      for (const auto& d : r.details) {
        out << r.config.name << '\t' << d.utt_id << '\t' << d.n1.total() << '\t' << d.n2.total() << '\n';
      }
    }
    close_checked(out, p);
  }
  {
    const auto p = out_dir / "kde.tsv";
    auto out = open_out(p);
    out << "condition\tquantity\tbandwidth\tx\tdensity\n";
    for (const auto& r : results) {
      if (r.details.empty()) continue;
      for (auto col : {ChangeColumn::N1, ChangeColumn::N2}) {
        const auto kde = utterance_changes_kde(column_values(r.details, col), kde_grid_points);
        const auto bw = fmt::format("{:.6f}", kde.bandwidth);
        for (std::size_t i = 0; i < kde.grid.size(); ++i) {
          out << r.config.name << '\t' << (col == ChangeColumn::N1 ? "N1" : "N2") << '\t' << bw
              << '\t' << fmt::format("{:.6f}", kde.grid[i]) << '\t'
              << fmt::format("{:.8f}", kde.density[i]) << '\n';
        }
      }
    }
    close_checked(out, p);
  }
  for (const auto& r : results) {
    const auto p = out_dir / "detail" / (r.config.key + ".tsv");
    auto out = open_out(p);
    write_detail(out, r.details);
    close_checked(out, p);
  }
  {
    const auto p = out_dir / "summary.txt";
    auto out = open_out(p);
    out << "Accent transformation report\n"
        << "============================\n\n";
    out << fmt::format("{:<16} {:>6} {:>7} {:>7} {:>7} {:>7} {:>7}\n", "condition", "UTMOS",
                       "P(NA)", "P(B)", "Sim NA", "Sim B", "PSR");
    for (const auto& r : rows) {
      out << fmt::format("{:<16} {:>6} {:>7} {:>7} {:>7} {:>7} {:>7}\n", r.condition,
                         format_utmos(r.utmos_mean), format_prob(r.accent_prob_na),
                         format_prob(r.accent_prob_b), format_sim(r.accent_sim_na),
                         format_sim(r.accent_sim_b), format_psr(r.psr));
    }
    out << "\nSubstitution totals (N1 = source, N2 = recognized)\n";
    out << fmt::format("{:<16} {:>4} {:>9} {:>9} {:>9} {:>9}\n", "condition", "", "flapping",
                       "rhoticity", "vowel", "all");
    for (const auto& r : rows) {
      for (const auto& [label, c] : {std::pair{"N1", &r.n1}, std::pair{"N2", &r.n2}}) {
        out << fmt::format("{:<16} {:>4} {:>9} {:>9} {:>9} {:>9}\n", r.condition, label,
                           c->flapping, c->rhoticity, c->vowel, c->total());
      }
    }
    out << "\nCoverage\n";
    for (const auto& r : results) {
      const auto& c = r.row.coverage;
      out << fmt::format(
          "{}: {} rows, {} scored for PSR, {} without transcript, {} with logits, {} with "
          "embeddings, {} with UTMOS, {} quarantined\n",
          r.config.name, c.rows, c.psr_rows, c.missing_recognized, c.logits_rows, c.embedding_rows,
          c.utmos_rows, r.quarantined.size());
      for (const auto& q : r.quarantined) {
        out << fmt::format("  quarantined {} (line {}): {}\n", q.utt_id.empty() ? "?" : q.utt_id,
                           q.line, q.reason);
      }
    }
    close_checked(out, p);
  }
}

}  // namespace accentshift
