#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "accentshift/harness.hpp"

namespace accentshift {

/// Fixed report precision: UTMOS 2 decimals, probabilities 1, similarities 2,
/// PSR 3. Missing values render as "-".
std::string format_utmos(std::optional<double> v);
std::string format_prob(std::optional<double> v);
std::string format_sim(std::optional<double> v);
std::string format_psr(std::optional<double> v);

void write_table1(std::ostream& out, const std::vector<ReportRow>& rows);
void write_table2(std::ostream& out, const std::vector<ReportRow>& rows);

/// Per-utterance counts, one TSV row per utterance:
/// utt_id n1 n2 n1_flapping n1_rhoticity n1_vowel n2_flapping n2_rhoticity n2_vowel
void write_detail(std::ostream& out, const std::vector<DetailRow>& rows);
std::vector<DetailRow> read_detail(std::istream& in);
std::vector<DetailRow> read_detail_file(const std::filesystem::path& path);

enum class ChangeColumn { N1, N2 };

/// Histogram counts and KDE samples for one column of a detail file, as
/// `series<TAB>x<TAB>value` lines (series is "hist" or "kde").
void write_changes_distribution(std::ostream& out, const std::vector<DetailRow>& rows,
                                ChangeColumn column, std::size_t grid_points);

/// Writes table1.tsv, table2.tsv, changes.tsv, kde.tsv, summary.txt and
/// detail/<key>.tsv under `out_dir`. Conditions are ordered by name.
/// Throws std::ios_base::failure on unwritable paths.
void emit_reports(const std::filesystem::path& out_dir, std::vector<ConditionResult> results,
                  std::size_t kde_grid_points);

}  // namespace accentshift
