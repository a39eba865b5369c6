// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "lesioneval/evaluate.hpp"
#include "lesioneval/ranking.hpp"

namespace lesioneval {

/// Long-format metrics table, one row per (case, algorithm). Numbers use
/// shortest round-trip formatting so re-runs are byte-identical.
std::string metrics_to_csv(const std::vector<CaseMetrics>& rows);
/// Inverse of metrics_to_csv for the columns the ranking consumes.
std::vector<AlgorithmCases> algorithm_cases_from_csv(const std::string& csv_text);
/// Patient-level flags per algorithm, from the same table.
std::vector<std::pair<std::string, std::vector<CaseFlags>>> case_flags_from_csv(
    const std::string& csv_text);

/// Leaderboard mirroring the official-results layout: per-subset means with
/// ranks in parentheses, per-metric average rank, weighted rank, position.
/// Values are printed at 4 decimals (half-even); raw values go to JSON.
std::string leaderboard_to_csv(const RankTable& table);
std::string rank_table_to_json(const RankTable& table);

std::string bootstrap_to_json(const BootstrapSummary& summary);
std::string bootstrap_to_csv(const BootstrapSummary& summary);

std::string sweep_to_json(const std::vector<SweepPoint>& sensitivity,
                          const std::vector<std::pair<std::string, TaxonomyCounts>>& taxonomy,
                          const std::vector<std::pair<std::string, DecileReport>>& deciles);

std::string classification_to_json(
    const std::vector<std::pair<std::string, ClassificationSummary>>& per_algorithm);

/// Overlap records round-trip (one JSON file per case x algorithm) so sweeps
/// can run without re-reading the volumes.
std::string overlap_record_to_json(const CaseOverlapRecord& record);
CaseOverlapRecord overlap_record_from_json(const std::string& json_text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Shortest round-trip decimal form of a double (deterministic emission).
std::string format_double(double v);
/// Fixed 4-decimal form, IEEE round-half-even.
std::string format_fixed4(double v);

}  // namespace lesioneval
