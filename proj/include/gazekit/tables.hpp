#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gazekit/csv.hpp"
#include "gazekit/curation.hpp"

namespace gazekit {

inline const CsvRow kManifestHeader = {"video_id", "anchor",          "target",          "delta",  "anchor_peak_kl",
                                       "pair_kl",  "anchor_map_path", "target_map_path", "caption"};

/// KL columns carry 9 significant digits.
CsvTable manifest_table(const CurationManifest& manifest);
std::string format_manifest(const CurationManifest& manifest);

inline constexpr std::size_t kMetricCount = 6;
inline constexpr std::array<std::string_view, kMetricCount> kMetricColumns = {"cc",    "kl",    "sim",
                                                                               "auc_j", "auc_b", "nss"};

/// One cell of a metrics table: a value, or the name of the error/skip reason.
struct MetricCell {
    std::optional<double> value;
    std::string note;
};

struct MetricsRow {
    std::string id;
    std::array<MetricCell, kMetricCount> cells;
};

/// Header id,cc,kl,sim,auc_j,auc_b,nss; one row per frame then a "mean" row
/// averaging the finite values of each column ("NA" when a column has none).
std::string format_metrics_table(const std::vector<MetricsRow>& rows);

/// Column means from the "mean" row of a metrics table; missing values are empty.
std::array<std::optional<double>, kMetricCount> read_metrics_means(std::string_view csv_text);

}  // namespace gazekit
