#include "gazekit/tables.hpp"

#include <charconv>
#include <cmath>

#include "gazekit/error.hpp"

namespace gazekit {

namespace {

constexpr int kDigits = 9;

}  // namespace

CsvTable manifest_table(const CurationManifest& manifest) {
    CsvTable t;
    t.header = kManifestHeader;
    for (const auto& p : manifest.rows) {
        t.rows.push_back({p.video_id, std::to_string(p.anchor), std::to_string(p.target), std::to_string(p.delta),
                          format_number(p.anchor_peak_kl, kDigits), format_number(p.pair_kl, kDigits),
                          p.anchor_map_path, p.target_map_path, p.caption});
    }
    return t;
}

std::string format_manifest(const CurationManifest& manifest) { return format_csv_table(manifest_table(manifest)); }

std::string format_metrics_table(const std::vector<MetricsRow>& rows) {
    CsvTable t;
    t.header = {"id"};
    for (auto c : kMetricColumns) t.header.emplace_back(c);

    std::array<double, kMetricCount> sums{};
    std::array<std::size_t, kMetricCount> counts{};
    for (const auto& row : rows) {
        CsvRow out{row.id};
        for (std::size_t k = 0; k < kMetricCount; ++k) {
            const auto& cell = row.cells[k];
            if (cell.value && std::isfinite(*cell.value)) {
                out.push_back(format_number(*cell.value, kDigits));
                sums[k] += *cell.value;
                ++counts[k];
            } else {
                out.push_back(cell.note.empty() ? "NA" : cell.note);
            }
        }
        t.rows.push_back(std::move(out));
    }
    CsvRow mean{"mean"};
    for (std::size_t k = 0; k < kMetricCount; ++k) {
        mean.push_back(counts[k] ? format_number(sums[k] / static_cast<double>(counts[k]), kDigits) : "NA");
    }
    t.rows.push_back(std::move(mean));
    return format_csv_table(t);
}

std::array<std::optional<double>, kMetricCount> read_metrics_means(std::string_view csv_text) {
    const auto t = parse_csv_table(csv_text);
    const auto id_col = t.column("id");
    if (id_col == std::string::npos) throw Error(ErrorCode::ParseError, "metrics table has no id column");
    std::array<std::size_t, kMetricCount> cols{};
    for (std::size_t k = 0; k < kMetricCount; ++k) {
        cols[k] = t.column(kMetricColumns[k]);
        if (cols[k] == std::string::npos) {
            throw Error(ErrorCode::ParseError, "metrics table lacks column '" + std::string(kMetricColumns[k]) + "'");
        }
    }
    for (const auto& row : t.rows) {
        if (row[id_col] != "mean") continue;
        std::array<std::optional<double>, kMetricCount> means;
        for (std::size_t k = 0; k < kMetricCount; ++k) {
            const auto& s = row[cols[k]];
            double v = 0.0;
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(v)) means[k] = v;
        }
        return means;
    }
    throw Error(ErrorCode::ParseError, "metrics table has no mean row");
}

}  // namespace gazekit
