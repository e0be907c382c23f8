#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gazekit/curation.hpp"
#include "gazekit/objectives.hpp"

namespace gazekit {

/// Process exit statuses shared by every command.
enum ExitStatus : int { kExitOk = 0, kExitCheckFailed = 1, kExitInputError = 2 };

struct EvaluateOptions {
    std::filesystem::path pred_dir;
    std::filesystem::path gt_dir;
    std::optional<std::filesystem::path> fix_dir;
    std::filesystem::path out;
    std::uint64_t seed = 0;
    std::size_t n_splits = 100;
};

/// Pairs map files by name and writes a metrics table.
int cmd_evaluate(const EvaluateOptions& opts, std::ostream& log, std::ostream& err);

struct CurateOptions {
    std::filesystem::path input_dir;  ///< one subdirectory of frame maps per video
    CurationParams params;
    std::filesystem::path out;
};

/// Frame order within a video is lexicographic filename order; video order is
/// lexicographic subdirectory order.
int cmd_curate(const CurateOptions& opts, std::ostream& log, std::ostream& err);

struct CaptionEvalOptions {
    std::filesystem::path candidates;   ///< one candidate per line
    std::filesystem::path references;   ///< line-aligned; multiple references separated by TAB
    std::optional<std::filesystem::path> corpus;  ///< reference sets for CIDEr; defaults to `references`
    std::optional<std::filesystem::path> out;     ///< stdout when absent
    bool per_field = false;
};

int cmd_caption_eval(const CaptionEvalOptions& opts, std::ostream& out, std::ostream& err);

struct GradCheckOptions {
    std::uint64_t seed = 0;
    std::size_t trials = 100;
    bool corrupt = false;
};

int cmd_grad_check(const GradCheckOptions& opts, std::ostream& out);

struct FitDemoOptions {
    std::size_t grid_size = 16;
    std::size_t steps = 500;
    double lr = 1.0;
    bool hinge = false;
    std::string target = "delta";  ///< "delta" (centre cell) or "uniform"
    std::optional<std::filesystem::path> target_map;  ///< overrides `target`
    GazeLossConfig cfg;
    std::optional<std::filesystem::path> out;  ///< stdout when absent
};

int cmd_fit_demo(const FitDemoOptions& opts, std::ostream& out, std::ostream& err);

struct ReportOptions {
    std::vector<std::filesystem::path> tables;
    std::vector<std::string> labels;  ///< defaults to the table file stems
    std::filesystem::path out;
};

int cmd_report(const ReportOptions& opts, std::ostream& log, std::ostream& err);

struct ReviewOptions {
    std::filesystem::path manifest;
    std::filesystem::path decisions_out;  ///< resumes from this file when it exists
};

/// Batch review loop. Per row: a(ccept), r(eject), e(dit) followed by the
/// corrected caption line, or q(uit). Rows whose caption does not parse must
/// be edited or rejected. Progress is written after every decision.
int cmd_review(const ReviewOptions& opts, std::istream& in, std::ostream& out, std::ostream& err);

struct ValidateCaptionsOptions {
    std::filesystem::path manifest;
};

/// Reports rows whose caption column fails to parse; exit 1 when any does.
int cmd_validate_captions(const ValidateCaptionsOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace gazekit
