#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gazekit/grid.hpp"

namespace gazekit {

/// Per-frame gaze maps of one video, in frame order. `frame_paths` is optional
/// and, when present, parallel to `maps`.
struct GazeSequence {
    std::string video_id;
    std::vector<GazeMap> maps;
    std::vector<std::string> frame_paths;
};

struct CurationParams {
    std::size_t delta_min = 3;
    std::size_t delta_max = 18;
    std::size_t min_frames = 50;
    std::size_t top_k = 2;
    double peak_floor = 0.0;

    /// Throws InvalidArgument unless 1 <= delta_min <= delta_max, min_frames >= 2, top_k >= 1, peak_floor >= 0.
    void validate() const;
};

/// One selected (anchor, target) sample.
struct FramePair {
    std::string video_id;
    std::size_t anchor = 0;
    std::size_t target = 0;
    std::size_t delta = 0;
    double anchor_peak_kl = 0.0;  ///< consecutive-frame KL at the anchor
    double pair_kl = 0.0;         ///< KL(anchor map || target map)
    std::string anchor_map_path;
    std::string target_map_path;
    std::string caption;

    bool operator==(const FramePair&) const = default;
};

struct TargetChoice {
    std::size_t target = 0;
    double pair_kl = 0.0;
};

struct VideoSummary {
    std::string video_id;
    std::size_t frames = 0;
    std::size_t pairs = 0;
};

struct CurationManifest {
    std::vector<FramePair> rows;
    std::vector<VideoSummary> videos;

    std::size_t total() const noexcept { return rows.size(); }
};

/// curve[t] = kl_div(maps[t], maps[t + 1]). TooShort for fewer than two frames.
std::vector<double> kl_curve(const GazeSequence& seq);

/// Strict interior local maxima of the curve at or above `peak_floor`, ascending.
std::vector<std::size_t> find_anchors(std::span<const double> curve, double peak_floor);

/// The offset in [delta_min, delta_max] that maximizes KL from the anchor map;
/// ties go to the smallest offset. Empty when no offset fits in the sequence.
std::optional<TargetChoice> select_target(const GazeSequence& seq, std::size_t anchor, const CurationParams& params);

/// Ranks anchor/target candidates by pair KL (descending, ties by anchor index),
/// keeps greedily those whose anchors lie >= delta_max frames from every kept
/// anchor, and returns at most top_k pairs ordered by anchor.
std::vector<FramePair> curate_video(const GazeSequence& seq, const CurationParams& params);

CurationManifest curate_corpus(std::span<const GazeSequence> sequences, const CurationParams& params);

}  // namespace gazekit
