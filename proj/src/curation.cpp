#include "gazekit/curation.hpp"

#include <algorithm>
#include <string>

#include "gazekit/error.hpp"
#include "gazekit/saliency_metrics.hpp"

namespace gazekit {

namespace {

void check_sequence(const GazeSequence& seq) {
    if (seq.maps.empty()) throw Error(ErrorCode::TooShort, "video '" + seq.video_id + "' has no frames");
    const auto w = seq.maps.front().width();
    const auto h = seq.maps.front().height();
    for (const auto& m : seq.maps) {
        if (m.width() != w || m.height() != h) {
            throw Error(ErrorCode::ShapeMismatch, "video '" + seq.video_id + "' mixes frame sizes");
        }
    }
    if (!seq.frame_paths.empty() && seq.frame_paths.size() != seq.maps.size()) {
        throw Error(ErrorCode::ShapeMismatch, "video '" + seq.video_id + "' frame paths do not match frames");
    }
}

std::string path_or_empty(const GazeSequence& seq, std::size_t i) {
    return seq.frame_paths.empty() ? std::string() : seq.frame_paths[i];
}

}  // namespace

void CurationParams::validate() const {
    if (delta_min < 1 || delta_min > delta_max) {
        throw Error(ErrorCode::InvalidArgument, "need 1 <= delta_min <= delta_max");
    }
    if (min_frames < 2) throw Error(ErrorCode::InvalidArgument, "min_frames must be at least 2");
    if (top_k < 1) throw Error(ErrorCode::InvalidArgument, "top_k must be at least 1");
    if (!(peak_floor >= 0.0)) throw Error(ErrorCode::InvalidArgument, "peak_floor must be nonnegative");
}

std::vector<double> kl_curve(const GazeSequence& seq) {
    check_sequence(seq);
    if (seq.maps.size() < 2) throw Error(ErrorCode::TooShort, "KL curve needs at least two frames");
    std::vector<double> curve(seq.maps.size() - 1);
    for (std::size_t t = 0; t + 1 < seq.maps.size(); ++t) curve[t] = kl_div(seq.maps[t], seq.maps[t + 1]);
    return curve;
}

std::vector<std::size_t> find_anchors(std::span<const double> curve, double peak_floor) {
    std::vector<std::size_t> anchors;
    for (std::size_t t = 1; t + 1 < curve.size(); ++t) {
        if (curve[t] > curve[t - 1] && curve[t] > curve[t + 1] && curve[t] >= peak_floor) anchors.push_back(t);
    }
    return anchors;
}

std::optional<TargetChoice> select_target(const GazeSequence& seq, std::size_t anchor, const CurationParams& params) {
    check_sequence(seq);
    if (anchor >= seq.maps.size()) throw Error(ErrorCode::InvalidArgument, "anchor outside the sequence");
    std::optional<TargetChoice> best;
    for (std::size_t delta = params.delta_min; delta <= params.delta_max; ++delta) {
        const std::size_t target = anchor + delta;
        if (target >= seq.maps.size()) break;
        const double kl = kl_div(seq.maps[anchor], seq.maps[target]);
        if (!best || kl > best->pair_kl) best = TargetChoice{target, kl};
    }
    return best;
}

std::vector<FramePair> curate_video(const GazeSequence& seq, const CurationParams& params) {
    params.validate();
    check_sequence(seq);
    if (seq.maps.size() < params.min_frames) return {};

    const auto curve = kl_curve(seq);
    std::vector<FramePair> candidates;
    for (std::size_t anchor : find_anchors(curve, params.peak_floor)) {
        const auto choice = select_target(seq, anchor, params);
        if (!choice) continue;
        FramePair p;
        p.video_id = seq.video_id;
        p.anchor = anchor;
        p.target = choice->target;
        p.delta = choice->target - anchor;
        p.anchor_peak_kl = curve[anchor];
        p.pair_kl = choice->pair_kl;
        p.anchor_map_path = path_or_empty(seq, anchor);
        p.target_map_path = path_or_empty(seq, choice->target);
        candidates.push_back(std::move(p));
    }
    std::stable_sort(candidates.begin(), candidates.end(), [](const FramePair& a, const FramePair& b) {
        if (a.pair_kl != b.pair_kl) return a.pair_kl > b.pair_kl;
        return a.anchor < b.anchor;
    });

    std::vector<FramePair> kept;
    for (auto& c : candidates) {
        if (kept.size() == params.top_k) break;
        const bool separated = std::all_of(kept.begin(), kept.end(), [&](const FramePair& k) {
            const auto gap = c.anchor > k.anchor ? c.anchor - k.anchor : k.anchor - c.anchor;
            return gap >= params.delta_max;
        });
        if (separated) kept.push_back(std::move(c));
    }
    std::sort(kept.begin(), kept.end(), [](const FramePair& a, const FramePair& b) { return a.anchor < b.anchor; });
    return kept;
}

CurationManifest curate_corpus(std::span<const GazeSequence> sequences, const CurationParams& params) {
    params.validate();
    CurationManifest manifest;
    for (const auto& seq : sequences) {
        auto pairs = curate_video(seq, params);
        manifest.videos.push_back({seq.video_id, seq.maps.size(), pairs.size()});
        for (auto& p : pairs) manifest.rows.push_back(std::move(p));
    }
    return manifest;
}

}  // namespace gazekit
