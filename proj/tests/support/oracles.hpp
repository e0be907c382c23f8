// Independent reference implementations shared by the unit and acceptance tests.
// They follow the definitions literally and favour clarity over speed.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gazekit/curation.hpp"
#include "gazekit/grid.hpp"
#include "gazekit/saliency_metrics.hpp"

namespace oracle {

using gazekit::GazeMap;
using gazekit::Grid;

inline Grid random_grid(std::mt19937_64& rng, std::size_t w, std::size_t h, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Grid g(w, h);
    for (double& v : g.values) v = u(rng);
    return g;
}

inline GazeMap random_map(std::mt19937_64& rng, std::size_t w, std::size_t h) {
    auto g = random_grid(rng, w, h, 0.01, 1.0);
    double s = 0.0;
    for (double v : g.values) s += v;
    for (double& v : g.values) v /= s;
    return GazeMap::from_values(g);
}

// Reflect an index into [0, n) by bouncing off the half-sample edges one step at a time.
inline long long bounce(long long i, long long n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

// Full 2-D convolution with a (2r+1)^2 Gaussian stencil normalized as a whole.
inline Grid blur_2d(const Grid& g, double sigma) {
    const long long r = static_cast<long long>(std::ceil(3.0 * sigma));
    std::vector<std::vector<double>> k(2 * r + 1, std::vector<double>(2 * r + 1));
    double total = 0.0;
    for (long long a = -r; a <= r; ++a) {
        for (long long b = -r; b <= r; ++b) {
            k[a + r][b + r] = std::exp(-static_cast<double>(a * a + b * b) / (2.0 * sigma * sigma));
            total += k[a + r][b + r];
        }
    }
    const long long w = static_cast<long long>(g.width), h = static_cast<long long>(g.height);
    Grid out(g.width, g.height, 0.0);
    for (long long row = 0; row < h; ++row) {
        for (long long col = 0; col < w; ++col) {
            double acc = 0.0;
            for (long long a = -r; a <= r; ++a) {
                for (long long b = -r; b <= r; ++b) {
                    acc += k[a + r][b + r] / total * g.at(bounce(row + a, h), bounce(col + b, w));
                }
            }
            out.at(row, col) = acc;
        }
    }
    return out;
}

inline double interval_overlap(double a0, double a1, double b0, double b1) {
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

// Output cell mass = sum of source masses times the geometric overlap of the
// source cell with the output cell's footprint in source coordinates.
inline Grid resample_geometric(const Grid& g, std::size_t ow, std::size_t oh) {
    Grid out(ow, oh, 0.0);
    const double sx = static_cast<double>(g.width) / static_cast<double>(ow);
    const double sy = static_cast<double>(g.height) / static_cast<double>(oh);
    for (std::size_t R = 0; R < oh; ++R) {
        for (std::size_t C = 0; C < ow; ++C) {
            double acc = 0.0;
            for (std::size_t r = 0; r < g.height; ++r) {
                const double oy = interval_overlap(R * sy, (R + 1) * sy, r, r + 1.0);
                if (oy == 0.0) continue;
                for (std::size_t c = 0; c < g.width; ++c) {
                    acc += g.at(r, c) * oy * interval_overlap(C * sx, (C + 1) * sx, c, c + 1.0);
                }
            }
            out.at(R, C) = acc;
        }
    }
    return out;
}

// ROC area by explicit enumeration: every distinct positive value is a
// threshold; TPR/FPR count values >= threshold; the curve is closed at (0,0)
// and (1,1) and integrated with trapezoids.
inline double roc_enumerate(const std::vector<double>& pos, const std::vector<double>& neg) {
    std::set<double, std::greater<>> thresholds(pos.begin(), pos.end());
    std::vector<std::pair<double, double>> pts = {{0.0, 0.0}};
    for (double t : thresholds) {
        double tp = 0, fp = 0;
        for (double v : pos) tp += v >= t;
        for (double v : neg) fp += v >= t;
        pts.emplace_back(fp / neg.size(), tp / pos.size());
    }
    pts.emplace_back(1.0, 1.0);
    double area = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        area += (pts[i].first - pts[i - 1].first) * (pts[i].second + pts[i - 1].second) / 2.0;
    }
    return area;
}

struct Pair {
    std::size_t video = 0;
    std::size_t anchor = 0;
    std::size_t target = 0;
    double pair_kl = 0.0;
    double anchor_kl = 0.0;
};

// Enumerates every (anchor, delta) combination and applies the selection rules
// one at a time: strict peaks, best delta with smallest-delta ties, then
// repeated extraction of the best remaining compatible candidate.
inline std::vector<Pair> curate_brute(const std::vector<GazeMap>& maps, const gazekit::CurationParams& p,
                                      std::size_t video = 0) {
    const std::size_t n = maps.size();
    if (n < p.min_frames || n < 2) return {};
    std::vector<double> curve;
    for (std::size_t t = 0; t + 1 < n; ++t) curve.push_back(gazekit::kl_div(maps[t], maps[t + 1]));

    std::vector<Pair> cands;
    for (std::size_t t = 1; t + 1 < curve.size(); ++t) {
        if (!(curve[t] > curve[t - 1] && curve[t] > curve[t + 1] && curve[t] >= p.peak_floor)) continue;
        bool found = false;
        Pair best{video, t, 0, -1.0, curve[t]};
        for (std::size_t d = p.delta_min; d <= p.delta_max; ++d) {
            if (t + d >= n) break;
            const double kl = gazekit::kl_div(maps[t], maps[t + d]);
            if (!found || kl > best.pair_kl) {
                best.target = t + d;
                best.pair_kl = kl;
                found = true;
            }
        }
        if (found) cands.push_back(best);
    }

    std::vector<Pair> kept;
    std::vector<bool> used(cands.size(), false);
    while (kept.size() < p.top_k) {
        std::ptrdiff_t pick = -1;
        for (std::size_t i = 0; i < cands.size(); ++i) {
            if (used[i]) continue;
            bool compatible = true;
            for (const auto& k : kept) {
                const std::size_t gap = k.anchor > cands[i].anchor ? k.anchor - cands[i].anchor : cands[i].anchor - k.anchor;
                if (gap < p.delta_max) compatible = false;
            }
            if (!compatible) continue;
            if (pick < 0 || cands[i].pair_kl > cands[pick].pair_kl ||
                (cands[i].pair_kl == cands[pick].pair_kl && cands[i].anchor < cands[pick].anchor)) {
                pick = static_cast<std::ptrdiff_t>(i);
            }
        }
        if (pick < 0) break;
        used[pick] = true;
        kept.push_back(cands[pick]);
    }
    std::sort(kept.begin(), kept.end(), [](const Pair& a, const Pair& b) { return a.anchor < b.anchor; });
    return kept;
}

// Random sequence whose frames are drawn from a small palette of maps, so
// equal KL values (and hence tie-breaking) occur regularly.
inline std::vector<GazeMap> random_sequence(std::mt19937_64& rng, std::size_t frames, std::size_t side) {
    std::uniform_int_distribution<std::size_t> palette_size(2, 12);
    std::vector<GazeMap> palette;
    const std::size_t k = palette_size(rng);
    for (std::size_t i = 0; i < k; ++i) palette.push_back(random_map(rng, side, side));
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    std::bernoulli_distribution fresh(0.3);
    std::vector<GazeMap> maps;
    for (std::size_t t = 0; t < frames; ++t) {
        maps.push_back(fresh(rng) ? random_map(rng, side, side) : palette[pick(rng)]);
    }
    return maps;
}

// Frames 0..switch_at-1 concentrate on cell A, the rest on cell B.
inline std::vector<GazeMap> two_regime_sequence(std::size_t frames, std::size_t switch_at, std::size_t side = 8) {
    std::vector<GazeMap> maps;
    for (std::size_t t = 0; t < frames; ++t) {
        maps.push_back(t < switch_at ? GazeMap::delta(side, side, 1, 1) : GazeMap::delta(side, side, side - 2, side - 2));
    }
    return maps;
}

}  // namespace oracle
