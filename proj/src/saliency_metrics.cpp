#include "gazekit/saliency_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "gazekit/error.hpp"

namespace gazekit {

namespace {

constexpr double kMinStd = 1e-12;

void require_same_shape(std::size_t w1, std::size_t h1, std::size_t w2, std::size_t h2) {
    if (w1 != w2 || h1 != h2) {
        throw Error(ErrorCode::ShapeMismatch, std::to_string(w1) + "x" + std::to_string(h1) + " vs " +
                                                  std::to_string(w2) + "x" + std::to_string(h2));
    }
}

struct Moments {
    double mean;
    double std;
};

Moments population_moments(std::span<const double> v) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / n)};
}

void split_by_fixation(std::span<const double> pred, const FixationMap& fix, std::vector<double>& positives,
                       std::vector<double>& negatives) {
    for (std::size_t i = 0; i < pred.size(); ++i) {
        (fix.fixated(i) ? positives : negatives).push_back(pred[i]);
    }
    if (positives.empty()) throw Error(ErrorCode::NoFixations, "fixation map is empty");
    if (negatives.empty()) throw Error(ErrorCode::AllFixated, "every cell is fixated");
}

}  // namespace

double cc(const Grid& pred, const Grid& gt) {
    require_same_shape(pred.width, pred.height, gt.width, gt.height);
    const auto a = population_moments(pred.values);
    const auto b = population_moments(gt.values);
    if (a.std < kMinStd || b.std < kMinStd) throw Error(ErrorCode::ZeroVariance, "CC undefined for a constant map");
    double cov = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) cov += (pred.values[i] - a.mean) * (gt.values[i] - b.mean);
    cov /= static_cast<double>(pred.size());
    return std::clamp(cov / (a.std * b.std), -1.0, 1.0);
}

double kl_div(const GazeMap& gt, const GazeMap& pred, double floor) {
    require_same_shape(gt.width(), gt.height(), pred.width(), pred.height());
    if (!(floor > 0.0)) throw Error(ErrorCode::InvalidArgument, "KL floor must be positive");
    const auto p = pred.values();
    const auto g = gt.values();
    double mass = 0.0;
    for (double x : p) mass += std::max(x, floor);
    double kl = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] > 0.0) kl += g[i] * std::log(g[i] / (std::max(p[i], floor) / mass));
    }
    return std::max(kl, 0.0);
}

double sim(const GazeMap& pred, const GazeMap& gt) {
    require_same_shape(pred.width(), pred.height(), gt.width(), gt.height());
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) s += std::min(pred.values()[i], gt.values()[i]);
    return std::clamp(s, 0.0, 1.0);
}

double nss(const Grid& pred, const FixationMap& fix) {
    require_same_shape(pred.width, pred.height, fix.width(), fix.height());
    if (fix.count() == 0) throw Error(ErrorCode::NoFixations, "fixation map is empty");
    const auto m = population_moments(pred.values);
    if (m.std < kMinStd) throw Error(ErrorCode::ZeroVariance, "NSS undefined for a constant map");
    double total = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (fix.fixated(i)) {
            total += (pred.values[i] - m.mean) / m.std;
            ++n;
        }
    }
    return total / static_cast<double>(n);
}

double roc_area(std::span<const double> positives, std::span<const double> negatives) {
    if (positives.empty()) throw Error(ErrorCode::NoFixations, "no positive samples");
    if (negatives.empty()) throw Error(ErrorCode::AllFixated, "no negative samples");
    std::vector<double> pos(positives.begin(), positives.end());
    std::vector<double> neg(negatives.begin(), negatives.end());
    std::sort(pos.begin(), pos.end(), std::greater<>());
    std::sort(neg.begin(), neg.end());
    const double np = static_cast<double>(pos.size());
    const double nn = static_cast<double>(neg.size());

    double area = 0.0;
    double prev_tpr = 0.0;
    double prev_fpr = 0.0;
    std::size_t i = 0;
    while (i < pos.size()) {
        const double threshold = pos[i];
        while (i < pos.size() && pos[i] == threshold) ++i;
        const double tpr = static_cast<double>(i) / np;
        const auto below = std::lower_bound(neg.begin(), neg.end(), threshold) - neg.begin();
        const double fpr = (nn - static_cast<double>(below)) / nn;
        area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        prev_tpr = tpr;
        prev_fpr = fpr;
    }
    area += (1.0 - prev_fpr) * (1.0 + prev_tpr) / 2.0;
    return area;
}

double auc_judd(const Grid& pred, const FixationMap& fix) {
    require_same_shape(pred.width, pred.height, fix.width(), fix.height());
    std::vector<double> positives, negatives;
    split_by_fixation(pred.values, fix, positives, negatives);
    return roc_area(positives, negatives);
}

double auc_borji(const Grid& pred, const FixationMap& fix, std::size_t n_splits, std::uint64_t seed) {
    require_same_shape(pred.width, pred.height, fix.width(), fix.height());
    if (n_splits == 0) throw Error(ErrorCode::InvalidArgument, "n_splits must be positive");
    std::vector<double> positives, negatives;
    split_by_fixation(pred.values, fix, positives, negatives);
    if (negatives.size() < positives.size()) {
        throw Error(ErrorCode::InsufficientNegatives,
                    std::to_string(negatives.size()) + " non-fixated cells for " + std::to_string(positives.size()) +
                        " fixations");
    }
    std::mt19937_64 rng(seed);
    std::vector<double> pool = negatives;
    std::vector<double> sample(positives.size());
    double total = 0.0;
    for (std::size_t split = 0; split < n_splits; ++split) {
        // Partial Fisher-Yates over the pool; the pool is a permutation, so
        // every trial is an unbiased draw without replacement.
        for (std::size_t k = 0; k < sample.size(); ++k) {
            std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
            std::swap(pool[k], pool[pick(rng)]);
            sample[k] = pool[k];
        }
        total += roc_area(positives, sample);
    }
    return total / static_cast<double>(n_splits);
}

std::vector<double> radar_normalize(std::span<const double> scores, bool invert) {
    if (scores.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two models to normalize");
    const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
    if (*hi == *lo) throw Error(ErrorCode::DegenerateRange, "all models share the same value");
    std::vector<double> out(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double x = (scores[i] - *lo) / (*hi - *lo);
        out[i] = invert ? 1.0 - x : x;
    }
    return out;
}

}  // namespace gazekit
