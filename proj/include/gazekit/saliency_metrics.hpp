#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gazekit/grid.hpp"

namespace gazekit {

/// Floor applied to predicted probabilities before KL evaluation.
inline constexpr double kKlFloor = 1e-8;

/// The six-metric tuple of the saliency benchmark.
struct MetricReport {
    double cc = 0.0;
    double kl = 0.0;
    double sim = 0.0;
    double auc_judd = 0.0;
    double auc_borji = 0.0;
    double nss = 0.0;
};

// CC, NSS and the AUCs depend only on the prediction's values (ranking or
// standardization), so they accept raw grids as well as gaze maps.

/// Pearson correlation with population statistics. ZeroVariance on constant input.
double cc(const Grid& pred, const Grid& gt);
inline double cc(const GazeMap& pred, const GazeMap& gt) { return cc(pred.grid(), gt.grid()); }

/// KL(gt || pred'), pred' = max(pred, floor) renormalized. Cells with gt = 0 contribute 0.
double kl_div(const GazeMap& gt, const GazeMap& pred, double floor = kKlFloor);

/// Histogram intersection.
double sim(const GazeMap& pred, const GazeMap& gt);

/// Mean standardized prediction at fixated cells.
double nss(const Grid& pred, const FixationMap& fix);
inline double nss(const GazeMap& pred, const FixationMap& fix) { return nss(pred.grid(), fix); }

/// ROC area; thresholds are the distinct fixated prediction values and a
/// cell counts as positive when its value is >= the threshold.
double auc_judd(const Grid& pred, const FixationMap& fix);
inline double auc_judd(const GazeMap& pred, const FixationMap& fix) { return auc_judd(pred.grid(), fix); }

/// Averages `n_splits` ROC areas, each using as many negatives as there are
/// fixations, drawn without replacement from the non-fixated cells.
double auc_borji(const Grid& pred, const FixationMap& fix, std::size_t n_splits, std::uint64_t seed);
inline double auc_borji(const GazeMap& pred, const FixationMap& fix, std::size_t n_splits, std::uint64_t seed) {
    return auc_borji(pred.grid(), fix, n_splits, seed);
}

/// ROC area of positive scores against an explicit negative population,
/// using the same threshold convention as auc_judd.
double roc_area(std::span<const double> positives, std::span<const double> negatives);

/// Min-max scaling to [0, 1] across models; `invert` maps x to 1 - x (lower-is-better metrics).
std::vector<double> radar_normalize(std::span<const double> scores, bool invert);

}  // namespace gazekit
