#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gazekit/grid.hpp"

namespace gazekit {

using Vector = std::vector<double>;

inline constexpr std::size_t kSharedEmbeddingDim = 256;
inline constexpr double kDefaultTemperature = 0.07;

/// Affine map weight * x + bias; weight is row-major out_dim x in_dim.
struct ProjectionHead {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    std::vector<double> weight;
    std::vector<double> bias;

    ProjectionHead() = default;
    ProjectionHead(std::size_t in, std::size_t out, std::vector<double> w, std::vector<double> b);

    /// Entries uniform in [-k, k], k = 1 / sqrt(in_dim), from a seeded generator.
    static ProjectionHead random(std::size_t in_dim, std::size_t out_dim, std::uint64_t seed);
};

/// B >= 1 embedding rows of one common, finite dimension.
class EmbeddingBatch {
public:
    explicit EmbeddingBatch(std::vector<Vector> rows);

    std::size_t size() const noexcept { return rows_.size(); }
    std::size_t dim() const noexcept { return rows_.front().size(); }
    const Vector& operator[](std::size_t i) const { return rows_[i]; }
    const std::vector<Vector>& rows() const noexcept { return rows_; }

private:
    std::vector<Vector> rows_;
};

/// out[c] = sum_ij weights(i, j) * features[c, i, j]
Vector gaze_weighted_pool(const FeatureGrid& features, const GazeMap& weights);
/// Same contraction with unconstrained weights (linearity checks, gradient paths).
Vector gaze_weighted_pool(const FeatureGrid& features, const Grid& weights);

Vector project(const ProjectionHead& head, std::span<const double> input);

double cosine_sim(std::span<const double> a, std::span<const double> b);

/// Contrastive loss with the visual rows as anchors and in-batch text negatives.
/// `symmetric` averages it with the text-anchored direction.
double info_nce(const EmbeddingBatch& vis, const EmbeddingBatch& txt, double tau = kDefaultTemperature,
                bool symmetric = false);

struct InfoNceGrad {
    std::vector<Vector> vis;
    std::vector<Vector> txt;
};

InfoNceGrad grad_info_nce(const EmbeddingBatch& vis, const EmbeddingBatch& txt, double tau = kDefaultTemperature,
                          bool symmetric = false);

/// weight^T * grad_out.
Vector project_backward(const ProjectionHead& head, std::span<const double> grad_out);

/// d(pool)/d(weights) contracted with grad_pooled: out(i, j) = sum_c grad_pooled[c] * features[c, i, j].
Grid pool_backward_weights(const FeatureGrid& features, std::span<const double> grad_pooled);

/// One training batch of the alignment path: features pooled by per-sample
/// gaze weights, projected, and contrasted against projected text features.
struct AlignmentBatch {
    std::vector<FeatureGrid> features;
    std::vector<Grid> gaze_weights;
    std::vector<Vector> text_features;
};

struct AlignmentResult {
    double loss = 0.0;
    std::vector<Grid> grad_weights;  ///< d loss / d gaze_weights[b]
};

AlignmentResult alignment_loss(const AlignmentBatch& batch, const ProjectionHead& vis_head,
                               const ProjectionHead& txt_head, double tau = kDefaultTemperature);

}  // namespace gazekit
