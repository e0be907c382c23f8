#include "gazekit/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gazekit/error.hpp"

namespace gazekit {

namespace {

constexpr double kMinNorm = 1e-8;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double checked_norm(std::span<const double> v) {
    const double n = std::sqrt(dot(v, v));
    if (n < kMinNorm) throw Error(ErrorCode::DegenerateNorm, "vector norm below 1e-8");
    return n;
}

void check_batches(const EmbeddingBatch& vis, const EmbeddingBatch& txt, double tau) {
    if (vis.size() != txt.size() || vis.dim() != txt.dim()) {
        throw Error(ErrorCode::ShapeMismatch, "visual and text batches differ in shape");
    }
    if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "temperature must be positive");
}

// Row-softmax over logits[i][*]; returns log-sum-exp per row.
std::vector<double> row_log_sum_exp(const std::vector<Vector>& logits) {
    std::vector<double> lse(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double m = *std::max_element(logits[i].begin(), logits[i].end());
        double s = 0.0;
        for (double x : logits[i]) s += std::exp(x - m);
        lse[i] = m + std::log(s);
    }
    return lse;
}

// logits[i][j] = cos(anchors_i, others_j) / tau
std::vector<Vector> similarity_logits(const EmbeddingBatch& anchors, const EmbeddingBatch& others, double tau) {
    std::vector<Vector> logits(anchors.size(), Vector(others.size()));
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        for (std::size_t j = 0; j < others.size(); ++j) logits[i][j] = cosine_sim(anchors[i], others[j]) / tau;
    }
    return logits;
}

double one_directional(const EmbeddingBatch& anchors, const EmbeddingBatch& others, double tau) {
    const auto logits = similarity_logits(anchors, others, tau);
    const auto lse = row_log_sum_exp(logits);
    double loss = 0.0;
    for (std::size_t i = 0; i < anchors.size(); ++i) loss += lse[i] - logits[i][i];
    return std::max(loss / static_cast<double>(anchors.size()), 0.0);
}

// Accumulates scale * d cos(a, b) into grad_a and grad_b.
void accumulate_cosine_grad(const Vector& a, const Vector& b, double scale, Vector& grad_a, Vector& grad_b) {
    const double na = checked_norm(a);
    const double nb = checked_norm(b);
    const double c = dot(a, b) / (na * nb);
    for (std::size_t k = 0; k < a.size(); ++k) {
        grad_a[k] += scale * (b[k] / (na * nb) - c * a[k] / (na * na));
        grad_b[k] += scale * (a[k] / (na * nb) - c * b[k] / (nb * nb));
    }
}

void one_directional_grad(const EmbeddingBatch& anchors, const EmbeddingBatch& others, double tau, double weight,
                          std::vector<Vector>& grad_anchors, std::vector<Vector>& grad_others) {
    const auto logits = similarity_logits(anchors, others, tau);
    const auto lse = row_log_sum_exp(logits);
    const double inv_b = 1.0 / static_cast<double>(anchors.size());
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        for (std::size_t j = 0; j < others.size(); ++j) {
            const double prob = std::exp(logits[i][j] - lse[i]);
            const double d_logit = weight * inv_b * (prob - (i == j ? 1.0 : 0.0));
            accumulate_cosine_grad(anchors[i], others[j], d_logit / tau, grad_anchors[i], grad_others[j]);
        }
    }
}

}  // namespace

ProjectionHead::ProjectionHead(std::size_t in, std::size_t out, std::vector<double> w, std::vector<double> b)
    : in_dim(in), out_dim(out), weight(std::move(w)), bias(std::move(b)) {
    if (in_dim == 0 || out_dim == 0) throw Error(ErrorCode::InvalidArgument, "projection dims must be positive");
    if (weight.size() != in_dim * out_dim || bias.size() != out_dim) {
        throw Error(ErrorCode::ShapeMismatch, "projection parameters do not match declared dims");
    }
    for (double x : weight) {
        if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "projection weight not finite");
    }
    for (double x : bias) {
        if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "projection bias not finite");
    }
}

ProjectionHead ProjectionHead::random(std::size_t in_dim, std::size_t out_dim, std::uint64_t seed) {
    if (in_dim == 0) throw Error(ErrorCode::InvalidArgument, "projection dims must be positive");
    const double k = 1.0 / std::sqrt(static_cast<double>(in_dim));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-k, k);
    std::vector<double> w(in_dim * out_dim);
    std::vector<double> b(out_dim);
    for (double& x : w) x = dist(rng);
    for (double& x : b) x = dist(rng);
    return ProjectionHead(in_dim, out_dim, std::move(w), std::move(b));
}

EmbeddingBatch::EmbeddingBatch(std::vector<Vector> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) throw Error(ErrorCode::InvalidArgument, "embedding batch must have at least one row");
    const std::size_t d = rows_.front().size();
    if (d == 0) throw Error(ErrorCode::InvalidArgument, "embedding rows must be nonempty");
    for (const auto& r : rows_) {
        if (r.size() != d) throw Error(ErrorCode::ShapeMismatch, "embedding rows differ in length");
        for (double x : r) {
            if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "embedding values must be finite");
        }
    }
}

Vector gaze_weighted_pool(const FeatureGrid& features, const Grid& weights) {
    if (weights.width != features.width || weights.height != features.height) {
        throw Error(ErrorCode::ShapeMismatch, "gaze weights " + std::to_string(weights.width) + "x" +
                                                  std::to_string(weights.height) + " vs features " +
                                                  std::to_string(features.width) + "x" +
                                                  std::to_string(features.height));
    }
    const std::size_t plane = features.width * features.height;
    Vector out(features.channels, 0.0);
    for (std::size_t c = 0; c < features.channels; ++c) {
        const double* f = features.values.data() + c * plane;
        double acc = 0.0;
        for (std::size_t k = 0; k < plane; ++k) acc += weights.values[k] * f[k];
        out[c] = acc;
    }
    return out;
}

Vector gaze_weighted_pool(const FeatureGrid& features, const GazeMap& weights) {
    return gaze_weighted_pool(features, weights.grid());
}

Vector project(const ProjectionHead& head, std::span<const double> input) {
    if (input.size() != head.in_dim) {
        throw Error(ErrorCode::ShapeMismatch, "projection expects " + std::to_string(head.in_dim) + " inputs, got " +
                                                  std::to_string(input.size()));
    }
    Vector out(head.bias);
    for (std::size_t r = 0; r < head.out_dim; ++r) {
        out[r] += dot(std::span<const double>(head.weight).subspan(r * head.in_dim, head.in_dim), input);
    }
    return out;
}

Vector project_backward(const ProjectionHead& head, std::span<const double> grad_out) {
    if (grad_out.size() != head.out_dim) throw Error(ErrorCode::ShapeMismatch, "gradient length != out_dim");
    Vector g(head.in_dim, 0.0);
    for (std::size_t r = 0; r < head.out_dim; ++r) {
        for (std::size_t c = 0; c < head.in_dim; ++c) g[c] += head.weight[r * head.in_dim + c] * grad_out[r];
    }
    return g;
}

Grid pool_backward_weights(const FeatureGrid& features, std::span<const double> grad_pooled) {
    if (grad_pooled.size() != features.channels) throw Error(ErrorCode::ShapeMismatch, "gradient length != channels");
    const std::size_t plane = features.width * features.height;
    Grid g(features.width, features.height, 0.0);
    for (std::size_t c = 0; c < features.channels; ++c) {
        for (std::size_t k = 0; k < plane; ++k) g.values[k] += grad_pooled[c] * features.values[c * plane + k];
    }
    return g;
}

double cosine_sim(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(ErrorCode::ShapeMismatch, "cosine of vectors with different lengths");
    const double c = dot(a, b) / (checked_norm(a) * checked_norm(b));
    return std::clamp(c, -1.0, 1.0);
}

double info_nce(const EmbeddingBatch& vis, const EmbeddingBatch& txt, double tau, bool symmetric) {
    check_batches(vis, txt, tau);
    if (!symmetric) return one_directional(vis, txt, tau);
    return 0.5 * (one_directional(vis, txt, tau) + one_directional(txt, vis, tau));
}

InfoNceGrad grad_info_nce(const EmbeddingBatch& vis, const EmbeddingBatch& txt, double tau, bool symmetric) {
    check_batches(vis, txt, tau);
    InfoNceGrad g{std::vector<Vector>(vis.size(), Vector(vis.dim(), 0.0)),
                  std::vector<Vector>(txt.size(), Vector(txt.dim(), 0.0))};
    if (!symmetric) {
        one_directional_grad(vis, txt, tau, 1.0, g.vis, g.txt);
    } else {
        one_directional_grad(vis, txt, tau, 0.5, g.vis, g.txt);
        one_directional_grad(txt, vis, tau, 0.5, g.txt, g.vis);
    }
    return g;
}

AlignmentResult alignment_loss(const AlignmentBatch& batch, const ProjectionHead& vis_head,
                               const ProjectionHead& txt_head, double tau) {
    const std::size_t n = batch.features.size();
    if (n == 0 || batch.gaze_weights.size() != n || batch.text_features.size() != n) {
        throw Error(ErrorCode::ShapeMismatch, "alignment batch components differ in size");
    }
    std::vector<Vector> u_vis, u_txt;
    for (std::size_t b = 0; b < n; ++b) {
        u_vis.push_back(project(vis_head, gaze_weighted_pool(batch.features[b], batch.gaze_weights[b])));
        u_txt.push_back(project(txt_head, batch.text_features[b]));
    }
    const EmbeddingBatch vis(std::move(u_vis));
    const EmbeddingBatch txt(std::move(u_txt));

    AlignmentResult result;
    result.loss = info_nce(vis, txt, tau);
    const auto grads = grad_info_nce(vis, txt, tau);
    for (std::size_t b = 0; b < n; ++b) {
        const Vector d_pooled = project_backward(vis_head, grads.vis[b]);
        result.grad_weights.push_back(pool_backward_weights(batch.features[b], d_pooled));
    }
    return result;
}

}  // namespace gazekit
