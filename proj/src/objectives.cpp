#include "gazekit/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gazekit/error.hpp"
#include "gazekit/saliency_metrics.hpp"

namespace gazekit {

namespace {

std::vector<double> softmax(const std::vector<double>& v) {
    const double m = *std::max_element(v.begin(), v.end());
    std::vector<double> out(v.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp(v[i] - m);
        sum += out[i];
    }
    for (double& x : out) x /= sum;
    return out;
}

// Max-shifted log-sum-exp.
double log_softmax_at(const std::vector<double>& v, std::size_t k) {
    const double m = *std::max_element(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) sum += std::exp(x - m);
    return v[k] - m - std::log(sum);
}

void check_caption_shapes(const StepLogits& step_logits, const TokenSequence& target) {
    if (step_logits.size() != target.size()) {
        throw Error(ErrorCode::LengthMismatch, std::to_string(step_logits.size()) + " logit steps for " +
                                                   std::to_string(target.size()) + " target tokens");
    }
    for (const auto& step : step_logits) {
        if (step.size() != target.vocab_size()) {
            throw Error(ErrorCode::LengthMismatch, "step logits length " + std::to_string(step.size()) +
                                                       " != vocab size " + std::to_string(target.vocab_size()));
        }
    }
}

}  // namespace

TokenSequence::TokenSequence(std::vector<std::size_t> tokens, std::size_t vocab_size)
    : tokens_(std::move(tokens)), vocab_size_(vocab_size) {
    if (vocab_size_ == 0) throw Error(ErrorCode::InvalidArgument, "vocabulary must be nonempty");
    if (tokens_.empty()) throw Error(ErrorCode::InvalidArgument, "token sequence must be nonempty");
    for (auto t : tokens_) {
        if (t >= vocab_size_) throw Error(ErrorCode::InvalidArgument, "token index outside vocabulary");
    }
}

double loss_kl(const GazeMap& gt, const GazeMap& pred) { return kl_div(gt, pred, kKlFloor); }

GazeLoss loss_gaze(const GazeMap& gt, const LogitGrid& logits, const GazeLossConfig& cfg) {
    const GazeMap pred = spatial_softmax(logits);
    const GazeMap blurred = gaussian_blur(pred, cfg.sigma);
    GazeLoss out;
    out.kl = loss_kl(gt, pred);
    out.blurred_kl = loss_kl(gt, blurred);
    out.hinge = cfg.lambda * std::max(0.0, out.blurred_kl - out.kl + cfg.epsilon);
    out.total = out.kl + out.hinge;
    return out;
}

Grid grad_kl_wrt_pred(const GazeMap& gt, const Grid& pred) {
    if (gt.width() != pred.width || gt.height() != pred.height) {
        throw Error(ErrorCode::ShapeMismatch, "gradient shapes differ");
    }
    double mass = 0.0;
    double gt_mass = 0.0;
    for (double x : pred.values) mass += std::max(x, kKlFloor);
    for (double g : gt.values()) gt_mass += g;
    Grid grad(pred.width, pred.height, 0.0);
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double p = pred.values[i];
        if (p > kKlFloor) grad.values[i] = -gt.values()[i] / p + gt_mass / mass;
    }
    return grad;
}

Grid softmax_backward(const GazeMap& probs, const Grid& grad_probs) {
    const auto p = probs.values();
    double dot = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) dot += p[i] * grad_probs.values[i];
    Grid out(probs.width(), probs.height());
    for (std::size_t i = 0; i < p.size(); ++i) out.values[i] = p[i] * (grad_probs.values[i] - dot);
    return out;
}

Grid grad_loss_gaze(const GazeMap& gt, const LogitGrid& logits, const GazeLossConfig& cfg) {
    const GazeMap pred = spatial_softmax(logits);
    const GazeMap blurred = gaussian_blur(pred, cfg.sigma);
    const double kl = loss_kl(gt, pred);
    const double blurred_kl = loss_kl(gt, blurred);

    Grid grad_pred = grad_kl_wrt_pred(gt, pred.grid());
    if (blurred_kl - kl + cfg.epsilon > 0.0) {
        // The blur operator is symmetric, so its adjoint is itself.
        const Grid through_blur = blur_grid(grad_kl_wrt_pred(gt, blurred.grid()), cfg.sigma);
        for (std::size_t i = 0; i < grad_pred.size(); ++i) {
            grad_pred.values[i] = (1.0 - cfg.lambda) * grad_pred.values[i] + cfg.lambda * through_blur.values[i];
        }
    }
    return softmax_backward(pred, grad_pred);
}

double loss_caption(const StepLogits& step_logits, const TokenSequence& target) {
    check_caption_shapes(step_logits, target);
    double loss = 0.0;
    for (std::size_t t = 0; t < step_logits.size(); ++t) loss -= log_softmax_at(step_logits[t], target.tokens()[t]);
    return std::max(loss, 0.0);
}

StepLogits grad_loss_caption(const StepLogits& step_logits, const TokenSequence& target) {
    check_caption_shapes(step_logits, target);
    StepLogits grads;
    grads.reserve(step_logits.size());
    for (std::size_t t = 0; t < step_logits.size(); ++t) {
        auto g = softmax(step_logits[t]);
        g[target.tokens()[t]] -= 1.0;
        grads.push_back(std::move(g));
    }
    return grads;
}

double total_loss(double gaze, double caption, double align, const LossWeights& w) {
    return w.w_gaze * gaze + w.w_caption * caption + w.w_align * align;
}

std::vector<FitStep> fit_gaze_demo(const GazeMap& gt, const GazeLossConfig& cfg, std::size_t steps,
                                   double learning_rate, bool use_hinge) {
    if (steps == 0) throw Error(ErrorCode::InvalidArgument, "steps must be positive");
    if (!(learning_rate > 0.0)) throw Error(ErrorCode::InvalidArgument, "learning rate must be positive");

    Grid z(gt.width(), gt.height(), 0.0);
    std::vector<FitStep> trajectory;
    trajectory.reserve(steps + 1);
    for (std::size_t s = 0;; ++s) {
        const LogitGrid logits(z);
        const GazeMap pred = spatial_softmax(logits);
        FitStep rec;
        rec.step = s;
        if (use_hinge) {
            const auto parts = loss_gaze(gt, logits, cfg);
            rec.loss = parts.total;
            rec.kl = parts.kl;
        } else {
            rec.kl = loss_kl(gt, pred);
            rec.loss = rec.kl;
        }
        rec.entropy = entropy(pred);
        trajectory.push_back(rec);
        if (s == steps) break;

        const Grid grad =
            use_hinge ? grad_loss_gaze(gt, logits, cfg) : softmax_backward(pred, grad_kl_wrt_pred(gt, pred.grid()));
        for (std::size_t i = 0; i < z.size(); ++i) z.values[i] -= learning_rate * grad.values[i];
    }
    return trajectory;
}

}  // namespace gazekit
