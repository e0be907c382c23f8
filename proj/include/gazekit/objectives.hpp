#pragma once

#include <cstddef>
#include <vector>

#include "gazekit/grid.hpp"

namespace gazekit {

/// Blur-gap regularizer settings: hinge weight, hinge margin (nats) and blur width (cells).
struct GazeLossConfig {
    double lambda = 0.3;
    double epsilon = 0.05;
    double sigma = 1.0;
};

/// Weights of the combined training objective.
struct LossWeights {
    double w_gaze = 1.0;
    double w_caption = 1.0;
    double w_align = 0.2;
};

/// Target caption tokens over a fixed vocabulary.
class TokenSequence {
public:
    TokenSequence(std::vector<std::size_t> tokens, std::size_t vocab_size);

    const std::vector<std::size_t>& tokens() const noexcept { return tokens_; }
    std::size_t vocab_size() const noexcept { return vocab_size_; }
    std::size_t size() const noexcept { return tokens_.size(); }

private:
    std::vector<std::size_t> tokens_;
    std::size_t vocab_size_;
};

/// One logit vector (length vocab_size) per decoding step.
using StepLogits = std::vector<std::vector<double>>;

struct GazeLoss {
    double total = 0.0;
    double kl = 0.0;          ///< KL(gt || softmax(logits))
    double blurred_kl = 0.0;  ///< KL(gt || blur(softmax(logits)))
    double hinge = 0.0;       ///< lambda * max(0, blurred_kl - kl + epsilon)
};

/// Forward KL, KL(gt || pred). Same value as kl_div with the shared floor.
double loss_kl(const GazeMap& gt, const GazeMap& pred);

/// L_KL + lambda * max(0, KL(gt || blurred) - L_KL + epsilon), with the
/// comparison taken exactly in this orientation.
GazeLoss loss_gaze(const GazeMap& gt, const LogitGrid& logits, const GazeLossConfig& cfg = {});

/// d loss_gaze / d logits. The hinge contributes nothing when its argument is <= 0.
Grid grad_loss_gaze(const GazeMap& gt, const LogitGrid& logits, const GazeLossConfig& cfg = {});

/// Gradient of kl_div(gt, pred) with respect to the prediction values,
/// including the floor clamp (zero gradient on clamped cells).
Grid grad_kl_wrt_pred(const GazeMap& gt, const Grid& pred);

/// Vector-Jacobian product of the spatial softmax: p * (g - <p, g>).
Grid softmax_backward(const GazeMap& probs, const Grid& grad_probs);

/// -sum_t log softmax(step_logits[t])[target[t]].
double loss_caption(const StepLogits& step_logits, const TokenSequence& target);

/// softmax(step_logits[t]) - onehot(target[t]) for every step.
StepLogits grad_loss_caption(const StepLogits& step_logits, const TokenSequence& target);

double total_loss(double gaze, double caption, double align, const LossWeights& w = {});

struct FitStep {
    std::size_t step = 0;
    double loss = 0.0;
    double kl = 0.0;
    double entropy = 0.0;
};

/// Plain gradient descent on logits starting from zeros. Entry s of the
/// trajectory describes the logits after s updates (steps + 1 entries).
/// Without the hinge the objective is L_KL alone.
std::vector<FitStep> fit_gaze_demo(const GazeMap& gt, const GazeLossConfig& cfg, std::size_t steps,
                                   double learning_rate, bool use_hinge);

}  // namespace gazekit
