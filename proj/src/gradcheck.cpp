#include "gazekit/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gazekit/alignment.hpp"
#include "gazekit/error.hpp"
#include "gazekit/objectives.hpp"

namespace gazekit {

namespace {

constexpr double kCorruption = 1.01;
// Instances this close to the hinge kink are redrawn: finite differences
// straddling a kink do not estimate either one-sided derivative.
constexpr double kKinkMargin = 1e-4;

using Rng = std::mt19937_64;

std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<double> normals(Rng& rng, std::size_t n, double scale) {
    std::normal_distribution<double> d(0.0, scale);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

GazeMap random_gaze_map(Rng& rng, std::size_t w, std::size_t h, bool sparse) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Grid g(w, h);
    for (double& x : g.values) x = (sparse && u(rng) < 0.5) ? 0.0 : std::exp(2.0 * u(rng));
    if (sparse) g.values[uniform_size(rng, 0, g.size() - 1)] += 1.0;
    return normalize_to_simplex(g);
}

std::vector<double> flatten(const std::vector<Vector>& rows) {
    std::vector<double> out;
    for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
}

std::vector<Vector> unflatten(std::span<const double> flat, std::size_t rows, std::size_t dim) {
    std::vector<Vector> out(rows);
    for (std::size_t i = 0; i < rows; ++i) out[i].assign(flat.begin() + i * dim, flat.begin() + (i + 1) * dim);
    return out;
}

void maybe_corrupt(std::vector<double>& g, bool corrupt) {
    if (!corrupt) return;
    for (double& x : g) x *= kCorruption;
}

double check_gaze(Rng& rng, bool corrupt) {
    while (true) {
        const auto w = uniform_size(rng, 3, 12);
        const auto h = uniform_size(rng, 3, 12);
        const GazeMap gt = random_gaze_map(rng, w, h, std::bernoulli_distribution(0.3)(rng));
        std::uniform_real_distribution<double> scale(0.3, 2.0);
        const LogitGrid logits(Grid(w, h, normals(rng, w * h, scale(rng))));
        GazeLossConfig cfg;
        cfg.sigma = std::array{0.6, 1.0, 1.5}[uniform_size(rng, 0, 2)];

        const auto parts = loss_gaze(gt, logits, cfg);
        if (std::abs(parts.blurred_kl - parts.kl + cfg.epsilon) < kKinkMargin) continue;

        auto analytic = grad_loss_gaze(gt, logits, cfg).values;
        maybe_corrupt(analytic, corrupt);
        const auto numeric = central_differences(
            [&](std::span<const double> z) {
                return loss_gaze(gt, LogitGrid(Grid(w, h, std::vector<double>(z.begin(), z.end()))), cfg).total;
            },
            logits.values());
        return max_relative_error(analytic, numeric);
    }
}

double check_caption(Rng& rng, bool corrupt) {
    const auto vocab = uniform_size(rng, 2, 16);
    const auto len = uniform_size(rng, 1, 8);
    std::vector<std::size_t> tokens(len);
    for (auto& t : tokens) t = uniform_size(rng, 0, vocab - 1);
    const TokenSequence target(tokens, vocab);
    const auto flat = normals(rng, vocab * len, 2.0);

    auto analytic = flatten(grad_loss_caption(unflatten(flat, len, vocab), target));
    maybe_corrupt(analytic, corrupt);
    const auto numeric = central_differences(
        [&](std::span<const double> x) { return loss_caption(unflatten(x, len, vocab), target); }, flat);
    return max_relative_error(analytic, numeric);
}

double check_info_nce(Rng& rng, bool corrupt, std::size_t trial) {
    const auto b = uniform_size(rng, 1, 6);
    const auto dim = uniform_size(rng, 2, 10);
    const double tau = std::array{0.07, 0.1, 0.5, 1.0}[uniform_size(rng, 0, 3)];
    const bool symmetric = trial % 4 == 3;
    auto flat = normals(rng, 2 * b * dim, 1.0);

    const auto split = [&](std::span<const double> x) {
        return std::pair{EmbeddingBatch(unflatten(x.first(b * dim), b, dim)),
                         EmbeddingBatch(unflatten(x.subspan(b * dim), b, dim))};
    };
    const auto [vis, txt] = split(flat);
    const auto g = grad_info_nce(vis, txt, tau, symmetric);
    auto analytic = flatten(g.vis);
    const auto gt = flatten(g.txt);
    analytic.insert(analytic.end(), gt.begin(), gt.end());
    maybe_corrupt(analytic, corrupt);
    const auto numeric = central_differences(
        [&](std::span<const double> x) {
            const auto [v, t] = split(x);
            return info_nce(v, t, tau, symmetric);
        },
        flat);
    return max_relative_error(analytic, numeric);
}

double check_chained(Rng& rng, bool corrupt) {
    constexpr std::size_t kChannels = 2, kSide = 4, kTextDim = 3;
    const auto b = uniform_size(rng, 2, 4);
    const auto out_dim = uniform_size(rng, 3, 8);
    const double tau = std::array{0.07, 0.5}[uniform_size(rng, 0, 1)];
    AlignmentBatch batch;
    for (std::size_t i = 0; i < b; ++i) {
        batch.features.emplace_back(kChannels, kSide, kSide, normals(rng, kChannels * kSide * kSide, 1.0));
        batch.gaze_weights.push_back(random_gaze_map(rng, kSide, kSide, false).grid());
        batch.text_features.push_back(normals(rng, kTextDim, 1.0));
    }
    const auto vis_head = ProjectionHead::random(kChannels, out_dim, rng());
    const auto txt_head = ProjectionHead::random(kTextDim, out_dim, rng());

    const auto result = alignment_loss(batch, vis_head, txt_head, tau);
    std::vector<double> analytic, x0;
    for (std::size_t i = 0; i < b; ++i) {
        analytic.insert(analytic.end(), result.grad_weights[i].values.begin(), result.grad_weights[i].values.end());
        x0.insert(x0.end(), batch.gaze_weights[i].values.begin(), batch.gaze_weights[i].values.end());
    }
    maybe_corrupt(analytic, corrupt);
    const std::size_t cells = kSide * kSide;
    const auto numeric = central_differences(
        [&](std::span<const double> x) {
            AlignmentBatch perturbed = batch;
            for (std::size_t i = 0; i < b; ++i) {
                perturbed.gaze_weights[i].values.assign(x.begin() + i * cells, x.begin() + (i + 1) * cells);
            }
            return alignment_loss(perturbed, vis_head, txt_head, tau).loss;
        },
        x0);
    return max_relative_error(analytic, numeric);
}

}  // namespace

std::vector<double> central_differences(const std::function<double(std::span<const double>)>& f,
                                        std::span<const double> x, double h) {
    std::vector<double> work(x.begin(), x.end());
    std::vector<double> grad(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double orig = work[k];
        work[k] = orig + h;
        const double up = f(work);
        work[k] = orig - h;
        const double down = f(work);
        work[k] = orig;
        grad[k] = (up - down) / (2.0 * h);
    }
    return grad;
}

double max_relative_error(std::span<const double> analytic, std::span<const double> numeric) {
    if (analytic.size() != numeric.size()) throw Error(ErrorCode::ShapeMismatch, "gradient lengths differ");
    double scale = 0.0, worst = 0.0;
    for (std::size_t k = 0; k < analytic.size(); ++k) {
        scale = std::max({scale, std::abs(analytic[k]), std::abs(numeric[k])});
        worst = std::max(worst, std::abs(analytic[k] - numeric[k]));
    }
    return scale == 0.0 ? 0.0 : worst / scale;
}

std::vector<GradCheckResult> run_gradient_suite(std::uint64_t seed, std::size_t trials, bool corrupt) {
    Rng rng(seed);
    std::vector<GradCheckResult> results = {
        {"loss_gaze", trials, 0.0}, {"loss_caption", trials, 0.0}, {"info_nce", trials, 0.0}, {"pool_project_info_nce", trials, 0.0}};
    for (std::size_t t = 0; t < trials; ++t) {
        results[0].max_rel_error = std::max(results[0].max_rel_error, check_gaze(rng, corrupt));
        results[1].max_rel_error = std::max(results[1].max_rel_error, check_caption(rng, corrupt));
        results[2].max_rel_error = std::max(results[2].max_rel_error, check_info_nce(rng, corrupt, t));
        results[3].max_rel_error = std::max(results[3].max_rel_error, check_chained(rng, corrupt));
    }
    return results;
}

}  // namespace gazekit
