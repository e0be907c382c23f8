#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gazekit {

inline constexpr double kFiniteDifferenceStep = 1e-6;
inline constexpr double kGradientTolerance = 1e-4;

/// (f(x + h e_k) - f(x - h e_k)) / 2h for every coordinate k.
std::vector<double> central_differences(const std::function<double(std::span<const double>)>& f,
                                        std::span<const double> x, double h = kFiniteDifferenceStep);

/// max_k |a_k - n_k| / max(max_k |a_k|, max_k |n_k|): componentwise error
/// measured against the gradient's own scale. 0 when both are identically zero.
double max_relative_error(std::span<const double> analytic, std::span<const double> numeric);

struct GradCheckResult {
    std::string name;
    std::size_t trials = 0;
    double max_rel_error = 0.0;

    bool passed() const noexcept { return max_rel_error < kGradientTolerance; }
};

/// Randomized finite-difference checks of every analytic gradient: the gaze
/// objective, caption cross-entropy, InfoNCE, and the chained
/// pooling -> projection -> InfoNCE path. `corrupt` perturbs the analytic
/// gradients (fault-injection hook for the harness itself).
std::vector<GradCheckResult> run_gradient_suite(std::uint64_t seed, std::size_t trials, bool corrupt = false);

}  // namespace gazekit
