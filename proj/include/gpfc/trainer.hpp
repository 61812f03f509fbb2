#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gpfc/gp_core.hpp"
#include "gpfc/priors.hpp"

namespace gpfc {

struct TrainConfig {
    int max_iterations = 200;
    double grad_tolerance = 1e-5;
    double objective_tolerance = 1e-9;
    int restarts = 1;
    std::uint64_t seed = 0;
    /// Parallel Gram/gradient assembly inside one fit. Off by default: batch
    /// runs parallelise across series instead.
    Exec exec = Exec::Serial;

    void validate() const;
};

struct TrainResult {
    HyperParams theta;
    double objective = 0.0;
    double initial_objective = 0.0;
    int iterations = 0;
    bool converged = false;
    double seconds = 0.0;
    /// Objective after every accepted step of the restart that produced `theta`.
    std::vector<double> trace;
};

/// log p(y | theta) + log p(theta). Returns -infinity when the Gram matrix
/// cannot be factorised.
double map_objective(const KernelSpec& spec, const PriorSpec& priors, const HyperParams& theta,
                     std::span<const double> x, const Vector& y);

/// Value and gradient over u = log(theta); value is -infinity (gradient
/// empty) on factorisation failure.
ValueAndGradient map_objective_with_grad(const KernelSpec& spec, const PriorSpec& priors, const HyperParams& theta,
                                         std::span<const double> x, const Vector& y, Exec exec = Exec::Serial);

/// Maps u = log(theta) over `spec.trainable()` onto a full HyperParams,
/// filling untouched entries from `base`.
HyperParams from_log_params(const KernelSpec& spec, const Vector& u, const HyperParams& base);
Vector to_log_params(const KernelSpec& spec, const HyperParams& theta);

/// MAP estimate by BFGS ascent in log-space, starting from the prior medians.
/// Requires at least 4 points. Deterministic when `cfg.restarts == 1`.
TrainResult train(const KernelSpec& spec, const PriorSpec& priors, std::span<const double> x, const Vector& y,
                  const TrainConfig& cfg = {});

}  // namespace gpfc
