#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include "gpfc/kernels.hpp"

namespace gpfc {

/// Lognormal prior: log(theta) ~ Normal(mean = nu, variance = lambda).
struct LogNormal {
    double nu = 0.0;
    double lambda = 1.0;

    double median() const;
    /// Quantile for a standard-normal score z, e.g. 1.645 for the 95th percentile.
    double quantile(double z) const;

    friend bool operator==(const LogNormal&, const LogNormal&) = default;
};

class PriorSpec {
public:
    const LogNormal& operator[](Param p) const { return entries_[static_cast<std::size_t>(p)]; }
    LogNormal& operator[](Param p) { return entries_[static_cast<std::size_t>(p)]; }

    /// Throws std::invalid_argument when a lambda is not positive, the variance
    /// parameters do not share one prior, or the lengthscales do not share lambda.
    void validate() const;

    /// Hyperparameters at the prior medians, exp(nu) for every entry.
    HyperParams medians() const;

    friend bool operator==(const PriorSpec&, const PriorSpec&) = default;

private:
    std::array<LogNormal, kParamCount> entries_{};
};

/// Calibrated defaults for standardized series with time measured in years.
PriorSpec default_priors();

/// Sum of lognormal log-densities (in theta space) over the trainable
/// parameters of `spec`. Throws InvalidHyperParams for theta_k <= 0.
double log_prior(const PriorSpec& priors, const KernelSpec& spec, const HyperParams& theta);

/// Gradient of log_prior with respect to u_k = log(theta_k), in
/// `spec.trainable()` order.
Vector grad_log_prior(const PriorSpec& priors, const KernelSpec& spec, const HyperParams& theta);

/// Plain text: one `name = nu lambda` line per parameter; `#` starts a comment.
void write_priors(std::ostream& out, const PriorSpec& priors);
/// Starts from default_priors() and overrides the entries present in `in`.
PriorSpec read_priors(std::istream& in);
PriorSpec load_priors(const std::string& path);

}  // namespace gpfc
