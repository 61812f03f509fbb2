#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "gpfc/kernels.hpp"

namespace gpfc {

/// Raised when the Gram matrix cannot be factorised even at maximum jitter.
class IllConditionedModel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Lower Cholesky factor of K + jitter * I, where jitter is zero unless the
/// plain factorisation fails; it then starts at 1e-8 * mean(diag K) and grows
/// tenfold up to 1e-2 * mean(diag K).
struct Factorization {
    Matrix lower;
    double jitter = 0.0;
};

Factorization factorize(const Matrix& gram);

/// Cached training-side quantities for repeated prediction. Immutable once built.
class FitState {
public:
    FitState(KernelSpec spec, HyperParams theta, std::vector<double> x, const Vector& y, Exec exec = Exec::Serial);

    const KernelSpec& spec() const { return spec_; }
    const HyperParams& theta() const { return theta_; }
    const std::vector<double>& x() const { return x_; }
    const Matrix& chol() const { return factor_.lower; }
    double jitter() const { return factor_.jitter; }
    const Vector& alpha() const { return alpha_; }
    double log_marginal_likelihood() const { return log_ml_; }

private:
    KernelSpec spec_;
    HyperParams theta_;
    std::vector<double> x_;
    Factorization factor_;
    Vector alpha_;
    double log_ml_ = 0.0;
};

struct PredictiveDistribution {
    Vector mean;
    Vector latent_variance;
    /// latent variance + noise variance; the variance of a new observation.
    Vector variance;
};

double log_marginal_likelihood(const KernelSpec& spec, const HyperParams& theta, std::span<const double> x,
                               const Vector& y);

/// Gradient over u = log(theta), in `spec.trainable()` order.
Vector grad_log_marginal_likelihood(const KernelSpec& spec, const HyperParams& theta, std::span<const double> x,
                                    const Vector& y, Exec exec = Exec::Serial);

struct ValueAndGradient {
    double value;
    Vector gradient;
};

/// One factorisation shared by the value and its gradient.
ValueAndGradient log_marginal_likelihood_with_grad(const KernelSpec& spec, const HyperParams& theta,
                                                   std::span<const double> x, const Vector& y,
                                                   Exec exec = Exec::Serial);

inline FitState fit(const KernelSpec& spec, const HyperParams& theta, std::span<const double> x, const Vector& y,
                    Exec exec = Exec::Serial) {
    return FitState(spec, theta, std::vector<double>(x.begin(), x.end()), y, exec);
}

/// Posterior of f at `x_star` (diagonal only). Points in `x_star` are
/// expected to be disjoint from the training inputs; duplicates are accepted
/// and treated as new noisy observations of the same latent value.
PredictiveDistribution predict(const FitState& state, std::span<const double> x_star);

}  // namespace gpfc
