#include "gpfc/gp_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gpfc {

namespace {

constexpr double kJitterStart = 1e-8;
constexpr double kJitterMax = 1e-2;
constexpr double kNegativeVarianceTolerance = 1e-10;

bool try_cholesky(const Matrix& a, Matrix& lower) {
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) return false;
    lower = llt.matrixL();
    const auto diag = lower.diagonal();
    return diag.allFinite() && (diag.array() > 0.0).all();
}

void check_inputs(std::span<const double> x, const Vector& y) {
    if (x.empty()) throw std::invalid_argument("at least one training point is required");
    if (static_cast<Eigen::Index>(x.size()) != y.size()) throw std::invalid_argument("x and y lengths differ");
    for (double v : x) {
        if (!std::isfinite(v)) throw std::invalid_argument("training inputs must be finite");
    }
    if (!y.allFinite()) throw std::invalid_argument("training targets must be finite");
}

double log_ml_from(const Factorization& f, const Vector& y, const Vector& alpha) {
    const auto n = static_cast<double>(y.size());
    return -0.5 * y.dot(alpha) - f.lower.diagonal().array().log().sum() - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

Vector solve_alpha(const Factorization& f, const Vector& y) {
    Vector alpha = f.lower.triangularView<Eigen::Lower>().solve(y);
    f.lower.triangularView<Eigen::Lower>().transpose().solveInPlace(alpha);
    return alpha;
}

}  // namespace

Factorization factorize(const Matrix& gram) {
    Factorization f;
    if (try_cholesky(gram, f.lower)) return f;
    const double scale = gram.diagonal().mean();
    if (!(std::isfinite(scale) && scale > 0.0)) throw IllConditionedModel("Gram matrix has a non-positive diagonal");
    Matrix jittered = gram;
    for (double rel = kJitterStart; rel <= kJitterMax * (1.0 + 1e-12); rel *= 10.0) {
        jittered.diagonal() = gram.diagonal().array() + rel * scale;
        if (try_cholesky(jittered, f.lower)) {
            f.jitter = rel * scale;
            return f;
        }
    }
    throw IllConditionedModel("Cholesky failed at maximum jitter " + std::to_string(kJitterMax * scale));
}

FitState::FitState(KernelSpec spec, HyperParams theta, std::vector<double> x, const Vector& y, Exec exec)
    : spec_(std::move(spec)), theta_(theta), x_(std::move(x)) {
    check_inputs(x_, y);
    factor_ = factorize(build_gram(spec_, theta_, x_, exec));
    alpha_ = solve_alpha(factor_, y);
    log_ml_ = log_ml_from(factor_, y, alpha_);
}

double log_marginal_likelihood(const KernelSpec& spec, const HyperParams& theta, std::span<const double> x,
                               const Vector& y) {
    check_inputs(x, y);
    const Factorization f = factorize(build_gram(spec, theta, x));
    return log_ml_from(f, y, solve_alpha(f, y));
}

ValueAndGradient log_marginal_likelihood_with_grad(const KernelSpec& spec, const HyperParams& theta,
                                                   std::span<const double> x, const Vector& y, Exec exec) {
    check_inputs(x, y);
    const Factorization f = factorize(build_gram(spec, theta, x, exec));
    const Vector alpha = solve_alpha(f, y);

    // d log p / d u_k = 0.5 tr[(alpha alpha^T - K^-1) dK/du_k]
    const auto n = y.size();
    Matrix inv_lower = f.lower.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n));
    Matrix weights = alpha * alpha.transpose();
    weights.noalias() -= inv_lower.transpose() * inv_lower;
    return {log_ml_from(f, y, alpha), contract_grad_gram(spec, theta, x, weights, exec)};
}

Vector grad_log_marginal_likelihood(const KernelSpec& spec, const HyperParams& theta, std::span<const double> x,
                                    const Vector& y, Exec exec) {
    return log_marginal_likelihood_with_grad(spec, theta, x, y, exec).gradient;
}

PredictiveDistribution predict(const FitState& state, std::span<const double> x_star) {
    for (double v : x_star) {
        if (!std::isfinite(v)) throw std::invalid_argument("test inputs must be finite");
    }
    PredictiveDistribution out;
    const auto m = static_cast<Eigen::Index>(x_star.size());
    if (m == 0) {
        out.mean = out.latent_variance = out.variance = Vector(0);
        return out;
    }
    const Matrix cross = build_cross(state.spec(), state.theta(), x_star, state.x());
    out.mean = cross * state.alpha();

    const Matrix v = state.chol().triangularView<Eigen::Lower>().solve(cross.transpose());
    const Vector prior_var = signal_diag(state.spec(), state.theta(), x_star);
    out.latent_variance = prior_var - v.colwise().squaredNorm().transpose();
    for (Eigen::Index i = 0; i < m; ++i) {
        double& lv = out.latent_variance(i);
        if (lv < 0.0) {
            if (lv < -kNegativeVarianceTolerance * std::max(1.0, prior_var(i))) {
                throw IllConditionedModel("predictive variance is negative beyond round-off");
            }
            lv = 0.0;
        }
    }
    const double noise = state.spec().has(TermKind::WhiteNoise) ? state.theta().s2_noise : 0.0;
    out.variance = out.latent_variance.array() + noise;
    return out;
}

}  // namespace gpfc
