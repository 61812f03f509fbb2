#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the code paths it checks: kernels are re-derived from their closed
// forms, Gaussian densities use an explicit inverse and determinant, and
// derivatives come from central differences.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "gpfc/kernels.hpp"
#include "gpfc/priors.hpp"

namespace oracle {

using gpfc::HyperParams;
using gpfc::Matrix;
using gpfc::TermKind;
using gpfc::Vector;

inline double term(const gpfc::Term& t, const HyperParams& p, double a, double b) {
    const double pi = std::numbers::pi;
    const double lag = a - b;
    switch (t.kind) {
        case TermKind::Lin:
            return p.s2_bias + p.s2_lin * a * b;
        case TermKind::Rbf:
            return p.s2_rbf * std::exp(-(lag * lag) / (2.0 * p.ell_rbf * p.ell_rbf));
        case TermKind::Per: {
            const double s = std::sin(pi * std::fabs(lag) / t.period);
            return p.s2_per * std::exp(-(2.0 * s * s) / (p.ell_per * p.ell_per));
        }
        case TermKind::Per2: {
            const double s = std::sin(pi * std::fabs(lag) / t.period);
            return p.s2_per2 * std::exp(-(2.0 * s * s) / (p.ell_per2 * p.ell_per2));
        }
        case TermKind::Sm1:
            return p.s2_sm1 * std::exp(-(lag * lag) / (2.0 * p.ell_sm1 * p.ell_sm1)) * std::cos(lag / p.tau_sm1);
        case TermKind::Sm2:
            return p.s2_sm2 * std::exp(-(lag * lag) / (2.0 * p.ell_sm2 * p.ell_sm2)) * std::cos(lag / p.tau_sm2);
        case TermKind::WhiteNoise:
            return a == b ? p.s2_noise : 0.0;
    }
    return std::nan("");
}

inline double kernel(const gpfc::KernelSpec& spec, const HyperParams& p, double a, double b, bool with_noise = true) {
    double s = 0.0;
    for (const auto& t : spec.terms()) {
        if (t.kind == TermKind::WhiteNoise && !with_noise) continue;
        s += term(t, p, a, b);
    }
    return s;
}

inline Matrix gram(const gpfc::KernelSpec& spec, const HyperParams& p, const std::vector<double>& x) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Matrix k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) k(i, j) = kernel(spec, p, x[i], x[j]);
    }
    return k;
}

/// log N(y; 0, K) through an explicit inverse and determinant.
inline double mvn_logpdf(const Matrix& k, const Vector& y) {
    Eigen::FullPivLU<Matrix> lu(k);
    const Matrix inv = lu.inverse();
    const double det = lu.determinant();
    const double n = static_cast<double>(y.size());
    return -0.5 * y.dot(inv * y) - 0.5 * std::log(det) - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

struct Posterior {
    Vector mean;
    Vector latent_var;
};

inline Posterior dense_posterior(const gpfc::KernelSpec& spec, const HyperParams& p, const std::vector<double>& x,
                                 const Vector& y, const std::vector<double>& xs) {
    const Matrix inv = Eigen::FullPivLU<Matrix>(gram(spec, p, x)).inverse();
    const auto m = static_cast<Eigen::Index>(xs.size());
    const auto n = static_cast<Eigen::Index>(x.size());
    Matrix cross(m, n);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) cross(i, j) = kernel(spec, p, xs[i], x[j], false);
    }
    Posterior post;
    post.mean = cross * inv * y;
    post.latent_var.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        post.latent_var(i) = kernel(spec, p, xs[i], xs[i], false) - cross.row(i).dot(inv * cross.row(i).transpose());
    }
    return post;
}

inline double lognormal_logpdf(double theta, double nu, double lambda) {
    const double z = std::log(theta) - nu;
    const double pdf = std::exp(-z * z / (2.0 * lambda)) / (theta * std::sqrt(2.0 * std::numbers::pi * lambda));
    return std::log(pdf);
}

/// Central differences of f at u, one coordinate at a time.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& u, double h = 1e-5) {
    Vector g(u.size());
    for (Eigen::Index k = 0; k < u.size(); ++k) {
        Vector up = u, dn = u;
        up(k) += h;
        dn(k) -= h;
        g(k) = (f(up) - f(dn)) / (2.0 * h);
    }
    return g;
}

inline double std_normal_cdf(double z) { return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0))); }

/// Integral of (F(z) - 1{z >= y})^2 by composite Simpson, split at y where
/// the integrand jumps.
inline double crps_quadrature(double y, double mu, double sigma, int intervals = 4000) {
    const double lo = std::min(mu - 10.0 * sigma, y);
    const double hi = std::max(mu + 10.0 * sigma, y);
    auto simpson = [&](double a, double b, bool above) {
        if (b <= a) return 0.0;
        const double h = (b - a) / intervals;
        auto f = [&](double z) {
            const double d = std_normal_cdf((z - mu) / sigma) - (above ? 1.0 : 0.0);
            return d * d;
        };
        double s = f(a) + f(b);
        for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
        return s * h / 3.0;
    };
    return simpson(lo, y, false) + simpson(y, hi, true);
}

/// Random valid hyperparameters: log-values drawn around the prior medians.
inline HyperParams random_theta(std::mt19937_64& rng, double spread = 0.7) {
    const auto priors = gpfc::default_priors();
    std::normal_distribution<double> normal(0.0, spread);
    HyperParams p;
    for (std::size_t i = 0; i < gpfc::kParamCount; ++i) {
        const auto param = static_cast<gpfc::Param>(i);
        p.set(param, std::exp(priors[param].nu + normal(rng)));
    }
    return p;
}

inline std::vector<double> random_points(std::mt19937_64& rng, std::size_t n, double lo = 0.0, double hi = 3.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> x(n);
    for (auto& v : x) v = u(rng);
    return x;
}

inline Vector random_vector(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
    return v;
}

}  // namespace oracle
