#include "gpfc/trainer.hpp"

#include <chrono>
#include <cmath>
#include <algorithm>
#include <limits>
#include <optional>
#include <random>

namespace gpfc {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 40;
// Largest change of any log-parameter in one step.
constexpr double kMaxStep = 2.0;

struct Problem {
    const KernelSpec& spec;
    const PriorSpec& priors;
    std::span<const double> x;
    const Vector& y;
    HyperParams base;
    Exec exec;

    // Minimisation form: f = -objective.
    bool eval(const Vector& u, double& f, Vector& g) const {
        if (!u.allFinite()) return false;
        auto r = map_objective_with_grad(spec, priors, from_log_params(spec, u, base), x, y, exec);
        if (!std::isfinite(r.value) || !r.gradient.allFinite()) return false;
        f = -r.value;
        g = -r.gradient;
        return true;
    }
};

struct Run {
    Vector u;
    double f;
    double f_init;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;
};

Run bfgs(const Problem& prob, Vector u, const TrainConfig& cfg) {
    const auto dim = u.size();
    Run run;
    Vector g;
    if (!prob.eval(u, run.f, g)) throw IllConditionedModel("MAP objective is not finite at the initial point");
    run.f_init = run.f;
    run.trace.push_back(-run.f);

    Matrix h = Matrix::Identity(dim, dim);
    bool h_is_identity = true;
    bool scaled = false;
    Vector u_new(dim), g_new(dim);
    double f_new = 0.0;

    while (run.iterations < cfg.max_iterations) {
        if (g.lpNorm<Eigen::Infinity>() <= cfg.grad_tolerance) {
            run.converged = true;
            break;
        }
        Vector dir = -h * g;
        if (g.dot(dir) >= 0.0) {
            h.setIdentity();
            h_is_identity = true;
            dir = -g;
        }
        if (const double big = dir.lpNorm<Eigen::Infinity>(); big > kMaxStep) dir *= kMaxStep / big;

        const double slope = g.dot(dir);
        double step = 1.0;
        bool accepted = false;
        for (int b = 0; b < kMaxBacktracks; ++b, step *= 0.5) {
            u_new = u + step * dir;
            if (prob.eval(u_new, f_new, g_new) && f_new <= run.f + kArmijo * step * slope) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (h_is_identity) break;
            h.setIdentity();
            h_is_identity = true;
            continue;
        }
        ++run.iterations;

        const Vector s = u_new - u;
        const Vector yk = g_new - g;
        const double sy = s.dot(yk);
        const double f_old = run.f;
        u = u_new;
        g = g_new;
        run.f = f_new;
        run.trace.push_back(-run.f);

        if (sy > 1e-12 * s.norm() * yk.norm()) {
            if (!scaled) {
                h = Matrix::Identity(dim, dim) * (sy / yk.squaredNorm());
                scaled = true;
            }
            const double rho = 1.0 / sy;
            const Vector hy = h * yk;
            h += (rho * rho * yk.dot(hy) + rho) * (s * s.transpose()) - rho * (hy * s.transpose() + s * hy.transpose());
            h_is_identity = false;
        }
        if (std::abs(f_old - run.f) <= cfg.objective_tolerance * std::max(1.0, std::abs(run.f))) {
            run.converged = true;
            break;
        }
    }
    if (!run.converged && g.lpNorm<Eigen::Infinity>() <= cfg.grad_tolerance) run.converged = true;
    run.u = std::move(u);
    return run;
}

}  // namespace

void TrainConfig::validate() const {
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (!(grad_tolerance > 0.0) || !(objective_tolerance > 0.0)) {
        throw std::invalid_argument("tolerances must be positive");
    }
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
}

HyperParams from_log_params(const KernelSpec& spec, const Vector& u, const HyperParams& base) {
    HyperParams theta = base;
    const auto& params = spec.trainable();
    for (std::size_t k = 0; k < params.size(); ++k) theta.set(params[k], std::exp(u(static_cast<Eigen::Index>(k))));
    return theta;
}

Vector to_log_params(const KernelSpec& spec, const HyperParams& theta) {
    const auto& params = spec.trainable();
    Vector u(static_cast<Eigen::Index>(params.size()));
    for (std::size_t k = 0; k < params.size(); ++k) u(static_cast<Eigen::Index>(k)) = std::log(theta.get(params[k]));
    return u;
}

double map_objective(const KernelSpec& spec, const PriorSpec& priors, const HyperParams& theta,
                     std::span<const double> x, const Vector& y) {
    try {
        return log_marginal_likelihood(spec, theta, x, y) + log_prior(priors, spec, theta);
    } catch (const IllConditionedModel&) {
        return -std::numeric_limits<double>::infinity();
    } catch (const InvalidHyperParams&) {
        return -std::numeric_limits<double>::infinity();
    }
}

ValueAndGradient map_objective_with_grad(const KernelSpec& spec, const PriorSpec& priors, const HyperParams& theta,
                                         std::span<const double> x, const Vector& y, Exec exec) {
    try {
        auto r = log_marginal_likelihood_with_grad(spec, theta, x, y, exec);
        r.value += log_prior(priors, spec, theta);
        r.gradient += grad_log_prior(priors, spec, theta);
        return r;
    } catch (const IllConditionedModel&) {
    } catch (const InvalidHyperParams&) {
    }
    return {-std::numeric_limits<double>::infinity(), Vector()};
}

TrainResult train(const KernelSpec& spec, const PriorSpec& priors, std::span<const double> x, const Vector& y,
                  const TrainConfig& cfg) {
    cfg.validate();
    spec.validate();
    if (x.size() < 4) throw std::invalid_argument("training needs at least 4 points");
    const auto start = std::chrono::steady_clock::now();

    const HyperParams base = priors.medians();
    const Problem prob{spec, priors, x, y, base, cfg.exec};
    const Vector u_init = to_log_params(spec, base);

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::optional<Run> best;
    double initial_objective = 0.0;
    for (int r = 0; r < cfg.restarts; ++r) {
        Vector u0 = u_init;
        if (r > 0) {
            const auto& params = spec.trainable();
            for (std::size_t k = 0; k < params.size(); ++k) {
                u0(static_cast<Eigen::Index>(k)) += std::sqrt(priors[params[k]].lambda) * normal(rng);
            }
        }
        Run run;
        try {
            run = bfgs(prob, u0, cfg);
        } catch (const IllConditionedModel&) {
            if (r == 0) throw;
            continue;
        }
        if (r == 0) initial_objective = -run.f_init;
        if (!best || run.f < best->f) best = std::move(run);
    }

    TrainResult result;
    result.theta = from_log_params(spec, best->u, base);
    result.objective = -best->f;
    result.initial_objective = initial_objective;
    result.iterations = best->iterations;
    result.converged = best->converged;
    result.trace = std::move(best->trace);
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace gpfc
