#include "gpfc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gpfc {

namespace {

constexpr std::array<std::string_view, kParamCount> kParamNames = {
    "s2_lin", "s2_bias", "s2_rbf",  "ell_rbf", "s2_per",  "ell_per", "s2_per2",  "ell_per2",
    "s2_sm1", "ell_sm1", "tau_sm1", "s2_sm2",  "ell_sm2", "tau_sm2", "s2_noise",
};

constexpr std::size_t idx(Param p) { return static_cast<std::size_t>(p); }

// Largest number of parameters owned by one term (SM: variance, lengthscale, tau).
constexpr std::size_t kMaxTermParams = 3;

double per_sin2(double diff, double period) {
    const double s = std::sin(std::numbers::pi * std::abs(diff) / period);
    return s * s;
}

struct TermVars {
    double var;
    double ell;
    double tau;
};

TermVars sm_vars(TermKind kind, const HyperParams& t) {
    return kind == TermKind::Sm1 ? TermVars{t.s2_sm1, t.ell_sm1, t.tau_sm1} : TermVars{t.s2_sm2, t.ell_sm2, t.tau_sm2};
}

// Writes d k_term / d log(theta) for the term's own parameters into `out`,
// in params_of(term.kind) order. Returns the number written.
std::size_t term_partials(const Term& term, const HyperParams& t, double x1, double x2,
                          std::array<double, kMaxTermParams>& out) {
    const double d = x1 - x2;
    switch (term.kind) {
        case TermKind::Lin:
            out[0] = t.s2_lin * (x1 * x2);
            out[1] = t.s2_bias;
            return 2;
        case TermKind::Rbf: {
            const double r2 = d * d / (t.ell_rbf * t.ell_rbf);
            const double k = t.s2_rbf * std::exp(-0.5 * r2);
            out[0] = k;
            out[1] = k * r2;
            return 2;
        }
        case TermKind::Per:
        case TermKind::Per2: {
            const bool first = term.kind == TermKind::Per;
            const double var = first ? t.s2_per : t.s2_per2;
            const double ell = first ? t.ell_per : t.ell_per2;
            const double s2 = per_sin2(d, term.period);
            const double k = var * std::exp(-2.0 * s2 / (ell * ell));
            out[0] = k;
            out[1] = k * 4.0 * s2 / (ell * ell);
            return 2;
        }
        case TermKind::Sm1:
        case TermKind::Sm2: {
            const auto v = sm_vars(term.kind, t);
            const double r2 = d * d / (v.ell * v.ell);
            const double env = v.var * std::exp(-0.5 * r2);
            const double arg = d / v.tau;
            const double k = env * std::cos(arg);
            out[0] = k;
            out[1] = k * r2;
            out[2] = env * std::sin(arg) * arg;
            return 3;
        }
        case TermKind::WhiteNoise:
            out[0] = x1 == x2 ? t.s2_noise : 0.0;
            return 1;
    }
    return 0;
}

template <typename F>
void for_rows(Exec exec, std::ptrdiff_t rows, F&& body) {
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (std::ptrdiff_t i = 0; i < rows; ++i) body(i);
    } else {
        for (std::ptrdiff_t i = 0; i < rows; ++i) body(i);
    }
}

void require_finite(const Matrix& m) {
    if (!m.allFinite()) throw InvalidHyperParams("kernel produced a non-finite covariance");
}

}  // namespace

std::string_view param_name(Param p) { return kParamNames[idx(p)]; }

std::optional<Param> param_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kParamCount; ++i) {
        if (kParamNames[i] == name) return static_cast<Param>(i);
    }
    return std::nullopt;
}

bool is_variance(Param p) {
    switch (p) {
        case Param::LinSlopeVar:
        case Param::LinBiasVar:
        case Param::RbfVar:
        case Param::PerVar:
        case Param::Per2Var:
        case Param::Sm1Var:
        case Param::Sm2Var:
        case Param::NoiseVar:
            return true;
        default:
            return false;
    }
}

double HyperParams::get(Param p) const {
    switch (p) {
        case Param::LinSlopeVar: return s2_lin;
        case Param::LinBiasVar: return s2_bias;
        case Param::RbfVar: return s2_rbf;
        case Param::RbfLength: return ell_rbf;
        case Param::PerVar: return s2_per;
        case Param::PerLength: return ell_per;
        case Param::Per2Var: return s2_per2;
        case Param::Per2Length: return ell_per2;
        case Param::Sm1Var: return s2_sm1;
        case Param::Sm1Length: return ell_sm1;
        case Param::Sm1Tau: return tau_sm1;
        case Param::Sm2Var: return s2_sm2;
        case Param::Sm2Length: return ell_sm2;
        case Param::Sm2Tau: return tau_sm2;
        case Param::NoiseVar: return s2_noise;
    }
    return 0.0;
}

void HyperParams::set(Param p, double value) {
    switch (p) {
        case Param::LinSlopeVar: s2_lin = value; break;
        case Param::LinBiasVar: s2_bias = value; break;
        case Param::RbfVar: s2_rbf = value; break;
        case Param::RbfLength: ell_rbf = value; break;
        case Param::PerVar: s2_per = value; break;
        case Param::PerLength: ell_per = value; break;
        case Param::Per2Var: s2_per2 = value; break;
        case Param::Per2Length: ell_per2 = value; break;
        case Param::Sm1Var: s2_sm1 = value; break;
        case Param::Sm1Length: ell_sm1 = value; break;
        case Param::Sm1Tau: tau_sm1 = value; break;
        case Param::Sm2Var: s2_sm2 = value; break;
        case Param::Sm2Length: ell_sm2 = value; break;
        case Param::Sm2Tau: tau_sm2 = value; break;
        case Param::NoiseVar: s2_noise = value; break;
    }
}

std::vector<Param> params_of(TermKind kind) {
    switch (kind) {
        case TermKind::Lin: return {Param::LinSlopeVar, Param::LinBiasVar};
        case TermKind::Rbf: return {Param::RbfVar, Param::RbfLength};
        case TermKind::Per: return {Param::PerVar, Param::PerLength};
        case TermKind::Per2: return {Param::Per2Var, Param::Per2Length};
        case TermKind::Sm1: return {Param::Sm1Var, Param::Sm1Length, Param::Sm1Tau};
        case TermKind::Sm2: return {Param::Sm2Var, Param::Sm2Length, Param::Sm2Tau};
        case TermKind::WhiteNoise: return {Param::NoiseVar};
    }
    return {};
}

KernelSpec::KernelSpec(std::vector<Term> terms) : terms_(std::move(terms)) {
    for (const auto& term : terms_) {
        for (Param p : params_of(term.kind)) trainable_.push_back(p);
    }
}

bool KernelSpec::has(TermKind kind) const { return find(kind) != nullptr; }

const Term* KernelSpec::find(TermKind kind) const {
    auto it = std::find_if(terms_.begin(), terms_.end(), [kind](const Term& t) { return t.kind == kind; });
    return it == terms_.end() ? nullptr : &*it;
}

void KernelSpec::validate() const {
    if (!has(TermKind::WhiteNoise)) throw std::invalid_argument("kernel spec must contain a white-noise term");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        for (std::size_t j = i + 1; j < terms_.size(); ++j) {
            if (terms_[i].kind == terms_[j].kind) throw std::invalid_argument("kernel spec repeats a term");
        }
        const auto kind = terms_[i].kind;
        if ((kind == TermKind::Per || kind == TermKind::Per2) &&
            !(std::isfinite(terms_[i].period) && terms_[i].period > 0.0)) {
            throw std::invalid_argument("periodic term needs a positive finite period");
        }
    }
}

void check_hyperparams(const KernelSpec& spec, const HyperParams& theta) {
    for (Param p : spec.trainable()) {
        const double v = theta.get(p);
        if (!(std::isfinite(v) && v > 0.0)) {
            throw InvalidHyperParams("hyperparameter " + std::string(param_name(p)) + " must be positive and finite");
        }
    }
}

double eval_term(const Term& term, const HyperParams& t, double x1, double x2) {
    const double d = x1 - x2;
    switch (term.kind) {
        case TermKind::Lin:
            return t.s2_bias + t.s2_lin * (x1 * x2);
        case TermKind::Rbf:
            return t.s2_rbf * std::exp(-d * d / (2.0 * t.ell_rbf * t.ell_rbf));
        case TermKind::Per:
            return t.s2_per * std::exp(-2.0 * per_sin2(d, term.period) / (t.ell_per * t.ell_per));
        case TermKind::Per2:
            return t.s2_per2 * std::exp(-2.0 * per_sin2(d, term.period) / (t.ell_per2 * t.ell_per2));
        case TermKind::Sm1:
        case TermKind::Sm2: {
            const auto v = sm_vars(term.kind, t);
            return v.var * std::exp(-d * d / (2.0 * v.ell * v.ell)) * std::cos(d / v.tau);
        }
        case TermKind::WhiteNoise:
            return x1 == x2 ? t.s2_noise : 0.0;
    }
    return 0.0;
}

double eval_kernel(const KernelSpec& spec, const HyperParams& theta, double x1, double x2) {
    check_hyperparams(spec, theta);
    double k = 0.0;
    for (const auto& term : spec.terms()) k += eval_term(term, theta, x1, x2);
    if (!std::isfinite(k)) throw InvalidHyperParams("kernel produced a non-finite covariance");
    return k;
}

Matrix build_gram(const KernelSpec& spec, const HyperParams& theta, std::span<const double> x, Exec exec) {
    check_hyperparams(spec, theta);
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    Matrix gram(n, n);
    for_rows(exec, n, [&](std::ptrdiff_t i) {
        for (std::ptrdiff_t j = i; j < n; ++j) {
            double k = 0.0;
            for (const auto& term : spec.terms()) k += eval_term(term, theta, x[i], x[j]);
            gram(i, j) = k;
        }
    });
    gram.triangularView<Eigen::StrictlyLower>() = gram.transpose().triangularView<Eigen::StrictlyLower>();
    require_finite(gram);
    return gram;
}

Matrix build_cross(const KernelSpec& spec, const HyperParams& theta, std::span<const double> x_star,
                   std::span<const double> x, Exec exec) {
    check_hyperparams(spec, theta);
    const auto m = static_cast<std::ptrdiff_t>(x_star.size());
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    Matrix cross(m, n);
    for_rows(exec, m, [&](std::ptrdiff_t i) {
        for (std::ptrdiff_t j = 0; j < n; ++j) {
            double k = 0.0;
            for (const auto& term : spec.terms()) {
                if (term.kind != TermKind::WhiteNoise) k += eval_term(term, theta, x_star[i], x[j]);
            }
            cross(i, j) = k;
        }
    });
    require_finite(cross);
    return cross;
}

Vector signal_diag(const KernelSpec& spec, const HyperParams& theta, std::span<const double> x_star) {
    check_hyperparams(spec, theta);
    Vector diag(static_cast<Eigen::Index>(x_star.size()));
    for (std::size_t i = 0; i < x_star.size(); ++i) {
        double k = 0.0;
        for (const auto& term : spec.terms()) {
            if (term.kind != TermKind::WhiteNoise) k += eval_term(term, theta, x_star[i], x_star[i]);
        }
        diag(static_cast<Eigen::Index>(i)) = k;
    }
    if (!diag.allFinite()) throw InvalidHyperParams("kernel produced a non-finite covariance");
    return diag;
}

std::vector<Matrix> grad_gram(const KernelSpec& spec, const HyperParams& theta, std::span<const double> x) {
    check_hyperparams(spec, theta);
    const auto n = static_cast<Eigen::Index>(x.size());
    std::vector<Matrix> out(spec.trainable().size(), Matrix::Zero(n, n));
    std::array<double, kMaxTermParams> partial{};
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            std::size_t offset = 0;
            for (const auto& term : spec.terms()) {
                const std::size_t count = term_partials(term, theta, x[i], x[j], partial);
                for (std::size_t k = 0; k < count; ++k) out[offset + k](i, j) = partial[k];
                offset += count;
            }
        }
    }
    for (const auto& m : out) require_finite(m);
    return out;
}

Vector contract_grad_gram(const KernelSpec& spec, const HyperParams& theta, std::span<const double> x,
                          const Matrix& weights, Exec exec) {
    check_hyperparams(spec, theta);
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    if (weights.rows() != n || weights.cols() != n) throw std::invalid_argument("weight matrix shape mismatch");
    const auto p = static_cast<Eigen::Index>(spec.trainable().size());

    // Row-wise partial sums, reduced afterwards in row order, so the serial and
    // parallel paths perform identical floating-point operations.
    Matrix row_sums = Matrix::Zero(p, n);
    for_rows(exec, n, [&](std::ptrdiff_t i) {
        std::array<double, kMaxTermParams> partial{};
        auto acc = row_sums.col(i);
        for (std::ptrdiff_t j = i; j < n; ++j) {
            const double w = (j == i ? 0.5 : 1.0) * weights(i, j);
            std::size_t offset = 0;
            for (const auto& term : spec.terms()) {
                const std::size_t count = term_partials(term, theta, x[i], x[j], partial);
                for (std::size_t k = 0; k < count; ++k) acc(static_cast<Eigen::Index>(offset + k)) += w * partial[k];
                offset += count;
            }
        }
    });
    Vector grad = Vector::Zero(p);
    for (std::ptrdiff_t i = 0; i < n; ++i) grad += row_sums.col(i);
    if (!grad.allFinite()) throw InvalidHyperParams("kernel gradient is non-finite");
    return grad;
}

}  // namespace gpfc
