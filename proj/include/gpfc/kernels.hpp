#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace gpfc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Every hyperparameter the composition can carry. Periods are not listed:
/// they are constants of the kernel spec, never trained.
enum class Param : std::size_t {
    LinSlopeVar,
    LinBiasVar,
    RbfVar,
    RbfLength,
    PerVar,
    PerLength,
    Per2Var,
    Per2Length,
    Sm1Var,
    Sm1Length,
    Sm1Tau,
    Sm2Var,
    Sm2Length,
    Sm2Tau,
    NoiseVar,
};

inline constexpr std::size_t kParamCount = 15;

/// Stable text name of a parameter (used in config files and reports).
std::string_view param_name(Param p);
std::optional<Param> param_from_name(std::string_view name);
bool is_variance(Param p);

/// Thrown for hyperparameter vectors that are non-positive or produce
/// non-finite covariances.
class InvalidHyperParams : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct HyperParams {
    double s2_lin = 1.0;
    double s2_bias = 1.0;
    double s2_rbf = 1.0;
    double ell_rbf = 1.0;
    double s2_per = 1.0;
    double ell_per = 1.0;
    double s2_per2 = 1.0;
    double ell_per2 = 1.0;
    double s2_sm1 = 1.0;
    double ell_sm1 = 1.0;
    double tau_sm1 = 1.0;
    double s2_sm2 = 1.0;
    double ell_sm2 = 1.0;
    double tau_sm2 = 1.0;
    double s2_noise = 1.0;

    double get(Param p) const;
    void set(Param p, double value);

    friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

enum class TermKind { Lin, Rbf, Per, Per2, Sm1, Sm2, WhiteNoise };

struct Term {
    TermKind kind;
    double period = 0.0;  // years; PER and PER2 only

    friend bool operator==(const Term&, const Term&) = default;
};

/// Declarative description of a sum of kernel terms.
class KernelSpec {
public:
    KernelSpec() = default;
    explicit KernelSpec(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    bool has(TermKind kind) const;
    const Term* find(TermKind kind) const;

    /// Trainable parameters of the enabled terms, in gradient order.
    const std::vector<Param>& trainable() const { return trainable_; }

    /// Throws std::invalid_argument unless WN is present, every term appears
    /// at most once, and periods are positive and finite.
    void validate() const;

    friend bool operator==(const KernelSpec& a, const KernelSpec& b) { return a.terms_ == b.terms_; }

private:
    std::vector<Term> terms_;
    std::vector<Param> trainable_;
};

/// Parameters belonging to one term kind, in layout order.
std::vector<Param> params_of(TermKind kind);

/// Throws InvalidHyperParams unless every parameter used by `spec` is
/// strictly positive and finite.
void check_hyperparams(const KernelSpec& spec, const HyperParams& theta);

/// Covariance of a single term between two time points (years).
double eval_term(const Term& term, const HyperParams& theta, double x1, double x2);

/// Sum of all enabled terms. WN contributes only when x1 == x2 exactly.
double eval_kernel(const KernelSpec& spec, const HyperParams& theta, double x1, double x2);

/// Execution policy for the data-parallel assembly loops. `Serial` is the
/// reference path; `Parallel` distributes rows over OpenMP threads and
/// produces bit-identical results.
enum class Exec { Serial, Parallel };

Matrix build_gram(const KernelSpec& spec, const HyperParams& theta, std::span<const double> x,
                  Exec exec = Exec::Serial);

/// Cross-covariance between latent test values and training observations,
/// K(X*, X). Test noise is independent of training noise, so WN never
/// contributes, even where a test point coincides with a training point.
Matrix build_cross(const KernelSpec& spec, const HyperParams& theta, std::span<const double> x_star,
                   std::span<const double> x, Exec exec = Exec::Serial);

/// Prior variance k(x*, x*) of the signal, i.e. without the WN term.
Vector signal_diag(const KernelSpec& spec, const HyperParams& theta, std::span<const double> x_star);

/// dK/d(log theta_k) for each trainable parameter, in `spec.trainable()` order.
std::vector<Matrix> grad_gram(const KernelSpec& spec, const HyperParams& theta, std::span<const double> x);

/// Computes g_k = 0.5 * sum_ij W_ij dK_ij/d(log theta_k) without materialising
/// the derivative matrices. `weights` must be symmetric n x n.
Vector contract_grad_gram(const KernelSpec& spec, const HyperParams& theta, std::span<const double> x,
                          const Matrix& weights, Exec exec = Exec::Serial);

}  // namespace gpfc
