#include "gpfc/priors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gpfc {

double LogNormal::median() const { return std::exp(nu); }

double LogNormal::quantile(double z) const { return std::exp(nu + z * std::sqrt(lambda)); }

void PriorSpec::validate() const {
    const LogNormal& var_prior = (*this)[Param::NoiseVar];
    std::optional<double> ell_lambda;
    for (std::size_t i = 0; i < kParamCount; ++i) {
        const auto p = static_cast<Param>(i);
        const LogNormal& e = entries_[i];
        if (!(std::isfinite(e.lambda) && e.lambda > 0.0) || !std::isfinite(e.nu)) {
            throw std::invalid_argument("prior for " + std::string(param_name(p)) + " needs finite nu and lambda > 0");
        }
        if (is_variance(p)) {
            if (!(e == var_prior)) throw std::invalid_argument("all variance parameters must share one prior");
        } else if (!ell_lambda) {
            ell_lambda = e.lambda;
        } else if (*ell_lambda != e.lambda) {
            throw std::invalid_argument("all lengthscale parameters must share lambda");
        }
    }
}

HyperParams PriorSpec::medians() const {
    HyperParams theta;
    for (std::size_t i = 0; i < kParamCount; ++i) {
        theta.set(static_cast<Param>(i), entries_[i].median());
    }
    return theta;
}

PriorSpec default_priors() {
    PriorSpec p;
    const LogNormal variance{-1.5, 1.0};
    for (std::size_t i = 0; i < kParamCount; ++i) {
        if (is_variance(static_cast<Param>(i))) p[static_cast<Param>(i)] = variance;
    }
    p[Param::PerLength] = {0.2, 1.0};
    p[Param::Per2Length] = {0.2, 1.0};
    p[Param::RbfLength] = {1.1, 1.0};
    p[Param::Sm1Length] = {-0.7, 1.0};
    p[Param::Sm1Tau] = {0.5, 1.0};
    p[Param::Sm2Length] = {1.1, 1.0};
    p[Param::Sm2Tau] = {1.6, 1.0};
    return p;
}

double log_prior(const PriorSpec& priors, const KernelSpec& spec, const HyperParams& theta) {
    check_hyperparams(spec, theta);
    double total = 0.0;
    for (Param p : spec.trainable()) {
        const LogNormal& e = priors[p];
        const double u = std::log(theta.get(p));
        const double r = u - e.nu;
        total += -u - 0.5 * std::log(2.0 * std::numbers::pi * e.lambda) - r * r / (2.0 * e.lambda);
    }
    return total;
}

Vector grad_log_prior(const PriorSpec& priors, const KernelSpec& spec, const HyperParams& theta) {
    check_hyperparams(spec, theta);
    const auto& params = spec.trainable();
    Vector g(static_cast<Eigen::Index>(params.size()));
    for (std::size_t k = 0; k < params.size(); ++k) {
        const LogNormal& e = priors[params[k]];
        g(static_cast<Eigen::Index>(k)) = -1.0 - (std::log(theta.get(params[k])) - e.nu) / e.lambda;
    }
    return g;
}

void write_priors(std::ostream& out, const PriorSpec& priors) {
    out << "# name = nu lambda   (log(theta) ~ Normal(nu, lambda))\n";
    auto shortest = [](double v) {
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, ptr);
    };
    for (std::size_t i = 0; i < kParamCount; ++i) {
        const auto p = static_cast<Param>(i);
        out << param_name(p) << " = " << shortest(priors[p].nu) << ' ' << shortest(priors[p].lambda) << '\n';
    }
}

PriorSpec read_priors(std::istream& in) {
    PriorSpec priors = default_priors();
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw std::invalid_argument("priors line " + std::to_string(line_no) + ": expected `name = nu lambda`");
        }
        std::istringstream key_stream(line.substr(0, eq));
        std::string key;
        key_stream >> key;
        std::istringstream values(line.substr(eq + 1));
        LogNormal e;
        std::string rest;
        if (!(values >> e.nu >> e.lambda) || (values >> rest)) {
            throw std::invalid_argument("priors line " + std::to_string(line_no) + ": expected two numbers");
        }
        if (key == "variance") {
            for (std::size_t i = 0; i < kParamCount; ++i) {
                if (is_variance(static_cast<Param>(i))) priors[static_cast<Param>(i)] = e;
            }
            continue;
        }
        auto param = param_from_name(key);
        if (!param) throw std::invalid_argument("priors line " + std::to_string(line_no) + ": unknown parameter " + key);
        priors[*param] = e;
    }
    priors.validate();
    return priors;
}

PriorSpec load_priors(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open priors file " + path);
    return read_priors(in);
}

}  // namespace gpfc
