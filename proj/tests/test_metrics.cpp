#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gpfc/metrics.hpp"
#include "oracles.hpp"

using namespace gpfc;

TEST_CASE("mae") {
    const std::vector<double> a{1.0, -1.0};
    CHECK(mae(a, a) == 0.0);
    CHECK(mae(a, std::vector<double>{0.0, 0.0}) == 1.0);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0, 1);
    std::vector<double> y(18), m(18);
    for (auto& v : y) v = n(rng);
    for (auto& v : m) v = n(rng);
    double sum = 0.0;
    for (int t = 0; t < 18; ++t) sum += std::fabs(y[t] - m[t]);
    CHECK(std::abs(mae(y, m) - sum / 18) <= 1e-15);
    CHECK_THROWS(mae(y, std::vector<double>(3)));
    CHECK_THROWS(mae(std::vector<double>{}, std::vector<double>{}));
}

TEST_CASE("CRPS closed form") {
    const double at_mean = std::sqrt(2 / std::numbers::pi) - 1 / std::sqrt(std::numbers::pi);
    CHECK(crps_gaussian(0.3, 0.3, 1.0) == doctest::Approx(at_mean).epsilon(1e-15));
    CHECK(crps_gaussian(5.0, 5.0, 2.5) == doctest::Approx(2.5 * 0.2336949772).epsilon(1e-9));
    CHECK(std::abs(crps_gaussian(1.3, -0.4, 1e-6) - 1.7) <= 1e-4);
    CHECK_THROWS(crps_gaussian(0, 0, 0));
    CHECK_THROWS(crps_gaussian(0, 0, -1));

    std::mt19937_64 rng(2);
    std::normal_distribution<double> n(0, 1);
    std::uniform_real_distribution<double> s(0.05, 3.0);
    for (int rep = 0; rep < 30; ++rep) {
        const double mu = n(rng), sigma = s(rng), y = mu + 2.5 * sigma * n(rng);
        CHECK(std::abs(crps_gaussian(y, mu, sigma) - oracle::crps_quadrature(y, mu, sigma)) <= 1e-6);
    }
}

TEST_CASE("CRPS translation and scale behaviour") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0, 1);
    for (int rep = 0; rep < 50; ++rep) {
        const double y = n(rng), mu = n(rng), sigma = std::exp(n(rng));
        const double base = crps_gaussian(y, mu, sigma);
        CHECK(crps_gaussian(y + 0.5, mu + 0.5, sigma) == doctest::Approx(base).epsilon(1e-12));
        CHECK(crps_gaussian(y + 0.25, mu + 0.25, sigma) == crps_gaussian(y + 0.25, mu + 0.25, sigma));
        CHECK(std::abs(crps_gaussian(3 * y, 3 * mu, 3 * sigma) - 3 * base) <= 1e-12 * std::max(1.0, base));
    }
}

TEST_CASE("CRPS is proper: the true distribution has the lowest expected score") {
    struct Case {
        double mu, sigma;
    };
    const Case wrong[] = {{0.5, 1.0}, {0.0, 2.0}, {0.0, 0.5}, {-0.3, 1.3}, {1.0, 0.3}};
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0, 1);
    const int draws = 100000;
    for (const auto& w : wrong) {
        double diff_sum = 0, diff_sq = 0;
        for (int i = 0; i < draws; ++i) {
            const double y = n(rng);
            const double d = crps_gaussian(y, w.mu, w.sigma) - crps_gaussian(y, 0.0, 1.0);
            diff_sum += d;
            diff_sq += d * d;
        }
        const double mean = diff_sum / draws;
        const double se = std::sqrt((diff_sq / draws - mean * mean) / draws);
        CHECK(mean > 3 * se);
    }
}

TEST_CASE("test log-likelihood") {
    const std::vector<double> y{1.0, 2.0, 3.0};
    CHECK(test_log_likelihood(y, y, std::vector<double>{1, 1, 1}) ==
          doctest::Approx(-0.5 * std::log(2 * std::numbers::pi)).epsilon(1e-15));
    CHECK(test_log_likelihood(std::vector<double>{1.0}, std::vector<double>{0.0}, std::vector<double>{1.0}) ==
          doctest::Approx(-0.5 * std::log(2 * std::numbers::pi) - 0.5).epsilon(1e-15));
    CHECK_THROWS(test_log_likelihood(y, y, std::vector<double>{1, 0, 1}));

    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0, 1);
    std::vector<double> a(10), m(10), v(10);
    double expected = 0;
    for (int t = 0; t < 10; ++t) {
        a[t] = n(rng);
        m[t] = n(rng);
        v[t] = std::exp(n(rng));
        expected += std::log(std::exp(-(a[t] - m[t]) * (a[t] - m[t]) / (2 * v[t])) / std::sqrt(2 * std::numbers::pi * v[t]));
    }
    CHECK(std::abs(test_log_likelihood(a, m, v) - expected / 10) <= 1e-12);

    // For a fixed residual the density peaks at variance = residual^2.
    const double r = 0.8;
    double best_v = 0, best = -1e300;
    for (double var = 0.01; var < 3.0; var += 1e-4) {
        const double ll = test_log_likelihood(std::vector<double>{r}, std::vector<double>{0.0}, std::vector<double>{var});
        if (ll > best) {
            best = ll;
            best_v = var;
        }
    }
    CHECK(best_v == doctest::Approx(r * r).epsilon(1e-3));
}

TEST_CASE("score report") {
    const std::vector<double> y{0.0, 1.0, -1.0}, m{0.5, 0.5, 0.0}, v{1.0, 0.25, 2.0};
    const auto s = score(y, m, v);
    CHECK(s.abs_error.size() == 3);
    CHECK(s.mae == doctest::Approx(mae(y, m)));
    CHECK(s.crps == doctest::Approx((crps_gaussian(0, 0.5, 1) + crps_gaussian(1, 0.5, 0.5) +
                                     crps_gaussian(-1, 0, std::sqrt(2.0))) / 3));
    CHECK(s.ll == doctest::Approx(test_log_likelihood(y, m, v)));
    CHECK(s.mae >= 0);
    CHECK(s.crps >= 0);
}
