// Serial vs OpenMP timings for Gram assembly, gradient contraction and
// a batch of series fits. Also checks that both paths agree bit for bit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "gpfc/bench.hpp"
#include "gpfc/forecaster.hpp"
#include "gpfc/kernels.hpp"
#include "gpfc/priors.hpp"

using namespace gpfc;

namespace {

template <typename F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void row(const char* what, double serial, double parallel, bool same) {
    std::printf("%-22s serial %9.4f s   parallel %9.4f s   speedup %5.2fx   %s\n", what, serial, parallel,
                serial / parallel, same ? "identical" : "MISMATCH");
}

Dataset batch(std::size_t count, std::size_t length) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal(0.0, 1.0);
    Dataset ds;
    for (std::size_t s = 0; s < count; ++s) {
        std::vector<double> y(length);
        for (std::size_t i = 0; i < length; ++i) {
            y[i] = 0.05 * static_cast<double>(i) + 3.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / 12.0) +
                   normal(rng);
        }
        ds.series.push_back({"s" + std::to_string(s), {y, Frequency::monthly(), std::nullopt}, 18});
    }
    return ds;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP timings"};
    int n = 1500;
    int reps = 3;
    int series = 32;
    int threads = omp_get_max_threads();
    app.add_option("-n", n, "training points for the kernel timings")->check(CLI::PositiveNumber);
    app.add_option("--reps", reps, "repetitions, best time is reported")->check(CLI::PositiveNumber);
    app.add_option("--series", series, "series in the batch timing")->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);
    omp_set_num_threads(threads);

    const auto spec = default_spec(Seasonality::Double);
    const auto theta = default_priors().medians();
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = i / static_cast<double>(kSixHourlyStepsPerYear);
    std::printf("threads %d, n %d, best of %d\n", threads, n, reps);

    Matrix gs, gp;
    const double gram_s = best_of(reps, [&] { gs = build_gram(spec, theta, x, Exec::Serial); });
    const double gram_p = best_of(reps, [&] { gp = build_gram(spec, theta, x, Exec::Parallel); });
    row("build_gram", gram_s, gram_p, gs == gp);

    const Matrix w = gs.selfadjointView<Eigen::Lower>() * Matrix::Identity(n, n) * 1e-3;
    Vector cs, cp;
    const double con_s = best_of(reps, [&] { cs = contract_grad_gram(spec, theta, x, w, Exec::Serial); });
    const double con_p = best_of(reps, [&] { cp = contract_grad_gram(spec, theta, x, w, Exec::Parallel); });
    row("contract_grad_gram", con_s, con_p, cs == cp);

    const auto ds = batch(static_cast<std::size_t>(series), 115);
    BenchConfig one, many;
    many.parallelism = threads;
    BenchReport rs, rp;
    const double b_s = best_of(1, [&] { rs = run_benchmark(ds, one); });
    const double b_p = best_of(1, [&] { rp = run_benchmark(ds, many); });
    row("run_benchmark", b_s, b_p, same_results(rs, rp));
    return gs == gp && cs == cp && same_results(rs, rp) ? 0 : 1;
}
