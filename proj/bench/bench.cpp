// Wall-clock comparison of the serial and OpenMP trial loops, and of the
// naive reference estimator against the production kernels.
//
//   cwishart_bench [--workers N] [--trials T]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "cwishart/estimator.hpp"
#include "cwishart/montecarlo.hpp"
#include "cwishart/reference.hpp"
#include "cwishart/sampling.hpp"

using namespace cwishart;

namespace {

template <class Fn>
double time_it(Fn&& fn, int repeats = 1) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < repeats; ++i) {
        fn();
    }
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / repeats;
}

volatile double sink = 0.0;

} // namespace

int main(int argc, char** argv) {
    int workers = default_workers();
    Index trials = 20;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string a = argv[i];
        if (a == "--workers") {
            workers = std::atoi(argv[i + 1]);
        } else if (a == "--trials") {
            trials = std::atoll(argv[i + 1]);
        }
    }

    std::printf("estimator kernels (n=30, m=400)\n");
    const Distribution g{DistributionKind::gaussian};
    const auto batch = draw_real(30, 400, Matrix::identity(30), g, 1);
    const auto cbatch = draw_complex(30, 400, Matrix::identity(30), g, 1);
    const Matrix dense_t = materialize(CorrelationPattern::toeplitz(0.5, 400));
    const auto toeplitz = CorrelationPattern::toeplitz(0.5, 400);
    const auto phase = CorrelationPattern::phase(0.5, draw_phases(400, 2));
    const Matrix dense_p = materialize(phase);
    struct Row {
        const char* name;
        double seconds;
    };
    const Row rows[] = {
        {"reference, dense T(1/2)", time_it([&] { sink = trace(reference::correlated_sample_covariance(batch.x, dense_t)).real(); })},
        {"dense GEMM, T(1/2)", time_it([&] { sink = trace(correlated_sample_covariance(batch.x, dense_t)).real(); }, 20)},
        {"recursion, T(1/2)", time_it([&] { sink = trace(correlated_sample_covariance(batch.x, toeplitz)).real(); }, 20)},
        {"reference, dense P(1/2), complex", time_it([&] { sink = trace(reference::correlated_sample_covariance(cbatch.x, dense_p)).real(); })},
        {"dense GEMM, P(1/2), complex", time_it([&] { sink = trace(correlated_sample_covariance(cbatch.x, phase)).real(); }, 20)},
    };
    for (const auto& r : rows) {
        std::printf("  %-34s %10.3f ms\n", r.name, 1e3 * r.seconds);
    }

    std::printf("trial loops (sample-size, n=10:20:10, %lld trials, I/T(1/4)/T(1/2))\n", static_cast<long long>(trials));
    ExperimentSpec s;
    s.kind = ExperimentKind::sample_size;
    s.patterns = parse_pattern_list("identity,toeplitz:0.25,toeplitz:0.5");
    s.n_values = {10, 20};
    s.trials = trials;
    s.seed = 42;
    SampleSizeTable serial;
    SampleSizeTable parallel;
    const double ts = time_it([&] { serial = run_sample_size_experiment(s, Execution::serial()); });
    const double tp = time_it([&] { parallel = run_sample_size_experiment(s, Execution::parallel(workers)); });
    bool same = serial.rows.size() == parallel.rows.size();
    for (std::size_t i = 0; same && i < serial.rows.size(); ++i) {
        same = serial.rows[i].mean_min_m == parallel.rows[i].mean_min_m;
    }
    std::printf("  %-34s %10.3f s\n", "serial", ts);
    std::printf("  %-34s %10.3f s  (%d workers, speedup %.2fx, identical=%s)\n", "OpenMP", tp, workers, ts / tp,
                same ? "yes" : "no");
    return same ? 0 : 1;
}
