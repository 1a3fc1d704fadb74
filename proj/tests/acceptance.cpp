// Acceptance runner. Prints one PASS/FAIL line per criterion and exits 1 if
// any criterion fails. `--only N` runs a single criterion, `--cli PATH` points
// at the cwishart executable used by the determinism check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cwishart/estimator.hpp"
#include "cwishart/fit.hpp"
#include "cwishart/montecarlo.hpp"
#include "cwishart/patterns.hpp"
#include "cwishart/rng.hpp"
#include "cwishart/verify.hpp"
#include "oracles.hpp"

using namespace cwishart;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string cli_path;
constexpr std::uint64_t kSeed = 42;
const Distribution kGaussian{DistributionKind::gaussian};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome bias_identity() {
    const auto t0 = std::chrono::steady_clock::now();
    RealMatrix sigma = RealMatrix::Zero(4, 4);
    sigma.diagonal() << 1, 2, 3, 4;
    const Matrix s(sigma);
    const auto p = CorrelationPattern::toeplitz(0.5, 20);
    const int trials = 20000;
    RealMatrix sum = RealMatrix::Zero(4, 4);
    RealMatrix sum_sq = RealMatrix::Zero(4, 4);
    for (int t = 0; t < trials; ++t) {
        const auto batch = draw_real(4, 20, s, kGaussian, derive_seed(kSeed, static_cast<std::uint64_t>(t)));
        const RealMatrix e = correlated_sample_covariance(batch.x, p).real_values();
        sum += e;
        sum_sq += e.cwiseProduct(e);
    }
    const RealMatrix mean = sum / trials;
    const RealMatrix var = (sum_sq / trials - mean.cwiseProduct(mean)) * (trials / (trials - 1.0));
    const RealMatrix se = (var / trials).cwiseSqrt();
    double worst = 0.0;
    for (Index i = 0; i < 4; ++i) {
        for (Index j = 0; j < 4; ++j) {
            worst = std::max(worst, std::abs(mean(i, j) - sigma(i, j)) / se(i, j));
        }
    }
    const double secs = seconds_since(t0);
    return {worst <= 5.0 && secs <= 60.0,
            "max |mean - Sigma| / SE = " + fmt("%.3f", worst) + " (limit 5), " + fmt("%.1f", secs) + " s"};
}

struct ToeplitzInstance {
    Complex omega;
    Index m;
};

std::vector<ToeplitzInstance> toeplitz_instances() {
    std::mt19937_64 gen(20240601);
    std::uniform_real_distribution<double> radius(0.05, 0.95);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    std::uniform_int_distribution<Index> size(1, 64);
    std::vector<ToeplitzInstance> out;
    for (int i = 0; i < 100; ++i) {
        const double r = radius(gen);
        const double a = angle(gen);
        out.push_back({std::polar(r, a), size(gen)});
    }
    return out;
}

Outcome toeplitz_frobenius() {
    double worst = 0.0;
    for (const auto& inst : toeplitz_instances()) {
        const double fast = toeplitz_frobenius_sq(inst.omega, inst.m);
        const double direct = oracle::toeplitz_frobenius_sq_direct(inst.omega, static_cast<int>(inst.m));
        worst = std::max(worst, std::abs(fast - direct) / direct);
    }
    return {worst <= 1e-10, "max relative deviation " + fmt("%.3g", worst) + " over 100 instances (limit 1e-10)"};
}

Outcome gershgorin() {
    int violations = 0;
    double tightest = 0.0;
    for (const auto& inst : toeplitz_instances()) {
        const double norm = spectral_norm(materialize(CorrelationPattern::toeplitz(inst.omega, inst.m)));
        const double r = std::abs(inst.omega);
        const double bound = (1.0 + r) / (1.0 - r);
        violations += norm <= bound ? 0 : 1;
        tightest = std::max(tightest, norm / bound);
    }
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> radius(0.05, 0.95);
    std::uniform_int_distribution<Index> size(1, 64);
    for (int i = 0; i < 100; ++i) {
        const double c = radius(gen);
        const Index m = size(gen);
        const auto p = CorrelationPattern::phase(c, draw_phases(m, derive_seed(11, static_cast<std::uint64_t>(i))));
        const double norm = spectral_norm(materialize(p));
        const double bound = (1.0 + c) / (1.0 - c);
        violations += norm <= bound ? 0 : 1;
        tightest = std::max(tightest, norm / bound);
    }
    return {violations == 0, std::to_string(violations) + " violations in 200 instances, max norm/bound " +
                                 fmt("%.4f", tightest)};
}

std::vector<double> as_doubles(const std::vector<Index>& v) {
    return {v.begin(), v.end()};
}

Outcome sample_size_figure(ExperimentKind kind, const char* patterns) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentSpec s;
    s.kind = kind;
    s.distribution = kGaussian;
    s.patterns = parse_pattern_list(patterns);
    s.n_values = parse_range("5:30:5");
    s.trials = 100;
    s.seed = kSeed;
    const auto table = kind == ExperimentKind::sample_size
                           ? run_sample_size_experiment(s, Execution::parallel(default_workers()))
                           : run_complex_experiment(s, Execution::parallel(default_workers()));
    bool pass = table.censored_total == 0;
    std::string detail;
    std::vector<double> at30;
    for (const auto& p : s.patterns) {
        std::vector<double> ms;
        for (const auto& r : table.rows) {
            if (r.pattern == p.text) {
                ms.push_back(r.mean_min_m);
            }
        }
        const double r = oracle::pearson(as_doubles(s.n_values), ms);
        pass = pass && r >= 0.97;
        at30.push_back(ms.back());
        detail += p.text + ": r=" + fmt("%.4f", r) + " m(30)=" + fmt("%.1f", ms.back()) + "; ";
    }
    pass = pass && std::is_sorted(at30.begin(), at30.end());
    detail += "censored=" + std::to_string(table.censored_total) + ", " + fmt("%.1f", seconds_since(t0)) + " s with " +
              std::to_string(default_workers()) + " workers";
    return {pass, detail};
}

Outcome convergence_figure() {
    ExperimentSpec s;
    s.kind = ExperimentKind::convergence;
    s.distribution = kGaussian;
    s.patterns = parse_pattern_list("identity,toeplitz:0.25,toeplitz:0.5");
    s.n_values = {30};
    s.m_values = parse_range("50:1000:50");
    s.trials = 100;
    s.seed = kSeed;
    const auto table = run_convergence_experiment(s, Execution::parallel(default_workers()));
    const std::size_t k = s.m_values.size();
    // rows are ordered pattern-major, then m
    std::vector<std::vector<double>> err(3);
    for (std::size_t p = 0; p < 3; ++p) {
        for (std::size_t i = 0; i < k; ++i) {
            err[p].push_back(table.rows[p * k + i].mean_spec_err);
        }
    }
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < k; ++i) {
        lx.push_back(std::log(static_cast<double>(s.m_values[i])));
        ly.push_back(std::log(err[0][i]));
    }
    const double slope = oracle::slope(lx, ly);
    int misordered = 0;
    for (std::size_t i = 0; i < k; ++i) {
        misordered += err[2][i] >= err[1][i] && err[1][i] >= err[0][i] ? 0 : 1;
    }
    return {slope >= -0.65 && slope <= -0.35 && misordered == 0,
            "identity log-log slope " + fmt("%.4f", slope) + " (range [-0.65, -0.35]), misordered m values " +
                std::to_string(misordered)};
}

std::vector<FitCell> rate_grid() {
    std::vector<FitCell> grid;
    for (auto d : {DistributionKind::gaussian, DistributionKind::rademacher, DistributionKind::uniform}) {
        for (Index n : {5, 10, 20}) {
            for (Index m : {100, 400}) {
                grid.push_back({n, m, parse_pattern("identity"), {d}, std::nullopt});
            }
        }
    }
    return grid;
}

Outcome rate_shape() {
    const FitResult fit = fit_constant(rate_grid(), 200, kSeed, Execution::parallel(default_workers()));
    const double spread = fit.ratio_spread();
    return {spread <= 3.0, "fitted C=" + fmt("%.4f", fit.c) + ", largest ratio departure from geometric mean x" +
                               fmt("%.3f", spread) + " (limit 3) over " + std::to_string(fit.cells.size()) +
                               " cells"};
}

Outcome tail_validity() {
    const FitResult fit = fit_constant(rate_grid(), 200, kSeed + 1, Execution::parallel(default_workers()));
    const double c = 1.5 * fit.c;
    const FitCell cell{10, 200, parse_pattern("toeplitz:0.5"), kGaussian, std::nullopt};
    const auto checks = tail_exceedance(cell, c, {0.0, 1.0, 2.0}, 2000, kSeed + 2, Execution::parallel(default_workers()));
    bool pass = true;
    std::string detail = "C=" + fmt("%.4f", c) + "; ";
    for (const auto& t : checks) {
        pass = pass && t.pass;
        detail += "delta=" + fmt("%g", t.delta) + " exceedance " + fmt("%.4f", t.exceedance) + " <= " +
                  fmt("%.4f", t.allowed) + "; ";
    }
    return {pass, detail};
}

Outcome identity_battery() {
    const auto t0 = std::chrono::steady_clock::now();
    BatteryOptions o;
    o.seed = kSeed;
    o.instances = 200;
    o.only = {"vec-quadratic", "vec-quadratic-complex", "kronecker-norms", "hermitian-split", "complex-embedding",
              "epsilon-net"};
    const auto rows = run_battery(o, Execution::serial());
    bool pass = true;
    double worst = 0.0;
    for (const auto& r : rows) {
        pass = pass && r.pass && r.tolerance <= 1e-10 && r.instances >= 200;
        worst = std::max(worst, r.max_deviation);
    }
    const double secs = seconds_since(t0);
    return {pass && secs <= 30.0, std::to_string(rows.size()) + " checks, max deviation " + fmt("%.3g", worst) +
                                      ", " + fmt("%.1f", secs) + " s single-threaded"};
}

Outcome hanson_wright() {
    const Matrix b = materialize(CorrelationPattern::toeplitz(0.5, 50));
    bool pass = true;
    std::string detail;
    for (auto d : {DistributionKind::gaussian, DistributionKind::rademacher}) {
        const auto r = check_hanson_wright_empirical({d}, b, 100000, {}, kSeed, Execution::parallel(default_workers()));
        pass = pass && r.pass && !r.degenerate && r.r_squared >= 0.9;
        detail += r.distribution + ": R^2=" + fmt("%.4f", r.r_squared) + " mean " + fmt("%.3f", r.mean) + " vs " +
                  fmt("%.3f", r.expected_mean) + "; ";
    }
    return {pass, detail};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
    if (cli_path.empty()) {
        return {false, "no --cli path given"};
    }
    const std::vector<std::string> runs = {
        "simulate sample-size --n 5:15:5 --trials 6",
        "simulate convergence --n 8 --m 20:100:40 --trials 5 --patterns identity,toeplitz:0.3+0.2j",
        "simulate complex --n 4:8:4 --trials 4 --dist rademacher",
    };
    int differing = 0;
    int failed = 0;
    int k = 0;
    for (const auto& args : runs) {
        std::vector<std::string> outputs;
        for (int workers : {1, 3, 1}) {
            const std::string path = "determinism_" + std::to_string(k++) + ".csv";
            const std::string cmd =
                "\"" + cli_path + "\" " + args + " --seed 9 --workers " + std::to_string(workers) + " --out " + path;
            failed += std::system(cmd.c_str()) == 0 ? 0 : 1;
            outputs.push_back(slurp(path));
            std::remove(path.c_str());
        }
        for (const auto& o : outputs) {
            differing += o == outputs.front() && !o.empty() ? 0 : 1;
        }
    }
    return {differing == 0 && failed == 0, std::to_string(runs.size()) + " invocations x 3 runs, " +
                                               std::to_string(differing) + " differing outputs, " +
                                               std::to_string(failed) + " failed runs"};
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--only" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else if (a == "--cli" && i + 1 < argc) {
            cli_path = argv[++i];
        } else {
            std::cerr << "usage: acceptance [--only N] [--cli PATH]\n";
            return 2;
        }
    }
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"bias identity", bias_identity},
        {"closed-form Toeplitz Frobenius norm", toeplitz_frobenius},
        {"Gershgorin spectral bound", gershgorin},
        {"real minimal sample size", [] { return sample_size_figure(ExperimentKind::sample_size,
                                                                    "identity,toeplitz:0.25,toeplitz:0.5"); }},
        {"convergence rate", convergence_figure},
        {"complex minimal sample size",
         [] { return sample_size_figure(ExperimentKind::complex_sample_size, "identity,phase:0.25,phase:0.5"); }},
        {"rate shape", rate_shape},
        {"tail validity", tail_validity},
        {"identity battery", identity_battery},
        {"Hanson-Wright tail", hanson_wright},
        {"determinism", determinism},
    };
    if (only < 0 || only > static_cast<int>(criteria.size())) {
        std::cerr << "no criterion " << only << "\n";
        return 2;
    }
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && static_cast<int>(i) + 1 != only) {
            continue;
        }
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::cout << "criterion " << i + 1 << " [" << criteria[i].first << "]: " << (o.pass ? "PASS" : "FAIL") << " - "
                  << o.detail << std::endl;
    }
    return all ? 0 : 1;
}
