// cwishart: patterns, error bounds, Monte-Carlo experiments and the identity battery.
//
// Exit codes: 0 success, 1 failed check or censored trials, 2 usage or parse error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cwishart/bounds.hpp"
#include "cwishart/fit.hpp"
#include "cwishart/montecarlo.hpp"
#include "cwishart/patterns.hpp"
#include "cwishart/report.hpp"
#include "cwishart/verify.hpp"

using namespace cwishart;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string num(double v) { return format_number(v); }

/// Comma-separated list whose items may themselves be ranges.
std::vector<Index> parse_index_list(const std::string& text) {
    std::vector<Index> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto part = parse_range(item);
        out.insert(out.end(), part.begin(), part.end());
    }
    if (out.empty()) {
        throw InvalidArgument("empty list '" + text + "'");
    }
    return out;
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

void print_table(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& rows) {
    std::size_t width = 0;
    for (const auto& r : rows) {
        width = std::max(width, r.first.size());
    }
    for (const auto& [k, v] : rows) {
        os << k << std::string(width - k.size() + 2, ' ') << v << '\n';
    }
}

/// Writes `content` to `path`, or to stdout when path is empty or "-".
void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw InvalidArgument("cannot write '" + path + "'");
    }
    f << content;
}

// ---------------------------------------------------------------------------

struct PatternArgs {
    std::string spec;
    Index m = 10;
    std::uint64_t seed = 42;
    std::string out;
};

int cmd_pattern(const PatternArgs& a) {
    const PatternSpec spec = parse_pattern(a.spec);
    const CorrelationPattern p = instantiate(spec, a.m, derive_seed(a.seed, 0));
    const Matrix b = materialize(p);
    const double fro = frobenius_norm(b);
    const Complex tr = trace(b);
    std::vector<std::pair<std::string, std::string>> rows = {
        {"pattern", spec.text},
        {"m", std::to_string(a.m)},
        {"trace", tr.imag() == 0.0 ? num(tr.real()) : num(tr.real()) + (tr.imag() < 0 ? "" : "+") + num(tr.imag()) + "j"},
        {"frobenius", num(fro)},
        {"frobenius_sq", num(fro * fro)},
        {"spectral", num(spectral_norm(b))},
    };
    if (const auto* t = std::get_if<ToeplitzSpec>(&spec.family)) {
        rows.emplace_back("closed_frobenius_sq", num(toeplitz_frobenius_sq(t->omega, a.m)));
        rows.emplace_back("gershgorin_bound", num(toeplitz_spectral_bound(t->omega)));
    } else if (const auto* ph = std::get_if<PhaseSpec>(&spec.family)) {
        rows.emplace_back("closed_frobenius_sq", num(toeplitz_frobenius_sq(Complex(ph->c, 0.0), a.m)));
        rows.emplace_back("gershgorin_bound", num(toeplitz_spectral_bound(Complex(ph->c, 0.0))));
    }
    print_table(std::cout, rows);
    if (!a.out.empty()) {
        std::string csv = config_line({{"command", "pattern"}, {"spec", spec.text}, {"m", std::to_string(a.m)},
                                       {"seed", std::to_string(a.seed)}}) +
                          "\nquantity,value\n";
        for (std::size_t i = 1; i < rows.size(); ++i) {
            csv += rows[i].first + "," + rows[i].second + "\n";
        }
        emit(a.out, csv);
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct BoundArgs {
    Index n = 30;
    Index m = 100;
    double delta = 0.0;
    std::optional<double> k;
    std::string dist = "gaussian";
    double c = 1.0;
    std::string pattern = "identity";
    double sigma_norm = 1.0;
    std::string form = "tail";
    bool complex_samples = false;
    std::uint64_t seed = 42;
};

int cmd_bound(const BoundArgs& a) {
    const Distribution d = parse_distribution(a.dist);
    const double k = a.k.value_or(psi2_constant(d));
    if (a.form != "tail" && a.form != "expectation") {
        throw InvalidArgument("--form must be tail or expectation");
    }
    const BoundForm form = a.form == "tail" ? BoundForm::tail : BoundForm::expectation;
    const CorrelationPattern p = instantiate(parse_pattern(a.pattern), a.m, derive_seed(a.seed, 0));
    const BoundQuery q = make_query(p, a.n, k, a.c, a.delta, a.sigma_norm, form,
                                    a.complex_samples ? Field::complex : Field::real);
    const BoundBreakdown b = evaluate(q);
    print_table(std::cout, {
                               {"n", std::to_string(q.n)},
                               {"m", std::to_string(q.m)},
                               {"delta", num(q.delta)},
                               {"K", num(q.k)},
                               {"C", num(q.c)},
                               {"B_frobenius", num(q.b_frobenius)},
                               {"B_spectral", num(q.b_spectral)},
                               {"B_trace", num(q.b_trace.real())},
                               {"sigma_spectral", num(q.sigma_spectral)},
                               {"form", a.form},
                               {"bias", num(b.bias)},
                               {"concentration", num(b.concentration)},
                               {"total", num(b.total)},
                               {"confidence", b.confidence.level ? num(*b.confidence.level) + " (" +
                                                                       b.confidence.expression + ")"
                                                                 : b.confidence.expression},
                           });
    return 0;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string kind;
    std::string dist = "gaussian";
    std::string patterns;
    std::string n;
    std::string m = "50:1000:50";
    double eta = 0.2;
    Index trials = 500;
    std::uint64_t seed = 42;
    Index m_cap = 0;
    std::string sigma;
    int workers = 0;
    std::string out;
    std::string svg;
};

int cmd_simulate(const SimulateArgs& a) {
    ExperimentSpec spec;
    spec.kind = a.kind == "sample-size"   ? ExperimentKind::sample_size
                : a.kind == "convergence" ? ExperimentKind::convergence
                                          : ExperimentKind::complex_sample_size;
    spec.distribution = parse_distribution(a.dist);
    const std::string patterns = !a.patterns.empty() ? a.patterns
                                 : spec.kind == ExperimentKind::complex_sample_size
                                     ? "identity,phase:0.25,phase:0.5"
                                     : "identity,toeplitz:0.25,toeplitz:0.5";
    spec.patterns = parse_pattern_list(patterns);
    const std::string n_text = !a.n.empty() ? a.n : spec.kind == ExperimentKind::convergence ? "30" : "5:30:5";
    spec.n_values = parse_index_list(n_text);
    if (spec.kind == ExperimentKind::convergence) {
        spec.m_values = parse_index_list(a.m);
    }
    spec.eta = a.eta;
    spec.trials = a.trials;
    spec.seed = a.seed;
    spec.m_cap = a.m_cap;
    if (!a.sigma.empty()) {
        spec.sigma = load_matrix(a.sigma);
    }
    spec.validate();

    ConfigEntries config = {
        {"command", "simulate"},
        {"experiment", std::string(experiment_name(spec.kind))},
        {"dist", a.dist},
        {"patterns", patterns},
        {"n", n_text},
    };
    if (spec.kind == ExperimentKind::convergence) {
        config.emplace_back("m", a.m);
    } else {
        config.emplace_back("eta", num(spec.eta));
        config.emplace_back("m_cap", spec.m_cap > 0 ? std::to_string(spec.m_cap) : "200n");
    }
    config.emplace_back("trials", std::to_string(spec.trials));
    config.emplace_back("seed", std::to_string(spec.seed));
    config.emplace_back("sigma", a.sigma.empty() ? "identity" : a.sigma);

    const Execution exec{a.workers > 0 ? a.workers : default_workers()};
    std::ostringstream csv;
    Index censored = 0;
    if (spec.kind == ExperimentKind::convergence) {
        const ConvergenceTable table = run_convergence_experiment(spec, exec);
        write_convergence_csv(csv, table, spec, config);
        if (!a.svg.empty()) {
            emit(a.svg, svg_line_chart(convergence_series(table),
                                       {"Convergence, " + a.dist, "m", "mean spectral error", true, true}));
        }
    } else {
        const SampleSizeTable table = spec.kind == ExperimentKind::sample_size ? run_sample_size_experiment(spec, exec)
                                                                               : run_complex_experiment(spec, exec);
        write_sample_size_csv(csv, table, spec, config);
        censored = table.censored_total;
        if (!a.svg.empty()) {
            emit(a.svg, svg_line_chart(sample_size_series(table),
                                       {"Minimal sample size, " + a.dist, "n", "mean minimal m"}));
        }
    }
    emit(a.out, csv.str());
    if (censored > 0) {
        std::cerr << "cwishart: " << censored << " censored trial(s)\n";
        return kExitFailure;
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::string only;
    Index instances = 200;
    Index hw_trials = 100000;
    std::uint64_t seed = 42;
    int workers = 0;
    std::string out;
};

int cmd_verify(const VerifyArgs& a) {
    BatteryOptions o;
    o.seed = a.seed;
    o.instances = a.instances;
    o.hanson_wright_trials = a.hw_trials;
    o.only = split(a.only);
    const auto reports = run_battery(o, Execution{a.workers > 0 ? a.workers : default_workers()});
    bool ok = true;
    std::string csv = config_line({{"command", "verify"},
                                   {"only", a.only.empty() ? "all" : a.only},
                                   {"instances", std::to_string(a.instances)},
                                   {"hw_trials", std::to_string(a.hw_trials)},
                                   {"seed", std::to_string(a.seed)}}) +
                      "\nidentity,max_deviation,instances,tolerance,pass,note\n";
    for (const auto& r : reports) {
        ok = ok && r.pass;
        std::printf("%-26s %-4s max_dev=%-14s n=%-7lld %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                    num(r.max_deviation).c_str(), static_cast<long long>(r.instances), r.note.c_str());
        csv += r.name + "," + num(r.max_deviation) + "," + std::to_string(r.instances) + "," + num(r.tolerance) +
               "," + (r.pass ? "1" : "0") + "," + csv_field(r.note) + "\n";
    }
    if (!a.out.empty()) {
        emit(a.out, csv);
    }
    return ok ? 0 : kExitFailure;
}

// ---------------------------------------------------------------------------

struct FitArgs {
    std::string dists = "gaussian,rademacher,uniform";
    std::string patterns = "identity";
    std::string n = "5,10,20";
    std::string m = "100,400";
    Index trials = 200;
    std::uint64_t seed = 42;
    int workers = 0;
    std::string out;
};

int cmd_fit(const FitArgs& a) {
    std::vector<FitCell> grid;
    const auto ns = parse_index_list(a.n);
    const auto ms = parse_index_list(a.m);
    const auto patterns = parse_pattern_list(a.patterns);
    for (const auto& dname : split(a.dists)) {
        const Distribution d = parse_distribution(dname);
        for (const auto& p : patterns) {
            for (Index n : ns) {
                for (Index m : ms) {
                    grid.push_back({n, m, p, d, std::nullopt});
                }
            }
        }
    }
    const FitResult fit = fit_constant(grid, a.trials, a.seed, Execution{a.workers > 0 ? a.workers : default_workers()});
    std::string csv = config_line({{"command", "fit-constant"},
                                   {"dists", a.dists},
                                   {"patterns", a.patterns},
                                   {"n", a.n},
                                   {"m", a.m},
                                   {"trials", std::to_string(a.trials)},
                                   {"seed", std::to_string(a.seed)}}) +
                      "\ndistribution,pattern,n,m,mean_spec_err,rate,ratio\n";
    for (const auto& c : fit.cells) {
        csv += std::string(distribution_name(c.cell.distribution)) + "," + csv_field(c.cell.pattern.text) + "," +
               std::to_string(c.cell.n) + "," + std::to_string(c.cell.m) + "," + num(c.mean_error) + "," +
               num(c.rate) + "," + num(c.ratio) + "\n";
    }
    std::cout << "C = " << num(fit.c) << "\nratio geometric mean = " << num(fit.ratio_geometric_mean())
              << "\nworst ratio / geometric mean = " << num(fit.ratio_spread()) << '\n';
    emit(a.out.empty() ? "-" : a.out, csv);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlated sample covariance: patterns, bounds, simulations, identity checks"};
    app.require_subcommand(1);

    std::uint64_t seed = 42;
    const auto add_seed = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "Base seed")->envname("CWISHART_SEED")->capture_default_str();
    };

    PatternArgs pa;
    auto* pattern = app.add_subcommand("pattern", "Norms and closed forms of a correlation pattern");
    pattern->add_option("spec", pa.spec, "identity | toeplitz:<w> | phase:<c> | custom:<re.csv>[:<im.csv>]")
        ->required();
    pattern->add_option("--m", pa.m, "Pattern size")->capture_default_str();
    pattern->add_option("--out", pa.out, "Also write a CSV here");
    add_seed(pattern);

    BoundArgs ba;
    auto* bound = app.add_subcommand("bound", "Evaluate the error bound");
    bound->add_option("--n", ba.n, "Dimension")->capture_default_str();
    bound->add_option("--m", ba.m, "Number of samples")->capture_default_str();
    bound->add_option("--delta", ba.delta, "Tail parameter")->capture_default_str();
    bound->add_option("--k", ba.k, "psi2 constant K (default: that of --dist)");
    bound->add_option("--dist", ba.dist, "gaussian | rademacher | uniform")->capture_default_str();
    bound->add_option("--c", ba.c, "Absolute constant C")->capture_default_str();
    bound->add_option("--pattern", ba.pattern, "Pattern spec")->capture_default_str();
    bound->add_option("--sigma-norm", ba.sigma_norm, "||Sigma||")->capture_default_str();
    bound->add_option("--form", ba.form, "tail | expectation")->capture_default_str();
    bound->add_flag("--complex", ba.complex_samples, "Complex samples");
    add_seed(bound);

    SimulateArgs sa;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo experiments");
    simulate->add_option("experiment", sa.kind, "sample-size | convergence | complex")
        ->required()
        ->check(CLI::IsMember({"sample-size", "convergence", "complex"}));
    simulate->add_option("--dist", sa.dist, "gaussian | rademacher | uniform")->capture_default_str();
    simulate->add_option("--patterns", sa.patterns, "Comma-separated pattern specs");
    simulate->add_option("--n", sa.n, "n values (start:stop:step or list)");
    simulate->add_option("--m", sa.m, "m values for convergence")->capture_default_str();
    simulate->add_option("--eta", sa.eta, "Normalized Frobenius tolerance")->capture_default_str();
    simulate->add_option("--trials", sa.trials, "Trials per point")->capture_default_str();
    simulate->add_option("--m-cap", sa.m_cap, "Ceiling of the minimal-m scan (default 200n)");
    simulate->add_option("--sigma", sa.sigma, "CSV file with a positive definite Sigma");
    simulate->add_option("--workers", sa.workers, "Worker threads (default: all cores)");
    simulate->add_option("--out", sa.out, "CSV output path (default stdout)");
    simulate->add_option("--svg", sa.svg, "Also write an SVG chart");
    add_seed(simulate);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run the identity battery");
    verify->add_option("--only", va.only, "Comma-separated check names");
    verify->add_option("--instances", va.instances, "Random instances per identity")->capture_default_str();
    verify->add_option("--hw-trials", va.hw_trials, "Trials for the Hanson-Wright checks")->capture_default_str();
    verify->add_option("--workers", va.workers, "Worker threads (default: all cores)");
    verify->add_option("--out", va.out, "CSV output path");
    add_seed(verify);

    FitArgs fa;
    auto* fit = app.add_subcommand("fit-constant", "Least-squares fit of the constant C");
    fit->add_option("--dists", fa.dists, "Comma-separated distributions")->capture_default_str();
    fit->add_option("--patterns", fa.patterns, "Comma-separated pattern specs")->capture_default_str();
    fit->add_option("--n", fa.n, "n values")->capture_default_str();
    fit->add_option("--m", fa.m, "m values")->capture_default_str();
    fit->add_option("--trials", fa.trials, "Trials per cell")->capture_default_str();
    fit->add_option("--workers", fa.workers, "Worker threads (default: all cores)");
    fit->add_option("--out", fa.out, "CSV output path (default stdout)");
    add_seed(fit);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*pattern) {
            pa.seed = seed;
            return cmd_pattern(pa);
        }
        if (*bound) {
            ba.seed = seed;
            return cmd_bound(ba);
        }
        if (*simulate) {
            sa.seed = seed;
            return cmd_simulate(sa);
        }
        if (*verify) {
            va.seed = seed;
            return cmd_verify(va);
        }
        fa.seed = seed;
        return cmd_fit(fa);
    } catch (const ParseError& e) {
        std::cerr << "cwishart: parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        std::cerr << "cwishart: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "cwishart: " << e.what() << '\n';
        return kExitFailure;
    }
}
