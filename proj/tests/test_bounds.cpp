#include <doctest.h>

#include "cwishart/bounds.hpp"
#include "cwishart/fit.hpp"

using namespace cwishart;

namespace {

BoundQuery base_query() {
    BoundQuery q;
    q.n = 4;
    q.m = 100;
    q.delta = 0.0;
    q.k = 1.0;
    q.c = 1.0;
    q.b_frobenius = 10.0;
    q.b_spectral = 1.0;
    q.b_trace = 100.0;
    q.sigma_spectral = 1.0;
    return q;
}

} // namespace

TEST_CASE("direct substitution") {
    CHECK(concentration_tail_bound(base_query()) == doctest::Approx(0.24).epsilon(1e-15));
    const BoundQuery q = make_query(CorrelationPattern::identity(100), 4, 1.0, 1.0, 0.0, 1.0);
    CHECK(q.b_frobenius == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(q.b_spectral == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(estimation_error_bound(q) == doctest::Approx(0.24).epsilon(1e-15));
}

TEST_CASE("scaling and monotonicity") {
    BoundQuery q = base_query();
    const double b0 = concentration_tail_bound(q);
    q.m = 200;
    CHECK(concentration_tail_bound(q) == doctest::Approx(b0 / 2.0).epsilon(1e-15));

    q = base_query();
    double prev = concentration_tail_bound(q);
    for (double d : {0.5, 1.0, 4.0, 100.0, 1e6}) {
        q.delta = d;
        const double now = concentration_tail_bound(q);
        CHECK(now > prev);
        prev = now;
    }

    const auto grows = [](auto mutate) {
        BoundQuery a = base_query();
        BoundQuery b = base_query();
        mutate(b);
        return estimation_error_bound(b) >= estimation_error_bound(a);
    };
    CHECK(grows([](BoundQuery& q2) { q2.n = 5; }));
    CHECK(grows([](BoundQuery& q2) { q2.k = 2.0; }));
    CHECK(grows([](BoundQuery& q2) { q2.c = 3.0; }));
    CHECK(grows([](BoundQuery& q2) { q2.b_frobenius = 12.0; }));
    CHECK(grows([](BoundQuery& q2) { q2.b_spectral = 2.0; }));
    CHECK(grows([](BoundQuery& q2) { q2.sigma_spectral = 2.0; }));
}

TEST_CASE("unit trace removes the bias term") {
    const BoundQuery q = make_query(CorrelationPattern::toeplitz(0.5, 40), 10, 1.6, 1.0, 2.0, 1.0);
    CHECK(bias_term(q) == 0.0);
    CHECK(estimation_error_bound(q) == concentration_tail_bound(q));
}

TEST_CASE("zero trace with C = 0 is pure bias") {
    BoundQuery q = base_query();
    q.b_trace = 0.0;
    q.c = 0.0;
    q.sigma_spectral = 2.5;
    CHECK(estimation_error_bound(q) == 2.5);
}

TEST_CASE("Toeplitz expectation form dominates the generic bound") {
    for (double w : {0.25, 0.5, 0.8}) {
        for (Index m : {50, 400, 1000}) {
            BoundQuery q;
            q.n = 30;
            q.m = m;
            q.k = 1.6;
            q.c = 1.0;
            q.b_frobenius = std::sqrt(toeplitz_frobenius_sq(w, m));
            q.b_spectral = toeplitz_spectral_bound(w);
            q.b_trace = static_cast<double>(m);
            q.form = BoundForm::expectation;
            const double generic = estimation_error_bound(q);
            const double example = toeplitz_expectation_bound(w, 30, m, 1.6, 1.0, 1.0);
            CHECK(generic <= example);
            CHECK(generic >= 0.98 * example);
        }
    }
}

TEST_CASE("confidence") {
    BoundQuery q = base_query();
    q.delta = 2.0;
    CHECK(*confidence(q).level == doctest::Approx(1.0 - 2.0 * std::exp(-2.0)));
    q.delta = 0.0;
    CHECK(*confidence(q).level == 0.0);
    q.field = Field::complex;
    CHECK_FALSE(confidence(q).level.has_value());
    q.form = BoundForm::expectation;
    CHECK(confidence(q).expression == "expectation");
    const BoundBreakdown b = evaluate(base_query());
    CHECK(b.total == b.bias + b.concentration);
}

TEST_CASE("invalid queries") {
    const auto rejects = [](auto mutate) {
        BoundQuery q = base_query();
        mutate(q);
        CHECK_THROWS_AS(concentration_tail_bound(q), InvalidArgument);
    };
    rejects([](BoundQuery& q) { q.n = 0; });
    rejects([](BoundQuery& q) { q.m = 0; });
    rejects([](BoundQuery& q) { q.delta = -1.0; });
    rejects([](BoundQuery& q) { q.k = 0.5; });
    rejects([](BoundQuery& q) { q.c = -1.0; });
    rejects([](BoundQuery& q) { q.b_spectral = 20.0; });
    CHECK_THROWS_AS(toeplitz_expectation_bound(1.0, 3, 3, 1.0, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("fit_constant: single cell is the plain ratio") {
    const FitCell cell{10, 100, parse_pattern("identity"), {DistributionKind::gaussian}, std::nullopt};
    const FitResult fit = fit_constant({cell}, 40, 5);
    REQUIRE(fit.cells.size() == 1);
    CHECK(fit.c == doctest::Approx(fit.cells[0].mean_error / fit.cells[0].rate).epsilon(1e-14));
    CHECK(fit.ratio_spread() == doctest::Approx(1.0));
}

TEST_CASE("fit_constant is invariant to scaling Sigma") {
    FitCell cell{6, 80, parse_pattern("toeplitz:0.5"), {DistributionKind::gaussian}, std::nullopt};
    const double c1 = fit_constant({cell}, 30, 8).c;
    cell.sigma = Matrix(RealMatrix(2.0 * RealMatrix::Identity(6, 6)));
    const double c2 = fit_constant({cell}, 30, 8).c;
    CHECK(c2 == doctest::Approx(c1).epsilon(1e-12));
}

TEST_CASE("fit_constant rejects degenerate input") {
    const FitCell cell{4, 20, parse_pattern("identity"), {DistributionKind::gaussian}, std::nullopt};
    CHECK_THROWS_AS(fit_constant({}, 50, 1), InvalidArgument);
    CHECK_THROWS_AS(fit_constant({cell}, 10, 1), InvalidArgument);
}

TEST_CASE("serial and parallel fits are identical") {
    const std::vector<FitCell> grid = {
        {5, 60, parse_pattern("identity"), {DistributionKind::rademacher}, std::nullopt},
        {8, 90, parse_pattern("toeplitz:0.25"), {DistributionKind::uniform}, std::nullopt},
    };
    const FitResult a = fit_constant(grid, 30, 3, Execution::serial());
    const FitResult b = fit_constant(grid, 30, 3, Execution::parallel(4));
    CHECK(a.c == b.c);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(a.cells[i].mean_error == b.cells[i].mean_error);
    }
}

TEST_CASE("tail_exceedance bookkeeping") {
    const FitCell cell{5, 50, parse_pattern("identity"), {DistributionKind::gaussian}, std::nullopt};
    const auto huge = tail_exceedance(cell, 100.0, {0.0, 1.0}, 50, 2);
    REQUIRE(huge.size() == 2);
    CHECK(huge[0].exceedance == 0.0);
    CHECK(huge[1].bound > huge[0].bound);
    CHECK(huge[1].allowed == doctest::Approx(2.0 * std::exp(-1.0) + 0.02));
    const auto tiny = tail_exceedance(cell, 1e-6, {0.0}, 50, 2);
    CHECK(tiny[0].exceedance == 1.0);
}
