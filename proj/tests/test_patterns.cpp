#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "cwishart/patterns.hpp"
#include "oracles.hpp"

using namespace cwishart;

TEST_CASE("materialize named patterns") {
    CHECK(materialize(CorrelationPattern::identity(3)) == Matrix::identity(3));

    RealMatrix t3(3, 3);
    t3 << 1, .5, .25, .5, 1, .5, .25, .5, 1;
    const Matrix t = materialize(CorrelationPattern::toeplitz(0.5, 3));
    CHECK(t.is_real());
    CHECK(t == Matrix(t3));

    const Matrix p0 = materialize(CorrelationPattern::phase(0.5, RealMatrix::Zero(3, 3)));
    CHECK((p0.to_complex() - t3.cast<Complex>()).norm() == 0.0);
}

TEST_CASE("complex Toeplitz is Hermitian with unit diagonal") {
    const Complex w(0.3, -0.6);
    const Matrix t = materialize(CorrelationPattern::toeplitz(w, 9));
    const ComplexMatrix v = t.complex_values();
    CHECK(v == ComplexMatrix(v.adjoint()));
    CHECK(trace(t) == Complex(9.0, 0.0));
    for (int a = 0; a < 9; ++a) {
        for (int b = 0; b < 9; ++b) {
            CHECK(std::abs(v(a, b) - oracle::toeplitz_entry(w, a, b)) <= 1e-15);
        }
    }
}

TEST_CASE("phase pattern entries and invariants") {
    const RealMatrix theta = draw_phases(6, 99);
    const Matrix p = materialize(CorrelationPattern::phase(0.5, theta));
    CHECK(trace(p) == Complex(6.0, 0.0));
    const Matrix t = materialize(CorrelationPattern::toeplitz(0.5, 6));
    CHECK(frobenius_norm(p) == doctest::Approx(frobenius_norm(t)).epsilon(1e-14));
    CHECK(spectral_norm(p) <= toeplitz_spectral_bound(0.5));
    for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
            const int k = std::abs(a - b);
            const Complex expected = std::pow(0.5 * std::exp(Complex(0.0, theta(a, b))), k);
            CHECK(std::abs(p(a, b) - expected) <= 1e-14);
        }
    }
    CHECK((theta.array() >= 0.0).all());
    CHECK((theta.array() < 2.0 * M_PI).all());
}

TEST_CASE("draw_phases leading blocks are nested") {
    const RealMatrix big = draw_phases(20, 5);
    for (Index k : {1, 2, 7, 13}) {
        CHECK(draw_phases(k, 5) == big.topLeftCorner(k, k));
    }
    CHECK_FALSE(draw_phases(4, 5) == draw_phases(4, 6));
}

TEST_CASE("factory validation") {
    CHECK_THROWS_AS(CorrelationPattern::toeplitz(1.0, 3), InvalidArgument);
    CHECK_THROWS_AS(CorrelationPattern::toeplitz(0.0, 3), InvalidArgument);
    CHECK_THROWS_AS(CorrelationPattern::toeplitz(Complex(0.8, 0.8), 3), InvalidArgument);
    CHECK_THROWS_AS(CorrelationPattern::phase(1.2, RealMatrix::Zero(2, 2)), InvalidArgument);
    CHECK_THROWS_AS(CorrelationPattern::phase(0.5, RealMatrix::Zero(2, 3)), InvalidArgument);
    CHECK_THROWS_AS(CorrelationPattern::custom(Matrix(RealMatrix::Zero(2, 3))), InvalidArgument);
    CHECK_THROWS_AS(CorrelationPattern::identity(0), InvalidArgument);
    CHECK_THROWS_AS(toeplitz_frobenius_sq(1.5, 3), InvalidArgument);
    CHECK_THROWS_AS(toeplitz_spectral_bound(0.0), InvalidArgument);
    // custom accepts skew-symmetric input
    RealMatrix skew(2, 2);
    skew << 0, 1, -1, 0;
    CHECK(materialize(CorrelationPattern::custom(Matrix(skew))) == Matrix(skew));
}

TEST_CASE("Toeplitz closed forms") {
    CHECK(toeplitz_frobenius_sq(0.5, 4) == doctest::Approx(5.78125).epsilon(1e-14));
    CHECK(toeplitz_frobenius_sq(0.5, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(toeplitz_frobenius_sq(1e-9, 17) == doctest::Approx(17.0).epsilon(1e-12));
    CHECK(toeplitz_spectral_bound(0.5) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(toeplitz_spectral_bound(0.25) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));

    std::mt19937_64 g(2024);
    std::uniform_real_distribution<double> r(0.05, 0.95);
    std::uniform_real_distribution<double> ang(0.0, 2 * M_PI);
    std::uniform_int_distribution<int> msize(1, 64);
    for (int i = 0; i < 50; ++i) {
        const Complex w = std::polar(r(g), ang(g));
        const int m = msize(g);
        const double direct = oracle::toeplitz_frobenius_sq_direct(w, m);
        CHECK(std::abs(toeplitz_frobenius_sq(w, m) - direct) <= 1e-10 * direct);
        const Matrix t = materialize(CorrelationPattern::toeplitz(w, m));
        CHECK(std::abs(frobenius_norm(t) * frobenius_norm(t) - direct) <= 1e-10 * direct);
        CHECK(spectral_norm(t) <= toeplitz_spectral_bound(w));
    }
}

TEST_CASE("right_multiply agrees with the dense product") {
    const RealMatrix x = oracle::random_real(4, 11, 3);
    for (const auto& p : {CorrelationPattern::identity(11), CorrelationPattern::toeplitz(0.7, 11),
                          CorrelationPattern::toeplitz(Complex(0.2, 0.5), 11),
                          CorrelationPattern::phase(0.4, draw_phases(11, 8))}) {
        const ComplexMatrix fast = right_multiply(Matrix(x), p).to_complex();
        const ComplexMatrix dense = x.cast<Complex>() * materialize(p).to_complex();
        CHECK((fast - dense).norm() <= 1e-13 * dense.norm());
    }
}

TEST_CASE("pattern spec grammar") {
    CHECK(std::holds_alternative<IdentitySpec>(parse_pattern("identity").family));
    const auto t = parse_pattern("toeplitz:0.25");
    CHECK(std::get<ToeplitzSpec>(t.family).omega == Complex(0.25, 0.0));
    CHECK(t.text == "toeplitz:0.25");
    const auto tc = parse_pattern("toeplitz:0.3-0.4j");
    CHECK(std::get<ToeplitzSpec>(tc.family).omega == Complex(0.3, -0.4));
    const auto ph = parse_pattern("phase:0.5");
    CHECK(ph.is_phase());
    CHECK(std::get<PhaseSpec>(ph.family).c == 0.5);

    const auto list = parse_pattern_list("identity,toeplitz:0.25,toeplitz:0.5");
    REQUIRE(list.size() == 3);
    CHECK(list[2].text == "toeplitz:0.5");

    CHECK_THROWS_AS(parse_pattern("gaussian"), ParseError);
    CHECK_THROWS_AS(parse_pattern("toeplitz:1.5"), ParseError);
    CHECK_THROWS_AS(parse_pattern("toeplitz:abc"), ParseError);
    CHECK_THROWS_AS(parse_pattern("phase:"), ParseError);
    try {
        parse_pattern_list("identity,toeplitz:x");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 19);
    }
}

TEST_CASE("instantiate") {
    const auto phase = parse_pattern("phase:0.5");
    const Matrix a = materialize(instantiate(phase, 5, 77));
    const Matrix b = materialize(instantiate(phase, 5, 77));
    CHECK(a == b);
    const Matrix big = materialize(instantiate(phase, 9, 77));
    CHECK(big.block(0, 0, 5, 5) == a);
    CHECK(materialize(instantiate(parse_pattern("toeplitz:0.5"), 3, 0)) ==
          materialize(CorrelationPattern::toeplitz(0.5, 3)));
}

TEST_CASE("CSV ingestion") {
    const RealMatrix m = parse_real_csv("# comment\n1, 2\n\n3,4\n");
    RealMatrix expected(2, 2);
    expected << 1, 2, 3, 4;
    CHECK(m == expected);
    try {
        parse_real_csv("1,2\n3,x\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }
    CHECK_THROWS_AS(parse_real_csv("1,2\n3\n"), ParseError);
    CHECK_THROWS_AS(parse_real_csv("\n# only comments\n"), ParseError);

    const auto dir = std::filesystem::temp_directory_path();
    const auto re = (dir / "cwishart_re.csv").string();
    const auto im = (dir / "cwishart_im.csv").string();
    std::ofstream(re) << "1,0.5\n0.5,1\n";
    std::ofstream(im) << "0,0.1\n-0.1,0\n";
    const Matrix c = load_matrix(re, im);
    CHECK(c(0, 1) == Complex(0.5, 0.1));
    const auto spec = parse_pattern("custom:" + re + ":" + im);
    CHECK(materialize(instantiate(spec, 2, 0)) == c);
    CHECK(materialize(instantiate(spec, 1, 0)) == Matrix(RealMatrix::Ones(1, 1)).to_complex());
    CHECK_THROWS_AS(instantiate(spec, 3, 0), InvalidArgument);
    CHECK_THROWS_AS(read_real_csv((dir / "cwishart_missing.csv").string()), ParseError);
}
