#include <doctest.h>

#include <sstream>

#include "cwishart/report.hpp"

using namespace cwishart;

TEST_CASE("format_number") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(250.0) == "250");
    CHECK(format_number(1e-20) == "1e-20");
}

TEST_CASE("csv_field quoting") {
    CHECK(csv_field("toeplitz:0.5") == "toeplitz:0.5");
    CHECK(csv_field("custom:a,b") == "\"custom:a,b\"");
    CHECK(csv_field("say \"hi\",x") == "\"say \"\"hi\"\",x\"");
}

TEST_CASE("config line") {
    CHECK(config_line({{"seed", "42"}, {"trials", "3"}}) == "# config: seed=42 trials=3");
    CHECK(config_line({}) == "# config:");
}

TEST_CASE("sample-size CSV layout") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::sample_size;
    spec.seed = 7;
    SampleSizeTable t;
    t.rows.push_back({"identity", 5, 3, 41.5, 2.25, 0});
    t.rows.push_back({"toeplitz:0.5", 5, 3, 60.0, 1.0 / 3.0, 1});
    std::ostringstream os;
    write_sample_size_csv(os, t, spec, {{"seed", "7"}});
    CHECK(os.str() == "# config: seed=7\n"
                      "experiment,distribution,pattern,n,trials,mean_min_m,std_min_m,censored,seed\n"
                      "sample-size,gaussian,identity,5,3,41.5,2.25,0,7\n"
                      "sample-size,gaussian,toeplitz:0.5,5,3,60,0.333333333333,1,7\n");
}

TEST_CASE("convergence CSV layout") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::convergence;
    spec.distribution = {DistributionKind::rademacher};
    spec.seed = 1;
    ConvergenceTable t;
    t.rows.push_back({"identity", 30, 50, 2, 0.5, 0.125});
    std::ostringstream os;
    write_convergence_csv(os, t, spec, {});
    CHECK(os.str() == "# config:\n"
                      "experiment,distribution,pattern,n,m,trials,mean_spec_err,std_spec_err,seed\n"
                      "convergence,rademacher,identity,30,50,2,0.5,0.125,1\n");
}

TEST_CASE("SVG chart") {
    ConvergenceTable t;
    t.rows.push_back({"identity", 30, 50, 2, 0.5, 0.1});
    t.rows.push_back({"identity", 30, 100, 2, 0.35, 0.1});
    t.rows.push_back({"toeplitz:0.5", 30, 50, 2, 0.9, 0.1});
    const auto series = convergence_series(t);
    REQUIRE(series.size() == 2);
    CHECK(series[0].name == "identity n=30");
    CHECK(series[0].points.size() == 2);
    ChartOptions o;
    o.title = "a < b";
    o.log_x = true;
    o.log_y = true;
    const std::string svg = svg_line_chart(series, o);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    std::size_t polylines = 0;
    for (std::size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) {
        ++polylines;
    }
    CHECK(polylines == 2);
    CHECK(svg.find(">toeplitz:0.5 n=30<") != std::string::npos);
    CHECK(svg.find("a &lt; b") != std::string::npos);
    // empty input still renders
    CHECK(svg_line_chart({}, o).find("</svg>") != std::string::npos);

    SampleSizeTable s;
    s.rows.push_back({"identity", 5, 1, 40, 0, 0});
    s.rows.push_back({"identity", 10, 1, 90, 0, 0});
    CHECK(sample_size_series(s).size() == 1);
}
