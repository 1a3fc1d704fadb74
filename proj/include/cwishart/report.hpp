#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "cwishart/montecarlo.hpp"

namespace cwishart {

/// printf("%.12g").
std::string format_number(double v);

/// Key/value pairs rendered as `# config: key=value key=value ...`.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;
std::string config_line(const ConfigEntries& entries);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

/// Columns: experiment,distribution,pattern,n,trials,mean_min_m,std_min_m,censored,seed
void write_sample_size_csv(std::ostream& os, const SampleSizeTable& table, const ExperimentSpec& spec,
                           const ConfigEntries& config);

/// Columns: experiment,distribution,pattern,n,m,trials,mean_spec_err,std_spec_err,seed
void write_convergence_csv(std::ostream& os, const ConvergenceTable& table, const ExperimentSpec& spec,
                           const ConfigEntries& config);

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct ChartOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    int width = 640;
    int height = 420;
};

/// Self-contained SVG: axes with ticks, one polyline per series and a legend.
std::string svg_line_chart(const std::vector<Series>& series, const ChartOptions& options);

std::vector<Series> sample_size_series(const SampleSizeTable& table);
std::vector<Series> convergence_series(const ConvergenceTable& table);

} // namespace cwishart
