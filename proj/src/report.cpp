#include "cwishart/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace cwishart {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string config_line(const ConfigEntries& entries) {
    std::string out = "# config:";
    for (const auto& [k, v] : entries) {
        out += ' ';
        out += k;
        out += '=';
        out += v;
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    out += '"';
    return out;
}

void write_sample_size_csv(std::ostream& os, const SampleSizeTable& table, const ExperimentSpec& spec,
                           const ConfigEntries& config) {
    os << config_line(config) << '\n';
    os << "experiment,distribution,pattern,n,trials,mean_min_m,std_min_m,censored,seed\n";
    const std::string experiment(experiment_name(spec.kind));
    const std::string dist(distribution_name(spec.distribution));
    for (const auto& r : table.rows) {
        os << experiment << ',' << dist << ',' << csv_field(r.pattern) << ',' << r.n << ',' << r.trials << ','
           << format_number(r.mean_min_m) << ',' << format_number(r.std_min_m) << ',' << r.censored << ','
           << spec.seed << '\n';
    }
}

void write_convergence_csv(std::ostream& os, const ConvergenceTable& table, const ExperimentSpec& spec,
                           const ConfigEntries& config) {
    os << config_line(config) << '\n';
    os << "experiment,distribution,pattern,n,m,trials,mean_spec_err,std_spec_err,seed\n";
    const std::string experiment(experiment_name(spec.kind));
    const std::string dist(distribution_name(spec.distribution));
    for (const auto& r : table.rows) {
        os << experiment << ',' << dist << ',' << csv_field(r.pattern) << ',' << r.n << ',' << r.m << ','
           << r.trials << ',' << format_number(r.mean_spec_err) << ',' << format_number(r.std_spec_err) << ','
           << spec.seed << '\n';
    }
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += ch;
        }
    }
    return out;
}

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

struct Axis {
    double lo;
    double hi;
    bool log;

    double map(double v, double a, double b) const {
        const double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
        return a + t * (b - a);
    }
};

Axis make_axis(double lo, double hi, bool log) {
    if (log) {
        lo = std::log10(lo);
        hi = std::log10(hi);
    }
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    return {lo, hi, log};
}

} // namespace

std::string svg_line_chart(const std::vector<Series>& series, const ChartOptions& o) {
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if ((o.log_x && !(x > 0)) || (o.log_y && !(y > 0))) {
                continue;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = o.log_x ? 1.0 : 0.0;
        xmax = xmin + 1.0;
        ymin = o.log_y ? 1.0 : 0.0;
        ymax = ymin + 1.0;
    }
    if (!o.log_y && ymin > 0.0) {
        ymin = 0.0;
    }
    const Axis ax = make_axis(xmin, xmax, o.log_x);
    const Axis ay = make_axis(ymin, ymax, o.log_y);

    const double left = 70;
    const double right = o.width - 150;
    const double top = 40;
    const double bottom = o.height - 50;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.width << "\" height=\"" << o.height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << (left + right) / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << xml_escape(o.title) << "</text>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\"" << bottom
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
        << "\" stroke=\"black\"/>\n";

    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double fx = ax.lo + (ax.hi - ax.lo) * i / kTicks;
        const double fy = ay.lo + (ay.hi - ay.lo) * i / kTicks;
        const double px = left + (right - left) * i / kTicks;
        const double py = bottom - (bottom - top) * i / kTicks;
        svg << "<line x1=\"" << px << "\" y1=\"" << bottom << "\" x2=\"" << px << "\" y2=\"" << bottom + 5
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << px << "\" y=\"" << bottom + 18 << "\" text-anchor=\"middle\">"
            << format_number(ax.log ? std::pow(10.0, fx) : fx).substr(0, 8) << "</text>\n";
        svg << "<line x1=\"" << left - 5 << "\" y1=\"" << py << "\" x2=\"" << left << "\" y2=\"" << py
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
            << format_number(ay.log ? std::pow(10.0, fy) : fy).substr(0, 8) << "</text>\n";
    }
    svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << o.height - 12 << "\" text-anchor=\"middle\">"
        << xml_escape(o.x_label) << "</text>\n";
    svg << "<text x=\"16\" y=\"" << (top + bottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (top + bottom) / 2 << ")\">" << xml_escape(o.y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* colour = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
        svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : series[k].points) {
            if ((o.log_x && !(x > 0)) || (o.log_y && !(y > 0))) {
                continue;
            }
            svg << ax.map(x, left, right) << ',' << ay.map(y, bottom, top) << ' ';
        }
        svg << "\"/>\n";
        const double ly = top + 18.0 * static_cast<double>(k);
        svg << "<line x1=\"" << right + 12 << "\" y1=\"" << ly << "\" x2=\"" << right + 32 << "\" y2=\"" << ly
            << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << right + 38 << "\" y=\"" << ly + 4 << "\">" << xml_escape(series[k].name)
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

namespace {

Series& series_for(std::vector<Series>& out, const std::string& name) {
    for (auto& s : out) {
        if (s.name == name) {
            return s;
        }
    }
    out.push_back({name, {}});
    return out.back();
}

} // namespace

std::vector<Series> sample_size_series(const SampleSizeTable& table) {
    std::vector<Series> out;
    for (const auto& r : table.rows) {
        series_for(out, r.pattern).points.emplace_back(static_cast<double>(r.n), r.mean_min_m);
    }
    return out;
}

std::vector<Series> convergence_series(const ConvergenceTable& table) {
    std::vector<Series> out;
    for (const auto& r : table.rows) {
        series_for(out, r.pattern + " n=" + std::to_string(r.n))
            .points.emplace_back(static_cast<double>(r.m), r.mean_spec_err);
    }
    return out;
}

} // namespace cwishart
