#include "cwishart/patterns.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cwishart/kernels.hpp"
#include "cwishart/rng.hpp"

namespace cwishart {

namespace {

void require_positive_m(Index m) {
    if (m < 1) {
        throw InvalidArgument("pattern size m must be positive, got " + std::to_string(m));
    }
}

void require_unit_modulus_range(double r, const char* what) {
    if (!(r > 0.0 && r < 1.0)) {
        throw InvalidArgument(std::string(what) + " must satisfy 0 < |.| < 1, got " + std::to_string(r));
    }
}

ComplexMatrix materialize_toeplitz(Complex omega, Index m) {
    ComplexMatrix b(m, m);
    // Powers by repeated multiplication keep T(omega) exactly Hermitian.
    std::vector<Complex> powers(static_cast<std::size_t>(m));
    powers[0] = 1.0;
    for (Index k = 1; k < m; ++k) {
        powers[static_cast<std::size_t>(k)] = powers[static_cast<std::size_t>(k - 1)] * omega;
    }
    for (Index j = 0; j < m; ++j) {
        for (Index i = 0; i < m; ++i) {
            const Complex w = powers[static_cast<std::size_t>(std::abs(j - i))];
            b(i, j) = j >= i ? w : std::conj(w);
        }
    }
    return b;
}

ComplexMatrix materialize_phase(double c, const RealMatrix& theta) {
    const Index m = theta.rows();
    ComplexMatrix b(m, m);
    for (Index j = 0; j < m; ++j) {
        for (Index i = 0; i < m; ++i) {
            const Index k = std::abs(i - j);
            b(i, j) = k == 0 ? Complex(1.0, 0.0) : std::polar(std::pow(c, static_cast<double>(k)),
                                                              static_cast<double>(k) * theta(i, j));
        }
    }
    return b;
}

double parse_number(std::string_view s, std::size_t line, std::size_t column) {
    // from_chars rejects a leading '+'.
    std::string_view body = s;
    if (!body.empty() && body.front() == '+') {
        body.remove_prefix(1);
    }
    double value = 0.0;
    const auto* first = body.data();
    const auto* last = body.data() + body.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (body.empty() || ec != std::errc() || ptr != last) {
        throw ParseError("invalid number '" + std::string(s) + "'", line, column);
    }
    return value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

// <re>[(+|-)<im>j] with 1-based column reporting relative to `column0`.
Complex parse_complex(std::string_view s, std::size_t column0) {
    if (s.empty()) {
        throw ParseError("missing value", 1, column0);
    }
    if (s.back() != 'j') {
        return {parse_number(s, 1, column0), 0.0};
    }
    // Split at the last sign that is not the leading one and not part of an exponent.
    std::size_t split = std::string_view::npos;
    for (std::size_t i = s.size() - 1; i > 0; --i) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    const std::string_view imag = s.substr(split == std::string_view::npos ? 0 : split,
                                           s.size() - 1 - (split == std::string_view::npos ? 0 : split));
    if (split == std::string_view::npos) {
        return {0.0, parse_number(imag, 1, column0)};
    }
    return {parse_number(s.substr(0, split), 1, column0), parse_number(imag, 1, column0 + split)};
}

} // namespace

CorrelationPattern CorrelationPattern::identity(Index m) {
    require_positive_m(m);
    return {IdentityShape{}, m};
}

CorrelationPattern CorrelationPattern::toeplitz(Complex omega, Index m) {
    require_positive_m(m);
    require_unit_modulus_range(std::abs(omega), "toeplitz omega");
    return {ToeplitzShape{omega}, m};
}

CorrelationPattern CorrelationPattern::phase(double c, RealMatrix theta) {
    require_unit_modulus_range(c, "phase c");
    if (theta.rows() != theta.cols()) {
        throw InvalidArgument("phase: Theta must be square");
    }
    require_positive_m(theta.rows());
    const Index m = theta.rows();
    return {PhaseShape{c, std::move(theta)}, m};
}

CorrelationPattern CorrelationPattern::custom(Matrix b) {
    if (!b.is_square()) {
        throw InvalidArgument("custom pattern must be square, got " + std::to_string(b.rows()) + "x" +
                              std::to_string(b.cols()));
    }
    require_positive_m(b.rows());
    const Index m = b.rows();
    return {CustomShape{std::move(b)}, m};
}

Matrix materialize(const CorrelationPattern& p) {
    const Index m = p.m();
    return std::visit(
        [m](const auto& s) -> Matrix {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, IdentityShape>) {
                return Matrix::identity(m);
            } else if constexpr (std::is_same_v<S, ToeplitzShape>) {
                ComplexMatrix b = materialize_toeplitz(s.omega, m);
                if (s.omega.imag() == 0.0) {
                    return RealMatrix(b.real());
                }
                return b;
            } else if constexpr (std::is_same_v<S, PhaseShape>) {
                return materialize_phase(s.c, s.theta);
            } else {
                return s.b;
            }
        },
        p.shape());
}

Matrix right_multiply(const Matrix& x, const CorrelationPattern& p) {
    if (x.cols() != p.m()) {
        throw InvalidArgument("right_multiply: X has " + std::to_string(x.cols()) + " columns, pattern is " +
                              std::to_string(p.m()) + "x" + std::to_string(p.m()));
    }
    if (std::holds_alternative<IdentityShape>(p.shape())) {
        return x;
    }
    if (const auto* t = std::get_if<ToeplitzShape>(&p.shape())) {
        return x.visit([&](const auto& xv) -> Matrix {
            if (t->omega.imag() == 0.0) {
                return kernels::toeplitz_right(xv, t->omega.real());
            }
            return kernels::toeplitz_right(xv, t->omega);
        });
    }
    return x * materialize(p);
}

double toeplitz_frobenius_sq(Complex omega, Index m) {
    require_positive_m(m);
    const double r = std::abs(omega);
    require_unit_modulus_range(r, "toeplitz omega");
    const double r2 = r * r;
    const double md = static_cast<double>(m);
    const double one_minus = 1.0 - r2;
    return md * (1.0 + r2) / one_minus + 2.0 * r2 * (std::pow(r2, md) - 1.0) / (one_minus * one_minus);
}

double toeplitz_spectral_bound(Complex omega) {
    const double r = std::abs(omega);
    require_unit_modulus_range(r, "toeplitz omega");
    return (1.0 + r) / (1.0 - r);
}

RealMatrix draw_phases(Index m, std::uint64_t seed) {
    require_positive_m(m);
    Stream stream(seed);
    RealMatrix theta(m, m);
    for (Index k = 0; k < m; ++k) {
        for (Index j = 0; j <= k; ++j) {
            theta(k, j) = stream.phase();
        }
        for (Index i = 0; i < k; ++i) {
            theta(i, k) = stream.phase();
        }
    }
    return theta;
}

PatternSpec parse_pattern(std::string_view text) {
    const std::string_view s = trim(text);
    const std::size_t colon = s.find(':');
    const std::string_view head = s.substr(0, colon);
    const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : s.substr(colon + 1);
    const std::size_t arg_column = colon + 2;
    const std::string label(s);

    if (head == "identity") {
        if (colon != std::string_view::npos) {
            throw ParseError("identity takes no parameter", 1, colon + 1);
        }
        return {IdentitySpec{}, label};
    }
    if (head == "toeplitz") {
        const Complex omega = parse_complex(arg, arg_column);
        if (!(std::abs(omega) > 0.0 && std::abs(omega) < 1.0)) {
            throw ParseError("toeplitz omega must satisfy 0 < |omega| < 1", 1, arg_column);
        }
        return {ToeplitzSpec{omega}, label};
    }
    if (head == "phase") {
        const double c = parse_number(arg, 1, arg_column);
        if (!(c > 0.0 && c < 1.0)) {
            throw ParseError("phase c must satisfy 0 < c < 1", 1, arg_column);
        }
        return {PhaseSpec{c}, label};
    }
    if (head == "custom") {
        if (arg.empty()) {
            throw ParseError("custom pattern needs a CSV path", 1, arg_column);
        }
        const std::size_t sep = arg.find(':');
        std::optional<std::string> im;
        if (sep != std::string_view::npos) {
            im = std::string(arg.substr(sep + 1));
        }
        Matrix b = load_matrix(std::string(arg.substr(0, sep)), im);
        if (!b.is_square()) {
            throw ParseError("custom pattern matrix is not square", 1, arg_column);
        }
        return {CustomSpec{std::move(b)}, label};
    }
    throw ParseError("unknown pattern '" + std::string(head) +
                         "' (expected identity, toeplitz:<w>, phase:<c> or custom:<csv>)",
                     1, 1);
}

std::vector<PatternSpec> parse_pattern_list(std::string_view text) {
    std::vector<PatternSpec> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
        try {
            out.push_back(parse_pattern(text.substr(start, end - start)));
        } catch (const ParseError& e) {
            throw ParseError(e.message(), 1, start + e.column());
        }
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

CorrelationPattern instantiate(const PatternSpec& spec, Index m, std::uint64_t phase_seed) {
    return std::visit(
        [&](const auto& f) -> CorrelationPattern {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, IdentitySpec>) {
                return CorrelationPattern::identity(m);
            } else if constexpr (std::is_same_v<F, ToeplitzSpec>) {
                return CorrelationPattern::toeplitz(f.omega, m);
            } else if constexpr (std::is_same_v<F, PhaseSpec>) {
                return CorrelationPattern::phase(f.c, draw_phases(m, phase_seed));
            } else {
                if (m > f.b.rows()) {
                    throw InvalidArgument("custom pattern " + spec.text + " is " + std::to_string(f.b.rows()) +
                                          "x" + std::to_string(f.b.rows()) + ", cannot serve m = " +
                                          std::to_string(m));
                }
                return CorrelationPattern::custom(m == f.b.rows() ? f.b : f.b.block(0, 0, m, m));
            }
        },
        spec.family);
}

RealMatrix parse_real_csv(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        std::vector<double> row;
        std::size_t cell_start = 0;
        while (true) {
            const std::size_t comma = line.find(',', cell_start);
            const std::size_t cell_end = comma == std::string_view::npos ? line.size() : comma;
            const std::string_view cell = trim(line.substr(cell_start, cell_end - cell_start));
            row.push_back(parse_number(cell, line_no, cell_start + 1));
            if (comma == std::string_view::npos) {
                break;
            }
            cell_start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("row has " + std::to_string(row.size()) + " values, expected " +
                                 std::to_string(rows.front().size()),
                             line_no, 1);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError("no matrix rows found", line_no == 0 ? 1 : line_no, 1);
    }
    RealMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < out.rows(); ++i) {
        for (Index j = 0; j < out.cols(); ++j) {
            out(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return out;
}

RealMatrix read_real_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "'", 0, 0);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_real_csv(buffer.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.message(), e.line(), e.column());
    }
}

Matrix load_matrix(const std::string& re_path, const std::optional<std::string>& im_path) {
    RealMatrix re = read_real_csv(re_path);
    if (!im_path) {
        return re;
    }
    const RealMatrix im = read_real_csv(*im_path);
    if (im.rows() != re.rows() || im.cols() != re.cols()) {
        throw ParseError("imaginary part " + *im_path + " has a different shape than " + re_path, 1, 1);
    }
    ComplexMatrix b(re.rows(), re.cols());
    b.real() = re;
    b.imag() = im;
    return b;
}

} // namespace cwishart
