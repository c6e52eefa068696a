// SPDX-License-Identifier: Apache-2.0
#include "palinverse/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "palinverse/error.hpp"

namespace palinverse::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::Parse, what); }

double parse_double(std::string_view s, std::string_view whole) {
    if (s.empty()) return 1.0;
    if (s == "+") return 1.0;
    if (s == "-") return -1.0;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size())
        parse_error("bad complex literal '" + std::string(whole) + "'");
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

Index depth(const Json& j) {
    if (!j.is_structured()) return 0;
    Index d = 0;
    for (const auto& v : j) d = std::max(d, depth(v));
    return d + 1;
}

void emit(const Json& j, std::string& out, int indent) {
    if (depth(j) <= 2) {
        out += j.dump();
        return;
    }
    const std::string pad(size_t(indent + 2), ' ');
    const bool object = j.is_object();
    out += object ? "{\n" : "[\n";
    size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad;
        if (object) out += Json(it.key()).dump() + ": ";
        emit(it.value(), out, indent + 2);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
    }
    out += std::string(size_t(indent), ' ') + (object ? "}" : "]");
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field '") + key + "'");
    return j.at(key);
}

void check_format(const Json& j) {
    if (j.is_object() && j.contains("format") && j.at("format") != kFormat)
        parse_error("unsupported format '" + j.at("format").dump() + "'");
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

std::string format_complex(Complex z) {
    if (z.imag() == 0.0) return format_double(z.real());
    std::string im = format_double(std::abs(z.imag()));
    const char* sign = std::signbit(z.imag()) ? "-" : "+";
    if (z.real() == 0.0) return std::string(std::signbit(z.imag()) ? "-" : "") + im + "i";
    return format_double(z.real()) + sign + im + "i";
}

Complex parse_complex(std::string_view text) {
    const std::string_view s = trim(text);
    if (s.empty()) parse_error("empty complex literal");
    if (s.back() != 'i' && s.back() != 'j') return {parse_double(s, s), 0.0};
    const std::string_view body = s.substr(0, s.size() - 1);
    // The imaginary part starts at the last sign not belonging to an exponent.
    size_t split = std::string_view::npos;
    for (size_t i = body.size(); i-- > 1;)
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    if (split == std::string_view::npos) return {0.0, parse_double(body, s)};
    return {parse_double(body.substr(0, split), s), parse_double(body.substr(split), s)};
}

std::vector<Complex> parse_complex_list(std::string_view text) {
    std::vector<Complex> out;
    while (true) {
        const size_t comma = text.find(',');
        out.push_back(parse_complex(text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        parse_error("complex scalars are [re, im] pairs, got " + j.dump());
    return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j, const char* what) {
    if (!j.is_array()) parse_error(std::string(what) + " must be a list of rows");
    const Index rows = Index(j.size());
    const Index cols = rows ? Index(j[0].size()) : 0;
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const Json& row = j[size_t(r)];
        if (!row.is_array() || Index(row.size()) != cols) parse_error(std::string(what) + " has ragged rows");
        for (Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[size_t(c)]);
    }
    return m;
}

Json class_to_json(SymmetryClass cls) {
    return Json{{"star", cls.transpose() ? "T" : "H"}, {"epsilon", cls.epsilon}};
}

SymmetryClass class_from_json(const Json& j) {
    if (j.is_string()) {
        const std::string code = j.get<std::string>();
        if (code == "tp" || code == "ta" || code == "hp" || code == "ha") return SymmetryClass::from_code(code);
        parse_error("unknown class '" + code + "'");
    }
    const Json& star = field(j, "star");
    const Json& eps = field(j, "epsilon");
    if (!star.is_string() || (star != "T" && star != "H")) parse_error("class.star must be \"T\" or \"H\"");
    if (!eps.is_number_integer() || (eps != 1 && eps != -1)) parse_error("class.epsilon must be 1 or -1");
    return {star == "T" ? Star::Transpose : Star::ConjugateTranspose, eps.get<int>()};
}

Json system_to_json(const PalindromicSystem& sys) {
    return Json{{"format", kFormat},
                {"class", class_to_json(sys.cls())},
                {"n", sys.n()},
                {"A1", matrix_to_json(sys.a1())},
                {"A0", matrix_to_json(sys.a0())}};
}

PalindromicSystem system_from_json(const Json& j) {
    check_format(j);
    const SymmetryClass cls = class_from_json(field(j, "class"));
    Matrix a1 = matrix_from_json(field(j, "A1"), "A1");
    Matrix a0 = matrix_from_json(field(j, "A0"), "A0");
    if (j.contains("n") && (!j.at("n").is_number_integer() || j.at("n").get<Index>() != a1.rows()))
        parse_error("field 'n' disagrees with A1");
    return PalindromicSystem(cls, std::move(a1), std::move(a0));
}

Json pair_to_json(const Matrix& x, const Matrix& t, std::optional<SymmetryClass> cls) {
    Json j{{"format", kFormat}};
    if (cls) j["class"] = class_to_json(*cls);
    j["X"] = matrix_to_json(x);
    j["T"] = matrix_to_json(t);
    return j;
}

PairFile pair_from_json(const Json& j) {
    check_format(j);
    PairFile p;
    if (j.contains("class")) p.cls = class_from_json(j.at("class"));
    p.x = matrix_from_json(field(j, "X"), "X");
    if (j.contains("T")) p.t = matrix_from_json(j.at("T"), "T");
    return p;
}

std::vector<Complex> eigenvalues_from_json(const Json& j) {
    check_format(j);
    const Json& list = j.is_object() ? field(j, "eigenvalues") : j;
    if (!list.is_array()) parse_error("eigenvalues must be a list");
    std::vector<Complex> out;
    for (const Json& z : list) out.push_back(complex_from_json(z));
    return out;
}

Json eigenvalues_to_json(const std::vector<Complex>& values) {
    Json list = Json::array();
    for (Complex z : values) list.push_back(complex_to_json(z));
    return Json{{"format", kFormat}, {"eigenvalues", std::move(list)}};
}

std::string to_text(const Json& j) {
    std::string out;
    emit(j, out, 0);
    return out + "\n";
}

Json parse_text(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        parse_error(e.what());
    }
}

Json read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) parse_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

void write_file(const std::string& path, const Json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    out << to_text(j);
}

}  // namespace palinverse::io
