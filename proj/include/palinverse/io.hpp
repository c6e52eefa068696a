// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "palinverse/system.hpp"

namespace palinverse::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormat = "palinverse-v1";

// Shortest decimal that reads back to the same double.
std::string format_double(double v);
// "a+bi" with shortest components; pure reals print without the imaginary part.
std::string format_complex(Complex z);

// Accepts "3", "-2.5i", "1e-3-4i", "i", "-i", "2+j". Locale independent.
Complex parse_complex(std::string_view text);
// Comma separated list of parse_complex literals.
std::vector<Complex> parse_complex_list(std::string_view text);

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const char* what);
Json class_to_json(SymmetryClass cls);
SymmetryClass class_from_json(const Json& j);

Json system_to_json(const PalindromicSystem& sys);
PalindromicSystem system_from_json(const Json& j);

struct PairFile {
    std::optional<SymmetryClass> cls;
    Matrix x;
    std::optional<Matrix> t;
};
Json pair_to_json(const Matrix& x, const Matrix& t, std::optional<SymmetryClass> cls = {});
PairFile pair_from_json(const Json& j);

// {"eigenvalues": [...]} or a bare list of [re, im].
std::vector<Complex> eigenvalues_from_json(const Json& j);
Json eigenvalues_to_json(const std::vector<Complex>& values);

// Canonical text: one matrix row per line, shortest round-trip floats.
std::string to_text(const Json& j);
Json parse_text(std::string_view text);
Json read_file(const std::string& path);
void write_file(const std::string& path, const Json& j);

}  // namespace palinverse::io
