#pragma once

#include "compound/types.hpp"

#include <string>
#include <string_view>

namespace compound::io {

/// Comma-separated rows, one line per row. Blank lines are ignored.
Matrix parse_csv(std::string_view text);

/// {"rows": R, "cols": C, "data": [row-major numbers]}
Matrix parse_json(std::string_view text);

/// Reads a CSV or JSON matrix file; JSON is detected by a ".json" extension or a leading '{'.
Matrix parse_matrix(const std::string& path);

/// 17 significant digits, so every double round-trips exactly.
std::string to_csv(const Matrix& x);
std::string to_json(const Matrix& x);

/// Writes CSV, or JSON when the path ends in ".json".
void write_matrix(const std::string& path, const Matrix& x);

} // namespace compound::io
