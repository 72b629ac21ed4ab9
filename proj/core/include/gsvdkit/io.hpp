#pragma once

// CSV matrices and the JSON factors document.

#include <string>
#include <string_view>

#include "gsvdkit/gsvd.hpp"

namespace gsvdkit {

/// Parses comma-separated numbers with RFC-4180 quoting. Errors are
/// ParseError with "source:line:" prefixed to the message.
Matrix parse_csv(std::string_view text, std::string_view source, bool skip_header = false);

Matrix read_csv(const std::string& path, bool skip_header = false);

/// A single row or a single column read as a vector.
Vector read_csv_vector(const std::string& path, bool skip_header = false);

/// One row per line, 17 significant digits.
std::string format_csv(const Matrix& m);

void write_csv(const std::string& path, const Matrix& m);

void write_text(const std::string& path, std::string_view text);

/// Document with keys u, v, c, s, h, r, ra, rb, m1, m2, n, convention,
/// compact, tolerance, v_col_of, structure, values and angles. Floats use
/// the shortest representation that reads back exactly; infinite values
/// are the string "inf".
std::string factors_to_json(const GsvdFactors& f, int indent = 2);

/// Inverse of factors_to_json; the round trip is exact.
GsvdFactors factors_from_json(std::string_view text, std::string_view source);

}  // namespace gsvdkit
