#include "gsvdkit/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gsvdkit {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(std::string_view source, std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::ParseError,
              std::string(source) + ":" + std::to_string(line) + ": " + msg);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_cell(std::string_view cell, std::string_view source, std::size_t line) {
  const std::string_view t = trim(cell);
  if (t.empty()) parse_fail(source, line, "empty cell");
  std::string_view digits = t.front() == '+' ? t.substr(1) : t;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || !std::isfinite(value)) {
    parse_fail(source, line, "not a finite number: '" + std::string(t) + "'");
  }
  return value;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from(const json& j, Index rows, Index cols, const char* key) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
    throw Error(ErrorCode::ParseError, std::string("factors document: bad shape for '") + key + "'");
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw Error(ErrorCode::ParseError, std::string("factors document: ragged '") + key + "'");
    }
    for (Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

Index matrix_cols(const json& j) {
  return j.is_array() && !j.empty() ? static_cast<Index>(j.front().size()) : 0;
}

}  // namespace

Matrix parse_csv(std::string_view text, std::string_view source, bool skip_header) {
  std::vector<std::vector<double>> rows;
  std::vector<double> current;
  std::string cell;
  bool quoted = false;
  bool cell_was_quoted = false;
  bool row_has_content = false;
  std::size_t line = 1;
  std::size_t record_line = 1;
  bool header_pending = skip_header;

  auto end_cell = [&] {
    if (!header_pending) current.push_back(parse_cell(cell, source, record_line));
    cell.clear();
    cell_was_quoted = false;
  };
  auto end_record = [&] {
    if (row_has_content || !cell.empty() || cell_was_quoted) {
      end_cell();
      if (header_pending) {
        header_pending = false;
      } else {
        if (!rows.empty() && rows.front().size() != current.size()) {
          parse_fail(source, record_line,
                     "row has " + std::to_string(current.size()) + " fields, expected " +
                         std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(current));
      }
    }
    current.clear();
    cell.clear();
    row_has_content = false;
    cell_was_quoted = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        cell.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!trim(cell).empty()) parse_fail(source, line, "quote inside an unquoted field");
        cell.clear();
        quoted = true;
        cell_was_quoted = true;
        row_has_content = true;
        break;
      case ',':
        end_cell();
        row_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        record_line = line;
        break;
      default:
        if (ch != ' ' && ch != '\t') row_has_content = true;
        cell.push_back(ch);
    }
  }
  if (quoted) parse_fail(source, record_line, "unterminated quoted field");
  end_record();
  if (rows.empty()) parse_fail(source, line, "no data rows");

  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

Matrix read_csv(const std::string& path, bool skip_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);
  return parse_csv(text, path, skip_header);
}

Vector read_csv_vector(const std::string& path, bool skip_header) {
  const Matrix m = read_csv(path, skip_header);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw Error(ErrorCode::DimensionMismatch,
              path + ": expected a single row or column, got " + std::to_string(m.rows()) + "x" +
                  std::to_string(m.cols()));
}

std::string format_csv(const Matrix& m) {
  std::string out;
  char buf[32];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out.push_back(',');
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out += buf;
    }
    out.push_back('\n');
  }
  return out;
}

void write_text(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, path + ": cannot open file for writing");
  out << text;
  if (!out) throw Error(ErrorCode::ParseError, path + ": write failed");
}

void write_csv(const std::string& path, const Matrix& m) { write_text(path, format_csv(m)); }

std::string factors_to_json(const GsvdFactors& f, int indent) {
  json doc;
  doc["m1"] = f.m1;
  doc["m2"] = f.m2;
  doc["n"] = f.n;
  doc["r"] = f.r;
  doc["ra"] = f.r_a;
  doc["rb"] = f.r_b;
  doc["convention"] = std::string(to_string(f.layout));
  doc["compact"] = f.compact;
  doc["tolerance"] = f.rank_rel_tol;
  doc["u"] = matrix_json(f.u);
  doc["v"] = matrix_json(f.v);
  doc["h"] = matrix_json(f.h);
  doc["c"] = f.c;
  doc["s"] = f.s;
  doc["v_col_of"] = f.v_col_of;

  const CsStructure cs = structure_counts(f);
  doc["structure"] = {{"infinite", cs.n_infinite},   {"finite", cs.n_finite},
                      {"zero", cs.n_zero},           {"zero_rows_c", cs.zero_rows_c},
                      {"zero_rows_s", cs.zero_rows_s}};
  json values = json::array();
  for (double v : cotangents(f)) {
    if (std::isinf(v)) {
      values.push_back("inf");
    } else {
      values.push_back(v);
    }
  }
  doc["values"] = std::move(values);
  doc["angles"] = angles(f);
  return doc.dump(indent);
}

GsvdFactors factors_from_json(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string(source) + ": " + e.what());
  }
  GsvdFactors f;
  try {
    f.m1 = doc.at("m1").get<Index>();
    f.m2 = doc.at("m2").get<Index>();
    f.n = doc.at("n").get<Index>();
    f.r = doc.at("r").get<Index>();
    f.r_a = doc.at("ra").get<Index>();
    f.r_b = doc.at("rb").get<Index>();
    const std::string conv = doc.at("convention").get<std::string>();
    if (conv == "bottom") {
      f.layout = SineLayout::Bottom;
    } else if (conv == "top") {
      f.layout = SineLayout::Top;
    } else {
      throw Error(ErrorCode::ParseError, std::string(source) + ": unknown convention '" + conv + "'");
    }
    f.compact = doc.value("compact", false);
    f.rank_rel_tol = doc.at("tolerance").get<double>();
    f.c = doc.at("c").get<std::vector<double>>();
    f.s = doc.at("s").get<std::vector<double>>();
    f.v_col_of = doc.at("v_col_of").get<std::vector<Index>>();
    f.u = matrix_from(doc.at("u"), f.m1, matrix_cols(doc.at("u")), "u");
    f.v = matrix_from(doc.at("v"), f.m2, matrix_cols(doc.at("v")), "v");
    f.h = matrix_from(doc.at("h"), f.r, f.n, "h");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string(source) + ": " + e.what());
  }
  const auto r = static_cast<std::size_t>(f.r);
  if (f.c.size() != r || f.s.size() != r || f.v_col_of.size() != r) {
    throw Error(ErrorCode::ParseError, std::string(source) + ": c, s and v_col_of need r entries");
  }
  return f;
}

}  // namespace gsvdkit
