#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "laplace/matrix.hpp"
#include "laplace/reverse_cholesky.hpp"

namespace laplace {

/// Input error carrying the 1-based line it was found on.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

// '#' starts a comment; leading/trailing blanks are ignored
inline std::string strip_comment(std::string line) {
  if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
  const auto first = line.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = line.find_last_not_of(" \t\r\n");
  return line.substr(first, last - first + 1);
}

inline std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline double parse_real(const std::string& tok, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') {
    throw ParseError("expected a real number, got '" + tok + "'", line);
  }
  return v;
}

inline long parse_int(const std::string& tok, std::size_t line) {
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0') {
    throw ParseError("expected an integer, got '" + tok + "'", line);
  }
  return v;
}

// next non-empty line after comment stripping, with its line number
inline bool next_content_line(std::istream& in, std::size_t& lineno, std::string& out,
                              std::vector<std::string>& toks) {
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    out = strip_comment(raw);
    if (out.empty()) continue;
    toks = tokens(out);
    return true;
  }
  return false;
}

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/// `normal-system v1` text format: packed lower triangle, row i holding i
/// entries, then the right-hand side. `s` and `rss` are optional.
inline NormalSystem parse_normal_system(std::istream& in) {
  std::size_t lineno = 0;
  std::string line;
  std::vector<std::string> toks;
  if (!detail::next_content_line(in, lineno, line, toks) || toks.size() != 2 ||
      toks[0] != "normal-system" || toks[1] != "v1") {
    throw ParseError("expected header 'normal-system v1'", lineno == 0 ? 1 : lineno);
  }

  std::optional<NormalSystem> sys;
  std::optional<std::size_t> n;
  std::size_t observations = 0;
  std::optional<double> rss;
  std::vector<bool> row_seen;
  bool rhs_seen = false;

  while (detail::next_content_line(in, lineno, line, toks)) {
    const std::string& key = toks[0];
    if (key == "n") {
      if (toks.size() != 2) throw ParseError("'n' takes one integer", lineno);
      const long v = detail::parse_int(toks[1], lineno);
      if (v < 1) throw ParseError("'n' must be at least 1", lineno);
      n = static_cast<std::size_t>(v);
      sys.emplace(*n);
      row_seen.assign(*n, false);
    } else if (key == "s") {
      if (toks.size() != 2) throw ParseError("'s' takes one integer", lineno);
      const long v = detail::parse_int(toks[1], lineno);
      if (v < 0) throw ParseError("'s' must be nonnegative", lineno);
      observations = static_cast<std::size_t>(v);
    } else if (key == "rss") {
      if (toks.size() != 2) throw ParseError("'rss' takes one real", lineno);
      rss = detail::parse_real(toks[1], lineno);
    } else if (key == "row") {
      if (!sys) throw ParseError("'row' before 'n'", lineno);
      if (toks.size() < 2 || toks[1].back() != ':') {
        throw ParseError("expected 'row <i>:'", lineno);
      }
      const long i = detail::parse_int(toks[1].substr(0, toks[1].size() - 1), lineno);
      if (i < 1 || static_cast<std::size_t>(i) > *n) {
        throw ParseError("row index " + std::to_string(i) + " out of range 1.." +
                             std::to_string(*n),
                         lineno);
      }
      const std::size_t expect = static_cast<std::size_t>(i);
      if (toks.size() - 2 != expect) {
        throw ParseError("row " + std::to_string(i) + " must hold " + std::to_string(expect) +
                             " entries, got " + std::to_string(toks.size() - 2),
                         lineno);
      }
      if (row_seen[expect - 1]) {
        throw ParseError("row " + std::to_string(i) + " given twice", lineno);
      }
      for (std::size_t j = 0; j < expect; ++j) {
        sys->lower(expect - 1, j) = detail::parse_real(toks[2 + j], lineno);
      }
      row_seen[expect - 1] = true;
    } else if (key == "rhs:") {
      if (!sys) throw ParseError("'rhs:' before 'n'", lineno);
      if (toks.size() - 1 != *n) {
        throw ParseError("rhs must hold " + std::to_string(*n) + " entries, got " +
                             std::to_string(toks.size() - 1),
                         lineno);
      }
      for (std::size_t j = 0; j < *n; ++j) {
        sys->rhs[j] = detail::parse_real(toks[1 + j], lineno);
      }
      rhs_seen = true;
    } else {
      throw ParseError("unknown directive '" + key + "'", lineno);
    }
  }
  if (!sys) throw ParseError("missing 'n' directive", lineno + 1);
  for (std::size_t i = 0; i < *n; ++i) {
    if (!row_seen[i]) throw ParseError("missing row " + std::to_string(i + 1), lineno + 1);
  }
  if (!rhs_seen) throw ParseError("missing 'rhs:' line", lineno + 1);
  sys->observations = observations;
  sys->residual_sum_squares = rss;
  return std::move(*sys);
}

inline void serialize_normal_system(const NormalSystem& s, std::ostream& out) {
  out << "normal-system v1\n";
  out << "n " << s.size() << "\n";
  if (s.observations > 0) out << "s " << s.observations << "\n";
  if (s.residual_sum_squares) out << "rss " << detail::format_real(*s.residual_sum_squares) << "\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << "row " << (i + 1) << ":";
    for (std::size_t j = 0; j <= i; ++j) out << " " << detail::format_real(s.lower(i, j));
    out << "\n";
  }
  out << "rhs:";
  for (double v : s.rhs) out << " " << detail::format_real(v);
  out << "\n";
}

/// `regression v1` text format: a dense s-by-n matrix row by row, with an
/// optional observation vector.
struct RegressionData {
  DenseMatrix matrix;
  std::optional<Vector> observations;
};

inline RegressionData parse_regression(std::istream& in) {
  std::size_t lineno = 0;
  std::string line;
  std::vector<std::string> toks;
  if (!detail::next_content_line(in, lineno, line, toks) || toks.size() != 2 ||
      toks[0] != "regression" || toks[1] != "v1") {
    throw ParseError("expected header 'regression v1'", lineno == 0 ? 1 : lineno);
  }
  auto read_dim = [&](const char* name) -> std::size_t {
    if (!detail::next_content_line(in, lineno, line, toks) || toks.size() != 2 || toks[0] != name) {
      throw ParseError(std::string("expected '") + name + " <int>'", lineno == 0 ? 1 : lineno);
    }
    const long v = detail::parse_int(toks[1], lineno);
    if (v < 1) throw ParseError(std::string("'") + name + "' must be at least 1", lineno);
    return static_cast<std::size_t>(v);
  };
  const std::size_t rows = read_dim("rows");
  const std::size_t cols = read_dim("cols");

  RegressionData data{DenseMatrix(rows, cols), std::nullopt};
  for (std::size_t i = 0; i < rows; ++i) {
    if (!detail::next_content_line(in, lineno, line, toks)) {
      throw ParseError("expected " + std::to_string(rows) + " matrix rows, got " +
                           std::to_string(i),
                       lineno + 1);
    }
    if (toks.size() != cols) {
      throw ParseError("matrix row must hold " + std::to_string(cols) + " entries, got " +
                           std::to_string(toks.size()),
                       lineno);
    }
    for (std::size_t j = 0; j < cols; ++j) {
      data.matrix(i, j) = detail::parse_real(toks[j], lineno);
    }
  }
  if (detail::next_content_line(in, lineno, line, toks)) {
    if (toks[0] != "obs:") throw ParseError("unknown directive '" + toks[0] + "'", lineno);
    if (toks.size() - 1 != rows) {
      throw ParseError("obs must hold " + std::to_string(rows) + " entries, got " +
                           std::to_string(toks.size() - 1),
                       lineno);
    }
    Vector b(rows);
    for (std::size_t k = 0; k < rows; ++k) b[k] = detail::parse_real(toks[1 + k], lineno);
    data.observations = std::move(b);
  }
  return data;
}

inline void serialize_regression(const RegressionData& data, std::ostream& out) {
  out << "regression v1\n";
  out << "rows " << data.matrix.rows() << "\n";
  out << "cols " << data.matrix.cols() << "\n";
  for (std::size_t i = 0; i < data.matrix.rows(); ++i) {
    for (std::size_t j = 0; j < data.matrix.cols(); ++j) {
      out << (j ? " " : "") << detail::format_real(data.matrix(i, j));
    }
    out << "\n";
  }
  if (data.observations) {
    out << "obs:";
    for (double v : *data.observations) out << " " << detail::format_real(v);
    out << "\n";
  }
}

/// Loads either format, sniffing the header. A regression file is reduced to
/// its normal equations; when observations are present the residual sum of
/// squares is filled in from the least-squares solution.
inline NormalSystem load_system(std::istream& in) {
  std::stringstream buffered;
  buffered << in.rdbuf();

  std::size_t lineno = 0;
  std::string line;
  std::vector<std::string> toks;
  if (!detail::next_content_line(buffered, lineno, line, toks)) {
    throw ParseError("empty input", 1);
  }
  buffered.clear();
  buffered.seekg(0);
  if (toks[0] == "normal-system") return parse_normal_system(buffered);
  if (toks[0] == "regression") {
    RegressionData data = parse_regression(buffered);
    NormalSystem sys = data.observations ? gram(data.matrix, *data.observations)
                                         : gram(data.matrix, Vector(data.matrix.rows(), 0.0));
    if (data.observations) {
      const Solution x = solve(factor(sys, false), sys.size());
      sys.residual_sum_squares = residual(data.matrix, x.values, *data.observations).second;
    } else {
      sys.rhs.assign(sys.size(), 0.0);
    }
    return sys;
  }
  throw ParseError("unknown header '" + toks[0] + "' (expected 'normal-system' or 'regression')",
                   lineno);
}

inline NormalSystem load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return load_system(in);
}

}  // namespace laplace
