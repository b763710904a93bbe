#include "semical/calfield.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

namespace semical {

namespace {

struct Token {
  std::string_view text;
  int line;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else {
      const std::size_t start = i;
      while (i < text.size() && text[i] != '#' &&
             !std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
      }
      out.push_back(Token{text.substr(start, i - start), line});
    }
  }
  return out;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  bool done() const { return pos_ >= tokens_.size(); }
  int line() const {
    if (tokens_.empty()) return 1;
    return done() ? tokens_.back().line : tokens_[pos_].line;
  }

  const Token& next(const char* expected) {
    if (done()) throw ParseError(line(), std::string("unexpected end of input, expected ") + expected);
    return tokens_[pos_++];
  }

  void keyword(std::string_view word) {
    const Token& t = next(std::string(word).c_str());
    if (t.text != word) {
      throw ParseError(t.line, "expected '" + std::string(word) + "', got '" +
                                   std::string(t.text) + "'");
    }
  }

  long integer(const char* what) {
    const Token& t = next(what);
    long value = 0;
    const auto* end = t.text.data() + t.text.size();
    auto [ptr, ec] = std::from_chars(t.text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
      throw ParseError(t.line, std::string("expected integer ") + what + ", got '" +
                                   std::string(t.text) + "'");
    }
    return value;
  }

  std::vector<double> reals(std::size_t count, const char* record) {
    std::vector<double> values;
    values.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
      if (done()) {
        throw ParseError(line(), std::string(record) + " record: expected " +
                                     std::to_string(count) + " values, got " +
                                     std::to_string(k));
      }
      const Token& t = tokens_[pos_];
      double value = 0.0;
      const auto* end = t.text.data() + t.text.size();
      auto [ptr, ec] = std::from_chars(t.text.data(), end, value);
      if (ec != std::errc() || ptr != end) {
        throw ParseError(t.line, std::string(record) + " record: expected " +
                                     std::to_string(count) + " values, got " +
                                     std::to_string(k) + " before '" + std::string(t.text) +
                                     "'");
      }
      if (!std::isfinite(value)) {
        throw ParseError(t.line, "non-finite number '" + std::string(t.text) + "'");
      }
      values.push_back(value);
      ++pos_;
    }
    return values;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

void append_number(std::string& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

}  // namespace

FieldGrid parse_calfield(std::string_view text, const Tolerances& tol) {
  Cursor cur(tokenize(text));
  cur.keyword("CALFIELD");
  {
    const int line = cur.line();
    const long version = cur.integer("format version");
    if (version != 1) throw ParseError(line, "unsupported CALFIELD version " + std::to_string(version));
  }
  cur.keyword("DIM");
  const int dim_line = cur.line();
  const long n = cur.integer("dimension");
  if (n < 2 || n > kMaxDim) {
    throw ParseError(dim_line, "DIM " + std::to_string(n) + " outside [2, " +
                                   std::to_string(kMaxDim) + "]");
  }
  cur.keyword("POINTS");
  const int points_line = cur.line();
  const long count = cur.integer("point count");
  if (count < 1) throw ParseError(points_line, "POINTS must be at least 1");

  FieldGrid grid;
  grid.dim = static_cast<int>(n);
  std::set<long> seen;
  const auto dim = static_cast<std::size_t>(n);
  while (!cur.done()) {
    const int block_line = cur.line();
    if (static_cast<long>(grid.points.size()) == count) {
      throw ParseError(block_line, "point count mismatch: header declares " +
                                       std::to_string(count) + " points, found more");
    }
    cur.keyword("P");
    const long idx = cur.integer("point index");
    if (idx < 0 || idx >= count) {
      throw ParseError(block_line, "point index " + std::to_string(idx) + " outside [0, " +
                                       std::to_string(count - 1) + "]");
    }
    if (!seen.insert(idx).second) {
      throw ParseError(block_line, "duplicate point index " + std::to_string(idx));
    }
    cur.keyword("X");
    const auto x = cur.reals(dim, "X");
    cur.keyword("G");
    const int g_line = cur.line();
    const auto g = cur.reals(dim * (dim + 1) / 2, "G");
    cur.keyword("W");
    const auto w = cur.reals(dim * (dim - 1) / 2, "W");

    FieldPoint p;
    p.index = static_cast<int>(idx);
    p.coords = Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(dim));
    try {
      p.g = MetricTensor::from_upper(grid.dim, g, tol);
    } catch (const NotPositiveDefinite&) {
      throw ParseError(g_line, "metric not positive definite at point " + std::to_string(idx));
    }
    p.omega = TwoForm::from_upper(grid.dim, w);
    grid.points.push_back(std::move(p));
  }
  if (static_cast<long>(grid.points.size()) != count) {
    throw ParseError(cur.line(), "point count mismatch: header declares " +
                                     std::to_string(count) + " points, found " +
                                     std::to_string(grid.points.size()));
  }
  std::sort(grid.points.begin(), grid.points.end(),
            [](const FieldPoint& a, const FieldPoint& b) { return a.index < b.index; });
  return grid;
}

std::string write_calfield(const FieldGrid& grid, std::string_view header_comment) {
  std::string out;
  std::size_t start = 0;
  while (start < header_comment.size()) {
    std::size_t end = header_comment.find('\n', start);
    if (end == std::string_view::npos) end = header_comment.size();
    out += "# ";
    out += header_comment.substr(start, end - start);
    out += '\n';
    start = end + 1;
  }
  const int n = grid.dim;
  out += "CALFIELD 1\nDIM " + std::to_string(n) + "\nPOINTS " +
         std::to_string(grid.points.size()) + "\n";
  for (const auto& p : grid.points) {
    out += "P " + std::to_string(p.index) + "\nX";
    for (int i = 0; i < n; ++i) {
      out += ' ';
      append_number(out, p.coords(i));
    }
    out += "\nG";
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        out += ' ';
        append_number(out, p.g(i, j));
      }
    out += "\nW";
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        out += ' ';
        append_number(out, p.omega(i, j));
      }
    out += '\n';
  }
  return out;
}

}  // namespace semical
