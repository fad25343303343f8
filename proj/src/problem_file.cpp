#include "symcone/problem_file.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace symcone {

ParseError::ParseError(int line, int column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

SubspaceBasis ProblemFile::basis() const {
  const ConeDescriptor c = cone();
  if (mode == Mode::Kernel) return from_kernel(c, rows);
  if (rows.rows() == 0) throw std::invalid_argument("SPAN subspace needs at least one row");
  const Eigen::MatrixXd q = rows.transpose();
  const Eigen::MatrixXd gram = q.transpose() * q;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
  if (q.cols() <= q.rows() && (gram - eye).cwiseAbs().maxCoeff() <= 1e-12) {
    return SubspaceBasis::from_orthonormal(c, q);
  }
  return orthonormalize(c, q);
}

ProblemFile ProblemFile::from_basis(const SubspaceBasis& basis) {
  ProblemFile p;
  p.blocks = basis.cone().blocks();
  p.mode = Mode::Span;
  p.rows = basis.matrix().transpose();
  return p;
}

namespace {

struct Token {
  std::string_view text;
  int column;  // 1-based
};

struct Line {
  int number;
  std::vector<Token> tokens;
  std::string_view raw;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    if (i >= s.size()) break;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    out.push_back({s.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

// Non-blank, non-comment lines in order.
class Reader {
 public:
  explicit Reader(std::string_view text) {
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      ++number;
      const std::string_view raw = text.substr(pos, end - pos);
      std::vector<Token> tokens = tokenize(raw);
      if (!tokens.empty() && tokens.front().text[0] != '#') {
        lines_.push_back({number, std::move(tokens), raw});
      }
      if (end == text.size()) break;
      pos = end + 1;
    }
    last_line_ = number;
  }

  const Line& next(const char* expecting) {
    if (i_ >= lines_.size()) {
      throw ParseError(last_line_, 1, std::string("unexpected end of file, expected ") + expecting);
    }
    return lines_[i_++];
  }
  const Line* peek() const { return i_ < lines_.size() ? &lines_[i_] : nullptr; }

 private:
  std::vector<Line> lines_;
  std::size_t i_ = 0;
  int last_line_ = 0;
};

[[noreturn]] void fail(const Line& l, const Token& t, const std::string& what) {
  throw ParseError(l.number, t.column, what);
}

[[noreturn]] void fail_end(const Line& l, const std::string& what) {
  throw ParseError(l.number, static_cast<int>(l.raw.size()) + 1, what);
}

double parse_real(const Line& l, const Token& t) {
  double v = 0.0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  if (!t.text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) fail(l, t, "invalid number '" + std::string(t.text) + "'");
  if (!std::isfinite(v)) fail(l, t, "number must be finite");
  return v;
}

std::int64_t parse_int(const Line& l, const Token& t) {
  std::int64_t v = 0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) fail(l, t, "invalid integer '" + std::string(t.text) + "'");
  return v;
}

void expect_count(const Line& l, std::size_t n) {
  if (l.tokens.size() < n) fail_end(l, "missing field");
  if (l.tokens.size() > n) fail(l, l.tokens[n], "unexpected token '" + std::string(l.tokens[n].text) + "'");
}

}  // namespace

ProblemFile parse_problem(std::string_view text) {
  Reader in(text);
  ProblemFile p;

  const Line& header = in.next("SYMCONE header");
  if (header.tokens[0].text != "SYMCONE") fail(header, header.tokens[0], "expected 'SYMCONE'");
  expect_count(header, 2);
  if (parse_int(header, header.tokens[1]) != 1) fail(header, header.tokens[1], "unsupported version");

  // optional metadata, then CONE
  const Line* cone_line = nullptr;
  while (!cone_line) {
    const Line& l = in.next("CONE");
    const std::string_view key = l.tokens[0].text;
    if (key == "NAME") {
      if (l.tokens.size() < 2) fail_end(l, "missing name");
      const std::size_t start = static_cast<std::size_t>(l.tokens[1].column - 1);
      const std::size_t end = static_cast<std::size_t>(l.tokens.back().column - 1) +
                              l.tokens.back().text.size();
      p.name = std::string(l.raw.substr(start, end - start));
    } else if (key == "SEED") {
      expect_count(l, 2);
      p.seed = parse_int(l, l.tokens[1]);
    } else if (key == "DELTA_LB") {
      expect_count(l, 2);
      p.delta_lb = parse_real(l, l.tokens[1]);
    } else if (key == "CONE") {
      cone_line = &l;
    } else {
      fail(l, l.tokens[0], "unknown keyword '" + std::string(key) + "'");
    }
  }
  expect_count(*cone_line, 2);
  const std::int64_t nblocks = parse_int(*cone_line, cone_line->tokens[1]);
  if (nblocks < 1) fail(*cone_line, cone_line->tokens[1], "block count must be >= 1");

  for (std::int64_t k = 0; k < nblocks; ++k) {
    const Line& l = in.next("cone block");
    const std::string_view kind = l.tokens[0].text;
    Block b{BlockKind::Orthant, 0};
    if (kind == "ORTHANT") {
      b.kind = BlockKind::Orthant;
    } else if (kind == "PSD") {
      b.kind = BlockKind::Psd;
    } else if (kind == "SOC") {
      b.kind = BlockKind::Soc;
    } else {
      fail(l, l.tokens[0], "unknown cone block '" + std::string(kind) + "'");
    }
    expect_count(l, 2);
    const std::int64_t size = parse_int(l, l.tokens[1]);
    const int min_size = b.kind == BlockKind::Soc ? 2 : 1;
    if (size < min_size || size > 100000) fail(l, l.tokens[1], "invalid block size");
    b.size = static_cast<int>(size);
    p.blocks.push_back(b);
  }
  const int dim = p.cone().ambient_dim();

  const Line& sub = in.next("SUBSPACE");
  if (sub.tokens[0].text != "SUBSPACE") fail(sub, sub.tokens[0], "expected 'SUBSPACE'");
  expect_count(sub, 3);
  if (sub.tokens[1].text == "SPAN") {
    p.mode = ProblemFile::Mode::Span;
  } else if (sub.tokens[1].text == "KERNEL") {
    p.mode = ProblemFile::Mode::Kernel;
  } else {
    fail(sub, sub.tokens[1], "expected SPAN or KERNEL");
  }
  const std::int64_t nrows = parse_int(sub, sub.tokens[2]);
  if (nrows < 0 || nrows > 1000000) fail(sub, sub.tokens[2], "invalid row count");
  if (p.mode == ProblemFile::Mode::Span && nrows == 0) fail(sub, sub.tokens[2], "SPAN needs a row");

  p.rows.resize(nrows, dim);
  for (std::int64_t i = 0; i < nrows; ++i) {
    const Line& l = in.next("matrix row");
    if (static_cast<int>(l.tokens.size()) != dim) {
      if (static_cast<int>(l.tokens.size()) < dim) {
        fail_end(l, "row has " + std::to_string(l.tokens.size()) + " entries, expected " +
                        std::to_string(dim));
      }
      fail(l, l.tokens[dim], "row has too many entries, expected " + std::to_string(dim));
    }
    for (int j = 0; j < dim; ++j) p.rows(i, j) = parse_real(l, l.tokens[j]);
  }

  const Line& end = in.next("END");
  if (end.tokens[0].text != "END") fail(end, end.tokens[0], "expected 'END'");
  expect_count(end, 1);
  if (const Line* extra = in.peek()) fail(*extra, extra->tokens[0], "content after END");
  return p;
}

std::string write_problem(const ProblemFile& p) {
  std::ostringstream out;
  out << "SYMCONE 1\n";
  out << "# rows in isometric coordinates: PSD upper triangle by rows, off-diagonals x sqrt(2);"
         " SOC x sqrt(2)\n";
  if (p.name) out << "NAME " << *p.name << "\n";
  if (p.seed) out << "SEED " << *p.seed << "\n";
  if (p.delta_lb) out << "DELTA_LB " << format_double(*p.delta_lb) << "\n";
  out << "CONE " << p.blocks.size() << "\n";
  for (const Block& b : p.blocks) out << to_string(b.kind) << " " << b.size << "\n";
  out << "SUBSPACE " << (p.mode == ProblemFile::Mode::Span ? "SPAN" : "KERNEL") << " "
      << p.rows.rows() << "\n";
  for (Eigen::Index i = 0; i < p.rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.rows.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(p.rows(i, j));
    }
    out << "\n";
  }
  out << "END\n";
  return out.str();
}

}  // namespace symcone
