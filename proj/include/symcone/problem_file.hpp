#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "symcone/cone.hpp"
#include "symcone/subspace.hpp"

namespace symcone {

/// Text problem format, one record per line:
///
///   SYMCONE 1
///   # comment lines start with '#'
///   NAME <text>            (optional)
///   SEED <integer>         (optional)
///   DELTA_LB <real>        (optional)
///   CONE <block count>
///   ORTHANT <n> | PSD <n> | SOC <n>       one line per block
///   SUBSPACE SPAN|KERNEL <row count>
///   <ambient_dim reals>                   one line per row
///   END
///
/// Rows are in isometric coordinates: PSD blocks as the upper triangle row
/// by row with off-diagonals times sqrt(2), SOC blocks times sqrt(2).
/// SPAN rows span L; KERNEL rows are the linear map with L as null space.
struct ProblemFile {
  enum class Mode { Span, Kernel };

  std::vector<Block> blocks;
  Mode mode = Mode::Span;
  Eigen::MatrixXd rows;
  std::optional<std::string> name;
  std::optional<std::int64_t> seed;
  std::optional<double> delta_lb;

  ConeDescriptor cone() const { return ConeDescriptor(blocks); }
  /// Orthonormal basis of L. SPAN rows that are already orthonormal within
  /// 1e-12 are taken as given.
  SubspaceBasis basis() const;

  static ProblemFile from_basis(const SubspaceBasis& basis);
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

ProblemFile parse_problem(std::string_view text);
/// Canonical form: fixed header comment, shortest round-trip numbers, single
/// spaces. write(parse(write(p))) == write(p).
std::string write_problem(const ProblemFile& p);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

}  // namespace symcone
