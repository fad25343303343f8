#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symcone/element.hpp"
#include "symcone/schemes.hpp"
#include "symcone/subspace.hpp"

namespace symcone {

/// Rescaling parameter for v = e + a c; (1 + a)^2 = 2.
inline const double kRescaleA = std::sqrt(2.0) - 1.0;

/// One rescaling: the quadratic map of e + a c on `block`.
struct RescalingStep {
  std::size_t block;
  Element idempotent;
  double a;
};

enum class SolveStatus { Solved, DualSolved, OuterLimit };
std::string to_string(SolveStatus s);

enum class SolveMode { Primal, Extended, Orthant };
std::string to_string(SolveMode m);
std::optional<SolveMode> parse_mode(std::string_view name);

/// Which subspace a basic-procedure call worked on.
enum class Side { Primal, Dual };

struct BasicProcedureCall {
  Side side;
  OutcomeKind kind;
  std::int64_t iterations;
};

struct SolveReport {
  SolveStatus status = SolveStatus::OuterLimit;
  /// Point of L (Solved) or of its orthogonal complement (DualSolved) in
  /// the open cone, in the original coordinates.
  std::optional<Element> x;
  /// Basic-procedure rounds.
  std::int64_t outer_iterations = 0;
  std::vector<RescalingStep> rescalings;
  /// Dual-side log, extended mode only.
  std::vector<RescalingStep> dual_rescalings;
  std::int64_t bp_iterations = 0;
  Scheme scheme = Scheme::Smooth;
  std::vector<BasicProcedureCall> calls;
  /// Interior outcomes whose recovered point failed verification.
  int rejected_certificates = 0;
};

struct SolveOptions {
  Scheme scheme = Scheme::Smooth;
  /// Defaults to SchemeConfig::for_cone (for_orthant in orthant mode).
  std::optional<SchemeConfig> config;
  /// Maximum number of rescalings per side; defaults to 10 x ambient_dim.
  std::optional<std::int64_t> outer_limit;
  /// Extra test on a recovered point; a rejected point is treated like a cap
  /// outcome and the solve continues.
  std::function<bool(const Element&)> accept;
  /// Called with every basic-procedure outcome, before it is acted on.
  std::function<void(Side, const SchemeOutcome&)> on_basic_procedure;
};

/// Projection-and-rescaling loop on L for a symmetric cone.
///
/// Alternates a basic procedure on the current projector with rescalings
/// by e + (sqrt 2 - 1) c along the top idempotent of the cap witness. The
/// returned point is checked against the original L: projector residual
/// <= 1e-8 ||x|| and lambda_min(x) > 0.
SolveReport solve(const SubspaceBasis& l, const SolveOptions& opts = {});

/// Orthant version with epsilon = 1/(3 sqrt n) and the dilation
/// I + e_i e_i^T (the quadratic map with a = sqrt 2 - 1). Throws
/// std::invalid_argument for non-orthant cones.
SolveReport solve_orthant_specialized(const SubspaceBasis& l, const SolveOptions& opts = {});

/// Runs the primal loop on L and the dual loop on its orthogonal complement
/// in lockstep. The primal side is checked first in every round.
SolveReport solve_extended(const SubspaceBasis& l, const SolveOptions& opts = {});

SolveReport solve(const SubspaceBasis& l, SolveMode mode, const SolveOptions& opts = {});

/// Maps a point of the rescaled space back through the inverse rescalings,
/// latest first.
Element recover_point(const std::vector<RescalingStep>& log, const Element& y);

/// ceil(log(1/delta) / log(1.5)): the rescaling bound for a condition
/// measure of at least delta. Throws for delta outside (0, 1].
std::int64_t outer_bound(double delta_lb);

}  // namespace symcone
