#include "symcone/solver.hpp"

#include <stdexcept>

#include "symcone/jordan.hpp"

namespace symcone {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved:
      return "solved";
    case SolveStatus::DualSolved:
      return "dual_solved";
    case SolveStatus::OuterLimit:
      return "outer_limit";
  }
  return "?";
}

std::string to_string(SolveMode m) {
  switch (m) {
    case SolveMode::Primal:
      return "primal";
    case SolveMode::Extended:
      return "extended";
    case SolveMode::Orthant:
      return "orthant";
  }
  return "?";
}

std::optional<SolveMode> parse_mode(std::string_view name) {
  for (SolveMode m : {SolveMode::Primal, SolveMode::Extended, SolveMode::Orthant})
    if (name == to_string(m)) return m;
  return std::nullopt;
}

std::int64_t outer_bound(double delta_lb) {
  if (!(delta_lb > 0.0 && delta_lb <= 1.0)) {
    throw std::invalid_argument("outer_bound: delta must lie in (0, 1]");
  }
  const double k = std::log(1.0 / delta_lb) / std::log(1.5);
  // absorb rounding so exact powers of 1.5 are not pushed up a step
  return static_cast<std::int64_t>(std::ceil(k - 1e-9));
}

Element recover_point(const std::vector<RescalingStep>& log, const Element& y) {
  Element x = y;
  for (auto it = log.rbegin(); it != log.rend(); ++it) x = inverse_rescale(it->idempotent, it->a, x);
  return x;
}

namespace {

constexpr double kMembershipTol = 1e-8;

// State of one projection-and-rescaling loop.
class Loop {
 public:
  Loop(Side side, SubspaceBasis basis)
      : side_(side), original_(basis), current_(std::move(basis)) {}

  // One round: basic procedure, then either a verified point or a rescaling.
  std::optional<Element> round(const SolveOptions& opts, Scheme scheme, const SchemeConfig& cfg,
                               bool allow_rescale, SolveReport& report) {
    const SchemeOutcome out = run_scheme(scheme, current_, cfg);
    report.bp_iterations += out.iterations;
    report.calls.push_back({side_, out.kind, out.iterations});
    if (opts.on_basic_procedure) opts.on_basic_procedure(side_, out);
    if (out.kind == OutcomeKind::Interior) {
      Element x = recover_point(log_, out.image);
      if (verified(x) && (!opts.accept || opts.accept(x))) return x;
      ++report.rejected_certificates;
    }
    if (!allow_rescale) return std::nullopt;
    // Cap, IterLimit, or a rejected point: rescale along the witness
    const IdempotentChoice top = max_idempotent(out.witness);
    log_.push_back({top.block, top.c, kRescaleA});
    current_ = Projector(rescale_basis(current_.basis(), top.block, top.c, kRescaleA));
    return std::nullopt;
  }

  const std::vector<RescalingStep>& log() const { return log_; }

 private:
  bool verified(const Element& x) const {
    const double nx = norm_frob(x);
    if (!(nx > 0.0)) return false;
    const double residual = norm_frob(x - original_.apply(x));
    return residual <= kMembershipTol * nx && lambda_min(x) > 0.0;
  }

  Side side_;
  Projector original_;
  Projector current_;
  std::vector<RescalingStep> log_;
};

std::int64_t resolve_outer_limit(const SubspaceBasis& l, const SolveOptions& opts) {
  const std::int64_t limit = opts.outer_limit.value_or(10 * std::int64_t(l.ambient_dim()));
  if (limit < 1) throw std::invalid_argument("outer_limit must be >= 1");
  return limit;
}

SolveReport run_primal(const SubspaceBasis& l, const SolveOptions& opts, const SchemeConfig& cfg) {
  cfg.validate();
  const std::int64_t limit = resolve_outer_limit(l, opts);
  SolveReport report;
  report.scheme = opts.scheme;
  Loop loop(Side::Primal, l);
  for (std::int64_t k = 0; k <= limit; ++k) {
    ++report.outer_iterations;
    if (std::optional<Element> x = loop.round(opts, opts.scheme, cfg, k < limit, report)) {
      report.status = SolveStatus::Solved;
      report.x = std::move(x);
      report.rescalings = loop.log();
      return report;
    }
  }
  report.status = SolveStatus::OuterLimit;
  report.rescalings = loop.log();
  return report;
}

}  // namespace

SolveReport solve(const SubspaceBasis& l, const SolveOptions& opts) {
  return run_primal(l, opts, opts.config.value_or(SchemeConfig::for_cone(opts.scheme, l.cone())));
}

SolveReport solve_orthant_specialized(const SubspaceBasis& l, const SolveOptions& opts) {
  if (!l.cone().is_pure_orthant()) {
    throw std::invalid_argument("orthant mode requires a pure orthant cone");
  }
  return run_primal(
      l, opts, opts.config.value_or(SchemeConfig::for_orthant(opts.scheme, l.ambient_dim())));
}

SolveReport solve_extended(const SubspaceBasis& l, const SolveOptions& opts) {
  const SchemeConfig cfg = opts.config.value_or(SchemeConfig::for_cone(opts.scheme, l.cone()));
  cfg.validate();
  const std::int64_t limit = resolve_outer_limit(l, opts);
  SolveReport report;
  report.scheme = opts.scheme;
  Loop primal(Side::Primal, l);
  // L = V leaves no dual subspace to search
  std::optional<Loop> dual;
  if (l.dim() < l.ambient_dim()) dual.emplace(Side::Dual, complement(l));
  for (std::int64_t k = 0; k <= limit; ++k) {
    ++report.outer_iterations;
    if (std::optional<Element> x = primal.round(opts, opts.scheme, cfg, k < limit, report)) {
      report.status = SolveStatus::Solved;
      report.x = std::move(x);
      break;
    }
    if (!dual) continue;
    if (std::optional<Element> x = dual->round(opts, opts.scheme, cfg, k < limit, report)) {
      report.status = SolveStatus::DualSolved;
      report.x = std::move(x);
      break;
    }
  }
  report.rescalings = primal.log();
  if (dual) report.dual_rescalings = dual->log();
  return report;
}

SolveReport solve(const SubspaceBasis& l, SolveMode mode, const SolveOptions& opts) {
  switch (mode) {
    case SolveMode::Primal:
      return solve(l, opts);
    case SolveMode::Extended:
      return solve_extended(l, opts);
    case SolveMode::Orthant:
      return solve_orthant_specialized(l, opts);
  }
  throw std::invalid_argument("unknown solve mode");
}

}  // namespace symcone
