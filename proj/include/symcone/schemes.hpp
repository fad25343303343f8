#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symcone/element.hpp"
#include "symcone/subspace.hpp"

namespace symcone {

/// Basic procedures: each looks for z in the spectraplex with P z interior,
/// or with ||(P z)^+||_F <= epsilon ||z||.
enum class Scheme { Perceptron, VonNeumann, Smooth, VonNeumannAway };

/// CLI names: perceptron, vn, smooth, vn-away.
std::string to_string(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);
inline constexpr Scheme kAllSchemes[] = {Scheme::Perceptron, Scheme::VonNeumann, Scheme::Smooth,
                                         Scheme::VonNeumannAway};

/// Worst-case iteration counts for rank r with epsilon = 1/(4r):
/// 16 r^4 (perceptron, von Neumann), ceil(8 sqrt(2) r^2) (smooth),
/// 128 r^4 (away steps).
std::int64_t iteration_cap(Scheme s, int rank);
/// Orthant counterparts with epsilon = 1/(3 sqrt n): 9 n^3, ceil(6 n sqrt(2n)),
/// 9 n^3, 72 n^3.
std::int64_t orthant_iteration_cap(Scheme s, int n);

struct SchemeConfig {
  double epsilon = 0.25;
  std::int64_t max_iterations = 1;
  /// P z counts as interior when lambda_min(P z) > interior_tol * ||P z||_F.
  double interior_tol = 1e-12;
  bool record_trace = false;

  /// epsilon = 1/(4r) with the matching iteration cap.
  static SchemeConfig for_cone(Scheme s, const ConeDescriptor& cone);
  /// epsilon = 1/(3 sqrt n) with the orthant iteration cap.
  static SchemeConfig for_orthant(Scheme s, int n);

  void validate() const;
};

enum class OutcomeKind { Interior, Cap, IterLimit };
std::string to_string(OutcomeKind k);

struct SchemeOutcome {
  OutcomeKind kind;
  /// Interior: the point whose projection is interior (u_t for the smooth
  /// scheme, z_t otherwise). Cap and IterLimit: the last z_t.
  Element witness;
  /// P applied to the witness.
  Element image;
  std::int64_t iterations = 0;
  /// ||P z_t||_F^2 for t = 0..iterations, when record_trace is set.
  std::vector<double> potential_trace;
};

/// Snapshot handed to an observer at the top of every iteration.
struct IterateView {
  std::int64_t t;
  const Element& z;
  const Element& pz;
  const Element* u;  // smooth scheme only
  double mu;         // smooth scheme only, else 0
};
using IterateObserver = std::function<void(const IterateView&)>;

SchemeOutcome perceptron(const Projector& p, const SchemeConfig& cfg,
                         const IterateObserver& observe = {});
SchemeOutcome von_neumann(const Projector& p, const SchemeConfig& cfg,
                          const IterateObserver& observe = {});
SchemeOutcome smooth_perceptron(const Projector& p, const SchemeConfig& cfg,
                                const IterateObserver& observe = {});
SchemeOutcome von_neumann_away(const Projector& p, const SchemeConfig& cfg,
                               const IterateObserver& observe = {});

SchemeOutcome run_scheme(Scheme s, const Projector& p, const SchemeConfig& cfg,
                         const IterateObserver& observe = {});

/// -1/2 ||P z||^2 + lambda_min(P z).
double phi(const Projector& p, const Element& z);
/// Smoothed phi: the min over the spectraplex gets a (mu/2)||u - u_bar||^2 term.
double phi_mu(const Projector& p, const Element& z, double mu, const Element& u_bar);

/// Largest away step that keeps a support weight lambda < 1 nonnegative:
/// lambda / (1 - lambda).
inline double away_step_limit(double lambda) { return lambda / (1.0 - lambda); }

/// Smooth-scheme prox parameter after t iterations: 4 / ((t+1)(t+2)).
double smooth_mu(std::int64_t t);

}  // namespace symcone
