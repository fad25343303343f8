#include "symcone/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "symcone/jordan.hpp"

namespace symcone {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Perceptron:
      return "perceptron";
    case Scheme::VonNeumann:
      return "vn";
    case Scheme::Smooth:
      return "smooth";
    case Scheme::VonNeumannAway:
      return "vn-away";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes)
    if (name == to_string(s)) return s;
  return std::nullopt;
}

std::string to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Interior:
      return "interior";
    case OutcomeKind::Cap:
      return "cap";
    case OutcomeKind::IterLimit:
      return "iter_limit";
  }
  return "?";
}

std::int64_t iteration_cap(Scheme s, int rank) {
  const std::int64_t r = rank;
  switch (s) {
    case Scheme::Perceptron:
    case Scheme::VonNeumann:
      return 16 * r * r * r * r;
    case Scheme::Smooth:
      return static_cast<std::int64_t>(std::ceil(8.0 * std::sqrt(2.0) * double(r * r)));
    case Scheme::VonNeumannAway:
      return 128 * r * r * r * r;
  }
  return 1;
}

std::int64_t orthant_iteration_cap(Scheme s, int n) {
  const std::int64_t k = n;
  switch (s) {
    case Scheme::Perceptron:
    case Scheme::VonNeumann:
      return 9 * k * k * k;
    case Scheme::Smooth:
      return static_cast<std::int64_t>(std::ceil(6.0 * double(k) * std::sqrt(2.0 * double(k))));
    case Scheme::VonNeumannAway:
      return 72 * k * k * k;
  }
  return 1;
}

SchemeConfig SchemeConfig::for_cone(Scheme s, const ConeDescriptor& cone) {
  SchemeConfig cfg;
  cfg.epsilon = 1.0 / (4.0 * cone.rank());
  cfg.max_iterations = iteration_cap(s, cone.rank());
  return cfg;
}

SchemeConfig SchemeConfig::for_orthant(Scheme s, int n) {
  SchemeConfig cfg;
  cfg.epsilon = 1.0 / (3.0 * std::sqrt(double(n)));
  cfg.max_iterations = orthant_iteration_cap(s, n);
  return cfg;
}

void SchemeConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(interior_tol >= 0.0)) throw std::invalid_argument("interior_tol must be >= 0");
}

double smooth_mu(std::int64_t t) { return 4.0 / (double(t + 1) * double(t + 2)); }

namespace {

enum class Stop { None, Interior, Cap };

// Stopping tests on a projected point: interior first, then the cap
// condition ||(pz)^+||_F <= epsilon ||z||.
bool projected_interior(const Eigen::VectorXd& lam, const Element& pz, double tol) {
  return lam.minCoeff() > tol * norm_frob(pz);
}

bool cap_reached(const Eigen::VectorXd& lam_pz, const Element& z, double epsilon) {
  return lam_pz.cwiseMax(0.0).norm() <= epsilon * norm_op(z);
}

Stop check_stop(const Element& z, const Element& pz, const SchemeConfig& cfg) {
  const Eigen::VectorXd lam = eigenvalues(pz);
  if (projected_interior(lam, pz, cfg.interior_tol)) return Stop::Interior;
  if (cap_reached(lam, z, cfg.epsilon)) return Stop::Cap;
  return Stop::None;
}

SchemeOutcome finish(OutcomeKind kind, const Element& w, const Element& pw, std::int64_t t,
                     std::vector<double>&& trace) {
  return SchemeOutcome{kind, w, pw, t, std::move(trace)};
}

Element barycenter(const ConeDescriptor& cone) {
  return Element::identity(cone) * (1.0 / cone.rank());
}

// Minimizer of ||P(z + theta a)||^2 over [0, theta_max].
double line_search(const Element& pz, const Element& a, const Element& pa, double theta_max) {
  const double denom = pa.coords().squaredNorm();
  if (denom <= 1e-30) return theta_max;
  const double theta = -inner(pz, a) / denom;
  return std::clamp(theta, 0.0, theta_max);
}

}  // namespace

SchemeOutcome perceptron(const Projector& p, const SchemeConfig& cfg,
                         const IterateObserver& observe) {
  cfg.validate();
  std::vector<double> trace;
  Element z = barycenter(p.cone());
  for (std::int64_t t = 0;; ++t) {
    const Element pz = p.apply(z);
    if (cfg.record_trace) trace.push_back(pz.coords().squaredNorm());
    if (observe) observe({t, z, pz, nullptr, 0.0});
    const Stop stop = check_stop(z, pz, cfg);
    if (stop == Stop::Interior) return finish(OutcomeKind::Interior, z, pz, t, std::move(trace));
    if (stop == Stop::Cap) return finish(OutcomeKind::Cap, z, pz, t, std::move(trace));
    if (t == cfg.max_iterations) return finish(OutcomeKind::IterLimit, z, pz, t, std::move(trace));
    // the minimizing vertex has <u, Pz> = lambda_min(Pz) <= 0 here
    const Element u = min_vertex(pz).c;
    const double w = 1.0 / double(t + 1);
    z = z * (1.0 - w) + u * w;
  }
}

SchemeOutcome von_neumann(const Projector& p, const SchemeConfig& cfg,
                          const IterateObserver& observe) {
  cfg.validate();
  std::vector<double> trace;
  Element z = barycenter(p.cone());
  for (std::int64_t t = 0;; ++t) {
    const Element pz = p.apply(z);
    if (cfg.record_trace) trace.push_back(pz.coords().squaredNorm());
    if (observe) observe({t, z, pz, nullptr, 0.0});
    const Stop stop = check_stop(z, pz, cfg);
    if (stop == Stop::Interior) return finish(OutcomeKind::Interior, z, pz, t, std::move(trace));
    if (stop == Stop::Cap) return finish(OutcomeKind::Cap, z, pz, t, std::move(trace));
    if (t == cfg.max_iterations) return finish(OutcomeKind::IterLimit, z, pz, t, std::move(trace));
    const Element u = min_vertex(pz).c;
    const Element a = u - z;
    const Element pa = p.apply(u) - pz;
    const double theta = line_search(pz, a, pa, 1.0);
    z += a * theta;
  }
}

SchemeOutcome smooth_perceptron(const Projector& p, const SchemeConfig& cfg,
                                const IterateObserver& observe) {
  cfg.validate();
  std::vector<double> trace;
  const Element u_bar = barycenter(p.cone());
  Element u = u_bar;
  double mu = smooth_mu(0);
  Element z = spectraplex_prox(p.apply(u), mu, u_bar);
  for (std::int64_t t = 0;; ++t) {
    const Element pu = p.apply(u);
    const Element pz = p.apply(z);
    if (cfg.record_trace) trace.push_back(pz.coords().squaredNorm());
    if (observe) observe({t, z, pz, &u, mu});
    const Eigen::VectorXd lam_pu = eigenvalues(pu);
    if (projected_interior(lam_pu, pu, cfg.interior_tol)) {
      return finish(OutcomeKind::Interior, u, pu, t, std::move(trace));
    }
    if (cap_reached(eigenvalues(pz), z, cfg.epsilon)) {
      return finish(OutcomeKind::Cap, z, pz, t, std::move(trace));
    }
    if (t == cfg.max_iterations) return finish(OutcomeKind::IterLimit, z, pz, t, std::move(trace));
    const double theta = 2.0 / double(t + 3);
    // prox of P u_t at the current mu; keeps 1/2 |P z_t|^2 <= phi_mu_t(u_t)
    const Element w = spectraplex_prox(pu, mu, u_bar);
    u = (u + z * theta) * (1.0 - theta) + w * (theta * theta);
    // (1 - theta_t) mu_t in closed form
    mu = smooth_mu(t + 1);
    z = z * (1.0 - theta) + spectraplex_prox(p.apply(u), mu, u_bar) * theta;
  }
}

SchemeOutcome von_neumann_away(const Projector& p, const SchemeConfig& cfg,
                               const IterateObserver& observe) {
  cfg.validate();
  constexpr double kSupportTol = 1e-12;
  std::vector<double> trace;
  Element z = barycenter(p.cone());
  for (std::int64_t t = 0;; ++t) {
    const Element pz = p.apply(z);
    if (cfg.record_trace) trace.push_back(pz.coords().squaredNorm());
    if (observe) observe({t, z, pz, nullptr, 0.0});
    const Stop stop = check_stop(z, pz, cfg);
    if (stop == Stop::Interior) return finish(OutcomeKind::Interior, z, pz, t, std::move(trace));
    if (stop == Stop::Cap) return finish(OutcomeKind::Cap, z, pz, t, std::move(trace));
    if (t == cfg.max_iterations) return finish(OutcomeKind::IterLimit, z, pz, t, std::move(trace));

    const Element u = min_vertex(pz).c;
    // support of z: frame elements with positive weight
    const SpectralDecomposition sd = spectral(z);
    int away = -1;
    double best = 0.0;
    for (int i = 0; i < sd.eigenvalues.size(); ++i) {
      if (sd.eigenvalues[i] <= kSupportTol) continue;
      const double score = inner(sd.frame[i], pz);
      if (away < 0 || score > best) {
        best = score;
        away = i;
      }
    }
    const double weight = sd.eigenvalues[away];
    const double pz2 = pz.coords().squaredNorm();
    const bool regular = pz2 - inner(u, pz) > best - pz2 || weight >= 1.0 - kSupportTol;
    if (regular) {
      const Element a = u - z;
      const double theta = line_search(pz, a, p.apply(u) - pz, 1.0);
      z += a * theta;
    } else {
      const Element& c = sd.frame[away];
      const Element a = z - c;
      const double theta = line_search(pz, a, pz - p.apply(c), away_step_limit(weight));
      z += a * theta;
    }
  }
}

SchemeOutcome run_scheme(Scheme s, const Projector& p, const SchemeConfig& cfg,
                         const IterateObserver& observe) {
  switch (s) {
    case Scheme::Perceptron:
      return perceptron(p, cfg, observe);
    case Scheme::VonNeumann:
      return von_neumann(p, cfg, observe);
    case Scheme::Smooth:
      return smooth_perceptron(p, cfg, observe);
    case Scheme::VonNeumannAway:
      return von_neumann_away(p, cfg, observe);
  }
  throw std::invalid_argument("unknown scheme");
}

double phi(const Projector& p, const Element& z) {
  const Element pz = p.apply(z);
  return -0.5 * pz.coords().squaredNorm() + lambda_min(pz);
}

double phi_mu(const Projector& p, const Element& z, double mu, const Element& u_bar) {
  const Element pz = p.apply(z);
  const Element w = spectraplex_prox(pz, mu, u_bar);
  return -0.5 * pz.coords().squaredNorm() + inner(w, pz) +
         0.5 * mu * (w - u_bar).coords().squaredNorm();
}

}  // namespace symcone
