#include "symcone/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "symcone/jordan.hpp"

namespace symcone {

double Rng::uniform() {
  // top 53 bits of one engine word
  return double(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - uniform() lies in (0, 1], so the log is finite
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Eigen::VectorXd Rng::normal_vector(int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = normal();
  return v;
}

int Rng::below(int n) {
  if (n <= 0) throw std::invalid_argument("Rng::below: n must be positive");
  return std::min(n - 1, static_cast<int>(uniform() * n));
}

double planted_delta(const Eigen::VectorXd& spectrum) {
  const int r = static_cast<int>(spectrum.size());
  if (r == 0 || spectrum.minCoeff() <= 0.0) {
    throw std::invalid_argument("planted_delta: spectrum must be positive");
  }
  double log_det = 0.0;
  for (int i = 0; i < r; ++i) log_det += std::log(spectrum[i]);
  const double log_scale = 0.5 * std::log(double(r)) - std::log(spectrum.norm());
  // the AM-GM inequality caps the exact value at 1
  return std::min(1.0, std::exp(log_det + r * log_scale));
}

namespace {

// Orthogonal matrix from the QR factor of a Gaussian matrix, with column
// signs fixed by the diagonal of R.
Eigen::MatrixXd random_orthogonal(int n, Rng& rng) {
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j) g.col(j) = rng.normal_vector(n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

Eigen::VectorXd planted_block(const Block& b, const Eigen::VectorXd& lam, Rng& rng) {
  switch (b.kind) {
    case BlockKind::Orthant: {
      std::vector<int> perm(b.size);
      std::iota(perm.begin(), perm.end(), 0);
      // Fisher-Yates driven by Rng::below
      for (int i = b.size - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
      Eigen::VectorXd v(b.size);
      for (int i = 0; i < b.size; ++i) v[perm[i]] = lam[i];
      return v;
    }
    case BlockKind::Psd: {
      const Eigen::MatrixXd q = random_orthogonal(b.size, rng);
      return svec(q * lam.asDiagonal() * q.transpose());
    }
    case BlockKind::Soc: {
      Eigen::VectorXd u = rng.normal_vector(b.size - 1);
      while (u.norm() == 0.0) u = rng.normal_vector(b.size - 1);
      u.normalize();
      // natural (x0, x_bar) = ((l1 + l2)/2, (l1 - l2)/2 u), then isometric
      Eigen::VectorXd v(b.size);
      v[0] = 0.5 * (lam[0] + lam[1]);
      v.tail(b.size - 1) = 0.5 * (lam[0] - lam[1]) * u;
      return std::numbers::sqrt2 * v;
    }
  }
  throw std::logic_error("unknown block kind");
}

}  // namespace

PlantedInstance plant(const ConeDescriptor& cone, int m, const Eigen::VectorXd& spectrum,
                      std::uint64_t seed) {
  const int n = cone.ambient_dim();
  if (m < 1 || m > n) throw std::invalid_argument("plant: need 1 <= m <= ambient_dim");
  if (spectrum.size() != cone.rank()) throw std::invalid_argument("plant: spectrum length != rank");
  if (spectrum.minCoeff() <= 0.0) throw std::invalid_argument("plant: spectrum must be positive");

  Rng rng(seed);
  Eigen::VectorXd x(n);
  for (const auto& l : cone.layout()) {
    x.segment(l.offset, l.block.dim()) =
        planted_block(l.block, spectrum.segment(l.rank_offset, l.block.rank()), rng);
  }
  Element x_star(cone, x);

  Eigen::MatrixXd cols(n, m);
  cols.col(0) = x / x.norm();
  for (int j = 1; j < m; ++j) cols.col(j) = rng.normal_vector(n);
  SubspaceBasis basis = orthonormalize(cone, cols);
  // Gaussian directions are independent almost surely; top up if not
  while (basis.dim() < m) {
    Eigen::MatrixXd more(n, basis.dim() + 1);
    more << basis.matrix(), rng.normal_vector(n);
    basis = orthonormalize(cone, more);
  }
  return PlantedInstance{std::move(basis), cone, std::move(x_star), planted_delta(spectrum)};
}

Eigen::VectorXd random_spectrum(int rank, double min_delta, Rng& rng) {
  if (rank < 1) throw std::invalid_argument("random_spectrum: rank must be >= 1");
  if (!(min_delta > 0.0 && min_delta <= 1.0)) {
    throw std::invalid_argument("random_spectrum: min_delta must lie in (0, 1]");
  }
  const double target = std::exp(std::log(min_delta) * rng.uniform());
  Eigen::VectorXd g = rng.normal_vector(rank);
  g.array() -= g.mean();
  if (rank == 1 || g.norm() == 0.0) return Eigen::VectorXd::Ones(rank);
  g.normalize();
  auto spectrum = [&](double s) {
    Eigen::VectorXd lam = (s * g).array().exp();
    return Eigen::VectorXd(lam / lam.maxCoeff());
  };
  double lo = 0.0;
  double hi = 1.0;
  while (planted_delta(spectrum(hi)) > target && hi < 1e3) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (planted_delta(spectrum(mid)) >= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return spectrum(lo);
}

const char* to_string(BenchKind kind) {
  switch (kind) {
    case BenchKind::Orthant:
      return "orthant";
    case BenchKind::Psd:
      return "psd";
    case BenchKind::Soc:
      return "soc";
    case BenchKind::Mixed:
      return "mixed";
  }
  return "?";
}

bool parse_bench_kind(const std::string& name, BenchKind& out) {
  for (BenchKind k : {BenchKind::Orthant, BenchKind::Psd, BenchKind::Soc, BenchKind::Mixed}) {
    if (name == to_string(k)) {
      out = k;
      return true;
    }
  }
  return false;
}

ConeDescriptor bench_cone(BenchKind kind, int size) {
  switch (kind) {
    case BenchKind::Orthant:
      return ConeDescriptor::orthant(size);
    case BenchKind::Psd:
      return ConeDescriptor::psd(size);
    case BenchKind::Soc:
      return ConeDescriptor::soc(size);
    case BenchKind::Mixed:
      return ConeDescriptor({{BlockKind::Orthant, size}, {BlockKind::Psd, 2}, {BlockKind::Soc, 3}});
  }
  throw std::invalid_argument("unknown bench kind");
}

PlantedInstance bench_instance(BenchKind kind, int size, std::uint64_t seed) {
  const ConeDescriptor cone = bench_cone(kind, size);
  const int r = cone.rank();
  // half of the eigenvalues near the boundary keeps P(e/r) off the cone
  Eigen::VectorXd lam = Eigen::VectorXd::Ones(r);
  for (int i = 0; i < r / 2; ++i) lam[2 * i + 1] = 1e-2;
  return plant(cone, std::max(1, cone.ambient_dim() / 4), lam, seed);
}

SubspaceBasis embed_linear_eq(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (a.cols() < 1) throw std::invalid_argument("embed_linear_eq: need n >= 1");
  if (b.size() != a.rows()) throw std::invalid_argument("embed_linear_eq: size mismatch");
  const int n = static_cast<int>(a.cols());
  Eigen::MatrixXd rows(a.rows(), n + 1);
  rows << a, -b;
  return from_kernel(ConeDescriptor::orthant(n + 1), rows);
}

Eigen::VectorXd recover_linear_eq(const Element& xt) {
  const Eigen::VectorXd& v = xt.coords();
  const Eigen::Index n = v.size() - 1;
  return v.head(n) / v[n];
}

SubspaceBasis embed_strict_ineq(const Eigen::MatrixXd& a, const Eigen::VectorXd& c) {
  if (c.size() < 1) throw std::invalid_argument("embed_strict_ineq: need n >= 1");
  if (a.rows() > 0 && a.cols() != c.size()) {
    throw std::invalid_argument("embed_strict_ineq: size mismatch");
  }
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(a.rows());
  // (s, t) = t (c, 1) - sum_k y_k (a_k, 0)
  Eigen::MatrixXd cols = Eigen::MatrixXd::Zero(n + 1, m + 1);
  cols.col(0) << c, 1.0;
  for (int k = 0; k < m; ++k) cols.col(k + 1).head(n) = -a.row(k).transpose();
  return orthonormalize(ConeDescriptor::orthant(n + 1), cols);
}

Eigen::VectorXd recover_strict_ineq(const Eigen::MatrixXd& a, const Eigen::VectorXd& c,
                                    const Element& st) {
  const Eigen::VectorXd& v = st.coords();
  const Eigen::Index n = c.size();
  if (a.rows() == 0) return Eigen::VectorXd(0);
  const Eigen::VectorXd rhs = c - v.head(n) / v[n];
  return a.transpose().colPivHouseholderQr().solve(rhs);
}

SubspaceBasis embed_sdp_feasibility(const std::vector<Eigen::MatrixXd>& ops,
                                    const Eigen::VectorXd& b) {
  if (ops.empty()) throw std::invalid_argument("embed_sdp_feasibility: no operators");
  if (b.size() != static_cast<Eigen::Index>(ops.size())) {
    throw std::invalid_argument("embed_sdp_feasibility: size mismatch");
  }
  const int n = static_cast<int>(ops.front().rows());
  const ConeDescriptor cone({{BlockKind::Psd, n}, {BlockKind::Orthant, 1}});
  const int dim = cone.ambient_dim();
  Eigen::MatrixXd rows(b.size(), dim);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].rows() != n || ops[i].cols() != n) {
      throw std::invalid_argument("embed_sdp_feasibility: operators must share dimension");
    }
    const Eigen::MatrixXd sym = 0.5 * (ops[i] + ops[i].transpose());
    rows.row(static_cast<Eigen::Index>(i)) << svec(sym).transpose(), -b[static_cast<Eigen::Index>(i)];
  }
  return from_kernel(cone, rows);
}

Eigen::MatrixXd recover_sdp(const Element& xt) {
  const auto& psd = xt.cone().block(0);
  const double t = xt.coords()[xt.coords().size() - 1];
  return smat(xt.block_coords(0), psd.block.size) / t;
}

bool usable_homogenized(const Element& x) {
  const Eigen::VectorXd& v = x.coords();
  return v[v.size() - 1] > 1e-10 * v.norm();
}

}  // namespace symcone
