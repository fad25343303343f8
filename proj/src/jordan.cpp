#include "symcone/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "block_ops.hpp"

namespace symcone {

namespace detail {

namespace {

const double kSqrt2 = std::sqrt(2.0);

// Stable descending order of `values`; ties keep their input order.
std::vector<int> descending_order(const Eigen::VectorXd& values) {
  std::vector<int> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return values[a] > values[b]; });
  return idx;
}

}  // namespace

Eigen::VectorXd block_product(const Block& b, const Eigen::Ref<const Eigen::VectorXd>& x,
                              const Eigen::Ref<const Eigen::VectorXd>& y) {
  switch (b.kind) {
    case BlockKind::Orthant:
      return x.cwiseProduct(y);
    case BlockKind::Psd: {
      const Eigen::MatrixXd X = smat(x, b.size);
      const Eigen::MatrixXd Y = smat(y, b.size);
      return svec(0.5 * (X * Y + Y * X));
    }
    case BlockKind::Soc: {
      // isometric coords are sqrt(2) times natural ones
      const int n = b.size;
      Eigen::VectorXd out(n);
      out[0] = x.dot(y) / kSqrt2;
      out.tail(n - 1) = (x[0] * y.tail(n - 1) + y[0] * x.tail(n - 1)) / kSqrt2;
      return out;
    }
  }
  return {};
}

BlockSpectrum block_spectrum(const Block& b, const Eigen::Ref<const Eigen::VectorXd>& x,
                             bool with_frame) {
  BlockSpectrum s;
  switch (b.kind) {
    case BlockKind::Orthant: {
      const std::vector<int> order = descending_order(x);
      s.values.resize(b.size);
      if (with_frame) s.frame = Eigen::MatrixXd::Zero(b.size, b.size);
      for (int k = 0; k < b.size; ++k) {
        s.values[k] = x[order[k]];
        if (with_frame) s.frame(order[k], k) = 1.0;
      }
      break;
    }
    case BlockKind::Psd: {
      const Eigen::MatrixXd X = smat(x, b.size);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
          X, with_frame ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
      if (eig.info() != Eigen::Success) throw std::runtime_error("PSD eigensolver failed");
      const std::vector<int> order = descending_order(eig.eigenvalues());
      s.values.resize(b.size);
      if (with_frame) s.frame.resize(b.dim(), b.size);
      for (int k = 0; k < b.size; ++k) {
        s.values[k] = eig.eigenvalues()[order[k]];
        if (with_frame) {
          const Eigen::VectorXd q = eig.eigenvectors().col(order[k]);
          s.frame.col(k) = svec(q * q.transpose());
        }
      }
      break;
    }
    case BlockKind::Soc: {
      const int n = b.size;
      const double x0 = x[0] / kSqrt2;
      const Eigen::VectorXd xbar = x.tail(n - 1) / kSqrt2;
      const double r = xbar.norm();
      s.values.resize(2);
      s.values << x0 + r, x0 - r;
      if (with_frame) {
        Eigen::VectorXd u = Eigen::VectorXd::Zero(n - 1);
        if (r > 0.0) {
          u = xbar / r;
        } else {
          u[0] = 1.0;  // canonical direction for the degenerate split
        }
        s.frame.resize(n, 2);
        // natural (1/2)(1, +-u) scaled by sqrt(2)
        s.frame(0, 0) = s.frame(0, 1) = 1.0 / kSqrt2;
        s.frame.col(0).tail(n - 1) = u / kSqrt2;
        s.frame.col(1).tail(n - 1) = -u / kSqrt2;
      }
      break;
    }
  }
  return s;
}

}  // namespace detail

using detail::block_product;
using detail::block_spectrum;

Element SpectralDecomposition::reconstruct() const {
  if (frame.empty()) throw std::logic_error("empty spectral decomposition");
  Element out = Element::zero(frame.front().cone());
  for (std::size_t i = 0; i < frame.size(); ++i) out += eigenvalues[i] * frame[i];
  return out;
}

Element jordan_product(const Element& x, const Element& y) {
  require_same_cone(x.cone(), y.cone(), "jordan_product");
  Eigen::VectorXd out(x.coords().size());
  for (const auto& l : x.cone().layout()) {
    const int d = l.block.dim();
    out.segment(l.offset, d) =
        block_product(l.block, x.coords().segment(l.offset, d), y.coords().segment(l.offset, d));
  }
  return Element(x.cone(), std::move(out));
}

SpectralDecomposition spectral(const Element& x) {
  const ConeDescriptor& cone = x.cone();
  SpectralDecomposition sd;
  sd.eigenvalues.resize(cone.rank());
  sd.frame.reserve(cone.rank());
  sd.block.reserve(cone.rank());
  for (std::size_t bi = 0; bi < cone.num_blocks(); ++bi) {
    const auto& l = cone.block(bi);
    const auto s = block_spectrum(l.block, x.coords().segment(l.offset, l.block.dim()), true);
    for (int k = 0; k < l.block.rank(); ++k) {
      sd.eigenvalues[l.rank_offset + k] = s.values[k];
      Eigen::VectorXd c = Eigen::VectorXd::Zero(cone.ambient_dim());
      c.segment(l.offset, l.block.dim()) = s.frame.col(k);
      sd.frame.emplace_back(cone, std::move(c));
      sd.block.push_back(bi);
    }
  }
  return sd;
}

Eigen::VectorXd eigenvalues(const Element& x) {
  const ConeDescriptor& cone = x.cone();
  Eigen::VectorXd out(cone.rank());
  for (const auto& l : cone.layout()) {
    out.segment(l.rank_offset, l.block.rank()) =
        block_spectrum(l.block, x.coords().segment(l.offset, l.block.dim()), false).values;
  }
  return out;
}

double trace(const Element& x) { return inner(Element::identity(x.cone()), x); }

double det(const Element& x) { return eigenvalues(x).prod(); }

double norm_frob(const Element& x) { return x.coords().norm(); }

double norm_op(const Element& x) { return eigenvalues(x).cwiseAbs().maxCoeff(); }

double lambda_min(const Element& x) { return eigenvalues(x).minCoeff(); }

double lambda_max(const Element& x) { return eigenvalues(x).maxCoeff(); }

Element cone_project(const Element& x) {
  const ConeDescriptor& cone = x.cone();
  Eigen::VectorXd out(cone.ambient_dim());
  for (const auto& l : cone.layout()) {
    const auto seg = x.coords().segment(l.offset, l.block.dim());
    if (l.block.kind == BlockKind::Orthant) {
      out.segment(l.offset, l.block.dim()) = seg.cwiseMax(0.0);
      continue;
    }
    const auto s = block_spectrum(l.block, seg, true);
    out.segment(l.offset, l.block.dim()) = s.frame * s.values.cwiseMax(0.0);
  }
  return Element(cone, std::move(out));
}

bool is_interior(const Element& x, double tol) { return lambda_min(x) > tol; }

namespace {

// Scans eigenvalue slots in block order, frame order; strict comparison so
// the first slot wins ties.
template <class Better>
IdempotentChoice pick_idempotent(const Element& x, Better better) {
  const ConeDescriptor& cone = x.cone();
  std::size_t best_block = 0;
  int best_k = -1;
  double best = 0.0;
  detail::BlockSpectrum best_spec;
  for (std::size_t bi = 0; bi < cone.num_blocks(); ++bi) {
    const auto& l = cone.block(bi);
    auto s = block_spectrum(l.block, x.coords().segment(l.offset, l.block.dim()), true);
    bool improved = false;
    for (int k = 0; k < l.block.rank(); ++k) {
      if (best_k < 0 || better(s.values[k], best)) {
        best = s.values[k];
        best_k = k;
        best_block = bi;
        improved = true;
      }
    }
    if (improved) best_spec = std::move(s);
  }
  const auto& l = cone.block(best_block);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(cone.ambient_dim());
  c.segment(l.offset, l.block.dim()) = best_spec.frame.col(best_k);
  return {Element(cone, std::move(c)), best, best_block};
}

}  // namespace

IdempotentChoice max_idempotent(const Element& z) {
  if (z.coords().isZero(0.0)) throw std::invalid_argument("max_idempotent: z = 0");
  return pick_idempotent(z, [](double a, double b) { return a > b; });
}

IdempotentChoice min_vertex(const Element& v) {
  return pick_idempotent(v, [](double a, double b) { return a < b; });
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  if (n == 0) throw std::invalid_argument("project_simplex: empty vector");
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (int j = 0; j < n; ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / (j + 1);
    if (u[j] - t > 0.0) tau = t;
  }
  return (v.array() - tau).cwiseMax(0.0).matrix();
}

Element project_spectraplex(const Element& w) {
  const ConeDescriptor& cone = w.cone();
  std::vector<detail::BlockSpectrum> specs;
  specs.reserve(cone.num_blocks());
  Eigen::VectorXd values(cone.rank());
  for (const auto& l : cone.layout()) {
    specs.push_back(block_spectrum(l.block, w.coords().segment(l.offset, l.block.dim()), true));
    values.segment(l.rank_offset, l.block.rank()) = specs.back().values;
  }
  const Eigen::VectorXd p = project_simplex(values);
  Eigen::VectorXd out(cone.ambient_dim());
  for (std::size_t bi = 0; bi < cone.num_blocks(); ++bi) {
    const auto& l = cone.block(bi);
    out.segment(l.offset, l.block.dim()) =
        specs[bi].frame * p.segment(l.rank_offset, l.block.rank());
  }
  return Element(cone, std::move(out));
}

Element spectraplex_prox(const Element& v, double mu, const Element& u_bar) {
  require_same_cone(v.cone(), u_bar.cone(), "spectraplex_prox");
  if (!(mu > 0.0)) throw std::invalid_argument("spectraplex_prox: mu must be positive");
  const Eigen::VectorXd lam = eigenvalues(u_bar);
  if (std::abs(lam.sum() - 1.0) > 1e-8 || lam.minCoeff() < -1e-10) {
    throw std::invalid_argument("spectraplex_prox: u_bar is not in the spectraplex");
  }
  return project_spectraplex(u_bar - v * (1.0 / mu));
}

namespace {

Element quadratic_map(const Element& c, double a, const Element& x) {
  require_same_cone(c.cone(), x.cone(), "quadratic_rescale");
  if (!(a > -1.0)) throw std::invalid_argument("quadratic_rescale: need a > -1");
  const Element cx = jordan_product(c, x);
  const Element ccx = jordan_product(c, cx);
  return x + (2.0 * a - a * a) * cx + (2.0 * a * a) * ccx;
}

}  // namespace

Element quadratic_rescale(const Element& c, double a, const Element& x) {
  return quadratic_map(c, a, x);
}

Element inverse_rescale(const Element& c, double a, const Element& y) {
  if (!(a > -1.0)) throw std::invalid_argument("inverse_rescale: need a > -1");
  return quadratic_map(c, -a / (1.0 + a), y);
}

std::size_t check_primitive_idempotent(const Element& c, double tol) {
  const ConeDescriptor& cone = c.cone();
  std::size_t owner = cone.num_blocks();
  for (std::size_t bi = 0; bi < cone.num_blocks(); ++bi) {
    const auto& l = cone.block(bi);
    if (c.coords().segment(l.offset, l.block.dim()).cwiseAbs().maxCoeff() > tol) {
      if (owner != cone.num_blocks()) {
        throw std::invalid_argument("idempotent is supported on more than one block");
      }
      owner = bi;
    }
  }
  if (owner == cone.num_blocks()) throw std::invalid_argument("idempotent is zero");
  if ((jordan_product(c, c) - c).coords().cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("element is not idempotent");
  }
  if (std::abs(trace(c) - 1.0) > tol) {
    throw std::invalid_argument("idempotent is not primitive (trace != 1)");
  }
  return owner;
}

}  // namespace symcone
