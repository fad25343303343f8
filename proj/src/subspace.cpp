#include "symcone/subspace.hpp"

#include <cmath>
#include <stdexcept>

#include "block_ops.hpp"
#include "symcone/jordan.hpp"

namespace symcone {

namespace {

constexpr double kDropTol = 1e-10;

// Low-rank factorization Q_i^T (2B + B^2) Q_i = F S F^T for one block.
struct LowRankForm {
  Eigen::MatrixXd f;  // m x p
  Eigen::MatrixXd s;  // p x p, symmetric
};

void require_symmetric(const Eigen::MatrixXd& s, const char* what) {
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::logic_error(std::string(what) + " is not symmetric");
  }
}

// Leading eigenvector of a rank-one PSD block idempotent.
Eigen::VectorXd psd_direction(const Eigen::VectorXd& c_block, int n) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(smat(c_block, n));
  return eig.eigenvectors().col(n - 1);
}

// Natural-coordinate direction u_bar of an SOC idempotent (1/2)(1, u_bar).
// The isometric scaling cancels in the ratio.
Eigen::VectorXd soc_direction(const Eigen::VectorXd& c_block) {
  return c_block.tail(c_block.size() - 1) / c_block[0];
}

LowRankForm low_rank_form(const Block& b, const Eigen::MatrixXd& qi, const Eigen::VectorXd& c_block,
                          double a) {
  const double beta = 2.0 * a + a * a;
  const int m = static_cast<int>(qi.cols());
  LowRankForm lr;
  switch (b.kind) {
    case BlockKind::Orthant: {
      int coord = 0;
      c_block.maxCoeff(&coord);
      lr.f = qi.row(coord).transpose();
      lr.s = Eigen::MatrixXd::Constant(1, 1, (1.0 + beta) * (1.0 + beta) - 1.0);
      break;
    }
    case BlockKind::Psd: {
      // entries 2 beta (A_i u)^T (A_j u) + beta^2 (u^T A_i u)(u^T A_j u)
      const int n = b.size;
      const Eigen::VectorXd u = psd_direction(c_block, n);
      lr.f.resize(m, n + 1);
      for (int j = 0; j < m; ++j) {
        const Eigen::VectorXd au = smat(qi.col(j), n) * u;
        lr.f.row(j).head(n) = au.transpose();
        lr.f(j, n) = u.dot(au);
      }
      lr.s = Eigen::MatrixXd::Zero(n + 1, n + 1);
      lr.s.diagonal().head(n).setConstant(2.0 * beta);
      lr.s(n, n) = beta * beta;
      break;
    }
    case BlockKind::Soc: {
      // 2B + B^2 = beta { [1 u^T; u I] + (beta/2) [1 u^T; u u u^T] }
      const int n = b.size;
      const Eigen::VectorXd ubar = soc_direction(c_block);
      Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
      g.block(1, 0, n - 1, 1) = ubar;
      g.block(0, 1, 1, n - 1) = ubar.transpose();
      Eigen::VectorXd w(n);
      w << 1.0, ubar;
      lr.s = beta * (g + 0.5 * beta * w * w.transpose());
      lr.f = qi.transpose();
      break;
    }
  }
  require_symmetric(lr.s, "2B + B^2");
  return lr;
}

// Applies the block's quadratic map to every column of the block rows.
Eigen::MatrixXd map_block_rows(const Block& b, const Eigen::MatrixXd& qi,
                               const Eigen::VectorXd& c_block, double a) {
  Eigen::MatrixXd out(qi.rows(), qi.cols());
  for (int j = 0; j < qi.cols(); ++j) {
    const Eigen::VectorXd x = qi.col(j);
    const Eigen::VectorXd cx = detail::block_product(b, c_block, x);
    const Eigen::VectorXd ccx = detail::block_product(b, c_block, cx);
    out.col(j) = x + (2.0 * a - a * a) * cx + (2.0 * a * a) * ccx;
  }
  return out;
}

Eigen::MatrixXd spectral_correction(const Eigen::MatrixXd& dq, const LowRankForm& lr) {
  const int m = static_cast<int>(lr.f.rows());
  const int p = static_cast<int>(std::min<Eigen::Index>(lr.f.rows(), lr.f.cols()));
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(lr.f);
  const Eigen::MatrixXd qf = qr.householderQ() * Eigen::MatrixXd::Identity(m, p);
  const Eigen::MatrixXd rf =
      qr.matrixQR().topRows(p).triangularView<Eigen::Upper>().toDenseMatrix();
  Eigen::MatrixXd k = rf * lr.s * rf.transpose();
  k = 0.5 * (k + k.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
  const Eigen::MatrixXd pm = qf * eig.eigenvectors();
  Eigen::VectorXd bar(p);
  for (int i = 0; i < p; ++i) bar[i] = correction_root(eig.eigenvalues()[i]);
  // DQ R with R = I - P diag(bar) P^T
  return dq - (dq * pm) * bar.asDiagonal() * pm.transpose();
}

Eigen::MatrixXd gram_schmidt(const Eigen::MatrixXd& cols) {
  const int n = static_cast<int>(cols.rows());
  double max_norm = 0.0;
  for (int j = 0; j < cols.cols(); ++j) max_norm = std::max(max_norm, cols.col(j).norm());
  if (!(max_norm > 0.0)) throw std::invalid_argument("orthonormalize: all inputs are zero");
  Eigen::MatrixXd q(n, std::min<Eigen::Index>(n, cols.cols()));
  int m = 0;
  for (int j = 0; j < cols.cols() && m < n; ++j) {
    Eigen::VectorXd w = cols.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      if (m > 0) w -= q.leftCols(m) * (q.leftCols(m).transpose() * w);
    }
    const double nw = w.norm();
    if (nw > kDropTol * max_norm) q.col(m++) = w / nw;
  }
  return q.leftCols(m);
}

}  // namespace

SubspaceBasis SubspaceBasis::from_orthonormal(ConeDescriptor cone, Eigen::MatrixXd q,
                                              int updates) {
  if (q.rows() != cone.ambient_dim()) throw ConeError("basis rows must equal ambient dimension");
  if (q.cols() < 1 || q.cols() > q.rows()) throw std::invalid_argument("basis needs 1 <= m <= n");
  const Eigen::MatrixXd gram = q.transpose() * q;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(q.cols(), q.cols());
  if ((gram - eye).cwiseAbs().maxCoeff() > 1e-8) {
    throw std::invalid_argument("basis columns are not orthonormal");
  }
  return SubspaceBasis(std::move(cone), std::move(q), updates);
}

Element SubspaceBasis::column(int j) const { return Element(cone_, q_.col(j)); }

std::vector<Element> SubspaceBasis::columns() const {
  std::vector<Element> out;
  out.reserve(q_.cols());
  for (int j = 0; j < q_.cols(); ++j) out.push_back(column(j));
  return out;
}

Element Projector::apply(const Element& z) const {
  require_same_cone(cone(), z.cone(), "project");
  const auto& q = basis_.matrix();
  return Element(z.cone(), q * (q.transpose() * z.coords()));
}

SubspaceBasis orthonormalize(const ConeDescriptor& cone, const Eigen::MatrixXd& columns) {
  if (columns.cols() == 0) throw std::invalid_argument("orthonormalize: no vectors");
  if (columns.rows() != cone.ambient_dim()) throw ConeError("orthonormalize: wrong row count");
  return SubspaceBasis::from_orthonormal(cone, gram_schmidt(columns));
}

SubspaceBasis orthonormalize(const std::vector<Element>& vectors) {
  if (vectors.empty()) throw std::invalid_argument("orthonormalize: no vectors");
  const ConeDescriptor& cone = vectors.front().cone();
  Eigen::MatrixXd cols(cone.ambient_dim(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    require_same_cone(cone, vectors[j].cone(), "orthonormalize");
    cols.col(static_cast<Eigen::Index>(j)) = vectors[j].coords();
  }
  return orthonormalize(cone, cols);
}

SubspaceBasis from_kernel(const ConeDescriptor& cone, const Eigen::MatrixXd& rows) {
  const int n = cone.ambient_dim();
  if (rows.cols() != n) throw ConeError("from_kernel: row length must equal ambient dimension");
  if (rows.rows() == 0) {
    return SubspaceBasis::from_orthonormal(cone, Eigen::MatrixXd::Identity(n, n));
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv.maxCoeff() : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > kDropTol * smax) ++rank;
  if (rank == n) throw std::invalid_argument("from_kernel: kernel is {0}");
  return SubspaceBasis::from_orthonormal(cone, svd.matrixV().rightCols(n - rank));
}

SubspaceBasis complement(const SubspaceBasis& basis) {
  const int n = basis.ambient_dim();
  const int m = basis.dim();
  if (m >= n) throw std::invalid_argument("complement: subspace is the whole space");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis.matrix());
  const Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return SubspaceBasis::from_orthonormal(basis.cone(), full.rightCols(n - m));
}

double correction_root(double lambda) {
  // "+" root; 1 - (1 + lambda)^{-1/2} would serve equally.
  return 1.0 / std::sqrt(1.0 + lambda) + 1.0;
}

Eigen::MatrixXd orthant_closed_form_update(const Eigen::MatrixXd& q, int coord, double a) {
  const double beta = 2.0 * a + a * a;
  const double g = (1.0 + beta) * (1.0 + beta) - 1.0;
  const Eigen::VectorXd qi = q.row(coord).transpose();
  const double nq2 = qi.squaredNorm();
  Eigen::MatrixXd dq = q;
  dq.row(coord) *= 1.0 + beta;
  if (nq2 == 0.0) return dq;
  const double factor = 1.0 + 1.0 / std::sqrt(1.0 + g * nq2);
  return dq - (factor / nq2) * (dq * qi) * qi.transpose();
}

SubspaceBasis rescale_basis(const SubspaceBasis& basis, std::size_t block, const Element& c,
                            double a, CorrectionRoute route) {
  require_same_cone(basis.cone(), c.cone(), "rescale_basis");
  if (!(a > 0.0)) throw std::invalid_argument("rescale_basis: a must be positive");
  if (block >= basis.cone().num_blocks()) throw std::invalid_argument("rescale_basis: bad block");
  if (check_primitive_idempotent(c) != block) {
    throw std::invalid_argument("rescale_basis: idempotent is not supported on the named block");
  }
  const BlockLayout& l = basis.cone().block(block);
  const int d = l.block.dim();
  const int m = basis.dim();
  const Eigen::VectorXd c_block = c.coords().segment(l.offset, d);
  const Eigen::MatrixXd qi = basis.matrix().middleRows(l.offset, d);

  const LowRankForm lr = low_rank_form(l.block, qi, c_block, a);
  const Eigen::MatrixXd fs = lr.f * lr.s;
  Eigen::MatrixXd gram = fs * lr.f.transpose();
  require_symmetric(gram, "Q^T (2B + B^2) Q");
  if (gram.cwiseAbs().maxCoeff() <= 1e-15) return basis;  // B Q = 0: span unchanged

  Eigen::MatrixXd dq = basis.matrix();
  dq.middleRows(l.offset, d) = map_block_rows(l.block, qi, c_block, a);

  if (route == CorrectionRoute::Auto) {
    route = m <= d ? CorrectionRoute::Cholesky : CorrectionRoute::Spectral;
  }
  Eigen::MatrixXd out;
  if (route == CorrectionRoute::Cholesky) {
    gram = 0.5 * (gram + gram.transpose());
    gram.diagonal().array() += 1.0;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) throw std::runtime_error("rescale_basis: Cholesky failed");
    out = llt.matrixL().solve(dq.transpose()).transpose();
  } else if (l.block.kind == BlockKind::Orthant && route == CorrectionRoute::Auto) {
    int coord = 0;
    c_block.maxCoeff(&coord);
    out = orthant_closed_form_update(basis.matrix(), l.offset + coord, a);
  } else {
    out = spectral_correction(dq, lr);
  }

  const int updates = basis.updates_since_orthonormalize() + 1;
  if (updates >= kReorthonormalizePeriod) return orthonormalize(basis.cone(), out);
  return SubspaceBasis::from_orthonormal(basis.cone(), std::move(out), updates);
}

SubspaceBasis rescale_basis_naive(const SubspaceBasis& basis, std::size_t block,
                                  const Element& c, double a) {
  require_same_cone(basis.cone(), c.cone(), "rescale_basis_naive");
  if (!(a > 0.0)) throw std::invalid_argument("rescale_basis_naive: a must be positive");
  if (block >= basis.cone().num_blocks()) throw std::invalid_argument("rescale_basis_naive: bad block");
  if (check_primitive_idempotent(c) != block) {
    throw std::invalid_argument("rescale_basis_naive: idempotent is not supported on the named block");
  }
  std::vector<Element> mapped;
  mapped.reserve(basis.dim());
  for (const Element& q : basis.columns()) mapped.push_back(quadratic_rescale(c, a, q));
  return orthonormalize(mapped);
}

double projector_distance(const SubspaceBasis& a, const SubspaceBasis& b) {
  require_same_cone(a.cone(), b.cone(), "projector_distance");
  return (a.projector_matrix() - b.projector_matrix()).norm();
}

}  // namespace symcone
