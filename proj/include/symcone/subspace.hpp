#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "symcone/element.hpp"

namespace symcone {

/// Orthonormal basis Q (ambient_dim x m) of a subspace L, in isometric
/// coordinates, so that P_L = Q Q^T.
class SubspaceBasis {
 public:
  /// Wraps columns that are already orthonormal (checked to 1e-8).
  /// `updates` carries the structured-update count forward.
  static SubspaceBasis from_orthonormal(ConeDescriptor cone, Eigen::MatrixXd q, int updates = 0);

  const ConeDescriptor& cone() const { return cone_; }
  const Eigen::MatrixXd& matrix() const { return q_; }
  int dim() const { return static_cast<int>(q_.cols()); }
  int ambient_dim() const { return static_cast<int>(q_.rows()); }

  Element column(int j) const;
  std::vector<Element> columns() const;
  Eigen::MatrixXd projector_matrix() const { return q_ * q_.transpose(); }

  /// Structured updates applied since the last full re-orthonormalization.
  int updates_since_orthonormalize() const { return updates_; }

 private:
  SubspaceBasis(ConeDescriptor cone, Eigen::MatrixXd q, int updates)
      : cone_(std::move(cone)), q_(std::move(q)), updates_(updates) {}

  ConeDescriptor cone_;
  Eigen::MatrixXd q_;
  int updates_ = 0;
};

/// Orthogonal projector onto span(basis).
class Projector {
 public:
  explicit Projector(SubspaceBasis basis) : basis_(std::move(basis)) {}

  const SubspaceBasis& basis() const { return basis_; }
  const ConeDescriptor& cone() const { return basis_.cone(); }
  Element apply(const Element& z) const;

 private:
  SubspaceBasis basis_;
};

inline Element project(const Projector& p, const Element& z) { return p.apply(z); }

/// Orthonormal basis of span(vectors) by Gram-Schmidt with a second
/// re-orthogonalization pass. Columns whose residual falls below
/// 1e-10 x (largest input norm) are dropped.
SubspaceBasis orthonormalize(const std::vector<Element>& vectors);
SubspaceBasis orthonormalize(const ConeDescriptor& cone, const Eigen::MatrixXd& columns);

/// Null space of the map whose rows are given (isometric coordinates).
SubspaceBasis from_kernel(const ConeDescriptor& cone, const Eigen::MatrixXd& rows);

/// Orthonormal basis of the orthogonal complement.
SubspaceBasis complement(const SubspaceBasis& basis);

/// How the correcting factor R with (DQR)^T (DQR) = I is obtained.
enum class CorrectionRoute {
  Auto,      // Cholesky when m <= block dim, low-rank spectral formula otherwise
  Cholesky,  // R = L^{-T} with L L^T = I + Q^T (2B + B^2) Q
  Spectral,  // R = I - P diag(lambda_bar) P^T from the low-rank form
};

/// Re-orthonormalization period for structured updates.
inline constexpr int kReorthonormalizePeriod = 50;

/// Orthonormal basis of D(L), where D is the quadratic map of e + a c on
/// `block` and the identity on every other block.
///
/// Uses the block's low-rank form of Q^T (2B + B^2) Q. Throws
/// std::invalid_argument if c is not a primitive idempotent of `block`
/// (within 1e-8) or a <= 0. Every kReorthonormalizePeriod-th update
/// re-orthonormalizes from scratch.
SubspaceBasis rescale_basis(const SubspaceBasis& basis, std::size_t block, const Element& c,
                            double a, CorrectionRoute route = CorrectionRoute::Auto);

/// Reference version: maps each column through quadratic_rescale and
/// re-orthonormalizes.
SubspaceBasis rescale_basis_naive(const SubspaceBasis& basis, std::size_t block,
                                  const Element& c, double a);

/// Orthant-block update in closed form:
///   Q~ = D Q (I - (1 + 1/sqrt(1 + g |q|^2)) q q^T / |q|^2),  q = Q^T e_i,
/// with g = (1+a)^4 - 1 (g = 3 when a = sqrt(2) - 1).
Eigen::MatrixXd orthant_closed_form_update(const Eigen::MatrixXd& q, int coord, double a);

/// Diagonal entry of the correcting factor for eigenvalue lambda of
/// Q^T (2B + B^2) Q: lambda_bar = (1 + lambda)^{-1/2} + 1, so that
/// (1 - lambda_bar)^2 (1 + lambda) = 1. The other root,
/// 1 - (1 + lambda)^{-1/2}, satisfies the same identity.
double correction_root(double lambda);

/// Frobenius distance between the two orthogonal projectors.
double projector_distance(const SubspaceBasis& a, const SubspaceBasis& b);

}  // namespace symcone
