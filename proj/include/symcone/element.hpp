#pragma once

#include <Eigen/Dense>

#include "symcone/cone.hpp"

namespace symcone {

/// Point of the Jordan algebra in isometric coordinates.
///
/// Coordinates are laid out block by block. PSD blocks hold the upper
/// triangle of the matrix row by row with off-diagonal entries scaled by
/// sqrt(2); SOC blocks hold the natural vector scaled by sqrt(2). Under this
/// layout the plain dot product of two coordinate vectors equals the trace
/// inner product trace(x o y).
class Element {
 public:
  Element(ConeDescriptor cone, Eigen::VectorXd coords);

  static Element zero(const ConeDescriptor& cone);
  static Element identity(const ConeDescriptor& cone);
  /// Build from natural coordinates (raw matrix entries for PSD blocks,
  /// unscaled vectors for SOC blocks).
  static Element from_natural(const ConeDescriptor& cone, const Eigen::VectorXd& natural);

  const ConeDescriptor& cone() const { return cone_; }
  const Eigen::VectorXd& coords() const { return coords_; }
  Eigen::VectorXd& coords() { return coords_; }
  double operator[](int i) const { return coords_[i]; }

  /// Coordinates of one block, still isometric.
  Eigen::VectorXd block_coords(std::size_t block) const;
  Eigen::VectorXd to_natural() const;

  Element& operator+=(const Element& other);
  Element& operator-=(const Element& other);
  Element& operator*=(double s);

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(Element a, double s) { return a *= s; }
  friend Element operator*(double s, Element a) { return a *= s; }

 private:
  ConeDescriptor cone_;
  Eigen::VectorXd coords_;
};

/// Trace inner product.
double inner(const Element& x, const Element& y);

void require_same_cone(const ConeDescriptor& a, const ConeDescriptor& b, const char* where);

/// Isometric vectorization of a symmetric matrix.
Eigen::VectorXd svec(const Eigen::MatrixXd& m);
/// Inverse of svec for an order-n matrix.
Eigen::MatrixXd smat(const Eigen::Ref<const Eigen::VectorXd>& v, int n);

}  // namespace symcone
