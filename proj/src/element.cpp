#include "symcone/element.hpp"

#include <cmath>

namespace symcone {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

Element::Element(ConeDescriptor cone, Eigen::VectorXd coords)
    : cone_(std::move(cone)), coords_(std::move(coords)) {
  if (coords_.size() != cone_.ambient_dim()) {
    throw ConeError("element has " + std::to_string(coords_.size()) + " coordinates, cone needs " +
                    std::to_string(cone_.ambient_dim()));
  }
}

Element Element::zero(const ConeDescriptor& cone) {
  return Element(cone, Eigen::VectorXd::Zero(cone.ambient_dim()));
}

Element Element::identity(const ConeDescriptor& cone) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(cone.ambient_dim());
  for (const auto& l : cone.layout()) {
    switch (l.block.kind) {
      case BlockKind::Orthant:
        v.segment(l.offset, l.block.size).setOnes();
        break;
      case BlockKind::Psd:
        v.segment(l.offset, l.block.dim()) =
            svec(Eigen::MatrixXd::Identity(l.block.size, l.block.size));
        break;
      case BlockKind::Soc:
        v[l.offset] = kSqrt2;
        break;
    }
  }
  return Element(cone, std::move(v));
}

Element Element::from_natural(const ConeDescriptor& cone, const Eigen::VectorXd& natural) {
  if (natural.size() != cone.ambient_dim()) {
    throw ConeError("natural vector has wrong length");
  }
  Eigen::VectorXd v = natural;
  for (const auto& l : cone.layout()) {
    if (l.block.kind == BlockKind::Soc) {
      v.segment(l.offset, l.block.dim()) *= kSqrt2;
    } else if (l.block.kind == BlockKind::Psd) {
      int k = l.offset;
      for (int i = 0; i < l.block.size; ++i)
        for (int j = i; j < l.block.size; ++j, ++k)
          if (i != j) v[k] *= kSqrt2;
    }
  }
  return Element(cone, std::move(v));
}

Eigen::VectorXd Element::block_coords(std::size_t block) const {
  const auto& l = cone_.block(block);
  return coords_.segment(l.offset, l.block.dim());
}

Eigen::VectorXd Element::to_natural() const {
  Eigen::VectorXd v = coords_;
  for (const auto& l : cone_.layout()) {
    if (l.block.kind == BlockKind::Soc) {
      v.segment(l.offset, l.block.dim()) /= kSqrt2;
    } else if (l.block.kind == BlockKind::Psd) {
      int k = l.offset;
      for (int i = 0; i < l.block.size; ++i)
        for (int j = i; j < l.block.size; ++j, ++k)
          if (i != j) v[k] /= kSqrt2;
    }
  }
  return v;
}

Element& Element::operator+=(const Element& other) {
  require_same_cone(cone_, other.cone_, "operator+");
  coords_ += other.coords_;
  return *this;
}

Element& Element::operator-=(const Element& other) {
  require_same_cone(cone_, other.cone_, "operator-");
  coords_ -= other.coords_;
  return *this;
}

Element& Element::operator*=(double s) {
  coords_ *= s;
  return *this;
}

double inner(const Element& x, const Element& y) {
  require_same_cone(x.cone(), y.cone(), "inner");
  return x.coords().dot(y.coords());
}

void require_same_cone(const ConeDescriptor& a, const ConeDescriptor& b, const char* where) {
  if (!(a == b)) {
    throw ConeError(std::string(where) + ": cone mismatch (" + a.describe() + " vs " +
                    b.describe() + ")");
  }
}

Eigen::VectorXd svec(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  Eigen::VectorXd v(n * (n + 1) / 2);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j, ++k) v[k] = i == j ? m(i, i) : kSqrt2 * 0.5 * (m(i, j) + m(j, i));
  return v;
}

Eigen::MatrixXd smat(const Eigen::Ref<const Eigen::VectorXd>& v, int n) {
  Eigen::MatrixXd m(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j, ++k) {
      const double x = i == j ? v[k] : v[k] / kSqrt2;
      m(i, j) = x;
      m(j, i) = x;
    }
  }
  return m;
}

}  // namespace symcone
