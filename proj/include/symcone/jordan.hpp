#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "symcone/element.hpp"

namespace symcone {

/// Eigenvalues and Jordan frame of an element.
///
/// Eigenvalues are grouped by block in cone order and sorted descending
/// within each block; `block[i]` names the block owning slot i. Each frame
/// element is a primitive idempotent supported on its block.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  std::vector<Element> frame;
  std::vector<std::size_t> block;

  Element reconstruct() const;
};

Element jordan_product(const Element& x, const Element& y);

SpectralDecomposition spectral(const Element& x);
/// Eigenvalues only, in the same order as `spectral`.
Eigen::VectorXd eigenvalues(const Element& x);

double trace(const Element& x);
double det(const Element& x);
double norm_frob(const Element& x);
/// Operator norm: largest absolute eigenvalue.
double norm_op(const Element& x);
double lambda_min(const Element& x);
double lambda_max(const Element& x);

/// Nearest point of the closed cone in the Frobenius norm.
Element cone_project(const Element& x);

/// True iff every eigenvalue exceeds `tol`.
bool is_interior(const Element& x, double tol);

struct IdempotentChoice {
  Element c;
  double lambda;
  std::size_t block;
};

/// Primitive idempotent c with z o c = lambda_max(z) c.
///
/// Ties go to the lowest block index, then the lowest frame index.
/// Throws std::invalid_argument for z = 0.
IdempotentChoice max_idempotent(const Element& z);

/// Minimizer of <u, v> over the spectraplex: the idempotent of the smallest
/// eigenvalue. Same tie rule as max_idempotent.
IdempotentChoice min_vertex(const Element& v);

/// Euclidean projection onto {p >= 0, sum p = 1}.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v);

/// Frobenius projection onto the spectraplex {x in closed cone, trace x = 1}.
Element project_spectraplex(const Element& w);

/// argmin over the spectraplex of <u, v> + (mu/2) ||u - u_bar||_F^2.
///
/// Equals the spectraplex projection of u_bar - v/mu. Throws for mu <= 0 or
/// u_bar outside the spectraplex.
Element spectraplex_prox(const Element& v, double mu, const Element& u_bar);

/// Quadratic representation of v = e + a c applied to x:
///   x + (2a - a^2) c o x + 2a^2 c o (c o x).
/// `c` must be a primitive idempotent. Any a > -1 gives an automorphism of
/// the cone; the solver only uses a > 0 and a = 0 is the identity.
Element quadratic_rescale(const Element& c, double a, const Element& x);

/// Inverse of quadratic_rescale: the quadratic map of e - (a/(1+a)) c.
Element inverse_rescale(const Element& c, double a, const Element& y);

/// Checks that c is a primitive idempotent supported on one block, within
/// `tol`. Returns that block's index; throws std::invalid_argument otherwise.
std::size_t check_primitive_idempotent(const Element& c, double tol = 1e-8);

}  // namespace symcone
