#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "symcone/cone.hpp"
#include "symcone/element.hpp"
#include "symcone/subspace.hpp"

namespace symcone {

/// Seeded generator with a fixed algorithm, so fixtures are reproducible
/// across platforms: mt19937_64 words, 53-bit uniforms, and Box-Muller
/// normals drawn in pairs (the second value of a pair is cached).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  double normal();
  Eigen::VectorXd normal_vector(int n);
  /// Uniform integer in [0, n).
  int below(int n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// A subspace that contains a known interior point.
struct PlantedInstance {
  SubspaceBasis basis;
  ConeDescriptor cone;
  Element x_star;
  /// det(sqrt(r) x_star / ||x_star||_F), a lower bound on the condition
  /// measure of L intersected with the cone.
  double delta_lb;
};

/// prod(lambda) (sqrt(r) / ||lambda||_2)^r, evaluated through logarithms.
double planted_delta(const Eigen::VectorXd& spectrum);

/// x_star with the given eigenvalues on a random Jordan frame, plus m - 1
/// Gaussian directions, orthonormalized with x_star first.
///
/// Frames: a random permutation on orthant blocks, a random orthogonal
/// matrix on PSD blocks, a random unit axis on SOC blocks. `spectrum` is
/// listed in eigenvalue-slot order. Throws std::invalid_argument unless
/// 1 <= m <= ambient_dim and every eigenvalue is positive.
PlantedInstance plant(const ConeDescriptor& cone, int m, const Eigen::VectorXd& spectrum,
                      std::uint64_t seed);

/// Positive spectrum of length r with planted_delta in [min_delta, 1].
///
/// A target delta is drawn log-uniformly from [min_delta, 1]; the spectrum is
/// exp(s g) for a Gaussian direction g, with the spread s found by bisection
/// (planted_delta decreases in s). Entries are scaled to a maximum of 1.
Eigen::VectorXd random_spectrum(int rank, double min_delta, Rng& rng);

/// Problem families used by the benchmark and the tests.
enum class BenchKind { Orthant, Psd, Soc, Mixed };
const char* to_string(BenchKind kind);
bool parse_bench_kind(const std::string& name, BenchKind& out);

/// Cone of the given family and size: Orthant(n), Psd(n), Soc(n), or
/// Orthant(n) x Psd(2) x Soc(3).
ConeDescriptor bench_cone(BenchKind kind, int size);
/// Planted instance with m = max(1, ambient_dim / 4) and spectrum
/// (1, 0.01, 1, 0.01, ...) over the eigenvalue slots.
PlantedInstance bench_instance(BenchKind kind, int size, std::uint64_t seed);

/// Homogenized linear system: L = ker [A | -b] over Orthant(n + 1).
/// Throws std::invalid_argument when the kernel is trivial.
SubspaceBasis embed_linear_eq(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);
/// x / t from a point (x, t) of the embedding.
Eigen::VectorXd recover_linear_eq(const Element& xt);

/// Strict inequalities A^T y < c: L = {(s, t) : t c - s in span(A)} over
/// Orthant(n + 1). A is m x n and may have zero rows.
SubspaceBasis embed_strict_ineq(const Eigen::MatrixXd& a, const Eigen::VectorXd& c);
/// y with A^T y = c - s / t, by least squares.
Eigen::VectorXd recover_strict_ineq(const Eigen::MatrixXd& a, const Eigen::VectorXd& c,
                                    const Element& st);

/// SDP feasibility <A_i, X> = b_i, X > 0: L = ker of (X, t) -> <A_i, X> - t b_i
/// over Psd(n) x Orthant(1).
SubspaceBasis embed_sdp_feasibility(const std::vector<Eigen::MatrixXd>& ops,
                                    const Eigen::VectorXd& b);
/// X / t from a point (X, t) of the embedding.
Eigen::MatrixXd recover_sdp(const Element& xt);

/// True when the homogenizing coordinate (the last one) exceeds
/// 1e-10 ||x||_F, the threshold for a usable point of an embedding.
bool usable_homogenized(const Element& x);

}  // namespace symcone
