#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "symcone/instances.hpp"
#include "symcone/jordan.hpp"
#include "symcone/solver.hpp"

using namespace symcone;

namespace {

double residual(const SubspaceBasis& l, const Element& x) {
  return norm_frob(x - Projector(l).apply(x));
}

SolveOptions homogenized_options() {
  SolveOptions opts;
  opts.accept = usable_homogenized;
  return opts;
}

Eigen::MatrixXd random_matrix(int rows, int cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j) m.col(j) = rng.normal_vector(rows);
  return m;
}

}  // namespace

TEST_CASE("seeded generator is reproducible") {
  Rng a(123), b(123), c(124);
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(a.normal_vector(7) == b.normal_vector(7));
  CHECK(a.normal() != c.normal());
  for (int i = 0; i < 1000; ++i) {
    const int k = a.below(5);
    CHECK(k >= 0);
    CHECK(k < 5);
  }
  CHECK_THROWS_AS(a.below(0), std::invalid_argument);

  Rng big(9);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double g = big.normal();
    sum += g;
    sq += g * g;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
}

TEST_CASE("planted delta") {
  const Eigen::Vector4d lam(4, 2, 1, 1);
  // prod(lambda) (sqrt(r)/|lambda|)^r evaluated directly
  const double direct = 8.0 * std::pow(2.0 / std::sqrt(22.0), 4);
  CHECK(planted_delta(lam) == doctest::Approx(direct).epsilon(1e-14));
  CHECK(planted_delta(Eigen::VectorXd::Ones(6)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(planted_delta(Eigen::VectorXd::Constant(3, 7.5)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(planted_delta(Eigen::Vector2d(1, 0)), std::invalid_argument);

  Rng rng(60);
  for (int trial = 0; trial < 1000; ++trial) {
    const int r = 1 + rng.below(20);
    const Eigen::VectorXd l = rng.normal_vector(r).array().exp();
    CHECK(planted_delta(l) <= 1.0 + 1e-12);
  }
}

TEST_CASE("plant builds a subspace through x_star") {
  Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const ConeDescriptor cone = gen::random_cone(rng);
    const int m = 1 + rng.below(cone.ambient_dim());
    const Eigen::VectorXd lam = random_spectrum(cone.rank(), 1e-4, rng);
    const PlantedInstance inst = plant(cone, m, lam, static_cast<std::uint64_t>(trial));
    CHECK(inst.basis.dim() == m);
    CHECK(residual(inst.basis, inst.x_star) <= 1e-12 * norm_frob(inst.x_star));
    CHECK(lambda_min(inst.x_star) > 0.0);
    CHECK(inst.delta_lb > 0.0);
    CHECK(inst.delta_lb <= 1.0 + 1e-12);
    CHECK(inst.delta_lb >= 1e-4 * (1 - 1e-9));
    CHECK(inst.delta_lb == doctest::Approx(planted_delta(lam)).epsilon(1e-12));
    // the frame is random but the spectrum is the one requested
    Eigen::VectorXd got = eigenvalues(inst.x_star), want = lam;
    std::sort(got.data(), got.data() + got.size());
    std::sort(want.data(), want.data() + want.size());
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12 * want.maxCoeff());
    // det(sqrt(r) x / |x|) is the planted measure
    const double r = cone.rank();
    const double d = det(inst.x_star * (std::sqrt(r) / norm_frob(inst.x_star)));
    CHECK(d == doctest::Approx(inst.delta_lb).epsilon(1e-9));
  }
  const ConeDescriptor o3 = ConeDescriptor::orthant(3);
  CHECK_THROWS_AS(plant(o3, 0, Eigen::VectorXd::Ones(3), 1), std::invalid_argument);
  CHECK_THROWS_AS(plant(o3, 4, Eigen::VectorXd::Ones(3), 1), std::invalid_argument);
  CHECK_THROWS_AS(plant(o3, 1, Eigen::VectorXd::Ones(2), 1), std::invalid_argument);
  CHECK_THROWS_AS(plant(o3, 1, Eigen::Vector3d(1, -1, 1), 1), std::invalid_argument);

  const PlantedInstance a = plant(ConeDescriptor::psd(3), 2, Eigen::Vector3d(1, 2, 3), 5);
  const PlantedInstance b = plant(ConeDescriptor::psd(3), 2, Eigen::Vector3d(1, 2, 3), 5);
  CHECK(a.basis.matrix() == b.basis.matrix());
}

TEST_CASE("random spectra hit the requested range") {
  Rng rng(62);
  for (int trial = 0; trial < 300; ++trial) {
    const int r = 1 + rng.below(15);
    const Eigen::VectorXd lam = random_spectrum(r, 1e-4, rng);
    REQUIRE(lam.size() == r);
    CHECK(lam.minCoeff() > 0.0);
    CHECK(lam.maxCoeff() == doctest::Approx(1.0));
    const double d = planted_delta(lam);
    CHECK(d >= 1e-4 * (1 - 1e-9));
    CHECK(d <= 1.0 + 1e-12);
  }
}

TEST_CASE("linear equations, the homogeneous example") {
  Eigen::MatrixXd a(1, 2);
  a << 1, -1;
  const SubspaceBasis l = embed_linear_eq(a, Eigen::VectorXd::Zero(1));
  CHECK(l.dim() == 2);
  CHECK(residual(l, Element(l.cone(), Eigen::Vector3d(1, 1, 0.3))) <= 1e-14);
  const SolveReport rep = solve(l, homogenized_options());
  REQUIRE(rep.status == SolveStatus::Solved);
  const Eigen::VectorXd x = recover_linear_eq(*rep.x);
  CHECK(std::abs((a * x)[0]) <= 1e-12 * x.norm());
  CHECK(x.minCoeff() > 0.0);
  CHECK(x[0] == doctest::Approx(x[1]));

  // x = 0 and t = 0 forced: [A | -b] has full column rank
  Eigen::MatrixXd tall(2, 1);
  tall << 1, 0;
  CHECK_THROWS_AS(embed_linear_eq(tall, Eigen::Vector2d(0, 1)), std::invalid_argument);
}

TEST_CASE("linear equations with a planted positive solution") {
  Rng rng(63);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd a = random_matrix(5, 10, rng);
    const Eigen::VectorXd x0 = (rng.normal_vector(10).array().abs() + 0.1).matrix();
    const Eigen::VectorXd b = a * x0;
    const SubspaceBasis l = embed_linear_eq(a, b);
    const SolveReport rep = solve(l, homogenized_options());
    REQUIRE(rep.status == SolveStatus::Solved);
    const Eigen::VectorXd x = recover_linear_eq(*rep.x);
    CHECK((a * x - b).cwiseAbs().maxCoeff() <= 1e-6 * b.cwiseAbs().maxCoeff());
    CHECK(x.minCoeff() > 0.0);
  }
}

TEST_CASE("strict inequalities") {
  // no constraints: L = span{(c, 1)}, feasible iff c > 0
  {
    const Eigen::MatrixXd none(0, 3);
    const SubspaceBasis l = embed_strict_ineq(none, Eigen::Vector3d(1, 2, 3));
    CHECK(l.dim() == 1);
    CHECK(solve(l).status == SolveStatus::Solved);
    SolveOptions opts;
    opts.outer_limit = 20;
    const SubspaceBasis bad = embed_strict_ineq(none, Eigen::Vector3d(1, -2, 3));
    CHECK(solve(bad, opts).status == SolveStatus::OuterLimit);
    CHECK(recover_strict_ineq(none, Eigen::Vector3d(1, 2, 3), Element::identity(l.cone())).size() == 0);
  }
  // y < 1
  {
    const Eigen::MatrixXd a = Eigen::MatrixXd::Ones(1, 1);
    const Eigen::VectorXd c = Eigen::VectorXd::Ones(1);
    const SolveReport rep = solve(embed_strict_ineq(a, c), homogenized_options());
    REQUIRE(rep.status == SolveStatus::Solved);
    CHECK(recover_strict_ineq(a, c, *rep.x)[0] < 1.0);
  }
  Rng rng(64);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + rng.below(4);
    const int n = m + 1 + rng.below(6);
    const Eigen::MatrixXd a = random_matrix(m, n, rng);
    const Eigen::VectorXd slack = (rng.normal_vector(n).array().abs() + 0.05).matrix();
    const Eigen::VectorXd c = a.transpose() * rng.normal_vector(m) + slack;
    const SolveReport rep = solve(embed_strict_ineq(a, c), homogenized_options());
    REQUIRE(rep.status == SolveStatus::Solved);
    const Eigen::VectorXd y = recover_strict_ineq(a, c, *rep.x);
    CHECK((a.transpose() * y - c).maxCoeff() < 0.0);
  }
}

TEST_CASE("semidefinite feasibility") {
  // trace X = t
  {
    const int n = 3;
    const SubspaceBasis l =
        embed_sdp_feasibility({Eigen::MatrixXd::Identity(n, n)}, Eigen::VectorXd::Ones(1));
    Eigen::VectorXd point(l.ambient_dim());
    point << svec(Eigen::MatrixXd::Identity(n, n)), double(n);
    CHECK(residual(l, Element(l.cone(), point)) <= 1e-14 * point.norm());
    const SolveReport rep = solve(l, homogenized_options());
    REQUIRE(rep.status == SolveStatus::Solved);
    CHECK(recover_sdp(*rep.x).trace() == doctest::Approx(1.0).epsilon(1e-9));
  }
  // planted X0 > 0
  Rng rng(65);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + rng.below(3);
    const int k = 1 + rng.below(n);
    std::vector<Eigen::MatrixXd> ops;
    const Eigen::MatrixXd g = random_matrix(n, n, rng);
    const Eigen::MatrixXd x0 = g * g.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd b(k);
    for (int i = 0; i < k; ++i) {
      const Eigen::MatrixXd h = random_matrix(n, n, rng);
      ops.push_back(0.5 * (h + h.transpose()));
      b[i] = (ops.back().cwiseProduct(x0)).sum();
    }
    const SolveReport rep = solve(embed_sdp_feasibility(ops, b), homogenized_options());
    REQUIRE(rep.status == SolveStatus::Solved);
    const Eigen::MatrixXd x = recover_sdp(*rep.x);
    double worst = 0.0;
    for (int i = 0; i < k; ++i) worst = std::max(worst, std::abs(ops[i].cwiseProduct(x).sum() - b[i]));
    CHECK(worst <= 1e-6 * std::max(1.0, b.cwiseAbs().maxCoeff()));
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(x).eigenvalues().minCoeff() > 0.0);
  }
  // <-I, X> = t has no strictly feasible point; its complement contains (I, 1)
  {
    const int n = 3;
    const SubspaceBasis l =
        embed_sdp_feasibility({-Eigen::MatrixXd::Identity(n, n)}, Eigen::VectorXd::Ones(1));
    const SolveReport rep = solve_extended(l, homogenized_options());
    REQUIRE(rep.status == SolveStatus::DualSolved);
    const Eigen::MatrixXd xh = smat(rep.x->block_coords(0), n);
    const double t = rep.x->coords()[rep.x->coords().size() - 1];
    CHECK((xh - t * Eigen::MatrixXd::Identity(n, n)).norm() <= 1e-9 * t);
  }
  CHECK_THROWS_AS(embed_sdp_feasibility({}, Eigen::VectorXd(0)), std::invalid_argument);
  CHECK_THROWS_AS(embed_sdp_feasibility({Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(3, 3)},
                                        Eigen::Vector2d(1, 1)),
                  std::invalid_argument);
}

TEST_CASE("usable homogenized points") {
  const ConeDescriptor o3 = ConeDescriptor::orthant(3);
  CHECK(usable_homogenized(Element(o3, Eigen::Vector3d(1, 1, 1))));
  CHECK_FALSE(usable_homogenized(Element(o3, Eigen::Vector3d(1, 1, 1e-12))));
  CHECK_FALSE(usable_homogenized(Element(o3, Eigen::Vector3d(1, 1, 0))));
}

TEST_CASE("benchmark families") {
  CHECK(bench_cone(BenchKind::Orthant, 5).ambient_dim() == 5);
  CHECK(bench_cone(BenchKind::Psd, 3).ambient_dim() == 6);
  CHECK(bench_cone(BenchKind::Soc, 4).rank() == 2);
  CHECK(bench_cone(BenchKind::Mixed, 2).rank() == 2 + 2 + 2);
  for (BenchKind k : {BenchKind::Orthant, BenchKind::Psd, BenchKind::Soc, BenchKind::Mixed}) {
    BenchKind back{};
    CHECK(parse_bench_kind(to_string(k), back));
    CHECK(back == k);
    const PlantedInstance inst = bench_instance(k, 4, 3);
    CHECK(residual(inst.basis, inst.x_star) <= 1e-12 * norm_frob(inst.x_star));
    CHECK(solve(inst.basis).status == SolveStatus::Solved);
  }
  BenchKind out{};
  CHECK_FALSE(parse_bench_kind("cube", out));
}
