#include "doctest.h"

#include <Eigen/Dense>

#include <random>
#include <stdexcept>

#include "fsidd/linsolve.hpp"

using namespace fsidd;

namespace {

SparseOperator sparse(const Eigen::MatrixXd& a) { return a.sparseView(); }

Eigen::MatrixXd random_matrix(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(gen);
  return a;
}

Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = u(gen);
  return v;
}

LinearMap dense_map(const Eigen::MatrixXd& a) {
  return [a](const DofVector& x) -> DofVector { return a * x; };
}

}  // namespace

TEST_CASE("identity factorization returns the rhs") {
  const Eigen::VectorXd b = random_vector(7, 1);
  for (auto kind : {Factorization::Kind::general, Factorization::Kind::spd}) {
    const auto f = factorize(sparse(Eigen::MatrixXd::Identity(7, 7)), kind);
    CHECK((f->solve(b) - b).norm() == 0.0);
  }
}

TEST_CASE("2x2 hand example") {
  Eigen::MatrixXd a(2, 2);
  a << 2, 1, 1, 3;
  const Eigen::Vector2d b(3, 4);
  for (auto kind : {Factorization::Kind::general, Factorization::Kind::spd}) {
    const DofVector x = factorize(sparse(a), kind)->solve(b);
    CHECK(x(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x(1) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("random SPD 50x50 residual") {
  const Eigen::MatrixXd r = random_matrix(50, 7);
  const Eigen::MatrixXd a = r * r.transpose() + 50.0 * Eigen::MatrixXd::Identity(50, 50);
  const Eigen::VectorXd b = random_vector(50, 8);
  for (auto kind : {Factorization::Kind::general, Factorization::Kind::spd}) {
    const DofVector x = factorize(sparse(a), kind)->solve(b);
    CHECK((a * x - b).norm() / b.norm() <= 1e-11);
  }
}

TEST_CASE("solve recovers x from A x") {
  const Eigen::MatrixXd a = random_matrix(30, 3) + 10.0 * Eigen::MatrixXd::Identity(30, 30);
  const Eigen::VectorXd x = random_vector(30, 4);
  const DofVector y = factorize(sparse(a), Factorization::Kind::general)->solve(a * x);
  CHECK((y - x).norm() <= 1e-10 * x.norm());
}

TEST_CASE("singular and indefinite operators are named in the error") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  a(2, 2) = 0.0;
  try {
    factorize(sparse(a), Factorization::Kind::general, "fluid step");
    FAIL("expected a failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("fluid step") != std::string::npos);
  }
  Eigen::MatrixXd ind = Eigen::MatrixXd::Identity(3, 3);
  ind(1, 1) = -1.0;
  CHECK_THROWS_AS(factorize(sparse(ind), Factorization::Kind::spd, "structure step"), std::runtime_error);
  CHECK_THROWS_AS(factorize(SparseOperator(2, 3), Factorization::Kind::general), std::invalid_argument);
}

TEST_CASE("gmres on the identity") {
  const Eigen::VectorXd b = random_vector(12, 2);
  const auto r = gmres([](const DofVector& x) { return x; }, b, 1e-12, 50);
  CHECK(r.report.converged);
  CHECK(r.report.iterations == 1);
  CHECK((r.x - b).norm() <= 1e-14 * b.norm());
}

TEST_CASE("gmres on diag(1,2,3)") {
  const Eigen::Vector3d d(1, 2, 3);
  const auto r = gmres([d](const DofVector& x) -> DofVector { return d.cwiseProduct(x); }, d, 1e-10, 10);
  CHECK(r.report.converged);
  CHECK(r.report.iterations <= 3);
  CHECK((r.x - Eigen::Vector3d::Ones()).norm() <= 1e-9);
}

TEST_CASE("gmres matches a dense solve on a nonsymmetric operator") {
  const int n = 20;
  const Eigen::MatrixXd a = random_matrix(n, 11) + 4.0 * Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd b = random_vector(n, 12);
  const Eigen::VectorXd direct = a.partialPivLu().solve(b);
  const auto r = gmres(dense_map(a), b, 1e-12, 100);
  CHECK(r.report.converged);
  CHECK(r.report.iterations <= n + 2);
  CHECK((r.x - direct).norm() <= 1e-6 * direct.norm());

  const auto& h = r.report.residuals;
  REQUIRE(h.size() == static_cast<std::size_t>(r.report.iterations) + 1);
  CHECK(h.front() == 1.0);
  for (std::size_t k = 1; k < h.size(); ++k) CHECK(h[k] <= h[k - 1] * (1.0 + 1e-12));
  CHECK((b - a * r.x).norm() / b.norm() <= 1e-11);
}

TEST_CASE("gmres stops at maxit without converging") {
  const int n = 40;
  const Eigen::MatrixXd a = random_matrix(n, 5) + 2.0 * Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd b = random_vector(n, 6);
  const auto r = gmres(dense_map(a), b, 1e-14, 5);
  CHECK_FALSE(r.report.converged);
  CHECK(r.report.iterations == 5);
  CHECK((b - a * r.x).norm() / b.norm() == doctest::Approx(r.report.residuals.back()).epsilon(1e-8));
  CHECK(r.report.residuals.back() < 1.0);
}

TEST_CASE("gmres with a zero rhs") {
  const auto r = gmres([](const DofVector& x) { return DofVector(2.0 * x); }, Eigen::VectorXd::Zero(4), 1e-8, 10);
  CHECK(r.report.converged);
  CHECK(r.report.iterations == 0);
  CHECK(r.x.norm() == 0.0);
}
