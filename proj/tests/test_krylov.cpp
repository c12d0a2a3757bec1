#include "wentzell/krylov.hpp"

#include "support.hpp"

#include <doctest.h>
#include <Eigen/Dense>

using namespace wentzell;
using namespace wentzell::testing;

namespace {

Eigen::MatrixXd random_spd(int n, unsigned seed) {
  Eigen::MatrixXd R(n, n);
  for (int j = 0; j < n; ++j) R.col(j) = random_vector(n, seed + static_cast<unsigned>(j));
  return R.transpose() * R + Eigen::MatrixXd::Identity(n, n);
}

Eigen::MatrixXd random_symmetric_indefinite(int n, unsigned seed) {
  Eigen::MatrixXd A = random_spd(n, seed);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(A);
  Eigen::VectorXd values = eigen.eigenvalues();
  for (int i = 0; i < n / 2; ++i) values[i] = -values[i] - 1.0;  // mixed signs
  return eigen.eigenvectors() * values.asDiagonal() * eigen.eigenvectors().transpose();
}

}  // namespace

TEST_CASE("pcg solves SPD systems to the requested tolerance") {
  const int n = 40;
  const Eigen::MatrixXd A = random_spd(n, 1);
  const Eigen::VectorXd b = random_vector(n, 99);
  const Eigen::VectorXd exact = A.ldlt().solve(b);

  auto apply = [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(A * x); };
  auto identity = [](const Eigen::VectorXd& r) { return r; };
  auto jacobi = [&](const Eigen::VectorXd& r) {
    return Eigen::VectorXd(A.diagonal().cwiseInverse().asDiagonal() * r);
  };

  for (auto& result : {pcg(apply, identity, b, 1e-12, 500), pcg(apply, jacobi, b, 1e-12, 500)}) {
    CHECK(result.converged);
    CHECK((result.x - exact).norm() <= 1e-8 * exact.norm());
    CHECK(result.residual <= 1e-10 * b.norm());
  }

  const KrylovResult zero = pcg(apply, identity, Eigen::VectorXd::Zero(n), 1e-12, 10);
  CHECK(zero.converged);
  CHECK(zero.x.norm() == 0.0);
}

TEST_CASE("minres solves SPD and indefinite symmetric systems") {
  const int n = 30;
  const Eigen::VectorXd b = random_vector(n, 7);
  auto identity = [](const Eigen::VectorXd& r) { return r; };

  SUBCASE("SPD") {
    const Eigen::MatrixXd A = random_spd(n, 3);
    auto apply = [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(A * x); };
    const KrylovResult result = minres(apply, identity, b, 1e-12, 500);
    CHECK(result.converged);
    CHECK((result.x - A.ldlt().solve(b).eval()).norm() <= 1e-8);
  }

  SUBCASE("indefinite, with and without preconditioning") {
    const Eigen::MatrixXd A = random_symmetric_indefinite(n, 5);
    const Eigen::VectorXd exact = A.fullPivLu().solve(b);
    auto apply = [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(A * x); };
    auto abs_jacobi = [&](const Eigen::VectorXd& r) {
      return Eigen::VectorXd(A.diagonal().cwiseAbs().cwiseInverse().asDiagonal() * r);
    };
    for (auto& result :
         {minres(apply, identity, b, 1e-12, 1000), minres(apply, abs_jacobi, b, 1e-12, 1000)}) {
      CHECK(result.converged);
      CHECK((result.x - exact).norm() <= 1e-7 * exact.norm());
    }
  }

  SUBCASE("zero right-hand side") {
    const Eigen::MatrixXd A = random_spd(n, 11);
    auto apply = [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(A * x); };
    const KrylovResult result = minres(apply, identity, Eigen::VectorXd::Zero(n), 1e-12, 10);
    CHECK(result.converged);
    CHECK(result.x.norm() == 0.0);
  }
}
