#pragma once

#include <Eigen/Core>

#include <cmath>

namespace wentzell {

struct KrylovResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double residual = 0.0;  // final true residual 2-norm
  bool converged = false;
};

/// Preconditioned conjugate gradient for a symmetric positive definite
/// operator given as a callable. precond must apply an SPD approximate
/// inverse. Solves apply(x) = rhs to ||r|| <= rel_tol * ||rhs||.
template <typename Apply, typename Precond>
KrylovResult pcg(const Apply& apply, const Precond& precond, const Eigen::VectorXd& rhs,
                 double rel_tol, int max_iters) {
  KrylovResult out;
  out.x = Eigen::VectorXd::Zero(rhs.size());
  const double target = rel_tol * rhs.norm();
  Eigen::VectorXd r = rhs;
  if (r.norm() <= target) {
    out.converged = true;
    return out;
  }
  Eigen::VectorXd z = precond(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  for (int k = 1; k <= max_iters; ++k) {
    const Eigen::VectorXd Ap = apply(p);
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) break;  // operator not positive definite along p
    const double alpha = rz / pAp;
    out.x += alpha * p;
    r -= alpha * Ap;
    out.iterations = k;
    if (r.norm() <= target) {
      out.converged = true;
      break;
    }
    z = precond(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  out.residual = (apply(out.x) - rhs).norm();
  out.converged = out.converged && out.residual <= 10.0 * target + 1e-300;
  return out;
}

/// Preconditioned MINRES for a symmetric (possibly indefinite) operator.
/// precond must apply an SPD approximate inverse.
template <typename Apply, typename Precond>
KrylovResult minres(const Apply& apply, const Precond& precond, const Eigen::VectorXd& rhs,
                    double rel_tol, int max_iters) {
  KrylovResult out;
  const auto n = rhs.size();
  out.x = Eigen::VectorXd::Zero(n);

  Eigen::VectorXd v = rhs;  // unnormalized Lanczos vector (residual space)
  Eigen::VectorXd z = precond(v);
  double gamma = std::sqrt(std::max(0.0, v.dot(z)));
  if (gamma == 0.0) {
    out.converged = rhs.norm() == 0.0;
    out.residual = rhs.norm();
    return out;
  }
  const double target = rel_tol * gamma;

  Eigen::VectorXd v_prev = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w_prev = Eigen::VectorXd::Zero(n);
  double gamma_prev = 1.0;
  double eta = gamma;
  double s_prev = 0.0;
  double s = 0.0;
  double c_prev = 1.0;
  double c = 1.0;

  for (int j = 1; j <= max_iters; ++j) {
    z /= gamma;
    const Eigen::VectorXd Az = apply(z);
    const double delta = Az.dot(z);
    Eigen::VectorXd v_next = Az - (delta / gamma) * v - (gamma / gamma_prev) * v_prev;
    Eigen::VectorXd z_next = precond(v_next);
    const double gamma_next = std::sqrt(std::max(0.0, v_next.dot(z_next)));

    const double alpha0 = c * delta - c_prev * s * gamma;
    const double alpha1 = std::sqrt(alpha0 * alpha0 + gamma_next * gamma_next);
    const double alpha2 = s * delta + c_prev * c * gamma;
    const double alpha3 = s_prev * gamma;
    if (alpha1 == 0.0) break;  // breakdown: exact solution reached or singular

    const double c_next = alpha0 / alpha1;
    const double s_next = gamma_next / alpha1;
    const Eigen::VectorXd w_next = (z - alpha3 * w_prev - alpha2 * w) / alpha1;
    out.x += (c_next * eta) * w_next;
    eta = -s_next * eta;
    out.iterations = j;

    if (std::abs(eta) <= target || gamma_next == 0.0) break;

    v_prev = v;
    v = v_next;
    z = z_next;
    w_prev = w;
    w = w_next;
    gamma_prev = gamma;
    gamma = gamma_next;
    s_prev = s;
    s = s_next;
    c_prev = c;
    c = c_next;
  }
  out.residual = (apply(out.x) - rhs).norm();
  out.converged = std::abs(eta) <= target || out.residual <= rel_tol * rhs.norm() * 10.0;
  return out;
}

}  // namespace wentzell
