#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "swarmwave/geometry.hpp"

namespace swarmwave {

// Step size below which every Jacobian row is diagonally dominant.
inline double gta_epsilon_bound(std::size_t n) {
  if (n < 2) throw PreconditionError("gta_epsilon_bound: needs at least 2 robots");
  const double nn = static_cast<double>(n);
  return nn / (27.0 * (nn - 1.0));
}

struct GtaParams {
  double epsilon = 0.0;
  std::size_t n = 0;
  double viewing_range = 1.0;

  static GtaParams with_default_epsilon(std::size_t n, double viewing_range = 1.0) {
    return {n < 2 ? 0.5 : 0.9 * gta_epsilon_bound(n), n, viewing_range};
  }
  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw PreconditionError("GtaParams: epsilon must lie in (0, 1)");
    if (!(viewing_range > 0.0)) throw PreconditionError("GtaParams: viewing_range must be positive");
    if (n < 1) throw PreconditionError("GtaParams: needs at least one robot");
  }
  // False when epsilon is outside the range with a guaranteed certificate.
  bool certificate_guaranteed() const { return n < 2 || epsilon < gta_epsilon_bound(n); }
};

// exp(-X^2 / (1 - X^2)) on [0, 1), zero beyond; X is a squared distance.
inline double bump(double X) {
  if (!(X >= 0.0)) throw PreconditionError("bump: argument must be non-negative");
  if (X >= 1.0) return 0.0;
  const double x2 = X * X;
  return std::exp(-x2 / (1.0 - x2));
}

inline double bump_derivative(double X) {
  if (!(X >= 0.0)) throw PreconditionError("bump_derivative: argument must be non-negative");
  if (X >= 1.0) return 0.0;
  const double q = 1.0 - X * X;
  return -2.0 * X * bump(X) / (q * q);
}

namespace detail {

struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

inline void check_params(const Configuration& z, const GtaParams& p, const char* who) {
  if (p.n != z.size()) {
    throw PreconditionError(std::string(who) + ": params.n = " + std::to_string(p.n) +
                            " but configuration has " + std::to_string(z.size()) + " robots");
  }
  if (!(p.viewing_range > 0.0)) throw PreconditionError(std::string(who) + ": viewing_range must be positive");
}

}  // namespace detail

// Displacement (1/n) sum_j bump(|z_j - z_i|^2 / R^2) (z_j - z_i), summed in index order.
inline Point gta_target(std::size_t i, const Configuration& z, double viewing_range = 1.0) {
  if (i >= z.size()) throw PreconditionError("gta_target: robot index out of range");
  const double inv_r2 = 1.0 / (viewing_range * viewing_range);
  detail::Kahan sx;
  detail::Kahan sy;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const Point d = z[j] - z[i];
    const double w = bump(norm2(d) * inv_r2);
    sx.add(w * d.x);
    sy.add(w * d.y);
  }
  const double n = static_cast<double>(z.size());
  return {sx.sum / n, sy.sum / n};
}

inline Configuration gta_step(const Configuration& z, const GtaParams& p) {
  detail::check_params(z, p, "gta_step");
  std::vector<Point> next(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) next[i] = z[i] + p.epsilon * gta_target(i, z, p.viewing_range);
  return Configuration(std::move(next));
}

// Rows/columns ordered x_0, y_0, x_1, y_1, ...
using JacobianMatrix = Eigen::MatrixXd;

inline JacobianMatrix gta_jacobian(const Configuration& z, const GtaParams& p) {
  detail::check_params(z, p, "gta_jacobian");
  const std::size_t n = z.size();
  const double inv_r2 = 1.0 / (p.viewing_range * p.viewing_range);
  const double k = p.epsilon / static_cast<double>(n);
  JacobianMatrix J = JacobianMatrix::Identity(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Point d = z[j] - z[i];
      const double X = norm2(d) * inv_r2;
      const double b = bump(X);
      const double db = 2.0 * bump_derivative(X) * inv_r2;  // d bump / d(|d|^2)
      const double xx = k * (db * d.x * d.x + b);
      const double yy = k * (db * d.y * d.y + b);
      const double xy = k * db * d.x * d.y;
      J(2 * i, 2 * j) = xx;
      J(2 * i, 2 * j + 1) = xy;
      J(2 * i + 1, 2 * j) = xy;
      J(2 * i + 1, 2 * j + 1) = yy;
      J(2 * i, 2 * i) -= xx;
      J(2 * i, 2 * i + 1) -= xy;
      J(2 * i + 1, 2 * i) -= xy;
      J(2 * i + 1, 2 * i + 1) -= yy;
    }
  }
  return J;
}

struct GershgorinCertificate {
  std::vector<double> centers;
  std::vector<double> radii;
  bool certified = false;
};

inline GershgorinCertificate gershgorin_certify(const Eigen::MatrixXd& J) {
  if (J.rows() != J.cols()) throw PreconditionError("gershgorin_certify: matrix is not square");
  GershgorinCertificate c;
  c.certified = true;
  for (Eigen::Index r = 0; r < J.rows(); ++r) {
    double radius = 0.0;
    for (Eigen::Index col = 0; col < J.cols(); ++col) {
      if (col != r) radius += std::abs(J(r, col));
    }
    c.centers.push_back(J(r, r));
    c.radii.push_back(radius);
    if (!(radius < std::abs(J(r, r)))) c.certified = false;
  }
  return c;
}

// Newton iteration for the configuration whose step is `next`.
inline Configuration gta_invert_step(const Configuration& next, const GtaParams& p, double tol = 1e-13,
                                     int max_iter = 50) {
  detail::check_params(next, p, "gta_invert_step");
  const std::size_t n = next.size();
  auto residual = [&](const Configuration& w) {
    const Configuration fw = gta_step(w, p);
    Eigen::VectorXd r(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      r(2 * i) = fw[i].x - next[i].x;
      r(2 * i + 1) = fw[i].y - next[i].y;
    }
    return r;
  };
  Configuration w = next;
  Eigen::VectorXd r = residual(w);
  for (int it = 0; it < max_iter && r.lpNorm<Eigen::Infinity>() > tol; ++it) {
    const Eigen::VectorXd delta = gta_jacobian(w, p).partialPivLu().solve(r);
    double step = 1.0;
    for (int half = 0; half < 30; ++half, step *= 0.5) {
      Configuration trial = w;
      for (std::size_t i = 0; i < n; ++i) trial[i] -= Point{delta(2 * i), delta(2 * i + 1)} * step;
      const Eigen::VectorXd rt = residual(trial);
      if (rt.lpNorm<Eigen::Infinity>() < r.lpNorm<Eigen::Infinity>() || half == 29) {
        w = std::move(trial);
        r = rt;
        break;
      }
    }
  }
  if (!(r.lpNorm<Eigen::Infinity>() <= std::max(tol, 1e-11))) {
    throw GeometryError("gta_invert_step: Newton iteration did not converge (residual " +
                        std::to_string(r.lpNorm<Eigen::Infinity>()) + ")");
  }
  return w;
}

}  // namespace swarmwave
