#pragma once

#include <cmath>
#include <vector>

#include "swarmwave/boundary.hpp"
#include "swarmwave/geometry.hpp"

namespace swarmwave {

inline void check_egtm_epsilon(double epsilon, const char* who) {
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw PreconditionError(std::string(who) + ": epsilon must lie in [0, 0.5)");
}

// Each point moves toward the midpoint of its cyclic neighbors: eps * mid + (1 - eps) * self.
inline std::vector<Point> egtm_step(std::span<const Point> b, double epsilon) {
  check_egtm_epsilon(epsilon, "egtm_step");
  const std::size_t m = b.size();
  if (m == 0) throw PreconditionError("egtm_step: empty cycle");
  std::vector<Point> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Point mid = (b[(k + m - 1) % m] + b[(k + 1) % m]) * 0.5;
    out[k] = mid * epsilon + b[k] * (1.0 - epsilon);
  }
  return out;
}

// Solves the symmetric circulant system with `diag` on the diagonal and `off` on both
// cyclic neighbor positions: cyclic Thomas sweep plus a Sherman-Morrison correction.
inline std::vector<double> solve_circulant_tridiagonal(double diag, double off, const std::vector<double>& rhs) {
  const std::size_t m = rhs.size();
  if (m == 0) return {};
  if (m == 1) {
    const double a = diag + 2.0 * off;
    if (a == 0.0) throw GeometryError("solve_circulant_tridiagonal: singular system");
    return {rhs[0] / a};
  }
  if (m == 2) {
    // both cyclic neighbors of a point are the other point
    const double a = diag;
    const double c = 2.0 * off;
    const double det = a * a - c * c;
    if (det == 0.0) throw GeometryError("solve_circulant_tridiagonal: singular system");
    return {(a * rhs[0] - c * rhs[1]) / det, (a * rhs[1] - c * rhs[0]) / det};
  }
  if (std::abs(diag) <= 2.0 * std::abs(off)) {
    throw GeometryError("solve_circulant_tridiagonal: system is not strictly diagonally dominant");
  }
  // A = T + u v^T with u = (gamma, 0, .., 0, off), v = (1, 0, .., 0, off / gamma)
  const double gamma = -diag;
  std::vector<double> d(m, diag);
  d[0] = diag - gamma;
  d[m - 1] = diag - off * off / gamma;
  auto thomas = [&](std::vector<double> r) {
    std::vector<double> c(m), dd = d;
    c[0] = off / dd[0];
    r[0] /= dd[0];
    for (std::size_t i = 1; i < m; ++i) {
      const double den = dd[i] - off * c[i - 1];
      c[i] = off / den;
      r[i] = (r[i] - off * r[i - 1]) / den;
    }
    for (std::size_t i = m - 1; i-- > 0;) r[i] -= c[i] * r[i + 1];
    return r;
  };
  std::vector<double> u(m, 0.0);
  u[0] = gamma;
  u[m - 1] = off;
  const auto x = thomas(rhs);
  const auto q = thomas(u);
  const double fact = (x[0] + off * x[m - 1] / gamma) / (1.0 + q[0] + off * q[m - 1] / gamma);
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = x[i] - fact * q[i];
  return out;
}

// Previous cycle positions whose step gives `next`.
inline std::vector<Point> egtm_invert(std::span<const Point> next, double epsilon) {
  check_egtm_epsilon(epsilon, "egtm_invert");
  const std::size_t m = next.size();
  if (m == 0) throw PreconditionError("egtm_invert: empty cycle");
  std::vector<double> xs(m), ys(m);
  for (std::size_t k = 0; k < m; ++k) {
    xs[k] = next[k].x;
    ys[k] = next[k].y;
  }
  const auto px = solve_circulant_tridiagonal(1.0 - epsilon, 0.5 * epsilon, xs);
  const auto py = solve_circulant_tridiagonal(1.0 - epsilon, 0.5 * epsilon, ys);
  std::vector<Point> out(m);
  for (std::size_t k = 0; k < m; ++k) out[k] = {px[k], py[k]};
  return out;
}

inline BoundaryCycle egtm_step(const BoundaryCycle& c, double epsilon) {
  BoundaryCycle out = c;
  out.positions = egtm_step(c.positions, epsilon);
  out.outline = out.positions;
  out.crossings = 0;
  return out;
}

inline BoundaryCycle egtm_invert(const BoundaryCycle& c, double epsilon) {
  BoundaryCycle out = c;
  out.positions = egtm_invert(c.positions, epsilon);
  out.outline = out.positions;
  out.crossings = 0;
  return out;
}

}  // namespace swarmwave
