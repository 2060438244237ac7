#include "sepball/conegeo.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sepball/rng.hpp"

namespace sepball::conegeo {

void EllipsoidalCone::validate() const {
  if (ambient_dim < 2) throw std::invalid_argument("EllipsoidalCone: ambient dimension < 2");
  if (p.size() != ambient_dim - 1)
    throw std::invalid_argument("EllipsoidalCone: P has wrong size");
  if (!matan::cholesky(p)) throw std::invalid_argument("EllipsoidalCone: P not positive definite");
}

EllipsoidalCone ball_cone(int n, double r) {
  if (n < 2) throw std::invalid_argument("ball_cone: n must be >= 2");
  if (!(r > 0) || !std::isfinite(r)) throw std::invalid_argument("ball_cone: r must be > 0");
  SymMatrix p(n - 1);
  for (int i = 0; i < n - 1; ++i) p.set(i, i, 1.0 / (r * r));
  return {n, p};
}

EllipsoidalCone lorentz_cone(int n) { return ball_cone(n, 1.0); }

BallConeParam ball_param_from_rho(int n, double rho) {
  return {n, ball_to_cone_param(rho), rho};
}

BallConeParam ball_param_from_r(int n, double r) {
  return {n, r, cone_to_ball_param(r)};
}

Membership lorentz_contains(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("lorentz_contains: need dimension >= 2");
  double tail = 0;
  for (std::size_t i = 1; i < x.size(); ++i) tail += x[i] * x[i];
  const double margin = x[0] - std::sqrt(tail);
  return {margin >= 0, margin};
}

Membership ellipsoidal_contains(const EllipsoidalCone& k, std::span<const double> x) {
  if (static_cast<int>(x.size()) != k.ambient_dim)
    throw std::invalid_argument("ellipsoidal_contains: dimension mismatch");
  const int t = k.ambient_dim - 1;
  double quad = 0;
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j) quad += x[1 + i] * k.p(i, j) * x[1 + j];
  quad = std::max(quad, 0.0);
  const double margin = x[0] - std::sqrt(quad);
  return {margin >= 0, margin};
}

EllipsoidalCone ellipsoidal_dual(const EllipsoidalCone& k) {
  k.validate();
  return {k.ambient_dim, matan::spd_inverse(k.p)};
}

double ball_to_cone_param(double rho) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("ball_to_cone_param: rho must lie in (0, 1)");
  return rho / std::sqrt(1.0 - rho * rho);
}

double cone_to_ball_param(double r) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw std::invalid_argument("cone_to_ball_param: r must be > 0");
  return r / std::sqrt(1.0 + r * r);
}

double inclusion_radius(int n, int m, double r1, double r2) {
  if (n < 2 || m < 2) throw std::invalid_argument("inclusion_radius: n, m must be >= 2");
  if (!(r1 > 0) || !(r2 > 0)) throw std::invalid_argument("inclusion_radius: radii must be > 0");
  const double a = -1.0 + (1.0 + 1.0 / (r1 * r1)) * (1.0 + 1.0 / (r2 * r2));
  const double b = (std::min(n, m) - 1) / (r1 * r1 * r2 * r2);
  return 1.0 / std::sqrt(std::max(a, b));
}

Rational inclusion_radius_sq(int n, int m, const Rational& r1_sq, const Rational& r2_sq) {
  if (n < 2 || m < 2) throw std::invalid_argument("inclusion_radius_sq: n, m must be >= 2");
  const Rational one(1);
  const Rational a = (one + r1_sq.inverse()) * (one + r2_sq.inverse()) - one;
  const Rational b = Rational(std::min(n, m) - 1) * r1_sq.inverse() * r2_sq.inverse();
  return Rational::max(a, b).inverse();
}

double matrix_ball_radius(int m, int n, double r1, double r2) {
  if (m < 1 || n < 1) throw std::invalid_argument("matrix_ball_radius: m, n must be >= 1");
  if (!(r1 > 0) || !(r1 < std::sqrt(double(m))))
    throw std::invalid_argument("matrix_ball_radius: need 0 < r1 < sqrt(m)");
  if (!(r2 > 0) || !(r2 < std::sqrt(double(n))))
    throw std::invalid_argument("matrix_ball_radius: need 0 < r2 < sqrt(n)");
  const double minsq = std::min(double(m) * m, double(n) * n);
  const double denom =
      (minsq - 1.0) * (m - r1 * r1) * (n - r2 * r2) + r1 * r1 * r2 * r2;
  const double second = std::sqrt(double(m) * n) * r1 * r2 / std::sqrt(denom);
  return std::min(r1 * r2, second);
}

Rational matrix_ball_radius_sq(int m, int n, const Rational& r1_sq, const Rational& r2_sq) {
  if (m < 1 || n < 1) throw std::invalid_argument("matrix_ball_radius_sq: m, n must be >= 1");
  if (!(Rational(0) < r1_sq && r1_sq < Rational(m)))
    throw std::invalid_argument("matrix_ball_radius_sq: need 0 < r1^2 < m");
  if (!(Rational(0) < r2_sq && r2_sq < Rational(n)))
    throw std::invalid_argument("matrix_ball_radius_sq: need 0 < r2^2 < n");
  const long long minsq = std::min(static_cast<long long>(m) * m, static_cast<long long>(n) * n);
  const Rational prod = r1_sq * r2_sq;
  const Rational denom =
      Rational(minsq - 1) * (Rational(m) - r1_sq) * (Rational(n) - r2_sq) + prod;
  const Rational second = Rational(static_cast<long long>(m) * n) * prod / denom;
  return Rational::min(prod, second);
}

namespace {

long long pow_ll(long long base, int exp) {
  long long v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

}  // namespace

RhoSequence rho_sequence(int k_max) {
  if (k_max < 3) throw std::invalid_argument("rho_sequence: k_max must be >= 3");
  RhoSequence seq;
  seq.rows.reserve(k_max - 2);

  Rational inv_sq(19, 16);        // rho_3^{-2}
  Rational prior_inv_sq(5, 4);    // 4/5-seeded chain
  double rec = 16.0 / 19.0;       // float recursion carries rho_k^2

  for (int k = 3; k <= k_max; ++k) {
    if (k > 3) {
      const Rational step(1, pow_ll(2, k - 1));
      inv_sq = Rational(3, 2) * inv_sq - step;
      prior_inv_sq = Rational(3, 2) * prior_inv_sq - step;
      rec = 1.0 / (1.5 / rec - std::pow(2.0, -(k - 1)));
    }
    RhoRow row;
    row.k = k;
    row.rho_sq = inv_sq.inverse();
    row.prior_sq = prior_inv_sq.inverse();
    row.closed_form = std::pow(2.0, k / 2.0) / std::sqrt(8.5 * std::pow(3.0, k - 3) + 1.0);
    row.recursion = std::sqrt(rec);
    row.prior = std::sqrt(row.prior_sq.value());
    row.sq_ratio = row.rho_sq / row.prior_sq;
    row.radius_ratio = std::sqrt(row.sq_ratio.value());
    seq.rows.push_back(row);
  }
  return seq;
}

const RhoRow& RhoSequence::row(int k) const {
  for (const auto& r : rows)
    if (r.k == k) return r;
  throw std::out_of_range("RhoSequence: no such k");
}

namespace {

struct RayDescent {
  double margin;
  std::vector<double> argmin;
};

// Minimizes the Lorentz margin of M(1,u) over unit u by projected gradient
// descent with restarts.
RayDescent ray_margin_min(const GenMatrix& m, int restarts, std::uint64_t seed) {
  const int t = m.cols() - 1;
  auto eval = [&](std::span<const double> u) {
    std::vector<double> arg(m.cols());
    arg[0] = 1.0;
    for (int i = 0; i < t; ++i) arg[1 + i] = u[i];
    const auto y = m.apply(arg);
    double tail = 0;
    for (std::size_t i = 1; i < y.size(); ++i) tail += y[i] * y[i];
    return y[0] - std::sqrt(tail);
  };

  RayDescent best{std::numeric_limits<double>::infinity(), {}};
  for (int r = 0; r < restarts; ++r) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(r));
    std::vector<double> u = rng.unit_vector(t);
    double f = eval(u);

    for (int iter = 0; iter < 200; ++iter) {
      // y = M (1, u); d margin / d u_k = M_{0,k+1} - (y~ . M~_{:,k+1}) / |y~|
      std::vector<double> arg(m.cols());
      arg[0] = 1.0;
      for (int i = 0; i < t; ++i) arg[1 + i] = u[i];
      const auto y = m.apply(arg);
      double tail = 0;
      for (std::size_t i = 1; i < y.size(); ++i) tail += y[i] * y[i];
      tail = std::sqrt(tail);

      std::vector<double> g(t, 0.0);
      for (int k = 0; k < t; ++k) {
        g[k] = m(0, k + 1);
        if (tail > 1e-14) {
          double s = 0;
          for (int i = 1; i < m.rows(); ++i) s += y[i] * m(i, k + 1);
          g[k] -= s / tail;
        }
      }
      // tangential norm drives convergence; the step itself follows the full
      // gradient, which the renormalization retracts without the pole
      // oscillation a projected step suffers from
      double gu = 0;
      for (int k = 0; k < t; ++k) gu += g[k] * u[k];
      double gn = 0;
      for (int k = 0; k < t; ++k) gn += (g[k] - gu * u[k]) * (g[k] - gu * u[k]);
      gn = std::sqrt(gn);
      if (gn < 1e-13) break;

      double step = 1.0;
      bool moved = false;
      while (step * gn >= 1e-14) {
        std::vector<double> un(t);
        double nn = 0;
        for (int k = 0; k < t; ++k) {
          un[k] = u[k] - step * g[k];
          nn += un[k] * un[k];
        }
        nn = std::sqrt(nn);
        if (nn < 1e-14) {
          step *= 0.5;
          continue;
        }
        for (double& v : un) v /= nn;
        const double fn = eval(un);
        if (fn < f - 1e-4 * step * gn * gn) {
          u = std::move(un);
          f = fn;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved || step * gn < 1e-13) break;
    }

    if (f < best.margin) {
      best.margin = f;
      best.argmin = u;
    }
  }
  return best;
}

}  // namespace

MapPositivity lorentz_map_positive(const GenMatrix& m, int restarts, std::uint64_t seed) {
  if (m.rows() != 4 || m.cols() != 4)
    throw std::invalid_argument("lorentz_map_positive: expected a 4x4 map");
  if (!m.finite()) throw std::invalid_argument("lorentz_map_positive: non-finite entries");
  const auto direct = ray_margin_min(m, restarts, seed);
  const auto adjoint = ray_margin_min(m.transpose(), restarts, seed + 1);
  return {direct.margin, direct.argmin, adjoint.margin, adjoint.argmin};
}

EllipsoidalCone cone_image_dual(const GenMatrix& a, const EllipsoidalCone& k) {
  k.validate();
  const int n = k.ambient_dim;
  if (a.rows() != n || a.cols() != n)
    throw std::invalid_argument("cone_image_dual: map dimension mismatch");
  const double scale = std::max(1.0, a.frobenius());
  for (int i = 1; i < n; ++i) {
    if (std::abs(a(0, i)) > 1e-12 * scale || std::abs(a(i, 0)) > 1e-12 * scale)
      throw std::invalid_argument(
          "cone_image_dual: map must be axis-preserving (block diagonal)");
  }
  const double a00 = a(0, 0);
  if (!(a00 > 0)) throw std::invalid_argument("cone_image_dual: axis scale must be positive");

  GenMatrix tail(n - 1, n - 1);
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < n - 1; ++j) tail(i, j) = a(1 + i, 1 + j);
  const auto dec = matan::svd(tail);
  if (dec.sigma.back() <= 1e-12 * dec.sigma.front())
    throw std::invalid_argument("cone_image_dual: map is singular");

  // dual(A[K_ell(P)]) = A^{-T}[K_ell(P^{-1})] = K_ell(a00^{-2} A1 P^{-1} A1^T)
  const SymMatrix pinv = matan::spd_inverse(k.p);
  const GenMatrix q = tail * pinv.full() * tail.transpose();
  SymMatrix out = SymMatrix::symmetrized(q);
  out *= 1.0 / (a00 * a00);
  return {n, out};
}

}  // namespace sepball::conegeo
