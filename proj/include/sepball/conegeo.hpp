#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sepball/matan.hpp"
#include "sepball/rational.hpp"

// Lorentz and ellipsoidal cone calculus: membership margins, duality,
// ball/cone parameter conversions, pairwise inclusion radii, and the
// multi-qubit radius sequence rho_k.
namespace sepball::conegeo {

using matan::GenMatrix;
using matan::SymMatrix;

/// Standardized ellipsoidal cone K_ell(P) = { x : x_0 >= sqrt(x~^T P x~) }
/// with x~ the tail (x_1, ..., x_{n-1}) and P positive definite.
struct EllipsoidalCone {
  int ambient_dim = 0;  // n
  SymMatrix p;          // (n-1) x (n-1)

  void validate() const;  // throws unless P is PD of the right size
};

/// K_ball^n(r) = K_ell(r^{-2} I_{n-1}); the Lorentz cone is K_ball^n(1).
EllipsoidalCone ball_cone(int n, double r);
EllipsoidalCone lorentz_cone(int n);

/// Opening parameter r and generating-ball radius rho of the same cone,
/// tied together by r = rho / sqrt(1 - rho^2).
struct BallConeParam {
  int ambient_dim = 0;
  double r = 0;
  double rho = 0;
};
BallConeParam ball_param_from_rho(int n, double rho);
BallConeParam ball_param_from_r(int n, double r);

struct Membership {
  bool inside = false;
  double margin = 0;  // >= 0 iff inside
};

Membership lorentz_contains(std::span<const double> x);
Membership ellipsoidal_contains(const EllipsoidalCone& k, std::span<const double> x);

/// (K_ell(P))^* = K_ell(P^{-1}).
EllipsoidalCone ellipsoidal_dual(const EllipsoidalCone& k);

double ball_to_cone_param(double rho);  // rho in (0,1) -> r
double cone_to_ball_param(double r);    // r > 0 -> rho

/// Largest r with K_ball^{nm}(r) inside K_ball^n(r1) (x) K_ball^m(r2).
double inclusion_radius(int n, int m, double r1, double r2);
/// Same quantity squared, in exact rational arithmetic on squared inputs.
Rational inclusion_radius_sq(int n, int m, const Rational& r1_sq, const Rational& r2_sq);

/// Radius of the largest ball around I_{mn} inside the separable cone built
/// from balls of radii r1 < sqrt(m), r2 < sqrt(n) around I_m, I_n.
double matrix_ball_radius(int m, int n, double r1, double r2);
Rational matrix_ball_radius_sq(int m, int n, const Rational& r1_sq, const Rational& r2_sq);

struct RhoRow {
  int k = 0;
  Rational rho_sq;        // closed form 2^{k+1} / (17 * 3^{k-3} + 2), exact
  double closed_form;     // 2^{k/2} / sqrt(17/2 * 3^{k-3} + 1)
  double recursion;       // float recursion seeded at rho_3^{-2} = 19/16
  Rational prior_sq;      // same recursion seeded at 4/5
  double prior;           // sqrt of prior_sq
  Rational sq_ratio;      // rho_sq / prior_sq
  double radius_ratio;    // sqrt of sq_ratio
};

struct RhoSequence {
  std::vector<RhoRow> rows;  // k = 3 .. k_max
  const RhoRow& row(int k) const;
};

/// Separable-ball radii rho_k for k-qubit systems, k = 3..k_max, with the
/// 4/5-seeded comparison chain alongside.
RhoSequence rho_sequence(int k_max);

struct MapPositivity {
  double margin = 0;  // worst Lorentz margin of M(1,u) over unit u
  std::vector<double> argmin;
  double transpose_margin = 0;  // same for M^T (self-duality symmetry)
  std::vector<double> transpose_argmin;
  double worst() const { return margin < transpose_margin ? margin : transpose_margin; }
};

/// Best-effort check that a 4x4 map sends L_4 into L_4: minimizes the Lorentz
/// margin of M(1,u) over the extreme rays (1,u), |u| = 1, with restarts.
/// A nonnegative worst margin certifies membership in P_4 empirically.
MapPositivity lorentz_map_positive(const GenMatrix& m, int restarts = 32,
                                   std::uint64_t seed = 0);

/// Dual cone of the image A[K] for an axis-preserving invertible A
/// (block-diagonal: A e_0 = a e_0, tail block invertible), computed as
/// A^{-T}[K_ell(P^{-1})].
EllipsoidalCone cone_image_dual(const GenMatrix& a, const EllipsoidalCone& k);

}  // namespace sepball::conegeo
