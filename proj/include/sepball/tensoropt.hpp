#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sepball/matan.hpp"

// Order-3 tensor geometry: injective norm by alternating sphere maximization,
// the polar of B (x) B (x) B, its extremal norm-sqrt(7) element, and the
// dual-cone calibration and inequality suite for (L_4 (x) L_4 (x) L_4)^*.
namespace sepball::tensoropt {

using matan::GenMatrix;

/// Order-3 coordinate tensor over R^{n1} (x) R^{n2} (x) R^{n3}, axis-major
/// storage. The geometric results here live on dims 3 and 4, so only those
/// are accepted.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int n1, int n2, int n3);
  static Tensor3 rank_one(std::span<const double> a, std::span<const double> b,
                          std::span<const double> c);
  static Tensor3 basis(int n1, int n2, int n3, int i, int j, int k);

  const std::array<int, 3>& dims() const { return dims_; }
  int dim(int axis) const { return dims_[axis]; }
  std::size_t size() const { return coords_.size(); }

  double operator()(int i, int j, int k) const { return coords_[index(i, j, k)]; }
  double& operator()(int i, int j, int k) { return coords_[index(i, j, k)]; }
  std::span<const double> coords() const { return coords_; }
  std::vector<double>& raw() { return coords_; }

  double norm_sq() const;
  double norm() const;
  bool finite() const;

  Tensor3& operator+=(const Tensor3& other);
  Tensor3& operator*=(double s);
  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator*(double s, Tensor3 a) { return a *= s; }

 private:
  std::array<int, 3> dims_{0, 0, 0};
  std::vector<double> coords_;

  std::size_t index(int i, int j, int k) const {
    return (std::size_t(i) * dims_[1] + j) * dims_[2] + k;
  }
};

/// Matrix slices of a tensor along one distinguished axis: for axis 2 the
/// slices are (M_l)_{jk} = x_{jkl}, and analogously for axes 0 and 1.
struct SliceView {
  int axis = 0;
  std::vector<GenMatrix> slices;
};

SliceView slices(const Tensor3& t, int axis);
Tensor3 from_slices(const SliceView& view);

// JSON serialization: {"dims": [n1,n2,n3], "coords": [...]} in axis-major
// order; values round-trip within 1 ulp.
std::string tensor_to_json(const Tensor3& t);
Tensor3 tensor_from_json(const std::string& text);

struct InjectiveNorm {
  double value = 0;  // certified lower bound on max |<x, a(x)b(x)c>| over unit a,b,c
  std::array<std::vector<double>, 3> argmax;
  std::vector<double> sweep_values;  // per-sweep values of the best restart
};

/// Alternating maximization with closed-form factor updates and random
/// restarts. Each sweep is nondecreasing; the result certifies a lower bound.
InjectiveNorm injective_norm(const Tensor3& x, int restarts = 64, std::uint64_t seed = 0);

/// 1 - injective_norm(w); >= 0 empirically certifies w in the polar of the
/// triple projective tensor product of unit balls (dims (3,3,3)).
double polar_margin(const Tensor3& w, int restarts = 64, std::uint64_t seed = 0);

struct ExtremalPair {
  Tensor3 w;  // the norm-sqrt(7) boundary element of the polar
  Tensor3 x;  // w / 7, the closest boundary point of the product body itself
};
ExtremalPair extremal_element();

/// Coordinate transform x'_{jkl} = sum A_{jp} B_{kq} C_{lr} x_{pqr}.
Tensor3 apply_triple_map(const GenMatrix& a, const GenMatrix& b, const GenMatrix& c,
                         const Tensor3& x);

struct RadiusSearch {
  double max_norm = 0;  // largest |w| seen on the empirically-certified polar boundary
  Tensor3 argmax;
  int trials = 0;
};

/// Rescales random tensors onto the polar boundary by their injective norm
/// and tracks the largest Euclidean norm; the seeded start at the extremal
/// element is always included.
RadiusSearch ptp3_inner_radius_search(int trials, int restarts = 64, std::uint64_t seed = 0);

struct TrilinearMin {
  double value = 0;  // best (smallest) <x, (1,u)(x)(1,v)(x)(1,w)> found
  std::array<std::vector<double>, 3> argmin;
};

/// Minimizes the pairing with product extreme rays (1,u)(x)(1,v)(x)(1,w),
/// |u|=|v|=|w|=1, by alternating closed-form updates with restarts. A
/// nonnegative value empirically certifies x in (L_4^{(x)3})^*. Best-effort:
/// the result is an upper bound on the true minimum.
TrilinearMin cone_trilinear_min(const Tensor3& x, int restarts = 128, std::uint64_t seed = 0);

/// A tensor calibrated onto the boundary of (L_4^{(x)3})^* and normalized to
/// x_{000} = 1; margin is the recheck value of cone_trilinear_min.
struct DualElement {
  Tensor3 tensor;
  double margin = 0;
  bool normalized = false;
  double shift = 0;  // the t found by the calibration bisection
};

/// Shifts x along e_{000} until the trilinear minimum vanishes (bisection on
/// t; the minimum is nondecreasing and unbounded in t), then normalizes to
/// x_{000} = 1. Throws if the calibrated root coordinate degenerates to <= 0,
/// which happens exactly on the e_{000} line; callers resample.
DualElement dual_boundary_calibrate(const Tensor3& x, int restarts = 128,
                                    std::uint64_t seed = 0);

/// Averages x with its image under D (x) D (x) Id, D = diag(1,-1,-1,-1):
/// kills every coordinate with exactly one of (i, j) nonzero, keeps the rest.
Tensor3 symmetrize_dd_id(const Tensor3& x);

struct InequalityTerm {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  double margin = 0;  // rhs - lhs
};

struct InequalityReport {
  // coordinate-class masses (indices >= 1 throughout)
  double single_sq[3] = {0, 0, 0};  // sum x_{k00}^2, x_{0k0}^2, x_{00k}^2
  double pair_sq[3] = {0, 0, 0};    // sum x_{0kl}^2, x_{k0l}^2, x_{kl0}^2
  double full_sq = 0;               // sum x_{ijk}^2
  std::vector<InequalityTerm> terms;
  double worst_margin() const;
  bool all_hold(double tol) const;  // every margin >= -tol
};

/// Evaluates the five inequality families satisfied by normalized elements of
/// (L_4^{(x)3})^*: the <=7 bound in its three axis-distinguished forms, the
/// permutation-averaged <=7 form, the 13/11/9 <= 81 and 7/6/6 <= 51 weighted
/// forms, and the off-root mass bound <= 17/2.
InequalityReport inequality_suite(const DualElement& d);
InequalityReport inequality_suite(const Tensor3& normalized);

/// The integer coefficient identities tying the weighted forms together;
/// exposed so suites can assert them at runtime in exact arithmetic.
bool weighted_form_coefficients_consistent();

}  // namespace sepball::tensoropt
