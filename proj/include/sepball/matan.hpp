#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace sepball {
class Rng;
}

// Dense matrix kernel sized for the pencil lemmas: Jacobi eigensolve and
// one-sided Jacobi SVD (the matrices here are tiny, robustness wins over
// asymptotics), plus the sigma_max pencil bounds and the trigonometric
// matrix-pencil machinery.
namespace sepball::matan {

/// Dense real matrix, row-major storage.
class GenMatrix {
 public:
  GenMatrix() = default;
  GenMatrix(int rows, int cols);
  static GenMatrix identity(int n);
  static GenMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }
  double& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
  std::span<const double> data() const { return data_; }

  GenMatrix transpose() const;
  double frobenius_sq() const;
  double frobenius() const;
  bool finite() const;

  GenMatrix& operator+=(const GenMatrix& other);
  GenMatrix& operator-=(const GenMatrix& other);
  GenMatrix& operator*=(double s);
  friend GenMatrix operator+(GenMatrix a, const GenMatrix& b) { return a += b; }
  friend GenMatrix operator-(GenMatrix a, const GenMatrix& b) { return a -= b; }
  friend GenMatrix operator*(double s, GenMatrix a) { return a *= s; }
  friend GenMatrix operator*(const GenMatrix& a, const GenMatrix& b);

  std::vector<double> apply(std::span<const double> x) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Real symmetric matrix. One triangle is stored, so symmetry holds exactly.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n);
  static SymMatrix identity(int n);
  static SymMatrix diagonal(std::span<const double> d);
  static SymMatrix diagonal(std::initializer_list<double> d);
  /// Requires |a - a^T| <= tol * |a|; stores the lower triangle of a.
  static SymMatrix from_full(const GenMatrix& a, double tol = 1e-12);
  static SymMatrix symmetrized(const GenMatrix& a);

  int size() const { return n_; }
  double operator()(int i, int j) const { return tri_[slot(i, j)]; }
  void set(int i, int j, double v) { tri_[slot(i, j)] = v; }
  GenMatrix full() const;
  double frobenius_sq() const;
  double frobenius() const;

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double s);
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

 private:
  int n_ = 0;
  std::vector<double> tri_;  // lower triangle, row-major

  std::size_t slot(int i, int j) const {
    if (i < j) std::swap(i, j);
    return std::size_t(i) * (i + 1) / 2 + j;
  }
};

/// Shift vector v and matrices M_0..M_m of a sigma_max pencil condition
/// sigma_max(M_0 + sum_k x_k M_k) <= 1 + x.v on the unit sphere.
struct MatrixPencil {
  std::vector<double> shift;     // v, length m
  std::vector<GenMatrix> mats;   // M_0..M_m

  int size() const { return mats.empty() ? 0 : mats.front().rows(); }
  int terms() const { return static_cast<int>(mats.size()) - 1; }
  GenMatrix at_point(std::span<const double> x) const;
  void validate() const;
};

// ---------------------------------------------------------------- spectral

struct EigResult {
  std::vector<double> values;  // descending
  GenMatrix vectors;           // columns are eigenvectors, same order
};

EigResult eig_sym(const SymMatrix& a);
std::vector<double> eigvals_sym(const SymMatrix& a);  // descending
double min_eigenvalue(const SymMatrix& a);

struct SvdResult {
  GenMatrix u;                // rows x min(rows, cols)
  std::vector<double> sigma;  // descending, nonnegative
  GenMatrix v;                // cols x min(rows, cols); m = u diag(sigma) v^T
};

SvdResult svd(const GenMatrix& m);
double sigma_max(const GenMatrix& m);

std::optional<GenMatrix> cholesky(const SymMatrix& a);  // lower factor, nullopt if not PD
SymMatrix spd_inverse(const SymMatrix& a);
SymMatrix sym_sqrt(const SymMatrix& a);  // PSD square root

/// Haar-distributed orthogonal matrix (QR of a Gaussian sample).
GenMatrix random_orthogonal(int n, Rng& rng);

// ---------------------------------------------------------------- lemma ops

/// Spectrum of [[alpha I, M], [M^T, beta I]] from the singular values of M:
/// (alpha+beta)/2 +- sqrt(((alpha-beta)/2)^2 + sigma_k^2), returned descending.
std::vector<double> block_spectrum(double alpha, double beta, const GenMatrix& m);

/// sum_k lambda_k mu_k with both spectra sorted descending; an upper bound on
/// |C|_F^2 for any C making [[A, C], [C^T, B]] PSD.
double trace_pairing_bound(const SymMatrix& a, const SymMatrix& b);

struct TrigPencilMin {
  double value;       // refined minimum of lambda_min over phi
  double phi;         // refined argmin
  double grid_value;  // best value seen on the scan grid
  double grid_phi;
};

/// Scans lambda_min(A0 + cos(phi) A1 + sin(phi) A2) over [-pi, pi] on a grid
/// of grid_size points, then polishes the best point by golden section.
TrigPencilMin trig_pencil_min_eig(const SymMatrix& a0, const SymMatrix& a1,
                                  const SymMatrix& a2, int grid_size);

/// The 2n x 2n block matrix [[A0+A1, A2+X], [A2-X, A0-A1]] (X skew).
SymMatrix trig_lmi_block(const SymMatrix& a0, const SymMatrix& a1, const SymMatrix& a2,
                         const GenMatrix& x_skew);

/// lambda_min of the block matrix above; >= 0 certifies the pencil
/// A0 + cos(phi) A1 + sin(phi) A2 >= 0 uniformly in phi.
double trig_lmi_verify(const SymMatrix& a0, const SymMatrix& a1, const SymMatrix& a2,
                       const GenMatrix& x_skew);

struct TrigLmiSearchResult {
  std::optional<GenMatrix> skew;  // feasible X on success
  double margin;                  // lambda_min of the final affine iterate
  int iterations;
};

/// Searches for a skew X making the block matrix PSD by alternating
/// projections between the PSD cone and the affine slice parameterized by X.
/// Failure after the iteration cap is inconclusive, not a refutation.
TrigLmiSearchResult trig_lmi_search(const SymMatrix& a0, const SymMatrix& a1,
                                    const SymMatrix& a2, int max_iterations = 10000);

struct PencilMarginResult {
  double value;                // largest sigma_max(M(x)) - (1 + x.v) found
  std::vector<double> argmax;  // unit vector attaining it
};

/// Best-effort maximization of sigma_max(M_0 + sum x_k M_k) - (1 + x.v) over
/// the unit sphere (projected gradient, random restarts). The result is a
/// lower bound on the true supremum; <= 0 means no violation was found.
PencilMarginResult pencil_margin(const MatrixPencil& p, int restarts = 64,
                                 std::uint64_t seed = 0);

/// Frobenius-mass bound 2n - (1-|v|^2) + (m-2)(n-1)(1-|v|^2) for odd n.
double pencil_norm_bound(int n, int m, double vnorm);

}  // namespace sepball::matan
