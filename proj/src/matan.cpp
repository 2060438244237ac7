#include "sepball/matan.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sepball/rng.hpp"

namespace sepball::matan {

namespace {

bool all_finite(std::span<const double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

// ------------------------------------------------------------ GenMatrix

GenMatrix::GenMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("GenMatrix: negative dimension");
  data_.assign(std::size_t(rows) * cols, 0.0);
}

GenMatrix GenMatrix::identity(int n) {
  GenMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

GenMatrix GenMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
  GenMatrix m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c)
      throw std::invalid_argument("GenMatrix: ragged row list");
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

GenMatrix GenMatrix::transpose() const {
  GenMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double GenMatrix::frobenius_sq() const {
  double s = 0;
  for (double v : data_) s += v * v;
  return s;
}

double GenMatrix::frobenius() const { return std::sqrt(frobenius_sq()); }

bool GenMatrix::finite() const { return all_finite(data_); }

GenMatrix& GenMatrix::operator+=(const GenMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("GenMatrix: size mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

GenMatrix& GenMatrix::operator-=(const GenMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("GenMatrix: size mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

GenMatrix& GenMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

GenMatrix operator*(const GenMatrix& a, const GenMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("GenMatrix: product size mismatch");
  GenMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

std::vector<double> GenMatrix::apply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != cols_)
    throw std::invalid_argument("GenMatrix: apply size mismatch");
  std::vector<double> y(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    double s = 0;
    for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

// ------------------------------------------------------------ SymMatrix

SymMatrix::SymMatrix(int n) : n_(n) {
  if (n < 0) throw std::invalid_argument("SymMatrix: negative dimension");
  tri_.assign(std::size_t(n) * (n + 1) / 2, 0.0);
}

SymMatrix SymMatrix::identity(int n) {
  SymMatrix m(n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.size(); ++i) m.set(i, i, d[i]);
  return m;
}

SymMatrix SymMatrix::diagonal(std::initializer_list<double> d) {
  return diagonal(std::span<const double>(d.begin(), d.size()));
}

SymMatrix SymMatrix::from_full(const GenMatrix& a, double tol) {
  if (!a.square()) throw std::invalid_argument("SymMatrix: input not square");
  double dev = 0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < i; ++j) dev += (a(i, j) - a(j, i)) * (a(i, j) - a(j, i));
  if (std::sqrt(dev) > tol * std::max(1.0, a.frobenius()))
    throw std::invalid_argument("SymMatrix: input not symmetric");
  SymMatrix m(a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j <= i; ++j) m.set(i, j, a(i, j));
  return m;
}

SymMatrix SymMatrix::symmetrized(const GenMatrix& a) {
  if (!a.square()) throw std::invalid_argument("SymMatrix: input not square");
  SymMatrix m(a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j <= i; ++j) m.set(i, j, 0.5 * (a(i, j) + a(j, i)));
  return m;
}

GenMatrix SymMatrix::full() const {
  GenMatrix a(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) a(i, j) = (*this)(i, j);
  return a;
}

double SymMatrix::frobenius_sq() const {
  double s = 0;
  for (int i = 0; i < n_; ++i) {
    s += (*this)(i, i) * (*this)(i, i);
    for (int j = 0; j < i; ++j) s += 2.0 * (*this)(i, j) * (*this)(i, j);
  }
  return s;
}

double SymMatrix::frobenius() const { return std::sqrt(frobenius_sq()); }

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  if (n_ != other.n_) throw std::invalid_argument("SymMatrix: size mismatch");
  for (std::size_t i = 0; i < tri_.size(); ++i) tri_[i] += other.tri_[i];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  if (n_ != other.n_) throw std::invalid_argument("SymMatrix: size mismatch");
  for (std::size_t i = 0; i < tri_.size(); ++i) tri_[i] -= other.tri_[i];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (double& v : tri_) v *= s;
  return *this;
}

// ------------------------------------------------------------ MatrixPencil

GenMatrix MatrixPencil::at_point(std::span<const double> x) const {
  validate();
  if (static_cast<int>(x.size()) != terms())
    throw std::invalid_argument("MatrixPencil: point size mismatch");
  GenMatrix m = mats[0];
  for (std::size_t k = 1; k < mats.size(); ++k) {
    const double xk = x[k - 1];
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) m(i, j) += xk * mats[k](i, j);
  }
  return m;
}

void MatrixPencil::validate() const {
  if (mats.size() < 2) throw std::invalid_argument("MatrixPencil: needs M_0 and at least one M_k");
  const int n = mats.front().rows();
  for (const auto& m : mats) {
    if (!m.square() || m.rows() != n) throw std::invalid_argument("MatrixPencil: sizes differ");
    if (!m.finite()) throw std::invalid_argument("MatrixPencil: non-finite matrix");
  }
  if (shift.size() != mats.size() - 1)
    throw std::invalid_argument("MatrixPencil: shift length must equal the number of M_k");
  if (!all_finite(shift)) throw std::invalid_argument("MatrixPencil: non-finite shift");
}

// ------------------------------------------------------------ eigensolve

namespace {

// Cyclic Jacobi on full symmetric storage; vecs (if given) starts as identity
// and accumulates the rotations columnwise.
void jacobi_sym(std::vector<double>& a, int n, std::vector<double>* vecs) {
  auto at = [&](int i, int j) -> double& { return a[std::size_t(i) * n + j]; };
  double fro = 0;
  for (double v : a) fro += v * v;
  fro = std::sqrt(fro);
  if (fro == 0.0) return;
  const double stop_off_sq = (1e-15 * fro) * (1e-15 * fro);

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off_sq = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off_sq += 2.0 * at(i, j) * at(i, j);
    if (off_sq <= stop_off_sq) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (std::abs(apq) <= 1e-30 * fro) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 1.0 / (2.0 * theta);
        } else {
          t = ((theta >= 0) ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = at(i, p), aiq = at(i, q);
          at(i, p) = c * aip - s * aiq;
          at(i, q) = s * aip + c * aiq;
        }
        for (int j = 0; j < n; ++j) {
          const double apj = at(p, j), aqj = at(q, j);
          at(p, j) = c * apj - s * aqj;
          at(q, j) = s * apj + c * aqj;
        }
        if (vecs) {
          for (int i = 0; i < n; ++i) {
            const double vip = (*vecs)[std::size_t(i) * n + p];
            const double viq = (*vecs)[std::size_t(i) * n + q];
            (*vecs)[std::size_t(i) * n + p] = c * vip - s * viq;
            (*vecs)[std::size_t(i) * n + q] = s * vip + c * viq;
          }
        }
      }
    }
  }
}

// Householder reduction of a full symmetric matrix to tridiagonal form,
// eigenvalues-only variant. On return d holds the diagonal and e the
// subdiagonal (e[0] unused). Used for the larger embeddings coming from
// qsep, where Jacobi sweeps get expensive.
void tridiagonalize_values(std::vector<double>& a, int n, std::vector<double>& d,
                           std::vector<double>& e) {
  auto at = [&](int i, int j) -> double& { return a[std::size_t(i) * n + j]; };
  d.assign(n, 0.0);
  e.assign(n, 0.0);

  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0;
    double scale = 0.0;
    if (l > 0) {
      for (int k = 0; k <= l; ++k) scale += std::abs(at(i, k));
      if (scale == 0.0) {
        e[i] = at(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          at(i, k) /= scale;
          h += at(i, k) * at(i, k);
        }
        double f = at(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        at(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
          for (int k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
          e[j] = g / h;
          f += e[j] * at(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = at(i, j);
          g = e[j] - hh * f;
          e[j] = g;
          for (int k = 0; k <= j; ++k) at(j, k) -= f * e[k] + g * at(i, k);
        }
      }
    } else {
      e[i] = at(i, l);
    }
    d[i] = h;
  }
  for (int i = 0; i < n; ++i) d[i] = at(i, i);
}

// Implicit-shift QL on a tridiagonal (d, e), eigenvalues only.
void tql_values(std::vector<double>& d, std::vector<double>& e, int n) {
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 50) throw std::runtime_error("tql_values: too many iterations");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

std::vector<double> full_from_sym(const SymMatrix& a) {
  const int n = a.size();
  std::vector<double> full(std::size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) full[std::size_t(i) * n + j] = a(i, j);
  return full;
}

}  // namespace

EigResult eig_sym(const SymMatrix& a) {
  const int n = a.size();
  auto work = full_from_sym(a);
  if (!all_finite(work)) throw std::invalid_argument("eig_sym: non-finite entries");
  std::vector<double> vecs(std::size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i) vecs[std::size_t(i) * n + i] = 1.0;
  jacobi_sym(work, n, &vecs);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return work[std::size_t(i) * n + i] > work[std::size_t(j) * n + j];
  });

  EigResult out;
  out.values.resize(n);
  out.vectors = GenMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = work[std::size_t(order[k]) * n + order[k]];
    for (int i = 0; i < n; ++i) out.vectors(i, k) = vecs[std::size_t(i) * n + order[k]];
  }
  return out;
}

std::vector<double> eigvals_sym(const SymMatrix& a) {
  const int n = a.size();
  auto work = full_from_sym(a);
  if (!all_finite(work)) throw std::invalid_argument("eigvals_sym: non-finite entries");
  std::vector<double> values(n);
  if (n > 24) {
    std::vector<double> d, e;
    tridiagonalize_values(work, n, d, e);
    tql_values(d, e, n);
    values = d;
    std::sort(values.begin(), values.end(), std::greater<>());
    return values;
  }
  jacobi_sym(work, n, nullptr);
  for (int i = 0; i < n; ++i) values[i] = work[std::size_t(i) * n + i];
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

double min_eigenvalue(const SymMatrix& a) { return eigvals_sym(a).back(); }

// ------------------------------------------------------------ SVD

SvdResult svd(const GenMatrix& m) {
  if (!m.finite()) throw std::invalid_argument("svd: non-finite entries");
  if (m.rows() < m.cols()) {
    auto r = svd(m.transpose());
    return {std::move(r.v), std::move(r.sigma), std::move(r.u)};
  }
  const int rows = m.rows();
  const int n = m.cols();
  GenMatrix a = m;
  GenMatrix v = GenMatrix::identity(n);
  const double fro = a.frobenius();

  // One-sided Jacobi: rotate column pairs until mutually orthogonal.
  if (fro > 0.0) {
    for (int sweep = 0; sweep < 60; ++sweep) {
      bool changed = false;
      for (int p = 0; p < n - 1; ++p) {
        for (int q = p + 1; q < n; ++q) {
          double alpha = 0, beta = 0, gamma = 0;
          for (int i = 0; i < rows; ++i) {
            alpha += a(i, p) * a(i, p);
            beta += a(i, q) * a(i, q);
            gamma += a(i, p) * a(i, q);
          }
          if (gamma == 0.0 || std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
          changed = true;
          const double zeta = (beta - alpha) / (2.0 * gamma);
          const double t =
              ((zeta >= 0) ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const double s = c * t;
          for (int i = 0; i < rows; ++i) {
            const double aip = a(i, p), aiq = a(i, q);
            a(i, p) = c * aip - s * aiq;
            a(i, q) = s * aip + c * aiq;
          }
          for (int i = 0; i < n; ++i) {
            const double vip = v(i, p), viq = v(i, q);
            v(i, p) = c * vip - s * viq;
            v(i, q) = s * vip + c * viq;
          }
        }
      }
      if (!changed) break;
    }
  }

  std::vector<double> sig(n);
  for (int j = 0; j < n; ++j) {
    double s = 0;
    for (int i = 0; i < rows; ++i) s += a(i, j) * a(i, j);
    sig[j] = std::sqrt(s);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return sig[i] > sig[j]; });

  SvdResult out;
  out.sigma.resize(n);
  out.u = GenMatrix(rows, n);
  out.v = GenMatrix(n, n);
  std::vector<int> pending;  // exactly-zero columns, filled by completion below
  for (int k = 0; k < n; ++k) {
    const int j = order[k];
    out.sigma[k] = sig[j];
    for (int i = 0; i < n; ++i) out.v(i, k) = v(i, j);
    if (sig[j] > 0.0) {
      for (int i = 0; i < rows; ++i) out.u(i, k) = a(i, j) / sig[j];
    } else {
      pending.push_back(k);
    }
  }
  // Orthonormal completion for null columns: take the basis vector with the
  // largest residual against the columns filled so far (its norm is at least
  // 1/sqrt(rows)).
  for (int k : pending) {
    std::vector<double> best;
    double best_norm = 0;
    for (int cand = 0; cand < rows; ++cand) {
      std::vector<double> w(rows, 0.0);
      w[cand] = 1.0;
      for (int c = 0; c < n; ++c) {
        if (c == k || (out.sigma[c] == 0.0 && c > k)) continue;
        double d = 0;
        for (int i = 0; i < rows; ++i) d += out.u(i, c) * w[i];
        for (int i = 0; i < rows; ++i) w[i] -= d * out.u(i, c);
      }
      const double wn = norm(w);
      if (wn > best_norm) {
        best_norm = wn;
        best = std::move(w);
      }
    }
    for (int i = 0; i < rows; ++i) out.u(i, k) = best[i] / best_norm;
  }
  return out;
}

double sigma_max(const GenMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return svd(m).sigma.front();
}

// ------------------------------------------------------------ Cholesky

std::optional<GenMatrix> cholesky(const SymMatrix& a) {
  const int n = a.size();
  GenMatrix l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return std::nullopt;
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

SymMatrix spd_inverse(const SymMatrix& a) {
  const int n = a.size();
  auto lopt = cholesky(a);
  if (!lopt) throw std::invalid_argument("spd_inverse: matrix not positive definite");
  const GenMatrix& l = *lopt;
  GenMatrix inv(n, n);
  // Solve L L^T x = e_j per column.
  std::vector<double> y(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double s = (i == j) ? 1.0 : 0.0;
      for (int k = 0; k < i; ++k) s -= l(i, k) * y[k];
      y[i] = s / l(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = y[i];
      for (int k = i + 1; k < n; ++k) s -= l(k, i) * inv(k, j);
      inv(i, j) = s / l(i, i);
    }
  }
  return SymMatrix::symmetrized(inv);
}

SymMatrix sym_sqrt(const SymMatrix& a) {
  auto eig = eig_sym(a);
  const int n = a.size();
  const double floor = -1e-10 * std::max(1.0, a.frobenius());
  GenMatrix root(n, n);
  for (int k = 0; k < n; ++k) {
    double lam = eig.values[k];
    if (lam < floor) throw std::invalid_argument("sym_sqrt: matrix not PSD");
    lam = std::max(lam, 0.0);
    const double r = std::sqrt(lam);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) root(i, j) += r * eig.vectors(i, k) * eig.vectors(j, k);
  }
  return SymMatrix::symmetrized(root);
}

GenMatrix random_orthogonal(int n, Rng& rng) {
  GenMatrix q(n, n);
  for (int j = 0; j < n; ++j) {
    std::vector<double> w;
    double wn = 0;
    do {
      w = rng.gaussian_vector(n);
      for (int pass = 0; pass < 2; ++pass) {
        for (int c = 0; c < j; ++c) {
          double d = 0;
          for (int i = 0; i < n; ++i) d += q(i, c) * w[i];
          for (int i = 0; i < n; ++i) w[i] -= d * q(i, c);
        }
      }
      wn = norm(w);
    } while (wn < 1e-8);
    for (int i = 0; i < n; ++i) q(i, j) = w[i] / wn;
  }
  return q;
}

// ------------------------------------------------------------ lemma ops

std::vector<double> block_spectrum(double alpha, double beta, const GenMatrix& m) {
  if (!m.square()) throw std::invalid_argument("block_spectrum: M must be square");
  if (!m.finite() || !std::isfinite(alpha) || !std::isfinite(beta))
    throw std::invalid_argument("block_spectrum: non-finite input");
  const double mid = 0.5 * (alpha + beta);
  const double half = 0.5 * (alpha - beta);
  std::vector<double> out;
  out.reserve(2 * m.rows());
  for (double s : svd(m).sigma) {
    const double rad = std::sqrt(half * half + s * s);
    out.push_back(mid + rad);
    out.push_back(mid - rad);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double trace_pairing_bound(const SymMatrix& a, const SymMatrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("trace_pairing_bound: size mismatch");
  const auto la = eigvals_sym(a);
  const auto lb = eigvals_sym(b);
  double s = 0;
  for (std::size_t k = 0; k < la.size(); ++k) s += la[k] * lb[k];
  return s;
}

namespace {

SymMatrix trig_pencil_at(const SymMatrix& a0, const SymMatrix& a1, const SymMatrix& a2,
                         double phi) {
  SymMatrix p = a0;
  p += std::cos(phi) * a1;
  p += std::sin(phi) * a2;
  return p;
}

void require_equal_sizes(const SymMatrix& a0, const SymMatrix& a1, const SymMatrix& a2) {
  if (a0.size() != a1.size() || a0.size() != a2.size())
    throw std::invalid_argument("trig pencil: size mismatch");
}

}  // namespace

TrigPencilMin trig_pencil_min_eig(const SymMatrix& a0, const SymMatrix& a1, const SymMatrix& a2,
                                  int grid_size) {
  require_equal_sizes(a0, a1, a2);
  if (grid_size < 8) throw std::invalid_argument("trig_pencil_min_eig: grid_size must be >= 8");

  const double pi = std::acos(-1.0);
  auto value = [&](double phi) { return min_eigenvalue(trig_pencil_at(a0, a1, a2, phi)); };

  TrigPencilMin best{};
  best.grid_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_size; ++i) {
    const double phi = -pi + 2.0 * pi * i / grid_size;
    const double v = value(phi);
    if (v < best.grid_value) {
      best.grid_value = v;
      best.grid_phi = phi;
    }
  }

  // Golden-section refinement around the best grid point.
  const double h = 2.0 * pi / grid_size;
  double lo = best.grid_phi - h, hi = best.grid_phi + h;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = value(x1), f2 = value(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = value(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = value(x2);
    }
  }
  const double mid = 0.5 * (lo + hi);
  const double fm = value(mid);
  best.value = std::min({fm, f1, f2, best.grid_value});
  best.phi = fm <= std::min(f1, f2) ? mid : (f1 < f2 ? x1 : x2);
  if (best.grid_value < best.value) {
    best.value = best.grid_value;
    best.phi = best.grid_phi;
  }
  best.phi = std::remainder(best.phi, 2.0 * pi);
  return best;
}

SymMatrix trig_lmi_block(const SymMatrix& a0, const SymMatrix& a1, const SymMatrix& a2,
                         const GenMatrix& x_skew) {
  require_equal_sizes(a0, a1, a2);
  const int n = a0.size();
  if (x_skew.rows() != n || x_skew.cols() != n)
    throw std::invalid_argument("trig_lmi_block: X size mismatch");
  SymMatrix z(2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      z.set(i, j, a0(i, j) + a1(i, j));
      z.set(n + i, n + j, a0(i, j) - a1(i, j));
    }
    for (int j = 0; j < n; ++j) z.set(i, n + j, a2(i, j) + x_skew(i, j));
  }
  return z;
}

double trig_lmi_verify(const SymMatrix& a0, const SymMatrix& a1, const SymMatrix& a2,
                       const GenMatrix& x_skew) {
  double dev = 0;
  for (int i = 0; i < x_skew.rows(); ++i)
    for (int j = 0; j < x_skew.cols(); ++j) {
      const double s = x_skew(i, j) + x_skew(j, i);
      dev += s * s;
    }
  if (std::sqrt(dev) > 1e-12 * std::max(1.0, x_skew.frobenius()))
    throw std::invalid_argument("trig_lmi_verify: X is not skew-symmetric");
  return min_eigenvalue(trig_lmi_block(a0, a1, a2, x_skew));
}

TrigLmiSearchResult trig_lmi_search(const SymMatrix& a0, const SymMatrix& a1, const SymMatrix& a2,
                                    int max_iterations) {
  require_equal_sizes(a0, a1, a2);
  const int n = a0.size();
  const double scale = std::max(1.0, a0.frobenius() + a1.frobenius() + a2.frobenius());
  const double accept = -1e-9 * scale;

  GenMatrix x(n, n);
  double margin = -std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= max_iterations; ++iter) {
    const SymMatrix z = trig_lmi_block(a0, a1, a2, x);
    const auto eig = eig_sym(z);
    margin = eig.values.back();
    if (margin >= accept) return {x, margin, iter};

    // PSD projection of the affine iterate, then keep only the skew part of
    // its off-diagonal block for the next affine point.
    const int nn = 2 * n;
    GenMatrix proj(nn, nn);
    for (int k = 0; k < nn; ++k) {
      const double lam = std::max(eig.values[k], 0.0);
      if (lam == 0.0) continue;
      for (int i = 0; i < nn; ++i) {
        const double w = lam * eig.vectors(i, k);
        if (w == 0.0) continue;
        for (int j = 0; j < nn; ++j) proj(i, j) += w * eig.vectors(j, k);
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) x(i, j) = 0.5 * (proj(i, n + j) - proj(j, n + i));
  }
  return {std::nullopt, margin, max_iterations};
}

namespace {

struct PencilEval {
  double value;
  std::vector<double> u1;
  std::vector<double> v1;
};

PencilEval eval_pencil(const MatrixPencil& p, std::span<const double> x) {
  const GenMatrix m = p.at_point(x);
  const auto dec = svd(m);
  const int n = m.rows();
  PencilEval out;
  out.value = dec.sigma.front() - 1.0 - dot(x, p.shift);
  out.u1.resize(n);
  out.v1.resize(n);
  for (int i = 0; i < n; ++i) {
    out.u1[i] = dec.u(i, 0);
    out.v1[i] = dec.v(i, 0);
  }
  return out;
}

}  // namespace

PencilMarginResult pencil_margin(const MatrixPencil& p, int restarts, std::uint64_t seed) {
  p.validate();
  const int m = p.terms();
  if (restarts < 1) throw std::invalid_argument("pencil_margin: restarts must be >= 1");

  PencilMarginResult best;
  best.value = -std::numeric_limits<double>::infinity();

  for (int r = 0; r < restarts; ++r) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(r));
    std::vector<double> x = rng.unit_vector(m);
    PencilEval cur = eval_pencil(p, x);

    for (int iter = 0; iter < 200; ++iter) {
      // Gradient of sigma_max at a simple top value: u1^T M_k v1.
      std::vector<double> g(m);
      for (int k = 0; k < m; ++k) {
        double s = 0;
        const GenMatrix& mk = p.mats[k + 1];
        for (int i = 0; i < mk.rows(); ++i)
          for (int j = 0; j < mk.cols(); ++j) s += cur.u1[i] * mk(i, j) * cur.v1[j];
        g[k] = s - p.shift[k];
      }
      // tangential norm for the convergence and Armijo tests; the move itself
      // follows the full gradient and lets the renormalization retract
      const double gx = dot(g, x);
      double gn = 0;
      for (int k = 0; k < m; ++k) gn += (g[k] - gx * x[k]) * (g[k] - gx * x[k]);
      gn = std::sqrt(gn);
      if (gn < 1e-13) break;

      double step = 1.0;
      bool moved = false;
      while (step * gn >= 1e-14) {
        std::vector<double> xn(m);
        for (int k = 0; k < m; ++k) xn[k] = x[k] + step * g[k];
        const double nn = norm(xn);
        if (nn < 1e-14) {
          step *= 0.5;
          continue;
        }
        for (double& v : xn) v /= nn;
        PencilEval trial = eval_pencil(p, xn);
        if (trial.value > cur.value + 1e-4 * step * gn * gn) {
          x = std::move(xn);
          cur = std::move(trial);
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved || step * gn < 1e-13) break;
    }

    if (cur.value > best.value) {
      best.value = cur.value;
      best.argmax = x;
    }
  }
  return best;
}

double pencil_norm_bound(int n, int m, double vnorm) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("pencil_norm_bound: n must be odd");
  if (m < 2) throw std::invalid_argument("pencil_norm_bound: m must be >= 2");
  if (!(vnorm >= 0.0 && vnorm <= 1.0))
    throw std::invalid_argument("pencil_norm_bound: |v| must be in [0, 1]");
  const double slack = 1.0 - vnorm * vnorm;
  return 2.0 * n - slack + (m - 2) * (n - 1) * slack;
}

}  // namespace sepball::matan
