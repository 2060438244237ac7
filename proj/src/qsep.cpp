#include "sepball/qsep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "sepball/rng.hpp"

namespace sepball::qsep {

namespace {

using cplx = std::complex<double>;

void check_qubits(int m) {
  if (m < 1 || m > 8) throw std::invalid_argument("QubitState: qubit count must be in 1..8");
}

double herm_deviation(const std::vector<cplx>& h, int n) {
  double dev = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const cplx d = h[std::size_t(i) * n + j] - std::conj(h[std::size_t(j) * n + i]);
      dev += std::norm(d);
    }
  return std::sqrt(dev);
}

}  // namespace

QubitState QubitState::identity(int qubits) {
  check_qubits(qubits);
  QubitState s;
  s.qubits_ = qubits;
  const int n = 1 << qubits;
  s.h_.assign(std::size_t(n) * n, cplx(0));
  for (int i = 0; i < n; ++i) s.h_[std::size_t(i) * n + i] = 1.0;
  return s;
}

QubitState QubitState::from_matrix(int qubits, std::vector<cplx> entries, double tol) {
  check_qubits(qubits);
  const int n = 1 << qubits;
  if (entries.size() != std::size_t(n) * n)
    throw std::invalid_argument("QubitState: entry count does not match 4^m");
  double fro = 0;
  for (const cplx& v : entries) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("QubitState: non-finite entries");
    fro += std::norm(v);
  }
  fro = std::sqrt(fro);
  if (herm_deviation(entries, n) > tol * std::max(1.0, fro))
    throw std::invalid_argument("QubitState: matrix is not Hermitian within tolerance");
  QubitState s;
  s.qubits_ = qubits;
  s.h_ = std::move(entries);
  return s;
}

double QubitState::frobenius() const {
  double s = 0;
  for (const cplx& v : h_) s += std::norm(v);
  return std::sqrt(s);
}

double QubitState::frobenius_distance(const QubitState& other) const {
  if (qubits_ != other.qubits_) throw std::invalid_argument("frobenius_distance: size mismatch");
  double s = 0;
  for (std::size_t i = 0; i < h_.size(); ++i) s += std::norm(h_[i] - other.h_[i]);
  return std::sqrt(s);
}

// ------------------------------------------------------------ Pauli bridge

namespace {

// Per-qubit entries of sigma_0..sigma_3: for row bit r, the only nonzero
// column bit is r ^ flip[p], with value val[p][r].
constexpr int kFlip[4] = {0, 1, 1, 0};
const cplx kVal[4][2] = {
    {cplx(1, 0), cplx(1, 0)},    // I
    {cplx(1, 0), cplx(1, 0)},    // sigma_x
    {cplx(0, -1), cplx(0, 1)},   // sigma_y: (0,1) entry -i, (1,0) entry +i
    {cplx(1, 0), cplx(-1, 0)},   // sigma_z
};

}  // namespace

PauliCoords to_pauli(const QubitState& s) {
  const int m = s.qubits();
  const int dim = s.dim();
  const int ncoords = 1 << (2 * m);
  const double scale = std::pow(2.0, -0.5 * m);  // each factor is sigma / sqrt(2)

  PauliCoords out;
  out.qubits = m;
  out.coords.assign(ncoords, 0.0);
  for (int alpha = 0; alpha < ncoords; ++alpha) {
    // alpha encodes one base-4 digit per qubit, first qubit most significant
    cplx acc = 0;
    for (int row = 0; row < dim; ++row) {
      int col = 0;
      cplx val = 1.0;
      for (int q = 0; q < m; ++q) {
        const int p = (alpha >> (2 * (m - 1 - q))) & 3;
        const int rbit = (row >> (m - 1 - q)) & 1;
        const int cbit = rbit ^ kFlip[p];
        col |= cbit << (m - 1 - q);
        val *= kVal[p][rbit];
      }
      acc += std::conj(val) * s.at(row, col);
    }
    out.coords[alpha] = (acc * scale).real();
  }
  return out;
}

QubitState from_pauli(const PauliCoords& p) {
  check_qubits(p.qubits);
  const int m = p.qubits;
  const int dim = 1 << m;
  const int ncoords = 1 << (2 * m);
  if (p.coords.size() != std::size_t(ncoords))
    throw std::invalid_argument("from_pauli: coordinate count mismatch");
  const double scale = std::pow(2.0, -0.5 * m);

  std::vector<cplx> h(std::size_t(dim) * dim, cplx(0));
  for (int alpha = 0; alpha < ncoords; ++alpha) {
    const double c = p.coords[alpha];
    if (c == 0.0) continue;
    for (int row = 0; row < dim; ++row) {
      int col = 0;
      cplx val = 1.0;
      for (int q = 0; q < m; ++q) {
        const int pq = (alpha >> (2 * (m - 1 - q))) & 3;
        const int rbit = (row >> (m - 1 - q)) & 1;
        const int cbit = rbit ^ kFlip[pq];
        col |= cbit << (m - 1 - q);
        val *= kVal[pq][rbit];
      }
      h[std::size_t(row) * dim + col] += c * scale * val;
    }
  }
  return QubitState::from_matrix(m, std::move(h), 1e-9);
}

tensoropt::Tensor3 PauliCoords::to_tensor3() const {
  if (qubits != 3) throw std::invalid_argument("PauliCoords: tensor view requires m = 3");
  tensoropt::Tensor3 t(4, 4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) t(a, b, c) = coords[(a * 4 + b) * 4 + c];
  return t;
}

// ------------------------------------------------------------ spectra

double psd_margin(const QubitState& s) {
  const int n = s.dim();
  // Real embedding [[Re H, -Im H], [Im H, Re H]]: same spectrum, doubled.
  matan::SymMatrix e(2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const cplx v = s.at(i, j);
      e.set(i, j, v.real());
      e.set(n + i, n + j, v.real());
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // lower-left block Im H; slot (n+i, j) covers the skew pair
      e.set(n + i, j, s.at(i, j).imag());
    }
  return matan::min_eigenvalue(e);
}

QubitState partial_transpose(const QubitState& s, const std::vector<int>& qubits) {
  const int m = s.qubits();
  unsigned mask = 0;
  for (int q : qubits) {
    if (q < 1 || q > m) throw std::invalid_argument("partial_transpose: qubit index out of range");
    mask |= 1u << (m - q);
  }
  const int n = s.dim();
  std::vector<cplx> out(std::size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int ii = (i & ~mask) | (j & mask);
      const int jj = (j & ~mask) | (i & mask);
      out[std::size_t(ii) * n + jj] = s.at(i, j);
    }
  return QubitState::from_matrix(m, std::move(out), 1e-9);
}

std::vector<double> ppt_margins(const QubitState& s) {
  if (s.qubits() != 3) throw std::invalid_argument("ppt_margins: requires m = 3");
  std::vector<double> margins;
  margins.reserve(3);
  for (int q = 1; q <= 3; ++q) margins.push_back(psd_margin(partial_transpose(s, {q})));
  return margins;
}

double ppt_all_bipartitions(const QubitState& s) {
  const auto margins = ppt_margins(s);
  return *std::min_element(margins.begin(), margins.end());
}

QubitState sample_ball_state(int qubits, double radius, Rng& rng) {
  check_qubits(qubits);
  if (radius < 0) throw std::invalid_argument("sample_ball_state: radius must be >= 0");
  const int n = 1 << qubits;
  // Gaussian on an orthonormal real basis of Hermitian space, normalized to
  // the unit Frobenius sphere.
  std::vector<cplx> delta(std::size_t(n) * n, cplx(0));
  double fro = 0;
  for (int i = 0; i < n; ++i) {
    const double d = rng.gaussian();
    delta[std::size_t(i) * n + i] = d;
    fro += d * d;
    for (int j = i + 1; j < n; ++j) {
      const double re = rng.gaussian() / std::sqrt(2.0);
      const double im = rng.gaussian() / std::sqrt(2.0);
      delta[std::size_t(i) * n + j] = cplx(re, im);
      delta[std::size_t(j) * n + i] = cplx(re, -im);
      fro += 2.0 * (re * re + im * im);
    }
  }
  fro = std::sqrt(fro);
  std::vector<cplx> h(std::size_t(n) * n, cplx(0));
  const double s = radius > 0 && fro > 0 ? radius / fro : 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      h[std::size_t(i) * n + j] = (i == j ? 1.0 : 0.0) + s * delta[std::size_t(i) * n + j];
  return QubitState::from_matrix(qubits, std::move(h));
}

double pairing(const tensoropt::Tensor3& witness, const PauliCoords& p) {
  if (p.qubits != 3) throw std::invalid_argument("pairing: requires m = 3");
  const auto t = p.to_tensor3();
  double s = 0;
  for (std::size_t i = 0; i < t.size(); ++i) s += witness.coords()[i] * t.coords()[i];
  return s;
}

double witness_pairing(const tensoropt::DualElement& d, const QubitState& s) {
  if (!d.normalized) throw std::invalid_argument("witness_pairing: element not normalized");
  if (s.qubits() != 3) throw std::invalid_argument("witness_pairing: requires m = 3");
  return pairing(d.tensor, to_pauli(s));
}

// ------------------------------------------------------------ state files

std::string state_to_json(const QubitState& s) {
  const int n = s.dim();
  std::vector<double> re, im;
  re.reserve(std::size_t(n) * n);
  im.reserve(std::size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      re.push_back(s.at(i, j).real());
      im.push_back(s.at(i, j).imag());
    }
  nlohmann::ordered_json j;
  j["m"] = s.qubits();
  j["re"] = re;
  j["im"] = im;
  return j.dump();
}

QubitState state_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("state file: invalid JSON: ") + e.what());
  }
  if (!j.contains("m") || !j.contains("re") || !j.contains("im"))
    throw std::runtime_error("state file: expected fields m, re, im");
  const int m = j["m"].get<int>();
  if (m < 1 || m > 8) throw std::runtime_error("state file: m out of range");
  const auto re = j["re"].get<std::vector<double>>();
  const auto im = j["im"].get<std::vector<double>>();
  const std::size_t want = std::size_t(1) << (2 * m);
  if (re.size() != want || im.size() != want)
    throw std::runtime_error("state file: re/im must be flat row-major with 4^m entries");
  std::vector<cplx> h(want);
  for (std::size_t i = 0; i < want; ++i) h[i] = cplx(re[i], im[i]);
  try {
    return QubitState::from_matrix(m, std::move(h), 1e-10);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("state file: ") + e.what());
  }
}

QubitState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("state file: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return state_from_json(buf.str());
}

void save_state(const std::string& path, const QubitState& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("state file: cannot write " + path);
  out << state_to_json(s) << "\n";
}

}  // namespace sepball::qsep
