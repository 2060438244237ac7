#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "sepball/tensoropt.hpp"

namespace sepball {
class Rng;
}

// Bridge between Hermitian multi-qubit matrices and real coordinate tensors
// via the normalized Pauli basis, plus the PPT necessary-condition checks and
// the ball-state sampler used by the certification campaigns.
namespace sepball::qsep {

/// Hermitian matrix on 2^m dimensions (unnormalized density matrix).
class QubitState {
 public:
  QubitState() = default;
  static QubitState identity(int qubits);
  /// Validates Hermiticity to tol * |H|.
  static QubitState from_matrix(int qubits, std::vector<std::complex<double>> entries,
                                double tol = 1e-12);

  int qubits() const { return qubits_; }
  int dim() const { return 1 << qubits_; }
  std::complex<double> at(int i, int j) const { return h_[std::size_t(i) * dim() + j]; }
  const std::vector<std::complex<double>>& entries() const { return h_; }

  double frobenius() const;
  double frobenius_distance(const QubitState& other) const;

 private:
  int qubits_ = 0;
  std::vector<std::complex<double>> h_;
};

/// Real coordinates in the orthonormal scaled Pauli basis, one base-4 digit
/// per qubit, Kronecker-major. An isometry: |coords| = |H|_F.
struct PauliCoords {
  int qubits = 0;
  std::vector<double> coords;  // length 4^m

  /// View as a (4,4,4) tensor; only valid for m = 3.
  tensoropt::Tensor3 to_tensor3() const;
};

PauliCoords to_pauli(const QubitState& s);
QubitState from_pauli(const PauliCoords& p);

/// Smallest eigenvalue, via the real 2N x 2N embedding of the Hermitian form.
double psd_margin(const QubitState& s);

/// Transposes the listed tensor factors (1-based qubit indices).
QubitState partial_transpose(const QubitState& s, const std::vector<int>& qubits);

/// Worst PSD margin after partial transpose over {1|23, 2|13, 3|12} (m = 3).
std::vector<double> ppt_margins(const QubitState& s);
double ppt_all_bipartitions(const QubitState& s);

/// I_{2^m} + radius * Delta with Delta uniform on the unit Frobenius sphere
/// of Hermitian matrices (trace direction included).
QubitState sample_ball_state(int qubits, double radius, Rng& rng);

double pairing(const tensoropt::Tensor3& witness, const PauliCoords& p);
/// Euclidean pairing of a dual-cone element with the Pauli coordinates of a
/// 3-qubit state; nonnegative whenever the state is separable.
double witness_pairing(const tensoropt::DualElement& d, const QubitState& s);

// State file format: {"m": qubits, "re": [...], "im": [...]} with flat
// row-major 2^m x 2^m entries; Hermiticity is validated at 1e-10 on load.
std::string state_to_json(const QubitState& s);
QubitState state_from_json(const std::string& text);
QubitState load_state(const std::string& path);
void save_state(const std::string& path, const QubitState& s);

}  // namespace sepball::qsep
