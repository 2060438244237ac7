// Python bindings for the main separable-ball operations. Tensors cross the
// boundary as nested lists, Hermitian matrices as flat row-major re/im lists
// (the same layout the state files use).

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sepball/campaigns.hpp"
#include "sepball/rng.hpp"
#include "sepball/version.hpp"

namespace py = pybind11;
using namespace sepball;

namespace {

using Nested = std::vector<std::vector<std::vector<double>>>;
using Mat = std::vector<std::vector<double>>;

tensoropt::Tensor3 tensor_in(const Nested& v) {
  if (v.empty() || v[0].empty() || v[0][0].empty())
    throw std::invalid_argument("tensor: expected a non-empty nested list");
  tensoropt::Tensor3 t(static_cast<int>(v.size()), static_cast<int>(v[0].size()),
                       static_cast<int>(v[0][0].size()));
  for (int i = 0; i < t.dim(0); ++i)
    for (int j = 0; j < t.dim(1); ++j)
      for (int k = 0; k < t.dim(2); ++k) t(i, j, k) = v.at(i).at(j).at(k);
  return t;
}

Nested tensor_out(const tensoropt::Tensor3& t) {
  Nested v(t.dim(0), std::vector<std::vector<double>>(t.dim(1), std::vector<double>(t.dim(2))));
  for (int i = 0; i < t.dim(0); ++i)
    for (int j = 0; j < t.dim(1); ++j)
      for (int k = 0; k < t.dim(2); ++k) v[i][j][k] = t(i, j, k);
  return v;
}

matan::GenMatrix matrix_in(const Mat& rows) {
  if (rows.empty()) throw std::invalid_argument("matrix: expected a non-empty nested list");
  matan::GenMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int i = 0; i < m.rows(); ++i) {
    if (static_cast<int>(rows[i].size()) != m.cols())
      throw std::invalid_argument("matrix: ragged rows");
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

qsep::QubitState state_in(int m, const std::vector<double>& re, const std::vector<double>& im) {
  if (re.size() != im.size()) throw std::invalid_argument("state: re/im length mismatch");
  std::vector<std::complex<double>> h(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) h[i] = {re[i], im[i]};
  return qsep::QubitState::from_matrix(m, std::move(h), 1e-10);
}

std::pair<std::vector<double>, std::vector<double>> state_out(const qsep::QubitState& s) {
  std::vector<double> re, im;
  re.reserve(s.entries().size());
  im.reserve(s.entries().size());
  for (const auto& v : s.entries()) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  return {std::move(re), std::move(im)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Separable-ball geometry: cone radius calculus, tensor injective norms and "
            "dual-cone certification for multi-qubit systems";
  m.attr("__version__") = kVersion;

  // ---- cone geometry ----
  m.def(
      "rho_table",
      [](int k_max) {
        py::list rows;
        for (const auto& r : conegeo::rho_sequence(k_max).rows) {
          py::dict row;
          row["k"] = r.k;
          row["rho_sq"] = py::make_tuple(r.rho_sq.num(), r.rho_sq.den());
          row["rho"] = r.closed_form;
          row["rho_recursion"] = r.recursion;
          row["prior_rho"] = r.prior;
          row["sq_ratio"] = py::make_tuple(r.sq_ratio.num(), r.sq_ratio.den());
          rows.append(row);
        }
        return rows;
      },
      py::arg("k_max"),
      "Separable-ball radii rho_k for k = 3..k_max with the 4/5-seeded comparison chain");

  m.def("inclusion_radius", &conegeo::inclusion_radius, py::arg("n"), py::arg("m"),
        py::arg("r1"), py::arg("r2"));
  m.def(
      "inclusion_radius_sq",
      [](int n, int m, std::pair<long long, long long> r1_sq,
         std::pair<long long, long long> r2_sq) {
        const Rational r = conegeo::inclusion_radius_sq(n, m, {r1_sq.first, r1_sq.second},
                                                        {r2_sq.first, r2_sq.second});
        return py::make_tuple(r.num(), r.den());
      },
      py::arg("n"), py::arg("m"), py::arg("r1_sq"), py::arg("r2_sq"),
      "Exact squared inclusion radius; radii squared passed as (num, den) pairs");
  m.def("matrix_ball_radius", &conegeo::matrix_ball_radius, py::arg("m"), py::arg("n"),
        py::arg("r1"), py::arg("r2"));
  m.def("ball_to_cone_param", &conegeo::ball_to_cone_param, py::arg("rho"));
  m.def("cone_to_ball_param", &conegeo::cone_to_ball_param, py::arg("r"));
  m.def(
      "lorentz_margin",
      [](const std::vector<double>& x) { return conegeo::lorentz_contains(x).margin; },
      py::arg("x"), "x_0 - |tail|; nonnegative inside the Lorentz cone");

  // ---- tensor side ----
  m.def(
      "injective_norm",
      [](const Nested& x, int restarts, std::uint64_t seed) {
        const auto r = tensoropt::injective_norm(tensor_in(x), restarts, seed);
        return py::make_tuple(r.value, r.argmax[0], r.argmax[1], r.argmax[2]);
      },
      py::arg("x"), py::arg("restarts") = 64, py::arg("seed") = 0);
  m.def(
      "polar_margin",
      [](const Nested& w, int restarts, std::uint64_t seed) {
        return tensoropt::polar_margin(tensor_in(w), restarts, seed);
      },
      py::arg("w"), py::arg("restarts") = 64, py::arg("seed") = 0);
  m.def("extremal_element", [] {
    const auto e = tensoropt::extremal_element();
    return py::make_tuple(tensor_out(e.w), tensor_out(e.x));
  });
  m.def(
      "cone_trilinear_min",
      [](const Nested& x, int restarts, std::uint64_t seed) {
        const auto r = tensoropt::cone_trilinear_min(tensor_in(x), restarts, seed);
        return py::make_tuple(r.value, r.argmin[0], r.argmin[1], r.argmin[2]);
      },
      py::arg("x"), py::arg("restarts") = 128, py::arg("seed") = 0);
  m.def(
      "calibrate_dual",
      [](const Nested& x, int restarts, std::uint64_t seed) {
        const auto d = tensoropt::dual_boundary_calibrate(tensor_in(x), restarts, seed);
        py::dict out;
        out["tensor"] = tensor_out(d.tensor);
        out["margin"] = d.margin;
        out["shift"] = d.shift;
        return out;
      },
      py::arg("x"), py::arg("restarts") = 128, py::arg("seed") = 0,
      "Shift along e_000 onto the dual-cone boundary and normalize to x_000 = 1");
  m.def(
      "inequality_suite",
      [](const Nested& x) {
        py::list out;
        for (const auto& t : tensoropt::inequality_suite(tensor_in(x)).terms) {
          py::dict term;
          term["name"] = t.name;
          term["lhs"] = t.lhs;
          term["rhs"] = t.rhs;
          term["margin"] = t.margin;
          out.append(term);
        }
        return out;
      },
      py::arg("x"), "The five inequality families for a normalized dual-cone element");

  // ---- matrix pencil side ----
  m.def(
      "pencil_margin",
      [](const std::vector<double>& shift, const std::vector<Mat>& mats, int restarts,
         std::uint64_t seed) {
        matan::MatrixPencil p;
        p.shift = shift;
        for (const auto& mm : mats) p.mats.push_back(matrix_in(mm));
        const auto r = matan::pencil_margin(p, restarts, seed);
        return py::make_tuple(r.value, r.argmax);
      },
      py::arg("shift"), py::arg("mats"), py::arg("restarts") = 64, py::arg("seed") = 0,
      "Largest sigma_max(M_0 + sum x_k M_k) - (1 + x.v) found on the unit sphere");
  m.def("pencil_norm_bound", &matan::pencil_norm_bound, py::arg("n"), py::arg("m"),
        py::arg("vnorm"));
  m.def(
      "block_spectrum",
      [](double alpha, double beta, const Mat& mm) {
        return matan::block_spectrum(alpha, beta, matrix_in(mm));
      },
      py::arg("alpha"), py::arg("beta"), py::arg("m"));
  m.def(
      "trace_pairing_bound",
      [](const Mat& a, const Mat& b) {
        return matan::trace_pairing_bound(matan::SymMatrix::from_full(matrix_in(a), 1e-9),
                                          matan::SymMatrix::from_full(matrix_in(b), 1e-9));
      },
      py::arg("a"), py::arg("b"));

  // ---- qubit states ----
  m.def(
      "to_pauli",
      [](int qubits, const std::vector<double>& re, const std::vector<double>& im) {
        return qsep::to_pauli(state_in(qubits, re, im)).coords;
      },
      py::arg("m"), py::arg("re"), py::arg("im"),
      "Coordinates in the orthonormal scaled Pauli basis (flat, Kronecker-major)");
  m.def(
      "from_pauli",
      [](int qubits, const std::vector<double>& coords) {
        qsep::PauliCoords p;
        p.qubits = qubits;
        p.coords = coords;
        return state_out(qsep::from_pauli(p));
      },
      py::arg("m"), py::arg("coords"));
  m.def(
      "psd_margin",
      [](int qubits, const std::vector<double>& re, const std::vector<double>& im) {
        return qsep::psd_margin(state_in(qubits, re, im));
      },
      py::arg("m"), py::arg("re"), py::arg("im"));
  m.def(
      "partial_transpose",
      [](int qubits, const std::vector<double>& re, const std::vector<double>& im,
         const std::vector<int>& subset) {
        return state_out(qsep::partial_transpose(state_in(qubits, re, im), subset));
      },
      py::arg("m"), py::arg("re"), py::arg("im"), py::arg("subset"));
  m.def(
      "ppt_margins",
      [](const std::vector<double>& re, const std::vector<double>& im) {
        return qsep::ppt_margins(state_in(3, re, im));
      },
      py::arg("re"), py::arg("im"),
      "PSD margins after the three single-qubit partial transposes (m = 3)");
  m.def(
      "sample_ball_state",
      [](int qubits, double radius, std::uint64_t seed) {
        Rng rng(seed);
        return state_out(qsep::sample_ball_state(qubits, radius, rng));
      },
      py::arg("m"), py::arg("radius"), py::arg("seed") = 0);
  m.def(
      "witness_pairing",
      [](const Nested& witness, const std::vector<double>& re, const std::vector<double>& im) {
        return qsep::pairing(tensor_in(witness), qsep::to_pauli(state_in(3, re, im)));
      },
      py::arg("witness"), py::arg("re"), py::arg("im"),
      "Euclidean pairing of a dual-cone tensor with the Pauli coordinates of a 3-qubit state");
}
