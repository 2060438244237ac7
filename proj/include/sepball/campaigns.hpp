#pragma once

#include <cstdint>

#include "sepball/conegeo.hpp"
#include "sepball/matan.hpp"
#include "sepball/qsep.hpp"
#include "sepball/report.hpp"
#include "sepball/tensoropt.hpp"

// Certification campaigns behind the sepctl subcommands. Everything here is
// deterministic given (config, seed); trial i always draws from substream
// (seed, i)-style streams, so reports replay identically at any thread count.
namespace sepball::campaigns {

using report::CertReport;
using report::RunConfig;

/// Table behind `sepctl bounds`.
conegeo::RhoSequence bounds_table(int k_max);
std::string bounds_render(const conegeo::RhoSequence& seq, const std::string& format);

/// Extremal-radius search, inequality campaign and pencil spot checks.
/// inject_scale != 0 is a test hook: scale * w_extremal is pushed through the
/// polar-membership check and flagged in the report without entering the
/// bound statistics.
CertReport run_certify(const RunConfig& cfg, double inject_scale = 0.0);

/// Monte Carlo suites for the matrix-analytic lemmas.
CertReport run_lemmas(const RunConfig& cfg);

/// Necessary-condition report for a user-supplied 3-qubit state.
CertReport run_check_state(const qsep::QubitState& state, const RunConfig& cfg);

// --- constructive instance generators (shared with the test suites) ---

/// Pencil scaled so that sigma_max(M(x)) <= 1 + x.v holds for every unit x
/// (Frobenius bound), hence the norm bounds of the lemmas provably apply.
matan::MatrixPencil random_feasible_pencil(int n, int m, Rng& rng);

struct FeasibleTrig {
  matan::SymMatrix a0, a1, a2;
  matan::GenMatrix x;  // skew witness; the block matrix is PSD by construction
};

/// Draws a PSD block matrix first and reads (A0, A1, A2, X) off its blocks.
FeasibleTrig random_feasible_trig(int n, Rng& rng);

/// Random Gaussian tensor calibrated onto the boundary of (L_4^{(x)3})^*.
tensoropt::DualElement random_dual_element(std::uint64_t seed, std::uint64_t stream,
                                           int restarts);

}  // namespace sepball::campaigns
