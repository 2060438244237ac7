// Acceptance suite: runs the end-to-end certification claims at their pinned
// tolerances and prints one pass/fail line per criterion.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "sepball/campaigns.hpp"
#include "sepball/rng.hpp"

using namespace sepball;
using tensoropt::Tensor3;

namespace {

struct Criterion {
  std::string name;
  std::function<bool(std::string&)> run;
};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

// 1. The inclusion-radius chain constants, in exact rational arithmetic.
bool exact_inclusion_constants(std::string& detail) {
  const Rational first = conegeo::inclusion_radius_sq(4, 4, Rational(1), Rational(1));
  const Rational second = conegeo::inclusion_radius_sq(16, 4, Rational(1, 3), Rational(5, 3));
  detail = "r^2 = " + first.str() + " and " + second.str();
  const bool exact = first == Rational(1, 3) && second == Rational(5, 27);
  const bool floating =
      near(conegeo::inclusion_radius(4, 4, 1, 1), 1.0 / std::sqrt(3.0), 1e-15) &&
      near(conegeo::inclusion_radius(16, 4, 1.0 / std::sqrt(3.0), std::sqrt(5.0 / 3.0)),
           std::sqrt(5.0 / 27.0), 1e-15);
  return exact && floating;
}

// 2. The radius table: exact rho_3^2, recursion vs closed form, and the
// squared-radius improvement over the 4/5-seeded chain.
bool rho_table(std::string& detail) {
  const auto seq = conegeo::rho_sequence(30);
  bool ok = seq.row(3).rho_sq == Rational(16, 19);
  double worst = 0;
  for (const auto& row : seq.rows)
    worst = std::max(worst, std::abs(row.recursion - row.closed_form));
  ok = ok && worst <= 1e-12;
  const Rational ratio = seq.row(3).sq_ratio;
  ok = ok && ratio == Rational(20, 19);
  const double pct = 100.0 * (ratio.value() - 1.0);
  ok = ok && pct > 5.2 && pct < 5.3;
  detail = "rho_3^2 = " + seq.row(3).rho_sq.str() + ", max |recursion - closed| = " +
           sci(worst) + ", improvement " + ratio.str() + " (" + std::to_string(pct) + "%)";
  return ok;
}

// 3. Extremal radius certification: the seeded search attains sqrt(7) at
// injective norm 1, random boundary elements never exceed it, and orthogonal
// triples preserve both values.
bool extremal_certification(std::string& detail) {
  const double sqrt7 = std::sqrt(7.0);
  const auto ext = tensoropt::extremal_element();
  const double nu = tensoropt::injective_norm(ext.w, 64, 42).value;
  bool ok = near(nu, 1.0, 1e-6) && near(ext.w.norm(), sqrt7, 1e-6);

  const auto search = tensoropt::ptp3_inner_radius_search(1000, 64, 42);
  ok = ok && search.max_norm <= sqrt7 + 1e-6 && search.max_norm >= sqrt7 - 1e-6;

  Rng rng(43);
  double worst_orbit = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = matan::random_orthogonal(3, rng);
    const auto v = matan::random_orthogonal(3, rng);
    const auto w = matan::random_orthogonal(3, rng);
    const Tensor3 orbit = tensoropt::apply_triple_map(u, v, w, ext.w);
    worst_orbit = std::max(worst_orbit, std::abs(orbit.norm() - sqrt7));
    worst_orbit = std::max(worst_orbit,
                           std::abs(tensoropt::injective_norm(orbit, 64, 44 + trial).value - 1.0));
  }
  ok = ok && worst_orbit <= 1e-9;
  detail = "nu(w) = " + std::to_string(nu) + ", max boundary norm = " +
           std::to_string(search.max_norm) + ", orbit deviation = " + sci(worst_orbit);
  return ok;
}

// 4. The five inequality families on 1000 calibrated dual-cone elements,
// plus the exact integer coefficient identities.
bool inequality_families(std::string& detail) {
  int violations = 0;
  double worst = 1e300;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto d = campaigns::random_dual_element(4242, trial, 128);
    const auto rep = tensoropt::inequality_suite(d);
    worst = std::min(worst, rep.worst_margin());
    if (!rep.all_hold(1e-6)) ++violations;
  }
  const bool identities = tensoropt::weighted_form_coefficients_consistent();
  detail = "violations = " + std::to_string(violations) + ", worst margin = " + sci(worst) +
           ", coefficient identities " + (identities ? "exact" : "BROKEN");
  return violations == 0 && identities;
}

// 5. The lemma Monte Carlo suites at their pinned tolerances.
bool lemma_suites(std::string& detail) {
  report::RunConfig cfg;
  cfg.trials = 1000;  // the trace-pairing suite runs 10x this internally
  cfg.seed = 7;
  const auto rep = campaigns::run_lemmas(cfg);
  detail.clear();
  for (const auto& c : rep.checks)
    detail += c.name + ": " + std::to_string(c.violations) + "/" + std::to_string(c.trials) + " ";
  return rep.passed();
}

// 6. Ball consistency for three qubits: 10^4 states on the certified sphere
// pass PSD and all PPT cuts, and 10^3 x 10^3 witness pairings stay
// nonnegative. Full separability is not decidable here; these are the
// necessary conditions the certified radius guarantees.
bool three_qubit_ball(std::string& detail) {
  const double radius = std::sqrt(16.0 / 19.0);
  Rng rng(2026);
  double worst_state = 1e300;
  std::vector<qsep::PauliCoords> kept;
  kept.reserve(1000);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto s = qsep::sample_ball_state(3, radius, rng);
    worst_state = std::min(worst_state, qsep::psd_margin(s));
    worst_state = std::min(worst_state, qsep::ppt_all_bipartitions(s));
    if (trial < 1000) kept.push_back(qsep::to_pauli(s));
  }
  bool ok = worst_state >= -1e-9;

  double worst_pairing = 1e300;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto d = campaigns::random_dual_element(777, trial, 128);
    for (const auto& p : kept)
      worst_pairing = std::min(worst_pairing, qsep::pairing(d.tensor, p));
  }
  ok = ok && worst_pairing >= -1e-8;
  detail = "worst PSD/PPT margin = " + std::to_string(worst_state) +
           ", worst pairing = " + std::to_string(worst_pairing);
  return ok;
}

// 7. Chain consistency: the cone opening sqrt(2/17) converts to the sphere
// radius sqrt(2/19) and, at center norm sqrt(8), to the certified ball
// radius sqrt(16/19).
bool chain_consistency(std::string& detail) {
  const double r = std::sqrt(2.0 / 17.0);
  const double rho = conegeo::cone_to_ball_param(r);
  const double at_center = std::sqrt(8.0) * rho;
  const auto seq = conegeo::rho_sequence(3);
  const bool ok = near(rho, std::sqrt(2.0 / 19.0), 1e-12) &&
                  near(at_center, std::sqrt(16.0 / 19.0), 1e-12) &&
                  near(at_center, seq.row(3).closed_form, 1e-12);
  detail = "rho = " + std::to_string(rho) + ", scaled to center = " + std::to_string(at_center);
  return ok;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"exact inclusion-radius constants (1/3, 5/27)", exact_inclusion_constants},
      {"radius table: 16/19 exact, recursion == closed form, 20/19 improvement", rho_table},
      {"extremal radius sqrt(7) certification with orbit invariance", extremal_certification},
      {"inequality families on 1000 calibrated dual elements", inequality_families},
      {"matrix-analytic lemma Monte Carlo suites", lemma_suites},
      {"3-qubit ball: PSD/PPT on 10^4 states, 10^6 witness pairings", three_qubit_ball},
      {"cone-to-ball chain reproduces sqrt(16/19)", chain_consistency},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool pass = false;
    try {
      pass = criteria[i].run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %zu: %s -- %s\n", pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
