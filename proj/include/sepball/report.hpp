#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace sepball::report {

/// Knobs shared by the certification commands. A tol of 0 means "use each
/// check's pinned default".
struct RunConfig {
  std::uint64_t seed = 42;
  int trials = 1000;
  int restarts = 64;
  double tol = 0;
  int threads = 0;  // 0 = auto; SEPCTL_THREADS caps the worker count
};

struct CheckLine {
  std::string name;
  int trials = 0;
  int violations = 0;
  double worst = 0;       // worst signed margin observed (negative = closest to failing)
  double tolerance = 0;
  std::string note;
};

struct Extremum {
  std::string name;
  double value = 0;
  std::string description;
};

/// Outcome record of a certification campaign. Serializes deterministically
/// for a fixed (command, config, seed); wall-clock is excluded from the
/// deterministic body.
struct CertReport {
  std::string command;
  std::uint64_t seed = 0;
  int trials = 0;
  int restarts = 0;
  std::vector<std::pair<std::string, double>> tolerances;
  std::vector<CheckLine> checks;
  std::vector<Extremum> extrema;
  std::vector<std::string> warnings;
  std::string verdict;  // used by check-state
  double wall_ms = 0;
  std::string version;

  int violations() const;
  bool passed() const { return violations() == 0; }

  std::string to_json(bool include_wall = true, int indent = 2) const;
  std::string to_csv() const;
  std::string to_text() const;
  std::string render(const std::string& format, bool include_wall = true) const;
};

/// Worker count: request (or hardware) capped by env SEPCTL_THREADS.
int resolve_threads(int requested);

/// Runs fn(0..count-1), fanning out over up to `threads` workers. Callers
/// write per-index results into preallocated slots, so the outcome does not
/// depend on scheduling.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace sepball::report
