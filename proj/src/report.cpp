#include "sepball/report.hpp"

#include <atomic>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace sepball::report {

int CertReport::violations() const {
  int total = 0;
  for (const auto& c : checks) total += c.violations;
  return total;
}

std::string CertReport::to_json(bool include_wall, int indent) const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = version;
  j["seed"] = seed;
  j["trials"] = trials;
  j["restarts"] = restarts;
  nlohmann::ordered_json tol;
  for (const auto& [k, v] : tolerances) tol[k] = v;
  j["tolerances"] = tol;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["trials"] = c.trials;
    cj["violations"] = c.violations;
    cj["worst"] = c.worst;
    cj["tolerance"] = c.tolerance;
    if (!c.note.empty()) cj["note"] = c.note;
    j["checks"].push_back(cj);
  }
  j["extrema"] = nlohmann::ordered_json::array();
  for (const auto& e : extrema) {
    nlohmann::ordered_json ej;
    ej["name"] = e.name;
    ej["value"] = e.value;
    if (!e.description.empty()) ej["description"] = e.description;
    j["extrema"].push_back(ej);
  }
  if (!warnings.empty()) j["warnings"] = warnings;
  if (!verdict.empty()) j["verdict"] = verdict;
  j["violations"] = violations();
  j["passed"] = passed();
  if (include_wall) j["wall_ms"] = wall_ms;
  return j.dump(indent);
}

std::string CertReport::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "section,name,value,trials,violations,tolerance,note\n";
  out << "meta,command," << command << ",,,,\n";
  out << "meta,version," << version << ",,,,\n";
  out << "meta,seed," << seed << ",,,,\n";
  out << "meta,trials," << trials << ",,,,\n";
  out << "meta,restarts," << restarts << ",,,,\n";
  if (!verdict.empty()) out << "meta,verdict," << verdict << ",,,,\n";
  for (const auto& c : checks)
    out << "check," << c.name << "," << c.worst << "," << c.trials << "," << c.violations << ","
        << c.tolerance << "," << c.note << "\n";
  for (const auto& e : extrema)
    out << "extremum," << e.name << "," << e.value << ",,,," << e.description << "\n";
  for (const auto& w : warnings) out << "warning,," << "" << ",,,," << w << "\n";
  out << "meta,violations," << violations() << ",,,,\n";
  out << "meta,passed," << (passed() ? "true" : "false") << ",,,,\n";
  return out.str();
}

std::string CertReport::to_text() const {
  std::ostringstream out;
  out.precision(12);
  out << command << " (seed " << seed << ", trials " << trials << ", restarts " << restarts
      << ")\n";
  for (const auto& [k, v] : tolerances) out << "  tol " << k << " = " << v << "\n";
  for (const auto& c : checks) {
    out << "  [" << (c.violations == 0 ? "ok" : "VIOLATION") << "] " << c.name << ": worst "
        << c.worst << " over " << c.trials << " trials (tol " << c.tolerance << ")";
    if (!c.note.empty()) out << " -- " << c.note;
    out << "\n";
  }
  for (const auto& e : extrema) {
    out << "  " << e.name << " = " << e.value;
    if (!e.description.empty()) out << "  (" << e.description << ")";
    out << "\n";
  }
  for (const auto& w : warnings) out << "  warning: " << w << "\n";
  if (!verdict.empty()) out << "  verdict: " << verdict << "\n";
  out << "  violations: " << violations() << " -> " << (passed() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

std::string CertReport::render(const std::string& format, bool include_wall) const {
  if (format == "json") return to_json(include_wall);
  if (format == "csv") return to_csv();
  if (format == "text") return to_text();
  throw std::invalid_argument("unknown report format: " + format);
}

int resolve_threads(int requested) {
  int base = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (base < 1) base = 1;
  if (const char* env = std::getenv("SEPCTL_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0 && cap < base) base = cap;
  }
  return base;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace sepball::report
