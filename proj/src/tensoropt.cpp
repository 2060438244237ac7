#include "sepball/tensoropt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "sepball/rng.hpp"

namespace sepball::tensoropt {

namespace {

void check_dim(int n) {
  if (n != 3 && n != 4) throw std::invalid_argument("Tensor3: dimensions must be 3 or 4");
}

double vec_norm(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

Tensor3::Tensor3(int n1, int n2, int n3) : dims_{n1, n2, n3} {
  check_dim(n1);
  check_dim(n2);
  check_dim(n3);
  coords_.assign(std::size_t(n1) * n2 * n3, 0.0);
}

Tensor3 Tensor3::rank_one(std::span<const double> a, std::span<const double> b,
                          std::span<const double> c) {
  Tensor3 t(static_cast<int>(a.size()), static_cast<int>(b.size()), static_cast<int>(c.size()));
  for (int i = 0; i < t.dims_[0]; ++i)
    for (int j = 0; j < t.dims_[1]; ++j)
      for (int k = 0; k < t.dims_[2]; ++k) t(i, j, k) = a[i] * b[j] * c[k];
  return t;
}

Tensor3 Tensor3::basis(int n1, int n2, int n3, int i, int j, int k) {
  Tensor3 t(n1, n2, n3);
  t(i, j, k) = 1.0;
  return t;
}

double Tensor3::norm_sq() const {
  double s = 0;
  for (double v : coords_) s += v * v;
  return s;
}

double Tensor3::norm() const { return std::sqrt(norm_sq()); }

bool Tensor3::finite() const {
  for (double v : coords_)
    if (!std::isfinite(v)) return false;
  return true;
}

Tensor3& Tensor3::operator+=(const Tensor3& other) {
  if (dims_ != other.dims_) throw std::invalid_argument("Tensor3: dims mismatch");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Tensor3& Tensor3::operator*=(double s) {
  for (double& v : coords_) v *= s;
  return *this;
}

// ------------------------------------------------------------ slices

SliceView slices(const Tensor3& t, int axis) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("slices: axis must be 0, 1 or 2");
  SliceView view;
  view.axis = axis;
  const auto& d = t.dims();
  const int nslices = d[axis];
  const int r = d[axis == 0 ? 1 : 0];
  const int c = d[axis == 2 ? 1 : 2];
  view.slices.reserve(nslices);
  for (int s = 0; s < nslices; ++s) {
    GenMatrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) {
        if (axis == 0) m(i, j) = t(s, i, j);
        else if (axis == 1) m(i, j) = t(i, s, j);
        else m(i, j) = t(i, j, s);
      }
    view.slices.push_back(std::move(m));
  }
  return view;
}

Tensor3 from_slices(const SliceView& view) {
  if (view.slices.empty()) throw std::invalid_argument("from_slices: no slices");
  const int nslices = static_cast<int>(view.slices.size());
  const int r = view.slices.front().rows();
  const int c = view.slices.front().cols();
  for (const auto& m : view.slices)
    if (m.rows() != r || m.cols() != c) throw std::invalid_argument("from_slices: ragged slices");
  int d[3];
  if (view.axis == 0) { d[0] = nslices; d[1] = r; d[2] = c; }
  else if (view.axis == 1) { d[0] = r; d[1] = nslices; d[2] = c; }
  else { d[0] = r; d[1] = c; d[2] = nslices; }
  Tensor3 t(d[0], d[1], d[2]);
  for (int s = 0; s < nslices; ++s)
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) {
        if (view.axis == 0) t(s, i, j) = view.slices[s](i, j);
        else if (view.axis == 1) t(i, s, j) = view.slices[s](i, j);
        else t(i, j, s) = view.slices[s](i, j);
      }
  return t;
}

std::string tensor_to_json(const Tensor3& t) {
  nlohmann::ordered_json j;
  j["dims"] = t.dims();
  j["coords"] = std::vector<double>(t.coords().begin(), t.coords().end());
  return j.dump();
}

Tensor3 tensor_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (!j.contains("dims") || !j.contains("coords"))
    throw std::invalid_argument("tensor_from_json: missing dims/coords");
  const auto dims = j["dims"].get<std::vector<int>>();
  if (dims.size() != 3) throw std::invalid_argument("tensor_from_json: dims must have length 3");
  Tensor3 t(dims[0], dims[1], dims[2]);
  const auto coords = j["coords"].get<std::vector<double>>();
  if (coords.size() != t.size())
    throw std::invalid_argument("tensor_from_json: coords length mismatch");
  std::copy(coords.begin(), coords.end(), t.raw().begin());
  return t;
}

// ------------------------------------------------------------ injective norm

namespace {

// g[i] = sum_{j,k} x(i,j,k) b[j] c[k] and cyclic variants.
void contract_axis0(const Tensor3& x, std::span<const double> b, std::span<const double> c,
                    std::vector<double>& g) {
  const auto& d = x.dims();
  g.assign(d[0], 0.0);
  for (int i = 0; i < d[0]; ++i) {
    double s = 0;
    for (int j = 0; j < d[1]; ++j) {
      double row = 0;
      for (int k = 0; k < d[2]; ++k) row += x(i, j, k) * c[k];
      s += b[j] * row;
    }
    g[i] = s;
  }
}

void contract_axis1(const Tensor3& x, std::span<const double> a, std::span<const double> c,
                    std::vector<double>& g) {
  const auto& d = x.dims();
  g.assign(d[1], 0.0);
  for (int j = 0; j < d[1]; ++j) {
    double s = 0;
    for (int i = 0; i < d[0]; ++i) {
      double row = 0;
      for (int k = 0; k < d[2]; ++k) row += x(i, j, k) * c[k];
      s += a[i] * row;
    }
    g[j] = s;
  }
}

void contract_axis2(const Tensor3& x, std::span<const double> a, std::span<const double> b,
                    std::vector<double>& g) {
  const auto& d = x.dims();
  g.assign(d[2], 0.0);
  for (int i = 0; i < d[0]; ++i)
    for (int j = 0; j < d[1]; ++j) {
      const double ab = a[i] * b[j];
      for (int k = 0; k < d[2]; ++k) g[k] += ab * x(i, j, k);
    }
}

constexpr double kGradTie = 1e-14;    // keep the previous factor below this
constexpr double kSweepTol = 1e-13;   // converged when a sweep gains less
constexpr int kMaxSweeps = 500;

}  // namespace

InjectiveNorm injective_norm(const Tensor3& x, int restarts, std::uint64_t seed) {
  if (!x.finite()) throw std::invalid_argument("injective_norm: non-finite tensor");
  if (restarts < 1) throw std::invalid_argument("injective_norm: restarts must be >= 1");
  const auto& d = x.dims();

  InjectiveNorm best;
  for (int axis = 0; axis < 3; ++axis) {
    best.argmax[axis].assign(d[axis], 0.0);
    best.argmax[axis][0] = 1.0;
  }
  if (x.norm_sq() == 0.0) return best;

  std::vector<double> g;
  for (int r = 0; r < restarts; ++r) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(r));
    std::vector<double> a = rng.unit_vector(d[0]);
    std::vector<double> b = rng.unit_vector(d[1]);
    std::vector<double> c = rng.unit_vector(d[2]);
    std::vector<double> trace;
    double value = 0;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
      contract_axis0(x, b, c, g);
      if (double n = vec_norm(g); n > kGradTie)
        for (int i = 0; i < d[0]; ++i) a[i] = g[i] / n;
      contract_axis1(x, a, c, g);
      if (double n = vec_norm(g); n > kGradTie)
        for (int j = 0; j < d[1]; ++j) b[j] = g[j] / n;
      contract_axis2(x, a, b, g);
      double n = vec_norm(g);
      if (n > kGradTie)
        for (int k = 0; k < d[2]; ++k) c[k] = g[k] / n;
      const double prev = value;
      value = n > kGradTie ? n : std::abs(value);
      trace.push_back(value);
      if (sweep > 0 && value - prev < kSweepTol) break;
    }

    if (value > best.value) {
      best.value = value;
      best.argmax = {a, b, c};
      best.sweep_values = std::move(trace);
    }
  }
  return best;
}

double polar_margin(const Tensor3& w, int restarts, std::uint64_t seed) {
  const auto& d = w.dims();
  if (d[0] != 3 || d[1] != 3 || d[2] != 3)
    throw std::invalid_argument("polar_margin: dims must be (3,3,3)");
  return 1.0 - injective_norm(w, restarts, seed).value;
}

ExtremalPair extremal_element() {
  SliceView view;
  view.axis = 2;
  view.slices = {
      GenMatrix::from_rows({{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}),
      GenMatrix::from_rows({{0, -1, 0}, {-1, 0, 0}, {0, 0, 0}}),
      GenMatrix::from_rows({{0, 0, -1}, {0, 0, 0}, {-1, 0, 0}}),
  };
  ExtremalPair pair;
  pair.w = from_slices(view);
  pair.x = (1.0 / 7.0) * pair.w;
  return pair;
}

Tensor3 apply_triple_map(const GenMatrix& a, const GenMatrix& b, const GenMatrix& c,
                         const Tensor3& x) {
  const auto& d = x.dims();
  if (a.cols() != d[0] || b.cols() != d[1] || c.cols() != d[2])
    throw std::invalid_argument("apply_triple_map: dims mismatch");
  Tensor3 out(a.rows(), b.rows(), c.rows());
  for (int p = 0; p < d[0]; ++p)
    for (int q = 0; q < d[1]; ++q)
      for (int r = 0; r < d[2]; ++r) {
        const double v = x(p, q, r);
        if (v == 0.0) continue;
        for (int i = 0; i < a.rows(); ++i) {
          const double av = a(i, p) * v;
          if (av == 0.0) continue;
          for (int j = 0; j < b.rows(); ++j) {
            const double abv = av * b(j, q);
            if (abv == 0.0) continue;
            for (int k = 0; k < c.rows(); ++k) out(i, j, k) += abv * c(k, r);
          }
        }
      }
  return out;
}

RadiusSearch ptp3_inner_radius_search(int trials, int restarts, std::uint64_t seed) {
  if (trials < 0) throw std::invalid_argument("ptp3_inner_radius_search: trials must be >= 0");
  RadiusSearch out;
  out.trials = trials;

  // Seeded start: the known extremal element itself.
  const auto extremal = extremal_element();
  {
    const double nu = injective_norm(extremal.w, restarts, seed).value;
    out.max_norm = extremal.w.norm() / nu;
    out.argmax = (1.0 / nu) * extremal.w;
  }

  for (int t = 1; t <= trials; ++t) {
    Rng rng = Rng::substream(seed, 0x10000u + static_cast<std::uint64_t>(t));
    Tensor3 w(3, 3, 3);
    for (double& v : w.raw()) v = rng.gaussian();
    const double nu = injective_norm(w, restarts, seed + static_cast<std::uint64_t>(t)).value;
    if (nu <= 1e-12 * w.norm()) continue;
    const double boundary_norm = w.norm() / nu;
    if (boundary_norm > out.max_norm) {
      out.max_norm = boundary_norm;
      out.argmax = (1.0 / nu) * w;
    }
  }
  return out;
}

// ------------------------------------------------------------ dual cone side

namespace {

struct AffineFactors {
  // factors (1, u), (1, v), (1, w) stored as length-4 vectors
  std::array<std::vector<double>, 3> f;

  std::array<std::vector<double>, 3> tails() const {
    std::array<std::vector<double>, 3> out;
    for (int a = 0; a < 3; ++a) out[a] = {f[a][1], f[a][2], f[a][3]};
    return out;
  }
};

double trilinear_value(const Tensor3& x, const AffineFactors& fac) {
  double s = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double fij = fac.f[0][i] * fac.f[1][j];
      if (fij == 0.0) continue;
      double row = 0;
      for (int k = 0; k < 4; ++k) row += x(i, j, k) * fac.f[2][k];
      s += fij * row;
    }
  return s;
}

// One full sweep of closed-form updates; returns the value after the sweep.
double trilinear_sweep(const Tensor3& x, AffineFactors& fac) {
  double alpha = 0;
  std::array<double, 3> g{};
  // axis 0
  for (int i = 0; i < 4; ++i) {
    double s = 0;
    for (int j = 0; j < 4; ++j) {
      double row = 0;
      for (int k = 0; k < 4; ++k) row += x(i, j, k) * fac.f[2][k];
      s += fac.f[1][j] * row;
    }
    if (i == 0) alpha = s;
    else g[i - 1] = s;
  }
  double gn = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
  if (gn > kGradTie)
    for (int i = 0; i < 3; ++i) fac.f[0][1 + i] = -g[i] / gn;
  // axis 1
  for (int j = 0; j < 4; ++j) {
    double s = 0;
    for (int i = 0; i < 4; ++i) {
      double row = 0;
      for (int k = 0; k < 4; ++k) row += x(i, j, k) * fac.f[2][k];
      s += fac.f[0][i] * row;
    }
    if (j == 0) alpha = s;
    else g[j - 1] = s;
  }
  gn = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
  if (gn > kGradTie)
    for (int j = 0; j < 3; ++j) fac.f[1][1 + j] = -g[j] / gn;
  // axis 2
  for (int k = 0; k < 4; ++k) {
    double s = 0;
    for (int i = 0; i < 4; ++i) {
      double row = 0;
      for (int j = 0; j < 4; ++j) row += x(i, j, k) * fac.f[1][j];
      s += fac.f[0][i] * row;
    }
    if (k == 0) alpha = s;
    else g[k - 1] = s;
  }
  gn = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
  if (gn > kGradTie) {
    for (int k = 0; k < 3; ++k) fac.f[2][1 + k] = -g[k] / gn;
    return alpha - gn;
  }
  return trilinear_value(x, fac);
}

double trilinear_descend(const Tensor3& x, AffineFactors& fac) {
  double value = trilinear_value(x, fac);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double next = trilinear_sweep(x, fac);
    if (value - next < kSweepTol) return std::min(value, next);
    value = next;
  }
  return value;
}

void require_dual_dims(const Tensor3& x, const char* what) {
  const auto& d = x.dims();
  if (d[0] != 4 || d[1] != 4 || d[2] != 4)
    throw std::invalid_argument(std::string(what) + ": dims must be (4,4,4)");
}

}  // namespace

TrilinearMin cone_trilinear_min(const Tensor3& x, int restarts, std::uint64_t seed) {
  require_dual_dims(x, "cone_trilinear_min");
  if (!x.finite()) throw std::invalid_argument("cone_trilinear_min: non-finite tensor");
  if (restarts < 1) throw std::invalid_argument("cone_trilinear_min: restarts must be >= 1");

  TrilinearMin best;
  best.value = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(r));
    AffineFactors fac;
    for (int a = 0; a < 3; ++a) {
      const auto u = rng.unit_vector(3);
      fac.f[a] = {1.0, u[0], u[1], u[2]};
    }
    const double value = trilinear_descend(x, fac);
    if (value < best.value) {
      best.value = value;
      best.argmin = fac.tails();
    }
  }
  return best;
}

DualElement dual_boundary_calibrate(const Tensor3& x, int restarts, std::uint64_t seed) {
  require_dual_dims(x, "dual_boundary_calibrate");
  if (x.norm_sq() == 0.0) throw std::invalid_argument("dual_boundary_calibrate: zero tensor");

  // Every product ray (1,u)(x)(1,v)(x)(1,w) has e_{000} coefficient 1, so the
  // minimum of x + t e_{000} rises with t and is unbounded both ways; the
  // minimizer does not depend on t. One full multi-restart minimization
  // supplies the incumbent; the bisection evaluations descend from it.
  const auto base = cone_trilinear_min(x, restarts, seed);
  AffineFactors fac;
  for (int a = 0; a < 3; ++a)
    fac.f[a] = {1.0, base.argmin[a][0], base.argmin[a][1], base.argmin[a][2]};

  auto shifted_min = [&](double t) {
    Tensor3 y = x;
    y(0, 0, 0) += t;
    AffineFactors local = fac;
    const double v = trilinear_descend(y, local);
    if (v < trilinear_value(x, fac) + t - 1e-15) fac = local;  // keep the better incumbent
    return v;
  };

  double hi = 1.0 + x.norm();
  for (int guard = 0; shifted_min(hi) < 0.0; ++guard) {
    if (guard > 64) throw std::runtime_error("dual_boundary_calibrate: bracket expansion failed");
    hi = 2.0 * hi + 1.0;
  }
  double lo = -(1.0 + x.norm());
  for (int guard = 0; shifted_min(lo) >= 0.0; ++guard) {
    if (guard > 64) throw std::runtime_error("dual_boundary_calibrate: bracket expansion failed");
    lo = 2.0 * lo - 1.0;
  }
  for (int step = 0; step < 200; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (shifted_min(mid) < 0.0 ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);

  Tensor3 y = x;
  y(0, 0, 0) += t;
  const double root = y(0, 0, 0);
  if (root <= 1e-12 * (1.0 + x.norm()))
    throw std::domain_error("dual_boundary_calibrate: degenerate element (root coordinate <= 0)");
  y *= 1.0 / root;

  DualElement out;
  out.shift = t;
  out.normalized = true;
  // Recheck with fresh restarts; if a lower minimum turns up, push the
  // element back onto the boundary and try again.
  for (int pass = 0; pass < 4; ++pass) {
    const auto check = cone_trilinear_min(y, restarts, seed + 0x5eedu * (pass + 1));
    out.margin = check.value;
    if (check.value >= -1e-12) break;
    y(0, 0, 0) += -check.value;
    y *= 1.0 / (1.0 - check.value);
  }
  out.tensor = std::move(y);
  return out;
}

Tensor3 symmetrize_dd_id(const Tensor3& x) {
  require_dual_dims(x, "symmetrize_dd_id");
  Tensor3 y = x;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const bool keep = (i == 0 && j == 0) || (i != 0 && j != 0);
      if (keep) continue;
      for (int k = 0; k < 4; ++k) y(i, j, k) = 0.0;
    }
  return y;
}

// ------------------------------------------------------------ inequalities

// Coefficient bookkeeping for the weighted forms: summing the rescaled
// 27/5-form over the three axis roles gives (5+5+3, 5+3+3, 3*3) <= 3*27, and
// averaging with three copies of the <=7 form gives the (7,6,6) <= 51 bound.
static_assert(5 + 5 + 3 == 13 && 5 + 3 + 3 == 11 && 3 * 3 == 9 && 3 * 27 == 81);
static_assert((13 + 1) / 2 == 7 && (11 + 1) / 2 == 6 && (9 + 3) / 2 == 6 &&
              (81 + 3 * 7) / 2 == 51);

bool weighted_form_coefficients_consistent() {
  const int single_w = 5 + 5 + 3;
  const int pair_w = 5 + 3 + 3;
  const int full_w = 3 * 3;
  const int rhs = 3 * 27;
  const bool perm_sum = single_w == 13 && pair_w == 11 && full_w == 9 && rhs == 81;
  const bool average = (single_w + 1) % 2 == 0 && (single_w + 1) / 2 == 7 &&
                       (pair_w + 1) / 2 == 6 && (full_w + 3) / 2 == 6 &&
                       (rhs + 3 * 7) % 2 == 0 && (rhs + 3 * 7) / 2 == 51;
  return perm_sum && average;
}

double InequalityReport::worst_margin() const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& t : terms) worst = std::min(worst, t.margin);
  return worst;
}

bool InequalityReport::all_hold(double tol) const { return worst_margin() >= -tol; }

InequalityReport inequality_suite(const Tensor3& normalized) {
  require_dual_dims(normalized, "inequality_suite");
  if (std::abs(normalized(0, 0, 0) - 1.0) > 1e-9)
    throw std::invalid_argument("inequality_suite: input must be normalized to x_{000} = 1");

  InequalityReport rep;
  const Tensor3& x = normalized;
  for (int k = 1; k < 4; ++k) {
    rep.single_sq[0] += x(k, 0, 0) * x(k, 0, 0);
    rep.single_sq[1] += x(0, k, 0) * x(0, k, 0);
    rep.single_sq[2] += x(0, 0, k) * x(0, 0, k);
  }
  for (int k = 1; k < 4; ++k)
    for (int l = 1; l < 4; ++l) {
      rep.pair_sq[0] += x(0, k, l) * x(0, k, l);
      rep.pair_sq[1] += x(k, 0, l) * x(k, 0, l);
      rep.pair_sq[2] += x(k, l, 0) * x(k, l, 0);
    }
  for (int i = 1; i < 4; ++i)
    for (int j = 1; j < 4; ++j)
      for (int k = 1; k < 4; ++k) rep.full_sq += x(i, j, k) * x(i, j, k);

  const double singles = rep.single_sq[0] + rep.single_sq[1] + rep.single_sq[2];
  const double pairs = rep.pair_sq[0] + rep.pair_sq[1] + rep.pair_sq[2];
  auto add = [&](std::string name, double lhs, double rhs) {
    rep.terms.push_back({std::move(name), lhs, rhs, rhs - lhs});
  };
  // per-axis forms: the singleton class of the distinguished axis plus the
  // pair class of the complementary axes plus the full block
  add("axis1_7", rep.single_sq[0] + rep.pair_sq[0] + rep.full_sq, 7.0);
  add("axis2_7", rep.single_sq[1] + rep.pair_sq[1] + rep.full_sq, 7.0);
  add("axis3_7", rep.single_sq[2] + rep.pair_sq[2] + rep.full_sq, 7.0);
  add("averaged_7", singles / 3.0 + pairs / 3.0 + rep.full_sq, 7.0);
  add("weighted_81", 13.0 * singles + 11.0 * pairs + 9.0 * rep.full_sq, 81.0);
  add("weighted_51", 7.0 * singles + 6.0 * pairs + 6.0 * rep.full_sq, 51.0);
  add("tail_mass_17_2", singles + pairs + rep.full_sq, 8.5);
  return rep;
}

InequalityReport inequality_suite(const DualElement& d) {
  if (!d.normalized) throw std::invalid_argument("inequality_suite: element not normalized");
  return inequality_suite(d.tensor);
}

}  // namespace sepball::tensoropt
