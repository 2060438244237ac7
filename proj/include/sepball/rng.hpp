#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace sepball {

/// Deterministic random stream. Every randomized routine takes an explicit
/// (seed, stream) pair so campaigns can fan out over trials and still replay
/// bit-for-bit: trial i always draws from substream(seed, i) regardless of
/// scheduling. Gaussians use the polar method on top of raw 64-bit draws,
/// avoiding the library-dependent std::normal_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix(seed ^ 0x5851f42d4c957f2dULL)) {}

  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(splitmix(seed) ^ splitmix(0x9e3779b97f4a7c15ULL * (stream + 1)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix(state_);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = uniform(-1.0, 1.0);
      v = uniform(-1.0, 1.0);
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  std::vector<double> gaussian_vector(int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto& x : out) x = gaussian();
    return out;
  }

  /// Uniform point on the unit sphere in R^n.
  std::vector<double> unit_vector(int n) {
    for (;;) {
      auto v = gaussian_vector(n);
      double s = 0;
      for (double x : v) s += x * x;
      if (s > 1e-30) {
        const double inv = 1.0 / std::sqrt(s);
        for (auto& x : v) x *= inv;
        return v;
      }
    }
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;

  static std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

}  // namespace sepball
