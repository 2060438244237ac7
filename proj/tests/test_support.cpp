#include <set>
#include <stdexcept>

#include "doctest.h"
#include "sepball/rational.hpp"
#include "sepball/rng.hpp"

using namespace sepball;

TEST_SUITE("support") {

TEST_CASE("rational arithmetic reduces and compares exactly") {
  CHECK(Rational(16, 19).str() == "16/19");
  CHECK(Rational(4, 8) == Rational(1, 2));
  CHECK(Rational(-3, -6) == Rational(1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(3, 2) * Rational(19, 16) - Rational(1, 8) == Rational(53, 32));
  CHECK(Rational(16, 19) / Rational(4, 5) == Rational(20, 19));
  CHECK(Rational(2, 17).inverse() == Rational(17, 2));
  CHECK(Rational(1, 3) < Rational(5, 14));
  CHECK(Rational::max(Rational(27, 5), Rational(26, 5)) == Rational(27, 5));
  CHECK(Rational(7).str() == "7");
  CHECK(Rational(5, 27).value() == doctest::Approx(5.0 / 27.0));
}

TEST_CASE("rational error paths") {
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
  CHECK_THROWS_AS(Rational(0).inverse(), std::domain_error);
  const Rational huge(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(huge * huge, std::overflow_error);
}

TEST_CASE("random streams replay and separate") {
  Rng a = Rng::substream(42, 7);
  Rng b = Rng::substream(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  // distinct streams from one seed should not collide on their prefix
  std::set<std::uint64_t> firsts;
  for (std::uint64_t s = 0; s < 1000; ++s) firsts.insert(Rng::substream(42, s).next_u64());
  CHECK(firsts.size() == 1000);
}

TEST_CASE("gaussian and sphere sampling moments") {
  Rng rng(5);
  double mean = 0, var = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    mean += g;
    var += g * g;
  }
  mean /= n;
  var /= n;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);

  for (int i = 0; i < 100; ++i) {
    const auto u = rng.unit_vector(5);
    double s = 0;
    for (double x : u) s += x * x;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
}

}  // TEST_SUITE("support")
