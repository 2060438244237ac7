#include <cmath>
#include <vector>

#include "doctest.h"
#include "sepball/campaigns.hpp"
#include "sepball/rng.hpp"
#include "sepball/tensoropt.hpp"

using namespace sepball;
using namespace sepball::tensoropt;
using matan::GenMatrix;

namespace {

Tensor3 gaussian_tensor(int n1, int n2, int n3, Rng& rng) {
  Tensor3 t(n1, n2, n3);
  for (double& v : t.raw()) v = rng.gaussian();
  return t;
}

double product_pairing(const Tensor3& x, std::span<const double> a, std::span<const double> b,
                       std::span<const double> c) {
  double s = 0;
  for (int i = 0; i < x.dim(0); ++i)
    for (int j = 0; j < x.dim(1); ++j)
      for (int k = 0; k < x.dim(2); ++k) s += x(i, j, k) * a[i] * b[j] * c[k];
  return s;
}

}  // namespace

TEST_SUITE("tensoropt") {

TEST_CASE("tensor basics") {
  CHECK_THROWS_AS(Tensor3(2, 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(Tensor3(3, 5, 3), std::invalid_argument);

  Rng rng(51);
  SUBCASE("slices reassemble the tensor exactly") {
    for (int axis = 0; axis < 3; ++axis) {
      const Tensor3 t = gaussian_tensor(3, 4, 3, rng);
      const Tensor3 back = from_slices(slices(t, axis));
      for (std::size_t i = 0; i < t.size(); ++i) CHECK(back.coords()[i] == t.coords()[i]);
    }
  }
  SUBCASE("json round trip") {
    const Tensor3 t = gaussian_tensor(4, 4, 4, rng);
    const Tensor3 back = tensor_from_json(tensor_to_json(t));
    CHECK(back.dims() == t.dims());
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(back.coords()[i] == t.coords()[i]);
    CHECK_THROWS(tensor_from_json("{\"dims\":[3,3,3]}"));
    CHECK_THROWS(tensor_from_json("{\"dims\":[3,3,3],\"coords\":[1,2]}"));
    CHECK_THROWS(tensor_from_json("not json"));
  }
}

TEST_CASE("injective norm") {
  Rng rng(52);
  SUBCASE("recovers rank-one tensors exactly") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = rng.unit_vector(3);
      const auto b = rng.unit_vector(4);
      const auto c = rng.unit_vector(3);
      const auto r = injective_norm(Tensor3::rank_one(a, b, c), 16, 53 + trial);
      CHECK(std::abs(r.value - 1.0) <= 1e-10);
    }
  }
  SUBCASE("the extremal element has injective norm one") {
    const auto r = injective_norm(extremal_element().w, 64, 54);
    CHECK(std::abs(r.value - 1.0) <= 1e-9);
  }
  SUBCASE("zero tensor") {
    CHECK(injective_norm(Tensor3(3, 3, 3), 4, 1).value == 0.0);
  }
  SUBCASE("bounded by the Euclidean norm and above random sampling") {
    for (int trial = 0; trial < 2; ++trial) {
      const Tensor3 t = gaussian_tensor(3, 3, 3, rng);
      const auto r = injective_norm(t, 64, 55 + trial);
      CHECK(r.value <= t.norm() + 1e-12);
      Rng sampler(77 + trial);
      double sampled = 0;
      for (int i = 0; i < 100000; ++i) {
        const auto a = sampler.unit_vector(3);
        const auto b = sampler.unit_vector(3);
        const auto c = sampler.unit_vector(3);
        sampled = std::max(sampled, std::abs(product_pairing(t, a, b, c)));
      }
      CHECK(r.value >= sampled - 1e-9);
    }
  }
  SUBCASE("alternation sweeps are monotone") {
    for (int trial = 0; trial < 50; ++trial) {
      const Tensor3 t = gaussian_tensor(trial % 2 ? 3 : 4, 3, 4, rng);
      const auto r = injective_norm(t, 4, 56 + trial);
      for (std::size_t s = 1; s < r.sweep_values.size(); ++s)
        CHECK(r.sweep_values[s] >= r.sweep_values[s - 1] - 1e-12);
    }
  }
  SUBCASE("invariant under orthogonal triple maps") {
    for (int trial = 0; trial < 20; ++trial) {
      const Tensor3 t = gaussian_tensor(3, 3, 3, rng);
      const GenMatrix u = matan::random_orthogonal(3, rng);
      const GenMatrix v = matan::random_orthogonal(3, rng);
      const GenMatrix w = matan::random_orthogonal(3, rng);
      const Tensor3 mapped = apply_triple_map(u, v, w, t);
      CHECK(std::abs(mapped.norm() - t.norm()) <= 1e-12 * std::max(1.0, t.norm()));
      const double n0 = injective_norm(t, 32, 57 + trial).value;
      const double n1 = injective_norm(mapped, 32, 58 + trial).value;
      CHECK(std::abs(n0 - n1) <= 1e-9 * std::max(1.0, n0));
    }
  }
}

TEST_CASE("polar membership margins") {
  CHECK(polar_margin(Tensor3(3, 3, 3), 4, 1) == doctest::Approx(1.0));
  const auto ext = extremal_element();
  CHECK(std::abs(polar_margin(ext.w, 64, 61)) <= 1e-9);
  Tensor3 scaled = ext.w;
  scaled *= 1.01;
  CHECK(polar_margin(scaled, 64, 62) == doctest::Approx(-0.01).epsilon(1e-6));
}

TEST_CASE("extremal element") {
  const auto ext = extremal_element();
  CHECK(ext.w.norm_sq() == 7.0);  // entries are 0/1/-1, exact arithmetic
  for (std::size_t i = 0; i < ext.w.size(); ++i)
    CHECK(ext.x.coords()[i] == ext.w.coords()[i] / 7.0);
  CHECK(ext.x.norm() == doctest::Approx(std::sqrt(1.0 / 7.0)).epsilon(1e-14));

  // 7 x* = w* lies on the polar boundary, so x* is the closest boundary
  // point of the product body itself.
  Tensor3 seven_x = ext.x;
  seven_x *= 7.0;
  CHECK(std::abs(injective_norm(seven_x, 64, 63).value - 1.0) <= 1e-9);
}

TEST_CASE("polar pairing property") {
  // Every empirically certified polar element pairs within [-1, 1] with unit
  // product tensors.
  Rng rng(64);
  const auto ext = extremal_element();
  for (int trial = 0; trial < 20; ++trial) {
    Tensor3 w = trial == 0 ? ext.w : gaussian_tensor(3, 3, 3, rng);
    const double nu = injective_norm(w, 64, 65 + trial).value;
    w *= 1.0 / nu;
    Rng sampler(80 + trial);
    for (int i = 0; i < 500; ++i) {
      const auto a = sampler.unit_vector(3);
      const auto b = sampler.unit_vector(3);
      const auto c = sampler.unit_vector(3);
      CHECK(std::abs(product_pairing(w, a, b, c)) <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("boundary norms never exceed sqrt(7)") {
  const double sqrt7 = std::sqrt(7.0);
  const auto search = ptp3_inner_radius_search(200, 64, 66);
  CHECK(search.max_norm <= sqrt7 + 1e-6);
  CHECK(search.max_norm >= sqrt7 - 1e-6);  // attained from the seeded start

  // The slice pencil of a certified boundary element also certifies the
  // Frobenius mass bound <= 7.
  Rng rng(67);
  for (int trial = 0; trial < 1000; ++trial) {
    Tensor3 w = gaussian_tensor(3, 3, 3, rng);
    const double nu = injective_norm(w, 64, 68 + trial).value;
    w *= 1.0 / nu;
    CHECK(w.norm_sq() <= 7.0 + 1e-6);

    matan::MatrixPencil p;
    p.shift = {0, 0, 0};
    p.mats = {GenMatrix(3, 3)};
    for (const auto& m : slices(w, 0).slices) p.mats.push_back(m);
    CHECK(matan::pencil_margin(p, 16, 69 + trial).value <= 1e-7);
  }
}

TEST_CASE("orthogonal orbit of the extremal element") {
  const auto ext = extremal_element();
  const double sqrt7 = std::sqrt(7.0);
  Rng rng(70);
  for (int trial = 0; trial < 10; ++trial) {
    const GenMatrix u = matan::random_orthogonal(3, rng);
    const GenMatrix v = matan::random_orthogonal(3, rng);
    const GenMatrix w = matan::random_orthogonal(3, rng);
    const Tensor3 orbit = apply_triple_map(u, v, w, ext.w);
    CHECK(std::abs(orbit.norm() - sqrt7) <= 1e-9);
    CHECK(std::abs(injective_norm(orbit, 64, 71 + trial).value - 1.0) <= 1e-9);
  }
}

TEST_CASE("apply triple map") {
  Rng rng(72);
  const Tensor3 t = gaussian_tensor(3, 4, 3, rng);
  SUBCASE("identity maps leave the tensor unchanged") {
    const Tensor3 out = apply_triple_map(GenMatrix::identity(3), GenMatrix::identity(4),
                                         GenMatrix::identity(3), t);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(out.coords()[i] == t.coords()[i]);
  }
  SUBCASE("rank-one tensors map factorwise") {
    const auto a = rng.gaussian_vector(3);
    const auto b = rng.gaussian_vector(3);
    const auto c = rng.gaussian_vector(3);
    const GenMatrix ma = matan::random_orthogonal(3, rng);
    const GenMatrix mb = matan::random_orthogonal(3, rng);
    const GenMatrix mc = matan::random_orthogonal(3, rng);
    const Tensor3 lhs = apply_triple_map(ma, mb, mc, Tensor3::rank_one(a, b, c));
    const Tensor3 rhs = Tensor3::rank_one(ma.apply(a), mb.apply(b), mc.apply(c));
    for (std::size_t i = 0; i < lhs.size(); ++i)
      CHECK(lhs.coords()[i] == doctest::Approx(rhs.coords()[i]).epsilon(1e-13));
  }
  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_AS(apply_triple_map(GenMatrix::identity(4), GenMatrix::identity(4),
                                     GenMatrix::identity(3), t),
                    std::invalid_argument);
  }
}

TEST_CASE("trilinear minimum over product rays") {
  SUBCASE("the root basis tensor pairs to one with every ray") {
    const auto r = cone_trilinear_min(Tensor3::basis(4, 4, 4, 0, 0, 0), 16, 73);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("a product of boundary functionals attains zero") {
    // (1+u_1)(1+v_1)(1+w_1) vanishes as soon as one factor reaches -e_1
    std::vector<double> e0e1{1, 1, 0, 0};
    const Tensor3 t = Tensor3::rank_one(e0e1, e0e1, e0e1);
    const auto r = cone_trilinear_min(t, 32, 74);
    CHECK(std::abs(r.value) <= 1e-12);
    double closest = 1e300;
    for (int axis = 0; axis < 3; ++axis)
      closest = std::min(closest, std::abs(r.argmin[axis][0] + 1.0));
    CHECK(closest <= 1e-6);
  }
  SUBCASE("single off-root coordinate") {
    const auto r = cone_trilinear_min(Tensor3::basis(4, 4, 4, 1, 1, 1), 32, 75);
    CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("dual boundary calibration") {
  SUBCASE("a single off-root coordinate calibrates with unit shift") {
    const auto d = dual_boundary_calibrate(Tensor3::basis(4, 4, 4, 1, 1, 1), 64, 76);
    CHECK(d.shift == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(d.tensor(0, 0, 0) == doctest::Approx(1.0));
    CHECK(d.tensor(1, 1, 1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(d.margin >= -1e-9);
  }
  SUBCASE("elements on the root line are degenerate and rejected") {
    Tensor3 neg(4, 4, 4);
    neg(0, 0, 0) = -1.0;
    CHECK_THROWS_AS(dual_boundary_calibrate(neg, 16, 77), std::domain_error);
    CHECK_THROWS_AS(dual_boundary_calibrate(Tensor3(4, 4, 4), 16, 78), std::invalid_argument);
  }
  SUBCASE("random draws calibrate onto the boundary") {
    for (int trial = 0; trial < 200; ++trial) {
      const auto d = campaigns::random_dual_element(79, trial, 64);
      CHECK(d.normalized);
      CHECK(d.tensor(0, 0, 0) == doctest::Approx(1.0));
      CHECK(d.margin >= -1e-8);
      CHECK(d.margin <= 1e-6);  // boundary, not interior
    }
  }
}

TEST_CASE("reflection averaging") {
  SUBCASE("kills exactly the mixed root classes") {
    Tensor3 all(4, 4, 4);
    for (double& v : all.raw()) v = 1.0;
    const Tensor3 y = symmetrize_dd_id(all);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          const bool keep = (i == 0 && j == 0) || (i != 0 && j != 0);
          CHECK(y(i, j, k) == (keep ? 1.0 : 0.0));
        }
  }
  SUBCASE("basis examples") {
    const Tensor3 e000 = symmetrize_dd_id(Tensor3::basis(4, 4, 4, 0, 0, 0));
    CHECK(e000(0, 0, 0) == 1.0);
    const Tensor3 e102 = symmetrize_dd_id(Tensor3::basis(4, 4, 4, 1, 0, 2));
    CHECK(e102.norm_sq() == 0.0);
  }
  SUBCASE("preserves dual-cone membership of calibrated elements") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto d = campaigns::random_dual_element(80, trial, 64);
      const Tensor3 y = symmetrize_dd_id(d.tensor);
      CHECK(cone_trilinear_min(y, 64, 81 + trial).value >= -1e-8);
    }
  }
}

TEST_CASE("inequality suite") {
  SUBCASE("the root element has zero mass everywhere") {
    Tensor3 e000 = Tensor3::basis(4, 4, 4, 0, 0, 0);
    const auto rep = inequality_suite(e000);
    for (const auto& term : rep.terms) {
      CHECK(term.lhs == 0.0);
      CHECK(term.margin == term.rhs);
    }
  }
  SUBCASE("unnormalized input is rejected") {
    Tensor3 t(4, 4, 4);
    t(0, 0, 0) = 2.0;
    CHECK_THROWS_AS(inequality_suite(t), std::invalid_argument);
    DualElement d;
    d.tensor = t;
    d.normalized = false;
    CHECK_THROWS_AS(inequality_suite(d), std::invalid_argument);
  }
  SUBCASE("an element embedding the extremal block calibrates and passes") {
    const auto ext = extremal_element();
    Tensor3 x(4, 4, 4);
    for (int i = 1; i < 4; ++i)
      for (int j = 1; j < 4; ++j)
        for (int k = 1; k < 4; ++k) x(i, j, k) = ext.w(i - 1, j - 1, k - 1) / std::sqrt(7.0);
    x(0, 0, 0) = 1.0;
    const auto d = dual_boundary_calibrate(x, 128, 82);
    const auto rep = inequality_suite(d);
    CHECK(rep.all_hold(1e-9));
  }
  SUBCASE("monte carlo over calibrated elements") {
    for (int trial = 0; trial < 200; ++trial) {
      const auto d = campaigns::random_dual_element(83, trial, 64);
      CHECK(inequality_suite(d).all_hold(1e-6));
    }
  }
  SUBCASE("integer coefficient identities") {
    CHECK(weighted_form_coefficients_consistent());
  }
}

TEST_CASE("pencil reduction of symmetrized dual elements") {
  // v_k = x_{00k}, (M_0)_{ij} = x_{ij0}, (M_k)_{ij} = x_{ijk}: membership in
  // the dual cone is the sigma_max pencil condition for the symmetrized
  // element, so no positive margin may be found.
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = campaigns::random_dual_element(84, trial, 64);
    const Tensor3 y = symmetrize_dd_id(d.tensor);
    matan::MatrixPencil p;
    p.shift = {y(0, 0, 1), y(0, 0, 2), y(0, 0, 3)};
    p.mats.assign(4, GenMatrix(3, 3));
    for (int i = 1; i < 4; ++i)
      for (int j = 1; j < 4; ++j) {
        p.mats[0](i - 1, j - 1) = y(i, j, 0);
        for (int k = 1; k < 4; ++k) p.mats[k](i - 1, j - 1) = y(i, j, k);
      }
    CHECK(matan::pencil_margin(p, 16, 85 + trial).value <= 1e-7);
  }
}

TEST_CASE("pairing of dual elements with product rays") {
  Rng rng(86);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = campaigns::random_dual_element(87, trial, 64);
    for (int i = 0; i < 100; ++i) {
      const auto u = rng.unit_vector(3);
      const auto v = rng.unit_vector(3);
      const auto w = rng.unit_vector(3);
      const std::vector<double> fu{1, u[0], u[1], u[2]};
      const std::vector<double> fv{1, v[0], v[1], v[2]};
      const std::vector<double> fw{1, w[0], w[1], w[2]};
      CHECK(product_pairing(d.tensor, fu, fv, fw) >= -1e-8);
    }
  }
}

}  // TEST_SUITE("tensoropt")
