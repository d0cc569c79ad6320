#include "support.hpp"

#include "twoband/error.hpp"
#include "twoband/homotopy.hpp"
#include "twoband/models.hpp"
#include "twoband/symmetry.hpp"

#include <doctest.h>

#include <random>

using namespace twoband;

namespace {

double max_diff(const Hoppings& a, const Hoppings& b) {
  double d = 0.0;
  const int r = std::max(a.range(), b.range());
  for (int j = 0; j <= r; ++j) d = std::max(d, (a.block(j) - b.block(j)).norm());
  return d;
}

}  // namespace

TEST_CASE("tags round trip") {
  CHECK(all_classes().size() == 14);
  for (SymmetryClass c : all_classes()) {
    REQUIRE(parse_class(tag(c)).has_value());
    CHECK(*parse_class(tag(c)) == c);
  }
  CHECK_FALSE(parse_class("bogus").has_value());
}

TEST_CASE("composite classes carry both generators") {
  CHECK(constraints(SymmetryClass::None).empty());
  CHECK(constraints(SymmetryClass::Chiral).size() == 1);
  CHECK(constraints(SymmetryClass::SiteAndTheta).size() == 2);
  CHECK(constraints(SymmetryClass::BondAndTheta).size() == 2);
  CHECK(constraints(SymmetryClass::CPlusAndTheta).size() == 2);
  CHECK(constraints(SymmetryClass::CMinusAndTheta).size() == 2);
}

TEST_CASE("symmetrize lands in the class and is idempotent") {
  std::mt19937_64 rng(11);
  for (SymmetryClass c : all_classes()) {
    CAPTURE(tag(c));
    for (int i = 0; i < 5; ++i) {
      const Hoppings h = symmetrize(gaussian_hoppings(2, rng), c);
      CHECK(residual(sample_on_grid(h, KGrid(64)), c).max() < 1e-12);
      CHECK(max_diff(symmetrize(h, c), h) < 1e-12);
    }
  }
}

TEST_CASE("constraint images are involutions") {
  std::mt19937_64 rng(5);
  const Hoppings h = gaussian_hoppings(2, rng);
  const SampledLoop loop = sample_on_grid(h, KGrid(32));
  for (Constraint c : {Constraint::ThetaPlus, Constraint::ThetaMinus, Constraint::CPlus, Constraint::CMinus,
                       Constraint::Bond, Constraint::Site, Constraint::Chiral, Constraint::BondTheta,
                       Constraint::SiteTheta}) {
    CAPTURE(tag(c));
    SampledLoop image = loop;
    for (int m = 0; m < loop.size(); ++m) image.points[static_cast<std::size_t>(m)] = pauli_decompose(constraint_image(loop, c, m));
    for (int m = 0; m < loop.size(); ++m) {
      CHECK((constraint_image(image, c, m) - loop.at(m).matrix()).norm() < 1e-12);
    }
  }
}

TEST_CASE("theta_minus forces a closed gap at k = 0 and pi") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    const Hoppings h = symmetrize(gaussian_hoppings(2, rng), SymmetryClass::ThetaMinus);
    CHECK(testing::at_k(h, 0.0).norm() < 1e-12);
    CHECK(testing::at_k(h, kPi).norm() < 1e-12);
  }
}

TEST_CASE("detect on fixtures") {
  auto has = [](const std::vector<SymmetryClass>& v, SymmetryClass c) {
    return std::find(v.begin(), v.end(), c) != v.end();
  };
  const auto d1 = detect(sample_loop(models::r_n(1), KGrid(64)));
  CHECK(has(d1, SymmetryClass::None));
  CHECK(has(d1, SymmetryClass::Chiral));
  CHECK(has(d1, SymmetryClass::Bond));
  CHECK_FALSE(has(d1, SymmetryClass::Site));
  const auto dz = detect(sample_loop(models::ssh(1.0), KGrid(64)));
  CHECK(has(dz, SymmetryClass::Site));
  CHECK_FALSE(has(dz, SymmetryClass::Chiral));
}

TEST_CASE("gauge transform composes and inverts") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10; ++i) {
    const Hoppings h = gaussian_hoppings(2, rng);
    CHECK(max_diff(gauge_transform(gauge_transform(h, 2), -2), h) < 1e-12);
    CHECK(max_diff(gauge_transform(gauge_transform(h, 1), 1), gauge_transform(h, 2)) < 1e-12);
    for (double k : {-2.5, 0.0, 1.1}) {
      // keeps z and rotates (x, y)
      const PauliVec a = testing::at_k(h, k);
      const PauliVec b = testing::at_k(gauge_transform(h, 1), k);
      CHECK(b.z == doctest::Approx(a.z));
      CHECK(std::hypot(b.x, b.y) == doctest::Approx(std::hypot(a.x, a.y)));
    }
  }
}

TEST_CASE("gauge changes move the site reflection but fix sigma_z") {
  // G^l H G^-l is symmetric under G_k^{1+2l}, not G_k
  const Hoppings h = gauge_transform(models::ssh(0.7), 1);
  CHECK(residual(sample_loop(h, KGrid(64)), SymmetryClass::Site).max() > 0.1);
  const Hoppings z = gauge_transform(models::sigma_z(-1.0), 2);
  CHECK(residual(sample_loop(z, KGrid(64)), SymmetryClass::Site).max() < 1e-12);
}
