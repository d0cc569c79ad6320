#include "support.hpp"

#include "twoband/core.hpp"
#include "twoband/error.hpp"
#include "twoband/homotopy.hpp"
#include "twoband/models.hpp"

#include <doctest.h>

#include <random>

using namespace twoband;

TEST_CASE("grid geometry") {
  const KGrid g(16);
  CHECK(g.k(0) == doctest::Approx(-kPi));
  CHECK(g.k(g.zero_node()) == doctest::Approx(0.0));
  for (int m = 0; m < 16; ++m) {
    CHECK(g.k(g.mirror(m)) + g.k(m) == doctest::Approx(m == 0 ? -2 * kPi : 0.0));
  }
  CHECK(g.wrap(-1) == 15);
  CHECK(g.wrap(17) == 1);
  CHECK_THROWS_AS(KGrid(7), Error);
  CHECK_THROWS_AS(KGrid(6), Error);
}

TEST_CASE("Pauli decomposition round trip") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 50; ++i) {
    const PauliVec p{nd(rng), nd(rng), nd(rng), nd(rng)};
    const PauliVec q = pauli_decompose(p.matrix());
    CHECK(q.x == doctest::Approx(p.x));
    CHECK(q.y == doctest::Approx(p.y));
    CHECK(q.z == doctest::Approx(p.z));
    CHECK(q.t == doctest::Approx(p.t));
  }
}

TEST_CASE("Fourier convention: R_1 winds counterclockwise") {
  const Hoppings h = models::r_n(1);
  for (double k : {-2.0, -0.5, 0.3, 1.7}) {
    const PauliVec p = pauli_decompose(eval_bloch(h, k));
    CHECK(p.x == doctest::Approx(std::cos(k)));
    CHECK(p.y == doctest::Approx(std::sin(k)));
    CHECK(p.z == doctest::Approx(0.0));
  }
}

TEST_CASE("SSH hand values") {
  // H(k) = v sz + (1 + cos k) sx + sin k sy
  const Hoppings h = models::ssh(0.5);
  const PauliVec p0 = pauli_decompose(eval_bloch(h, 0.0));
  CHECK(p0.x == doctest::Approx(2.0));
  CHECK(p0.z == doctest::Approx(0.5));
  const PauliVec pp = pauli_decompose(eval_bloch(h, kPi));
  CHECK(pp.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pp.z == doctest::Approx(0.5));
}

TEST_CASE("Bloch Hamiltonian is Hermitian for random hoppings") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Hoppings h = gaussian_hoppings(3, rng);
    CHECK(validate_hoppings(h).empty());
    for (double k : {-3.0, -1.0, 0.0, 0.4, 2.9}) {
      const Matrix2 m = eval_bloch(h, k);
      CHECK((m - m.adjoint()).norm() < 1e-13);
    }
  }
}

TEST_CASE("validate_hoppings flags a non-Hermitian onsite term") {
  Hoppings h = models::sigma_z();
  h.terms[0](0, 1) = 1.0;
  CHECK_FALSE(validate_hoppings(h).empty());
}

TEST_CASE("sample_loop refines until steps are below pi/2") {
  const SampledLoop loop = sample_loop(models::r_n(20), KGrid(8));
  CHECK(loop.size() > 8);
  CHECK(max_step_angle(loop) < kPi / 2);
  CHECK(sample_on_grid(models::r_n(20), KGrid(8)).size() == 8);
}

TEST_CASE("gap statistics") {
  const GapStats g = gap_stats(sample_loop(models::ssh(0.5), KGrid(64)));
  CHECK(g.min == doctest::Approx(0.5));
  CHECK(g.max == doctest::Approx(std::sqrt(4.25)));
}

TEST_CASE("ground projector") {
  const Matrix2 p = ground_projector(pauli::z());
  CHECK(std::abs(p(1, 1) - 1.0) < 1e-14);
  CHECK(std::abs(p(0, 0)) < 1e-14);
  CHECK((p * p - p).norm() < 1e-14);
}

TEST_CASE("block uses h_{-j} = h_j^dagger") {
  const Hoppings h = models::r_n(2);
  CHECK((h.block(-2) - h.block(2).adjoint()).norm() == 0.0);
  CHECK(h.block(5).norm() == 0.0);
}
