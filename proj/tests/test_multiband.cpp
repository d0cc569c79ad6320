#include "support.hpp"

#include "twoband/error.hpp"
#include "twoband/invariants.hpp"
#include "twoband/models.hpp"
#include "twoband/multiband.hpp"

#include <doctest.h>

#include <algorithm>

using namespace twoband;

TEST_CASE("projectors are real rank-one idempotents") {
  const RealProjectorLoop p = projector_from_hoppings(models::xz_winding(2), KGrid(32));
  CHECK(p.dim == 2);
  for (const Eigen::MatrixXd& m : p.mats) {
    CHECK((m * m - m).norm() < 1e-12);
    CHECK(m.trace() == doctest::Approx(1.0));
    CHECK((m - m.transpose()).norm() < 1e-14);
  }
  CHECK_THROWS_AS(projector_from_hoppings(models::r_n(1), KGrid(32)), Error);
}

TEST_CASE("eigenvector half turns follow the x-z winding") {
  for (int w = -3; w <= 3; ++w) {
    CAPTURE(w);
    const RealClass c = real_class(projector_from_hoppings(models::xz_winding(w)));
    CHECK(c.half_turns == w);
    CHECK(c.endpoint_sign == (w % 2 == 0 ? +1 : -1));
  }
}

TEST_CASE("embedding keeps the endpoint sign") {
  for (int w = 1; w <= 4; ++w) {
    const RealProjectorLoop p = projector_from_hoppings(models::xz_winding(w), KGrid(64));
    const RealProjectorLoop q = embed(p, 2);
    CHECK(q.dim == 4);
    CHECK(real_class(q).endpoint_sign == real_class(p).endpoint_sign);
  }
}

TEST_CASE("lift is continuous") {
  const EigenvectorLift l = lift_eigenvector(projector_from_hoppings(models::xz_winding(3), KGrid(16)));
  for (std::size_t i = 1; i < l.vecs.size(); ++i) CHECK(l.vecs[i].dot(l.vecs[i - 1]) > 0.9);
}

TEST_CASE("fragile homotopy between windings of equal parity") {
  const ProjectorPath p = fragile_homotopy(projector_from_hoppings(models::xz_winding(1), KGrid(64)), 1);
  CHECK(verify_projector_path(p).pass);
  const RealProjectorLoop target = embed(projector_from_hoppings(models::xz_winding(3), KGrid(64)), 1);
  double d = 0.0;
  for (std::size_t m = 0; m < target.mats.size(); ++m) d = std::max(d, (p.frames.back().mats[m] - target.mats[m]).norm());
  CHECK(d < 1e-9);
}

TEST_CASE("projector path verifier catches jumps") {
  const RealProjectorLoop a = embed(projector_from_hoppings(models::xz_winding(1), KGrid(64)), 1);
  const RealProjectorLoop b = embed(projector_from_hoppings(models::xz_winding(3), KGrid(64)), 1);
  CHECK_FALSE(verify_projector_path(ProjectorPath{{a, b}}).pass);
}

TEST_CASE("reflection index of single matrices") {
  const Eigen::MatrixXcd sz = pauli::z();
  const Eigen::MatrixXcd sx = pauli::x();
  CHECK(reflection_index(sz, sz) == 1);
  CHECK(reflection_index(-sz, sz) == 0);
  CHECK(reflection_index(sx, sx) == 1);
  CHECK(reflection_index(-sx, sx) == 0);
  CHECK_THROWS_AS(reflection_index(sx, sz), Error);
  CHECK_THROWS_AS(reflection_index(Eigen::MatrixXcd::Zero(2, 2), sz), Error);
}

TEST_CASE("open chains") {
  const ChainSpectrum s = open_chain_spectrum(models::ssh(0.0), 10);
  CHECK(s.eigenvalues.size() == 20);
  CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
  const ChainSpectrum t = open_chain_spectrum(models::sigma_z(), 5);
  for (double e : t.eigenvalues) CHECK(std::abs(std::abs(e) - 1.0) < 1e-12);
}
