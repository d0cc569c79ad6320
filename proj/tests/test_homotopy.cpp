#include "support.hpp"

#include "twoband/error.hpp"
#include "twoband/homotopy.hpp"
#include "twoband/models.hpp"

#include <doctest.h>

using namespace twoband;

TEST_CASE("linear path between equal loops passes") {
  const SampledLoop a = sample_loop(models::r_n(1), KGrid(64));
  const HomotopyPath p = linear_path(a, a, 4, SymmetryClass::Chiral);
  CHECK(p.steps() == 4);
  CHECK(verify_path(p).pass);
}

TEST_CASE("linear path across a gap closing fails") {
  const SampledLoop a = sample_loop(models::r_n(1), KGrid(64));
  const SampledLoop b = sample_loop(models::r_n(1, -1.0), KGrid(64));
  const VerificationReport r = verify_path(linear_path(a, b, 2, SymmetryClass::Chiral));
  CHECK_FALSE(r.pass);
  CHECK(r.failure == VerificationReport::Failure::Gap);
  CHECK(r.frame == 1);
}

TEST_CASE("verifier reports the failing check") {
  const SampledLoop a = sample_loop(models::r_n(1), KGrid(64));
  const SampledLoop b = sample_loop(models::ssh(2.0), KGrid(64));
  CHECK(verify_path(linear_path(a, b, 256, SymmetryClass::Chiral)).failure == VerificationReport::Failure::Symmetry);
  CHECK(verify_path(HomotopyPath{}).failure == VerificationReport::Failure::Empty);
  CHECK_THROWS_AS(linear_path(a, sample_loop(models::r_n(1), KGrid(32)), 4), Error);

  HomotopyPath jump{SymmetryClass::None, {a, sample_loop(models::r_n(0), KGrid(64))}};
  CHECK(verify_path(jump).failure == VerificationReport::Failure::Continuity);

  HomotopyPath mixed{SymmetryClass::None, {a, sample_loop(models::r_n(1), KGrid(32))}};
  CHECK(verify_path(mixed).failure == VerificationReport::Failure::GridMismatch);

  HomotopyPath coarse{SymmetryClass::None, {sample_on_grid(models::r_n(10), KGrid(8))}};
  CHECK(verify_path(coarse).failure == VerificationReport::Failure::KStep);
}

TEST_CASE("stream seeds are distinct and reproducible") {
  CHECK(stream_seed(1, 2, 3) == stream_seed(1, 2, 3));
  CHECK(stream_seed(1, 2, 3) != stream_seed(1, 2, 4));
  CHECK(stream_seed(1, 2, 3) != stream_seed(1, 3, 3));
  CHECK(stream_seed(1, 2, 3) != stream_seed(2, 2, 3));
}

TEST_CASE("symmetric samples are gapped and deterministic") {
  for (SymmetryClass c : testing::gapped_classes()) {
    CAPTURE(tag(c));
    const SymmetricSample s = sample_symmetric(c, 2, 4, 9);
    CHECK(gap_stats(s.loop).relative() >= 0.1);
    CHECK(residual(s.loop, c).max() < 1e-12);
    const SymmetricSample t = sample_symmetric(c, 2, 4, 9);
    CHECK(t.attempts == s.attempts);
    CHECK(t.loop.points == s.loop.points);
  }
  CHECK_THROWS_AS(sample_symmetric(SymmetryClass::ThetaMinus, 1, 0, 0), Error);
}

TEST_CASE("witness paths verify and end at the representative") {
  for (SymmetryClass c : testing::gapped_classes()) {
    CAPTURE(tag(c));
    for (int i = 0; i < 4; ++i) {
      const SymmetricSample s = sample_symmetric(c, 1 + i % 2, 31, static_cast<std::uint64_t>(i));
      const Witness w = witness_to_representative(s.loop, c);
      CHECK(w.report.pass);
      CHECK(w.path.symmetry == c);
      CHECK(w.label == classify(s.loop, c));
      const SampledLoop rep = representative_loop(w.label, s.loop.grid);
      const SampledLoop& last = w.path.frames.back();
      double d = 0.0;
      for (int m = 0; m < rep.size(); ++m) d = std::max(d, (last.at(m).vec() - rep.at(m).vec()).norm());
      CHECK(d < 1e-9);
      CHECK(w.path.frames.front().points == s.loop.points);
    }
  }
}

TEST_CASE("small connectivity run") {
  ConnectivityOptions o;
  o.cls = SymmetryClass::Chiral;
  o.range = 1;
  o.samples = 30;
  o.seed = 3;
  o.jobs = 2;
  const ConnectivityReport r = connectivity_sample(o);
  CHECK(r.samples.size() == 30);
  CHECK(r.components_match_labels());
  for (const Component& c : r.components) CHECK(c.pure);
  CHECK(r.soundness.failed == r.soundness.checked);

  o.jobs = 1;
  const ConnectivityReport r1 = connectivity_sample(o);
  REQUIRE(r1.samples.size() == r.samples.size());
  for (std::size_t i = 0; i < r.samples.size(); ++i) CHECK(r1.samples[i].label == r.samples[i].label);
}

TEST_CASE("connectivity refuses theta_minus") {
  ConnectivityOptions o;
  o.cls = SymmetryClass::ThetaMinus;
  CHECK_THROWS_AS(connectivity_sample(o), Error);
}
