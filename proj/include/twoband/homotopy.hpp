#pragma once

// Sampled homotopies between loops, the path verifier, witness paths to the
// class representatives and the Monte-Carlo connectivity sampler.
//
// A path is a list of frames on one shared grid; frame i sits at t = i/T.
// verify_path is the only judge of whether two loops are connected: every
// frame must satisfy the class constraints, every point must be gapped, and
// consecutive frames must be close on the scale of their gaps.

#include "twoband/core.hpp"
#include "twoband/invariants.hpp"
#include "twoband/symmetry.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace twoband {

struct HomotopyPath {
  SymmetryClass symmetry = SymmetryClass::None;
  std::vector<SampledLoop> frames;

  int steps() const { return static_cast<int>(frames.size()) - 1; }
};

struct VerificationReport {
  enum class Failure { None, Empty, GridMismatch, Symmetry, Gap, Continuity, KStep };

  bool pass = true;
  Failure failure = Failure::None;
  int frame = -1;
  int node = -1;
  double value = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  double max_residual = 0.0;
  std::string message;
};

std::string_view to_string(VerificationReport::Failure f);

/// Checks, frame by frame:
///   symmetry residual <= tol_sym,
///   |x| >= tol_gap at every node,
///   consecutive unit vectors within a frame subtend < pi/2,
///   max_k |x_{i+1}(k) - x_i(k)| <= min(gap_i, gap_{i+1}) / 4.
/// Distances use (x, y, z) only.
VerificationReport verify_path(const HomotopyPath& p, double tol_gap = kGapTol, double tol_sym = kDefaultSymTol);

/// Pointwise (1 - i/T) a + (i/T) b. Throws GridMismatch.
HomotopyPath linear_path(const SampledLoop& a, const SampledLoop& b, int steps,
                         SymmetryClass cls = SymmetryClass::None);

struct WitnessOptions {
  std::uint64_t seed = 0;
  int max_retries = 8;
  int min_steps = 64;
  int max_steps = 4096;
  double tol_gap = kGapTol;
  double tol_sym = kDefaultSymTol;
};

struct Witness {
  ClassLabel label;
  HomotopyPath path;
  VerificationReport report;
  int retries = 0;
};

/// Builds and verifies a path from `loop` to the representative of its label.
/// Throws WitnessFailed once the retry budget is spent, plus anything classify
/// throws.
Witness witness_to_representative(const SampledLoop& loop, SymmetryClass cls, const WitnessOptions& opts = {});

/// splitmix64 mix of (seed, index, attempt); one RNG stream per sample.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t attempt);

/// Independent unit-Gaussian real and imaginary parts for h_0..h_range;
/// h_0 is replaced by its Hermitian part.
Hoppings gaussian_hoppings(int range, std::mt19937_64& rng);

struct SymmetricSample {
  Hoppings hoppings;
  SampledLoop loop;
  int attempts = 0;
};

/// Draws Gaussian hoppings, symmetrizes into `cls` and keeps the first draw
/// with relative gap >= min_relative_gap. Deterministic in (seed, index).
SymmetricSample sample_symmetric(SymmetryClass cls, int range, std::uint64_t seed, std::uint64_t index,
                                 const KGrid& grid = KGrid(256), double min_relative_gap = 0.1,
                                 int max_attempts = 10000);

struct ConnectivityOptions {
  SymmetryClass cls = SymmetryClass::Chiral;
  int range = 1;
  int samples = 100;
  std::uint64_t seed = 0;
  /// Labels R_n with |n| > clip are tallied as out of range. Negative: use `range`.
  int clip = -1;
  int jobs = 1;
  int grid = 256;
  int max_pairs = 200;
  double min_relative_gap = 0.1;
};

struct SampleRecord {
  int index = 0;
  int attempts = 0;
  ClassLabel label;
  int witness_steps = 0;
  int witness_retries = 0;
  bool witness_pass = false;
};

struct Component {
  ClassLabel label;
  std::vector<int> members;
  bool pure = true;
};

struct SoundnessCheck {
  int candidate_pairs = 0;
  int checked = 0;
  int failed = 0;
  std::map<std::string, int> failure_kinds;
  /// Largest, over checked pairs, of min_{t,k} |x_t(k)| / min(gap_a, gap_b), with
  /// t continuous and k on the grid. Small values mean the line nearly closes the gap.
  double worst_gap_ratio = 0.0;
};

struct ConnectivityReport {
  SymmetryClass cls = SymmetryClass::None;
  std::vector<SampleRecord> samples;
  std::vector<Component> components;
  SoundnessCheck soundness;
  int out_of_clip = 0;

  std::vector<ClassLabel> observed_labels() const;
  bool components_match_labels() const;
};

/// Throws Gapless for theta_minus, WitnessFailed (with the sample index) if a
/// witness cannot be verified.
ConnectivityReport connectivity_sample(const ConnectivityOptions& opts);

}  // namespace twoband
