#pragma once

// Beyond two bands: real rank-one projector loops and their eigenvector
// lift, reflection parity counts at k = 0, pi, and open-chain spectra.

#include "twoband/core.hpp"
#include "twoband/symmetry.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace twoband {

/// Loop of real symmetric rank-one projectors P(k_m), m = 0..n-1.
struct RealProjectorLoop {
  int dim = 2;
  KGrid grid;
  std::vector<Eigen::MatrixXd> mats;
  /// P(k) anywhere in the zone; lets the lift refine the grid. May be empty.
  std::function<Eigen::MatrixXd(double)> source;
};

/// Ground projectors of a real two-band loop. Throws NotReal if |y| >= 1e-9, Gapless.
RealProjectorLoop projector_from_loop(const SampledLoop& loop);
/// Same, straight from real hoppings (refinement evaluates H(k) exactly).
RealProjectorLoop projector_from_hoppings(const Hoppings& h, const KGrid& grid = KGrid(256));

/// P -> [[P, 0], [0, 0]] with `extra` zero rows and columns.
RealProjectorLoop embed(const RealProjectorLoop& p, int extra);

/// Continuous unit eigenvector over nodes m = 0..n; vecs[n] sits at k = pi.
struct EigenvectorLift {
  KGrid grid;
  std::vector<Eigen::VectorXd> vecs;
  int endpoint_sign = +1;
};

/// Signs chosen for maximal overlap with the previous node; the grid is doubled
/// (up to 2^16) until every consecutive overlap exceeds 0.9. Throws LiftFailed.
EigenvectorLift lift_eigenvector(const RealProjectorLoop& p);

struct RealClass {
  int dim = 2;
  int endpoint_sign = +1;
  /// dim == 2 only: turning of the eigenvector in half turns, counted clockwise
  /// in the (e_0, e_1) plane. With that orientation a loop winding w times
  /// counterclockwise in the x-z plane gives half_turns = w.
  int half_turns = 0;

  double winding() const { return 0.5 * half_turns; }
  bool symmetric() const { return endpoint_sign > 0; }
};

RealClass real_class(const RealProjectorLoop& p);

/// Number of negative-energy states with r-parity -1. r must be a Hermitian
/// involution commuting with h. Throws NotCommuting, GaplessAtK, NonIntegerParity.
int reflection_index(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& r, double tol = 1e-9);

struct ReflectionIndex {
  int n_minus_0 = 0;
  int n_minus_pi = 0;
};

/// bond uses r = sigma_x at both momenta; site uses r = G_k, i.e. 1 at k = 0
/// and sigma_z at k = pi.
ReflectionIndex reflection_indices(const Hoppings& h, SymmetryClass cls, double tol = 1e-9);

struct ChainSpectrum {
  int cells = 0;
  std::vector<double> eigenvalues;  // ascending
};

/// Open chain of `cells` unit cells; block (i, i') is h_{i'-i}.
ChainSpectrum open_chain_spectrum(const Hoppings& h, int cells);

struct ProjectorPath {
  std::vector<RealProjectorLoop> frames;
};

struct ProjectorReport {
  bool pass = true;
  int frame = -1;
  int node = -1;
  std::string message;
};

/// Every matrix symmetric, idempotent and of trace 1 within tol; neighbours in k
/// overlap, tr(P_m P_{m+1}) > 0.81; neighbouring frames within 0.25 (Frobenius).
ProjectorReport verify_projector_path(const ProjectorPath& p, double tol = 1e-9);

/// Embeds a two-band projector loop into dim 2 + extra and adds `turns` extra
/// clockwise eigenvector turns by rotating through the last axis:
///   v_t(k) = Rot(axis = normalize((1-t) v(k) + t e_last), angle = -turns (k + pi)) v(k).
/// At t = 0 the axis is v(k) itself, so nothing moves. Steps double until the
/// path verifies (up to 4096).
ProjectorPath fragile_homotopy(const RealProjectorLoop& two_band, int turns, int extra = 1);

}  // namespace twoband
