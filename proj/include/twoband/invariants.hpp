#pragma once

#include "twoband/core.hpp"
#include "twoband/symmetry.hpp"

#include <string>
#include <utility>
#include <vector>

namespace twoband {

/// Canonical representative of a homotopy class: +-sigma_x, +-sigma_z or +-R_n.
struct ClassLabel {
  enum class Kind { SigmaX, SigmaZ, R };

  int sign = +1;
  Kind kind = Kind::SigmaZ;
  int n = 0;  // only meaningful for Kind::R

  static ClassLabel sigma_x(int sign = +1) { return {sign, Kind::SigmaX, 0}; }
  static ClassLabel sigma_z(int sign = +1) { return {sign, Kind::SigmaZ, 0}; }
  static ClassLabel r(int n, int sign = +1) { return {sign, Kind::R, n}; }

  friend bool operator==(const ClassLabel& a, const ClassLabel& b) {
    return a.sign == b.sign && a.kind == b.kind && (a.kind != Kind::R || a.n == b.n);
  }
  friend bool operator<(const ClassLabel& a, const ClassLabel& b);
};

/// "+sigma_z", "-sigma_x", "+R_2", "-R_-1".
std::string to_string(const ClassLabel& label);
/// Inverse of to_string; throws Parse.
ClassLabel parse_label(const std::string& text);

/// Hoppings whose Bloch matrix is exactly the representative.
Hoppings representative_hoppings(const ClassLabel& label);
SampledLoop representative_loop(const ClassLabel& label, const KGrid& grid);

enum class Plane { XY, XZ };
enum class Axis { X, Z };

/// Winding of the loop around the origin of the given plane, counterclockwise
/// in (x, y) resp. (x, z).
int winding_plane(const SampledLoop& loop, Plane plane);

/// Sign of the axis component at one of the reflection-fixed nodes.
int anchor_sign(const SampledLoop& loop, Axis axis, int node);
/// Signs at k = 0 and k = pi.
std::pair<int, int> anchor_signs(const SampledLoop& loop, Axis axis);

/// The (lambda, z) world line of a site_theta loop, one entry per node
/// m = 0..n inclusive: node n is k = pi, node 0 is k = -pi.
struct LambdaZCurve {
  KGrid grid;
  std::vector<double> lambda;
  std::vector<double> zed;
  double max_residual = 0.0;
};

LambdaZCurve lambda_z_curve(const SampledLoop& loop);

enum class Parity { Even, Odd };

/// Parity of the number of transversal crossings of the -z half axis.
Parity crossing_parity(const LambdaZCurve& c);

ClassLabel classify(const SampledLoop& loop, SymmetryClass cls, double tol = kDefaultSymTol);

/// sigma_z fixed, sigma_x -> R_l, R_n -> R_{n+l}; sign preserved.
ClassLabel relabel_under_gauge(const ClassLabel& label, int l);

/// Labels the class admits (R_n listed for |n| <= max_n).
std::vector<ClassLabel> admissible_labels(SymmetryClass cls, int max_n = 2);

/// Raw invariant values used by `classify`, for reporting.
struct InvariantReport {
  std::vector<std::pair<std::string, std::string>> values;
};
InvariantReport invariants(const SampledLoop& loop, SymmetryClass cls);

}  // namespace twoband
