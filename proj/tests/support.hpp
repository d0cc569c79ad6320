#pragma once

// Independent oracles shared by the unit and acceptance tests. They evaluate
// H(k) directly and never go through the invariant code they check.

#include "twoband/core.hpp"
#include "twoband/symmetry.hpp"

#include <cmath>
#include <vector>

namespace twoband::testing {

inline const std::vector<SymmetryClass>& gapped_classes() {
  static const std::vector<SymmetryClass> v = {
      SymmetryClass::None,         SymmetryClass::ThetaPlus,    SymmetryClass::CPlus,
      SymmetryClass::CMinus,       SymmetryClass::Bond,         SymmetryClass::Site,
      SymmetryClass::Chiral,       SymmetryClass::BondTheta,    SymmetryClass::SiteTheta,
      SymmetryClass::SiteAndTheta, SymmetryClass::BondAndTheta, SymmetryClass::CPlusAndTheta,
      SymmetryClass::CMinusAndTheta,
  };
  return v;
}

inline PauliVec at_k(const Hoppings& h, double k) { return pauli_decompose(eval_bloch(h, k)); }

// Angle accumulation of (x, y) or (x, z) over n uniformly spaced k.
inline int winding_oracle(const Hoppings& h, int n, bool xz = false) {
  double total = 0.0;
  auto angle = [&](double k) {
    const PauliVec p = at_k(h, k);
    return std::atan2(xz ? p.z : p.y, p.x);
  };
  double prev = angle(-kPi);
  for (int m = 1; m <= n; ++m) {
    const double cur = angle(-kPi + 2.0 * kPi * m / n);
    double d = cur - prev;
    d -= 2.0 * kPi * std::round(d / (2.0 * kPi));
    total += d;
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

// Parity of the crossings of lambda(k) = x cos(k/2) + y sin(k/2) through zero
// while z < 0, for k over [-pi, pi]. Nodes are offset by half a step so an
// isolated zero at a symmetric point is seen as a sign change.
inline int crossing_oracle(const Hoppings& h, int n = 200000) {
  auto lam = [&](double k, double& z) {
    const PauliVec p = at_k(h, k);
    z = p.z;
    return p.x * std::cos(0.5 * k) + p.y * std::sin(0.5 * k);
  };
  double z0 = 0.0;
  double l_prev = lam(-kPi + kPi / n, z0);
  int count = 0;
  bool all_zero = std::abs(l_prev) < 1e-14;
  for (int m = 1; m < n; ++m) {
    double z = 0.0;
    const double l = lam(-kPi + (2.0 * m + 1.0) * kPi / n, z);
    if (std::abs(l) >= 1e-14) all_zero = false;
    if ((l < 0.0) != (l_prev < 0.0) && std::abs(l) >= 1e-14 && std::abs(l_prev) >= 1e-14 && z < 0.0) ++count;
    l_prev = l;
  }
  double z_pi = 0.0;
  const double l_pi = lam(kPi, z_pi);
  if (all_zero) return z_pi < 0.0 ? 1 : 0;
  // Seam: lambda(pi) = -lambda(-pi), so a zero there is one crossing.
  if (std::abs(l_pi) < 1e-12 && z_pi < 0.0) ++count;
  return count % 2;
}

}  // namespace twoband::testing
