#pragma once

// The thirteen symmetry classes of two-band chains in their canonical
// unitary form, plus the trivial class `none`.
//
//   theta_plus   H(k) =  H*(-k)
//   theta_minus  H(k) =  sy H*(-k) sy
//   c_plus       H(k) = -sz H*(-k) sz
//   c_minus      H(k) = -sy H*(-k) sy
//   bond         H(k) =  sx H(-k) sx
//   site         H(k) =  G_k H(-k) G_k^dagger,   G_k = diag(1, e^{ik})
//   chiral       H(k) = -sz H(k) sz              (c_plus o theta_plus)
//   bond_theta   H(k) =  sx H*(k) sx             (bond o theta_plus)
//   site_theta   H(k) =  G_k H*(k) G_k^dagger    (site o theta_plus)
//
// The `*_and_theta` classes impose both generators.

#include "twoband/core.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace twoband {

enum class SymmetryClass {
  None,
  ThetaPlus,
  ThetaMinus,
  CPlus,
  CMinus,
  Bond,
  Site,
  Chiral,
  BondTheta,
  SiteTheta,
  SiteAndTheta,
  BondAndTheta,
  CPlusAndTheta,
  CMinusAndTheta,
};

/// A single involutive constraint H = T(H).
enum class Constraint { ThetaPlus, ThetaMinus, CPlus, CMinus, Bond, Site, Chiral, BondTheta, SiteTheta };

const std::vector<SymmetryClass>& all_classes();
std::string_view tag(SymmetryClass cls);
std::optional<SymmetryClass> parse_class(std::string_view tag);
std::string_view tag(Constraint c);

const std::vector<Constraint>& constraints(SymmetryClass cls);

struct ResidualReport {
  std::vector<std::pair<Constraint, double>> entries;

  double max() const;
};

/// Right-hand side T(H)(k_m) of constraint `c` at node m.
Matrix2 constraint_image(const SampledLoop& loop, Constraint c, int m);

ResidualReport residual(const SampledLoop& loop, SymmetryClass cls);

inline constexpr double kDefaultSymTol = 1e-9;

/// Every class whose constraints all hold within `tol`; `none` is always present.
std::vector<SymmetryClass> detect(const SampledLoop& loop, double tol = kDefaultSymTol);

/// Projects the hoppings onto the fixed space of the class (group average).
Hoppings symmetrize(const Hoppings& h, SymmetryClass cls);

/// Unit-cell change H(k) -> G_k^l H(k) G_k^{-l}.
Hoppings gauge_transform(const Hoppings& h, int l);

}  // namespace twoband
