#pragma once

#include "twoband/core.hpp"

#include <vector>

namespace twoband::models {

/// Constant sign * sigma_x.
Hoppings sigma_x(double sign = 1.0);
/// Constant sign * sigma_y.
Hoppings sigma_y(double sign = 1.0);
/// Constant sign * sigma_z.
Hoppings sigma_z(double sign = 1.0);
/// sign * R_n = sign * [[0, e^{-ink}], [e^{ink}, 0]].
Hoppings r_n(int n, double sign = 1.0);
/// SSH chain with equal hoppings and staggered potential v: H_10(k) = 1 + e^{ik}.
Hoppings ssh(double v);
/// Real loop x = cos(wk), z = sin(wk) in the x-z plane.
Hoppings xz_winding(int w);

/// Every fixture the CLI `models` command can emit.
std::vector<Hoppings> all_fixtures();

}  // namespace twoband::models
