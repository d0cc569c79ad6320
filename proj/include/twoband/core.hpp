#pragma once

// Tight-binding data model for two-band chains: finite-range hoppings,
// Bloch evaluation, Pauli-vector loops and their gap/projector.
//
// Fourier convention: H(k) = sum_j h_j e^{+ikj}, with h_j[b][a] the
// amplitude <0,b|H|j,a> and h_{-j} = h_j^dagger. Only j >= 0 is stored,
// so H(k) is Hermitian for every k by construction.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>
#include <vector>

namespace twoband {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double kPi = std::numbers::pi;

/// Hermiticity / idempotency noise floor.
inline constexpr double kExactTol = 1e-12;
/// Absolute threshold on |x| below which a point counts as gapless.
inline constexpr double kGapTol = 1e-9;
/// Largest grid that refinement may reach.
inline constexpr int kGridCap = 1 << 16;

namespace pauli {
Matrix2 identity();
Matrix2 x();
Matrix2 y();
Matrix2 z();
}  // namespace pauli

/// Coefficients of H = x sigma_x + y sigma_y + z sigma_z + t 1.
struct PauliVec {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double t = 0.0;

  Eigen::Vector3d vec() const { return {x, y, z}; }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  Matrix2 matrix() const;

  static PauliVec from(const Eigen::Vector3d& v, double t = 0.0) { return {v.x(), v.y(), v.z(), t}; }

  friend bool operator==(const PauliVec&, const PauliVec&) = default;
};

/// Symmetric Brillouin-zone grid, k_m = -pi + 2 pi m / n with n even.
class KGrid {
 public:
  explicit KGrid(int n = 256);

  int size() const noexcept { return n_; }
  double k(int m) const noexcept { return -kPi + 2.0 * kPi * m / n_; }
  /// Node holding -k_m.
  int mirror(int m) const noexcept { return (n_ - m) % n_; }
  int wrap(int m) const noexcept { return ((m % n_) + n_) % n_; }
  int zero_node() const noexcept { return n_ / 2; }
  int pi_node() const noexcept { return 0; }

  friend bool operator==(const KGrid&, const KGrid&) = default;

 private:
  int n_;
};

struct Hoppings {
  std::string name;
  std::map<int, Matrix2> terms;  // j >= 0

  int range() const { return terms.empty() ? 0 : terms.rbegin()->first; }
  /// h_j for any integer j, using h_{-j} = h_j^dagger.
  Matrix2 block(int j) const;
};

struct SampledLoop {
  KGrid grid;
  std::vector<PauliVec> points;

  int size() const { return grid.size(); }
  const PauliVec& at(int m) const { return points[static_cast<std::size_t>(grid.wrap(m))]; }
  double k(int m) const { return grid.k(m); }
};

struct GapStats {
  double min = 0.0;
  double max = 0.0;
  int argmin = 0;
  double relative() const { return max > 0.0 ? min / max : 0.0; }
};

std::vector<std::string> validate_hoppings(const Hoppings& h);

Matrix2 eval_bloch(const Hoppings& h, double k);

/// Throws NotHermitian when the Hermiticity residual exceeds 1e-9.
PauliVec pauli_decompose(const Matrix2& m);

/// Samples H(k) on the grid, doubling n until consecutive unit Pauli vectors
/// subtend less than pi/2 (gapless nodes are skipped).
SampledLoop sample_loop(const Hoppings& h, KGrid grid);
/// Same, on exactly the given grid (no refinement).
SampledLoop sample_on_grid(const Hoppings& h, const KGrid& grid);

/// Largest angle between consecutive unit Pauli vectors, ignoring nodes with
/// |x| <= kGapTol. Includes the wrap-around pair.
double max_step_angle(const SampledLoop& loop);

GapStats gap_stats(const SampledLoop& loop);
inline double gap(const SampledLoop& loop) { return gap_stats(loop).min; }

Matrix2 ground_projector(const Matrix2& m);

double angle_between(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

/// Largest singular value of a 2x2 complex matrix.
double operator_norm(const Matrix2& m);

}  // namespace twoband
