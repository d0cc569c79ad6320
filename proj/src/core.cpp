#include "twoband/core.hpp"

#include "twoband/error.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace twoband {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::GridCapExceeded: return "GridCapExceeded";
    case ErrorKind::Gapless: return "Gapless";
    case ErrorKind::ConstraintViolated: return "ConstraintViolated";
    case ErrorKind::NotAnchored: return "NotAnchored";
    case ErrorKind::NotPlanar: return "NotPlanar";
    case ErrorKind::AngleStepTooLarge: return "AngleStepTooLarge";
    case ErrorKind::TangentialCrossing: return "TangentialCrossing";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::WitnessFailed: return "WitnessFailed";
    case ErrorKind::NotReal: return "NotReal";
    case ErrorKind::LiftFailed: return "LiftFailed";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::GaplessAtK: return "GaplessAtK";
    case ErrorKind::NonIntegerParity: return "NonIntegerParity";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

namespace pauli {
Matrix2 identity() { return Matrix2::Identity(); }
Matrix2 x() {
  Matrix2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
Matrix2 y() {
  Matrix2 m;
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}
Matrix2 z() {
  Matrix2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

Matrix2 PauliVec::matrix() const {
  Matrix2 m;
  m << Complex(t + z, 0.0), Complex(x, -y), Complex(x, y), Complex(t - z, 0.0);
  return m;
}

KGrid::KGrid(int n) : n_(n) {
  if (n < 8 || n % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "grid size must be even and >= 8, got " + std::to_string(n));
  }
}

Matrix2 Hoppings::block(int j) const {
  const int key = j < 0 ? -j : j;
  auto it = terms.find(key);
  if (it == terms.end()) return Matrix2::Zero();
  return j < 0 ? Matrix2(it->second.adjoint()) : it->second;
}

std::vector<std::string> validate_hoppings(const Hoppings& h) {
  std::vector<std::string> violations;
  for (const auto& [j, m] : h.terms) {
    if (j < 0) violations.push_back("negative hopping index " + std::to_string(j));
    if (!m.allFinite()) violations.push_back("h_" + std::to_string(j) + " has non-finite entries");
  }
  if (auto it = h.terms.find(0); it != h.terms.end() && it->second.allFinite()) {
    if ((it->second - it->second.adjoint()).cwiseAbs().maxCoeff() > kExactTol) {
      violations.emplace_back("h_0 not Hermitian");
    }
  }
  return violations;
}

Matrix2 eval_bloch(const Hoppings& h, double k) {
  Matrix2 out = Matrix2::Zero();
  for (const auto& [j, m] : h.terms) {
    if (j == 0) {
      out += m;
      continue;
    }
    const Complex phase = std::polar(1.0, k * j);
    const Matrix2 forward = m * phase;
    out += forward + forward.adjoint();
  }
  return out;
}

PauliVec pauli_decompose(const Matrix2& m) {
  const double residual = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-9)) {
    std::ostringstream os;
    os << "Hermiticity residual " << residual;
    throw Error(ErrorKind::NotHermitian, os.str());
  }
  return {m(1, 0).real(), m(1, 0).imag(), 0.5 * (m(0, 0).real() - m(1, 1).real()),
          0.5 * (m(0, 0).real() + m(1, 1).real())};
}

double angle_between(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

double max_step_angle(const SampledLoop& loop) {
  double worst = 0.0;
  const int n = loop.size();
  for (int m = 0; m < n; ++m) {
    const auto& p = loop.at(m);
    const auto& q = loop.at(m + 1);
    if (p.norm() <= kGapTol || q.norm() <= kGapTol) continue;
    worst = std::max(worst, angle_between(p.vec(), q.vec()));
  }
  return worst;
}

SampledLoop sample_on_grid(const Hoppings& h, const KGrid& grid) {
  SampledLoop loop{grid, {}};
  loop.points.reserve(static_cast<std::size_t>(grid.size()));
  for (int m = 0; m < grid.size(); ++m) loop.points.push_back(pauli_decompose(eval_bloch(h, grid.k(m))));
  return loop;
}

SampledLoop sample_loop(const Hoppings& h, KGrid grid) {
  for (;;) {
    SampledLoop loop = sample_on_grid(h, grid);
    if (max_step_angle(loop) < kPi / 2) return loop;
    if (grid.size() * 2 > kGridCap) {
      throw Error(ErrorKind::GridCapExceeded,
                  "consecutive Pauli vectors still subtend >= pi/2 at n=" + std::to_string(grid.size()));
    }
    grid = KGrid(grid.size() * 2);
  }
}

GapStats gap_stats(const SampledLoop& loop) {
  GapStats s;
  s.min = std::numeric_limits<double>::infinity();
  for (int m = 0; m < loop.size(); ++m) {
    const double r = loop.at(m).norm();
    if (r < s.min) {
      s.min = r;
      s.argmin = m;
    }
    s.max = std::max(s.max, r);
  }
  if (loop.size() == 0) s.min = 0.0;
  return s;
}

Matrix2 ground_projector(const Matrix2& m) {
  const PauliVec p = pauli_decompose(m);
  const double r = p.norm();
  if (r <= kGapTol) throw Error(ErrorKind::Gapless, "|x| = " + std::to_string(r));
  const PauliVec unit{p.x / r, p.y / r, p.z / r, 0.0};
  return 0.5 * (Matrix2::Identity() - unit.matrix());
}

double operator_norm(const Matrix2& m) {
  const double fro2 = m.squaredNorm();
  const double det = std::abs(m.determinant());
  const double disc = std::max(0.0, fro2 * fro2 - 4.0 * det * det);
  return std::sqrt(0.5 * (fro2 + std::sqrt(disc)));
}

}  // namespace twoband
