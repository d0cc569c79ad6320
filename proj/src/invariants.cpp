#include "twoband/invariants.hpp"

#include "twoband/error.hpp"
#include "twoband/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace twoband {

namespace {

int sign_of(double v) { return v < 0.0 ? -1 : +1; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string fmt_sign(int s) { return s < 0 ? "-" : "+"; }

}  // namespace

bool operator<(const ClassLabel& a, const ClassLabel& b) {
  const int an = a.kind == ClassLabel::Kind::R ? a.n : 0;
  const int bn = b.kind == ClassLabel::Kind::R ? b.n : 0;
  return std::tie(a.kind, an, a.sign) < std::tie(b.kind, bn, b.sign);
}

std::string to_string(const ClassLabel& label) {
  std::string s = label.sign < 0 ? "-" : "+";
  switch (label.kind) {
    case ClassLabel::Kind::SigmaX: return s + "sigma_x";
    case ClassLabel::Kind::SigmaZ: return s + "sigma_z";
    case ClassLabel::Kind::R: return s + "R_" + std::to_string(label.n);
  }
  return s;
}

ClassLabel parse_label(const std::string& text) {
  if (text.size() < 2 || (text[0] != '+' && text[0] != '-')) {
    throw Error(ErrorKind::Parse, "label must start with + or -: '" + text + "'");
  }
  const int sign = text[0] == '-' ? -1 : +1;
  const std::string body = text.substr(1);
  if (body == "sigma_x") return ClassLabel::sigma_x(sign);
  if (body == "sigma_z") return ClassLabel::sigma_z(sign);
  if (body.rfind("R_", 0) == 0) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(body.substr(2), &used);
      if (used == body.size() - 2) return ClassLabel::r(n, sign);
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorKind::Parse, "unknown label '" + text + "'");
}

Hoppings representative_hoppings(const ClassLabel& label) {
  switch (label.kind) {
    case ClassLabel::Kind::SigmaX: return models::sigma_x(label.sign);
    case ClassLabel::Kind::SigmaZ: return models::sigma_z(label.sign);
    case ClassLabel::Kind::R: return models::r_n(label.n, label.sign);
  }
  return {};
}

SampledLoop representative_loop(const ClassLabel& label, const KGrid& grid) {
  return sample_on_grid(representative_hoppings(label), grid);
}

int winding_plane(const SampledLoop& loop, Plane plane) {
  auto coords = [plane](const PauliVec& p) {
    return plane == Plane::XY ? std::tuple{p.x, p.y, p.z} : std::tuple{p.x, p.z, p.y};
  };
  const int n = loop.size();
  for (int m = 0; m < n; ++m) {
    const auto [u, v, off] = coords(loop.at(m));
    if (std::abs(off) >= kGapTol) {
      throw Error(ErrorKind::NotPlanar, "out-of-plane component " + fmt(off) + " at k=" + fmt(loop.k(m)));
    }
    if (std::hypot(u, v) <= kGapTol) throw Error(ErrorKind::Gapless, "in-plane radius vanishes at k=" + fmt(loop.k(m)));
  }
  double total = 0.0;
  for (int m = 0; m < n; ++m) {
    const auto [u0, v0, o0] = coords(loop.at(m));
    const auto [u1, v1, o1] = coords(loop.at(m + 1));
    const double step = std::atan2(u0 * v1 - v0 * u1, u0 * u1 + v0 * v1);
    if (std::abs(step) >= kPi / 2) {
      throw Error(ErrorKind::AngleStepTooLarge, "angle step " + fmt(step) + " at k=" + fmt(loop.k(m)));
    }
    total += step;
  }
  const double turns = total / (2.0 * kPi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 1e-6) {
    throw Error(ErrorKind::AngleStepTooLarge, "accumulated angle is not a whole number of turns: " + fmt(turns));
  }
  return static_cast<int>(rounded);
}

namespace {
int anchor_sign_tol(const SampledLoop& loop, Axis axis, int node, double tol) {
  const PauliVec& p = loop.at(node);
  const double along = axis == Axis::X ? p.x : p.z;
  const double off = axis == Axis::X ? std::hypot(p.y, p.z) : std::hypot(p.x, p.y);
  const char* name = axis == Axis::X ? "x" : "z";
  if (p.norm() <= kGapTol) throw Error(ErrorKind::Gapless, "gapless anchor at k=" + fmt(loop.k(node)));
  if (off >= tol || std::abs(along) <= kGapTol) {
    throw Error(ErrorKind::NotAnchored,
                std::string("point at k=") + fmt(loop.k(node)) + " is off the " + name + " axis by " + fmt(off));
  }
  return sign_of(along);
}
}  // namespace

int anchor_sign(const SampledLoop& loop, Axis axis, int node) { return anchor_sign_tol(loop, axis, node, kGapTol); }

std::pair<int, int> anchor_signs(const SampledLoop& loop, Axis axis) {
  return {anchor_sign(loop, axis, loop.grid.zero_node()), anchor_sign(loop, axis, loop.grid.pi_node())};
}

LambdaZCurve lambda_z_curve(const SampledLoop& loop) {
  const double sym = residual(loop, SymmetryClass::SiteTheta).max();
  if (sym > kDefaultSymTol) {
    throw Error(ErrorKind::ConstraintViolated, "site_theta residual " + fmt(sym));
  }
  const int n = loop.size();
  LambdaZCurve c{loop.grid, {}, {}, 0.0};
  c.lambda.reserve(static_cast<std::size_t>(n + 1));
  c.zed.reserve(static_cast<std::size_t>(n + 1));
  for (int m = 0; m <= n; ++m) {
    const PauliVec& p = loop.at(m);
    const double k = m == n ? kPi : loop.k(m);
    const double ch = std::cos(0.5 * k), sh = std::sin(0.5 * k);
    c.lambda.push_back(p.x * ch + p.y * sh);
    c.zed.push_back(p.z);
    c.max_residual = std::max(c.max_residual, std::abs(-p.x * sh + p.y * ch));
  }
  if (c.max_residual >= kDefaultSymTol) {
    throw Error(ErrorKind::ConstraintViolated, "(x, y) not along (cos k/2, sin k/2): " + fmt(c.max_residual));
  }
  return c;
}

Parity crossing_parity(const LambdaZCurve& c) {
  constexpr double kZeroLambda = 1e-12;
  const int last = static_cast<int>(c.lambda.size()) - 1;
  auto s = [&](int m) {
    const double l = c.lambda[static_cast<std::size_t>(m)];
    return std::abs(l) < kZeroLambda ? 0 : (l > 0 ? 1 : -1);
  };
  auto z = [&](int m) { return c.zed[static_cast<std::size_t>(m)]; };
  auto check_z = [&](double zc, int m) {
    if (std::abs(zc) < kZeroLambda) {
      throw Error(ErrorKind::TangentialCrossing, "axis crossing at z~0 near node " + std::to_string(m));
    }
    return zc;
  };

  int first = 0;
  while (first <= last && s(first) == 0) ++first;
  if (first > last) {
    // The whole curve sits on the z axis.
    const bool below = z(0) < 0.0;
    for (int m = 0; m <= last; ++m) {
      if ((z(m) < 0.0) != below) throw Error(ErrorKind::Gapless, "curve on the axis passes through the origin");
    }
    check_z(z(0), 0);
    return below ? Parity::Odd : Parity::Even;
  }
  int end = last;
  while (s(end) == 0) --end;

  int count = 0;
  // Mirror-image endpoints sitting on the axis count as one crossing together.
  if (s(0) == 0 && check_z(z(0), 0) < 0.0) ++count;

  int prev = first;
  for (int m = first + 1; m <= end; ++m) {
    if (s(m) == 0) continue;
    if (s(m) != s(prev)) {
      double zc = 0.0;
      if (m == prev + 1) {
        const double l0 = c.lambda[static_cast<std::size_t>(prev)], l1 = c.lambda[static_cast<std::size_t>(m)];
        const double w = l0 / (l0 - l1);
        zc = z(prev) + w * (z(m) - z(prev));
      } else {
        zc = z(prev + 1);
      }
      if (check_z(zc, m) < 0.0) ++count;
    }
    prev = m;
  }
  return count % 2 == 0 ? Parity::Even : Parity::Odd;
}

ClassLabel classify(const SampledLoop& loop, SymmetryClass cls, double tol) {
  if (cls == SymmetryClass::ThetaMinus) {
    throw Error(ErrorKind::Gapless, "gapless at k=0,\u03c0 (theta_minus forces x_0 = x_\u03c0 = 0)");
  }
  const double sym = residual(loop, cls).max();
  if (sym > tol) {
    throw Error(ErrorKind::ConstraintViolated, std::string(tag(cls)) + " residual " + fmt(sym) + " exceeds " + fmt(tol));
  }
  const GapStats g = gap_stats(loop);
  if (g.min <= std::max(tol, kGapTol)) {
    throw Error(ErrorKind::Gapless, "|x| = " + fmt(g.min) + " at k=" + fmt(loop.k(g.argmin)));
  }
  const double anchor_tol = std::max(tol, kGapTol);
  switch (cls) {
    case SymmetryClass::None:
    case SymmetryClass::ThetaPlus:
    case SymmetryClass::CMinus:
      return ClassLabel::sigma_z();
    case SymmetryClass::CMinusAndTheta:
      return ClassLabel::sigma_x();
    case SymmetryClass::CPlus:
    case SymmetryClass::Bond: {
      const int at0 = anchor_sign_tol(loop, Axis::X, loop.grid.zero_node(), anchor_tol);
      const int atpi = anchor_sign_tol(loop, Axis::X, loop.grid.pi_node(), anchor_tol);
      if (at0 == atpi) return ClassLabel::sigma_x(at0);
      return ClassLabel::r(1, at0);
    }
    case SymmetryClass::Site:
    case SymmetryClass::SiteAndTheta:
      return ClassLabel::sigma_z(anchor_sign_tol(loop, Axis::Z, loop.grid.pi_node(), anchor_tol));
    case SymmetryClass::Chiral:
    case SymmetryClass::BondTheta:
      return ClassLabel::r(winding_plane(loop, Plane::XY));
    case SymmetryClass::BondAndTheta:
    case SymmetryClass::CPlusAndTheta: {
      const int n = winding_plane(loop, Plane::XY);
      return ClassLabel::r(n, anchor_sign_tol(loop, Axis::X, loop.grid.zero_node(), anchor_tol));
    }
    case SymmetryClass::SiteTheta:
      return ClassLabel::sigma_z(crossing_parity(lambda_z_curve(loop)) == Parity::Even ? +1 : -1);
    case SymmetryClass::ThetaMinus:
      break;
  }
  throw Error(ErrorKind::InvalidArgument, "unhandled class");
}

ClassLabel relabel_under_gauge(const ClassLabel& label, int l) {
  switch (label.kind) {
    case ClassLabel::Kind::SigmaZ: return label;
    case ClassLabel::Kind::SigmaX: return l == 0 ? label : ClassLabel::r(l, label.sign);
    case ClassLabel::Kind::R: return ClassLabel::r(label.n + l, label.sign);
  }
  return label;
}

std::vector<ClassLabel> admissible_labels(SymmetryClass cls, int max_n) {
  std::vector<ClassLabel> out;
  auto both = [&](ClassLabel l) {
    out.push_back(l);
    l.sign = -1;
    out.push_back(l);
  };
  switch (cls) {
    case SymmetryClass::None:
    case SymmetryClass::ThetaPlus:
    case SymmetryClass::CMinus:
      out.push_back(ClassLabel::sigma_z());
      break;
    case SymmetryClass::ThetaMinus:
      break;
    case SymmetryClass::CPlus:
    case SymmetryClass::Bond:
      both(ClassLabel::sigma_x());
      both(ClassLabel::r(1));
      break;
    case SymmetryClass::Site:
    case SymmetryClass::SiteTheta:
    case SymmetryClass::SiteAndTheta:
      both(ClassLabel::sigma_z());
      break;
    case SymmetryClass::Chiral:
    case SymmetryClass::BondTheta:
      for (int n = -max_n; n <= max_n; ++n) out.push_back(ClassLabel::r(n));
      break;
    case SymmetryClass::BondAndTheta:
    case SymmetryClass::CPlusAndTheta:
      for (int n = -max_n; n <= max_n; ++n) both(ClassLabel::r(n));
      break;
    case SymmetryClass::CMinusAndTheta:
      out.push_back(ClassLabel::sigma_x());
      break;
  }
  return out;
}

InvariantReport invariants(const SampledLoop& loop, SymmetryClass cls) {
  InvariantReport r;
  const GapStats g = gap_stats(loop);
  r.values.emplace_back("gap", fmt(g.min));
  r.values.emplace_back("relative_gap", fmt(g.relative()));
  r.values.emplace_back("residual", fmt(residual(loop, cls).max()));
  auto attempt = [&](const std::string& key, auto&& fn) {
    try {
      r.values.emplace_back(key, fn());
    } catch (const Error& e) {
      r.values.emplace_back(key, "n/a(" + std::string(to_string(e.kind())) + ")");
    }
  };
  switch (cls) {
    case SymmetryClass::CPlus:
    case SymmetryClass::Bond:
      attempt("anchor_x_k0", [&] { return fmt_sign(anchor_sign(loop, Axis::X, loop.grid.zero_node())); });
      attempt("anchor_x_kpi", [&] { return fmt_sign(anchor_sign(loop, Axis::X, loop.grid.pi_node())); });
      break;
    case SymmetryClass::Site:
    case SymmetryClass::SiteAndTheta:
      attempt("anchor_z_kpi", [&] { return fmt_sign(anchor_sign(loop, Axis::Z, loop.grid.pi_node())); });
      break;
    case SymmetryClass::Chiral:
    case SymmetryClass::BondTheta:
      attempt("winding_xy", [&] { return std::to_string(winding_plane(loop, Plane::XY)); });
      break;
    case SymmetryClass::BondAndTheta:
    case SymmetryClass::CPlusAndTheta:
      attempt("winding_xy", [&] { return std::to_string(winding_plane(loop, Plane::XY)); });
      attempt("anchor_x_k0", [&] { return fmt_sign(anchor_sign(loop, Axis::X, loop.grid.zero_node())); });
      attempt("anchor_x_kpi", [&] { return fmt_sign(anchor_sign(loop, Axis::X, loop.grid.pi_node())); });
      break;
    case SymmetryClass::SiteTheta:
      attempt("crossing_parity", [&] {
        return std::string(crossing_parity(lambda_z_curve(loop)) == Parity::Even ? "even" : "odd");
      });
      break;
    default:
      break;
  }
  attempt("winding_xz", [&] { return std::to_string(winding_plane(loop, Plane::XZ)); });
  return r;
}

}  // namespace twoband
