#include "twoband/homotopy.hpp"

#include "twoband/error.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace twoband {

namespace {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Frames = std::vector<Vec3>;
using FrameFn = std::function<SampledLoop(double)>;
using Failure = VerificationReport::Failure;

constexpr int kPoleCandidates = 2000;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

SampledLoop unit_frame(const KGrid& g, const Frames& v) {
  SampledLoop l{g, {}};
  l.points.reserve(v.size());
  for (const Vec3& p : v) l.points.push_back(PauliVec::from(p));
  return l;
}

Frames unit_vectors(const SampledLoop& l) {
  Frames out;
  out.reserve(l.points.size());
  for (const PauliVec& p : l.points) out.push_back(p.vec() / p.norm());
  return out;
}

template <class V>
V nlerp(const V& a, const V& b, double w) {
  const V v = (1.0 - w) * a + w * b;
  const double r = v.norm();
  if (r < 1e-6) throw Error(ErrorKind::WitnessFailed, "degenerate interpolation between near-antipodal nodes");
  return v / r;
}

// Value at momentum k of the curve through nodes[0..], node i at k = -pi + 2 pi i / n.
template <class V>
V along(const std::vector<V>& nodes, int n, double k) {
  const int last = static_cast<int>(nodes.size()) - 2;
  const double pos = std::clamp((k + kPi) * n / (2.0 * kPi), 0.0, static_cast<double>(last + 1));
  const int m = std::min(static_cast<int>(std::floor(pos)), last);
  return nlerp(nodes[static_cast<std::size_t>(m)], nodes[static_cast<std::size_t>(m + 1)], pos - m);
}

Vec3 rot_z(const Vec3& v, double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y(), v.z()};
}

Vec3 rotate_towards(const Vec3& a, const Vec3& b, double s, const Vec3& fallback_axis) {
  Vec3 axis = a.cross(b);
  const double sn = axis.norm(), cs = a.dot(b);
  if (sn < 1e-12) {
    if (cs > 0.0) return a;
    axis = fallback_axis;
  } else {
    axis /= sn;
  }
  return Eigen::AngleAxisd(s * std::atan2(sn, cs), axis) * a;
}

// Stereographic chart from pole p onto the plane through the origin orthogonal to p.
struct Chart {
  Vec3 p;

  Vec3 to(const Vec3& u) const { return (u - p.dot(u) * p) / (1.0 - p.dot(u)); }
  Vec3 from(const Vec3& w) const {
    const double r2 = w.squaredNorm();
    return (2.0 * w + (r2 - 1.0) * p) / (r2 + 1.0);
  }
};

std::vector<Vec3> fibonacci_sphere(int count) {
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(count));
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.emplace_back(r * std::cos(golden * i), r * std::sin(golden * i), z);
  }
  return out;
}

std::vector<Vec3> xz_circle(int count) {
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double phi = 2.0 * kPi * (i + 0.5) / count;
    out.emplace_back(std::cos(phi), 0.0, std::sin(phi));
  }
  return out;
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng, bool about_y) {
  if (about_y) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    return Eigen::AngleAxisd(angle(rng), Vec3::UnitY()).toRotationMatrix();
  }
  std::normal_distribution<double> gauss;
  Eigen::Quaterniond q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  q.normalize();
  return q.toRotationMatrix();
}

// Candidate farthest (in its worst case) from everything in `avoid`.
Vec3 pick_pole(const std::vector<Vec3>& candidates, const Eigen::Matrix3d& rot, const std::vector<Vec3>& avoid) {
  Vec3 best = rot * candidates.front();
  double best_score = std::numeric_limits<double>::infinity();
  for (const Vec3& c0 : candidates) {
    const Vec3 c = rot * c0;
    double worst = -1.0;
    for (const Vec3& a : avoid) {
      worst = std::max(worst, c.dot(a));
      if (worst >= best_score) break;
    }
    if (worst < best_score) {
      best_score = worst;
      best = c;
    }
  }
  return best;
}

struct StageResult {
  std::vector<SampledLoop> frames;
  VerificationReport report;
};

StageResult build_stage(const FrameFn& f, SymmetryClass cls, const WitnessOptions& o) {
  StageResult r;
  for (int steps = o.min_steps;; steps *= 2) {
    HomotopyPath p{cls, {}};
    p.frames.reserve(static_cast<std::size_t>(steps + 1));
    for (int i = 0; i <= steps; ++i) p.frames.push_back(f(static_cast<double>(i) / steps));
    r.report = verify_path(p, o.tol_gap, o.tol_sym);
    r.frames = std::move(p.frames);
    if (r.report.pass || r.report.failure != Failure::Continuity || steps * 2 > o.max_steps) return r;
  }
}

FrameFn radial_stage(const SampledLoop& loop) {
  return [loop](double s) {
    SampledLoop out = loop;
    for (PauliVec& p : out.points) {
      const double d = (1.0 - s) + s * p.norm();
      p.x /= d;
      p.y /= d;
      p.z /= d;
      p.t *= 1.0 - s;
    }
    return out;
  };
}

std::vector<double> lift_angles_from(const Frames& u, int start, double start_angle) {
  // Planar angle of (x, y), continued through nodes start..n and start..0.
  const int n = static_cast<int>(u.size());
  std::vector<double> theta(static_cast<std::size_t>(n + 1));
  auto raw = [&](int m) { return std::atan2(u[static_cast<std::size_t>(m % n)].y(), u[static_cast<std::size_t>(m % n)].x()); };
  theta[static_cast<std::size_t>(start)] = start_angle + std::remainder(raw(start) - start_angle, 2.0 * kPi);
  for (int m = start + 1; m <= n; ++m) {
    const double prev = theta[static_cast<std::size_t>(m - 1)];
    theta[static_cast<std::size_t>(m)] = prev + std::remainder(raw(m) - prev, 2.0 * kPi);
  }
  for (int m = start - 1; m >= 0; --m) {
    const double next = theta[static_cast<std::size_t>(m + 1)];
    theta[static_cast<std::size_t>(m)] = next + std::remainder(raw(m) - next, 2.0 * kPi);
  }
  return theta;
}

FrameFn planar_stage(const KGrid& g, std::vector<double> theta, std::function<double(double)> target) {
  return [g, theta = std::move(theta), target = std::move(target)](double s) {
    Frames v(static_cast<std::size_t>(g.size()));
    for (int m = 0; m < g.size(); ++m) {
      const double a = (1.0 - s) * theta[static_cast<std::size_t>(m)] + s * target(g.k(m));
      v[static_cast<std::size_t>(m)] = Vec3(std::cos(a), std::sin(a), 0.0);
    }
    return unit_frame(g, v);
  };
}

// Stage-two constructions on the unit loop u; the last frame of the last stage
// is the representative of `label`.
std::vector<FrameFn> contraction_stages(const SampledLoop& unit, const Frames& u, SymmetryClass cls,
                                        const ClassLabel& label, const Eigen::Matrix3d& rot) {
  const KGrid g = unit.grid;
  const int n = g.size();
  const int half = n / 2;
  const Vec3 xhat = Vec3::UnitX(), yhat = Vec3::UnitY(), zhat = Vec3::UnitZ();
  const Frames lower(u.begin(), u.begin() + half + 1);  // k in [-pi, 0]

  switch (cls) {
    case SymmetryClass::None:
    case SymmetryClass::ThetaPlus: {
      // Straight lines in a stereographic chart. Under theta_plus the pole sits
      // on the x-z circle so the chart commutes with y -> -y.
      std::vector<Vec3> avoid = u;
      avoid.push_back(zhat);
      const Chart ch{pick_pole(cls == SymmetryClass::ThetaPlus ? xz_circle(kPoleCandidates)
                                                               : fibonacci_sphere(kPoleCandidates),
                               rot, avoid)};
      Frames w(u.size());
      for (std::size_t m = 0; m < u.size(); ++m) w[m] = ch.to(u[m]);
      const Vec3 c = ch.to(zhat);
      return {[g, ch, w, c](double s) {
        Frames v(w.size());
        for (std::size_t m = 0; m < w.size(); ++m) v[m] = ch.from((1.0 - s) * w[m] + s * c);
        return unit_frame(g, v);
      }};
    }
    case SymmetryClass::CPlus:
    case SymmetryClass::Bond: {
      // Move the k <= 0 half onto the representative's half with fixed anchors,
      // then mirror: x_{-k} = (x, -y, -z)_k.
      const Frames target = unit_vectors(representative_loop(label, g));
      std::vector<Vec3> avoid = lower;
      avoid.insert(avoid.end(), target.begin(), target.begin() + half + 1);
      const Chart ch{pick_pole(fibonacci_sphere(kPoleCandidates), rot, avoid)};
      Frames w(lower.size()), c(lower.size());
      for (std::size_t m = 0; m < lower.size(); ++m) {
        w[m] = ch.to(lower[m]);
        c[m] = ch.to(target[m]);
      }
      return {[g, ch, w, c, n, half](double s) {
        Frames v(static_cast<std::size_t>(n));
        for (int m = 0; m <= half; ++m) {
          const auto i = static_cast<std::size_t>(m);
          v[i] = ch.from((1.0 - s) * w[i] + s * c[i]);
        }
        for (int m = half + 1; m < n; ++m) {
          const Vec3& q = v[static_cast<std::size_t>(n - m)];
          v[static_cast<std::size_t>(m)] = Vec3(q.x(), -q.y(), -q.z());
        }
        return unit_frame(g, v);
      }};
    }
    case SymmetryClass::CMinus:
    case SymmetryClass::CMinusAndTheta: {
      // The loop retraces itself; pull it back along itself to k = 0, then turn
      // the constant to the target (inside the x-z plane for cminus_and_theta).
      const Vec3 goal = cls == SymmetryClass::CMinus ? zhat : xhat;
      const Vec3 fallback = cls == SymmetryClass::CMinus ? xhat : yhat;
      const Vec3 start = lower.back();
      FrameFn shrink = [g, lower, n](double s) {
        Frames v(static_cast<std::size_t>(n));
        for (int m = 0; m < n; ++m) v[static_cast<std::size_t>(m)] = along(lower, n, -(1.0 - s) * std::abs(g.k(m)));
        return unit_frame(g, v);
      };
      FrameFn turn = [g, start, goal, fallback, n](double s) {
        return unit_frame(g, Frames(static_cast<std::size_t>(n), rotate_towards(start, goal, s, fallback)));
      };
      return {shrink, turn};
    }
    case SymmetryClass::Site:
      // x_k(s) = x_{(1-s)k - s pi} on k <= 0, the rest fixed by x_k = R_z(k) x_{-k}.
      return {[g, lower, n, half](double s) {
        Frames v(static_cast<std::size_t>(n));
        for (int m = 0; m < n; ++m) {
          const double k = g.k(m);
          if (m <= half) {
            v[static_cast<std::size_t>(m)] = along(lower, n, (1.0 - s) * k - s * kPi);
          } else {
            v[static_cast<std::size_t>(m)] = rot_z(along(lower, n, -(1.0 - s) * k - s * kPi), k);
          }
        }
        return unit_frame(g, v);
      }};
    case SymmetryClass::SiteAndTheta: {
      // Same reparametrization on the even (lambda, z) curve.
      std::vector<Vec2> q;
      q.reserve(lower.size());
      for (int m = 0; m <= half; ++m) {
        const double k = g.k(m);
        const Vec3& p = lower[static_cast<std::size_t>(m)];
        q.emplace_back(p.x() * std::cos(0.5 * k) + p.y() * std::sin(0.5 * k), p.z());
      }
      return {[g, q, n](double s) {
        Frames v(static_cast<std::size_t>(n));
        for (int m = 0; m < n; ++m) {
          const double k = g.k(m);
          const Vec2 lz = along(q, n, (1.0 - s) * -std::abs(k) - s * kPi);
          v[static_cast<std::size_t>(m)] = Vec3(lz.x() * std::cos(0.5 * k), lz.x() * std::sin(0.5 * k), lz.y());
        }
        return unit_frame(g, v);
      }};
    }
    case SymmetryClass::SiteTheta: {
      // Polar form psi = atan2(lambda, z) on nodes 0..n. The endpoints are
      // mirror images, so psi_0 + psi_n = 2 pi w; sliding psi to the constant
      // pi w keeps them mirrored and ends on (-1)^w sigma_z.
      const LambdaZCurve c = lambda_z_curve(unit);
      std::vector<double> psi(static_cast<std::size_t>(n + 1));
      psi[0] = std::atan2(c.lambda[0], c.zed[0]);
      for (int m = 1; m <= n; ++m) {
        const auto i = static_cast<std::size_t>(m);
        psi[i] = psi[i - 1] + std::remainder(std::atan2(c.lambda[i], c.zed[i]) - psi[i - 1], 2.0 * kPi);
      }
      const double turns = (psi[0] + psi[static_cast<std::size_t>(n)]) / (2.0 * kPi);
      const double w = std::round(turns);
      if (std::abs(turns - w) > 1e-6) {
        throw Error(ErrorKind::WitnessFailed, "endpoints of the (lambda, z) curve are not mirror images");
      }
      const int sign = static_cast<long long>(w) % 2 == 0 ? +1 : -1;
      if (sign != label.sign) {
        throw Error(ErrorKind::WitnessFailed, "angle parity disagrees with the crossing parity");
      }
      return {[g, psi, w, n](double s) {
        Frames v(static_cast<std::size_t>(n));
        for (int m = 0; m < n; ++m) {
          const double k = g.k(m);
          const double a = (1.0 - s) * psi[static_cast<std::size_t>(m)] + s * kPi * w;
          const double lambda = std::sin(a);
          v[static_cast<std::size_t>(m)] = Vec3(lambda * std::cos(0.5 * k), lambda * std::sin(0.5 * k), std::cos(a));
        }
        return unit_frame(g, v);
      }};
    }
    case SymmetryClass::Chiral:
    case SymmetryClass::BondTheta: {
      std::vector<double> theta = lift_angles_from(u, 0, 0.0);
      const int nw = label.n;
      const double offset = 2.0 * kPi * std::round((theta[0] + nw * kPi) / (2.0 * kPi));
      return {planar_stage(g, std::move(theta), [nw, offset](double k) { return nw * k + offset; })};
    }
    case SymmetryClass::BondAndTheta:
    case SymmetryClass::CPlusAndTheta: {
      // Lift outward from k = 0 so that theta(-k) = 2 theta_0 - theta(k) holds
      // on the lifted values; the straight line to theta_0 + n k keeps it.
      const double theta0 = label.sign > 0 ? 0.0 : kPi;
      std::vector<double> theta = lift_angles_from(u, half, theta0);
      const int nw = label.n;
      return {planar_stage(g, std::move(theta), [nw, theta0](double k) { return theta0 + nw * k; })};
    }
    case SymmetryClass::ThetaMinus:
      break;
  }
  throw Error(ErrorKind::WitnessFailed, "no construction for " + std::string(tag(cls)));
}

bool uses_pole(SymmetryClass cls) {
  return cls == SymmetryClass::None || cls == SymmetryClass::ThetaPlus || cls == SymmetryClass::CPlus ||
         cls == SymmetryClass::Bond;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::string_view to_string(VerificationReport::Failure f) {
  switch (f) {
    case Failure::None: return "none";
    case Failure::Empty: return "empty";
    case Failure::GridMismatch: return "grid_mismatch";
    case Failure::Symmetry: return "symmetry";
    case Failure::Gap: return "gap";
    case Failure::Continuity: return "continuity";
    case Failure::KStep: return "k_step";
  }
  return "unknown";
}

VerificationReport verify_path(const HomotopyPath& p, double tol_gap, double tol_sym) {
  VerificationReport r;
  auto fail = [&r](Failure f, int frame, int node, double value, std::string msg) {
    r.pass = false;
    r.failure = f;
    r.frame = frame;
    r.node = node;
    r.value = value;
    r.message = std::move(msg);
    return r;
  };
  if (p.frames.empty()) return fail(Failure::Empty, -1, -1, 0.0, "path has no frames");

  const KGrid grid = p.frames.front().grid;
  const int steps = std::max(1, p.steps());
  std::vector<double> gaps(p.frames.size());
  for (std::size_t fi = 0; fi < p.frames.size(); ++fi) {
    const SampledLoop& f = p.frames[fi];
    const int i = static_cast<int>(fi);
    const std::string at_t = "t=" + fmt(static_cast<double>(i) / steps);
    if (!(f.grid == grid) || static_cast<int>(f.points.size()) != grid.size()) {
      return fail(Failure::GridMismatch, i, -1, 0.0, at_t + ": frame grid differs from frame 0");
    }

    const double res = residual(f, p.symmetry).max();
    r.max_residual = std::max(r.max_residual, res);
    if (res > tol_sym) {
      int node = -1;
      for (Constraint c : constraints(p.symmetry)) {
        for (int m = 0; m < grid.size() && node < 0; ++m) {
          if (operator_norm(f.at(m).matrix() - constraint_image(f, c, m)) > tol_sym) node = m;
        }
      }
      return fail(Failure::Symmetry, i, node, res,
                  at_t + " k=" + fmt(grid.k(std::max(node, 0))) + ": symmetry residual " + fmt(res));
    }

    double g = std::numeric_limits<double>::infinity();
    for (int m = 0; m < grid.size(); ++m) {
      const double norm = f.at(m).norm();
      if (norm < tol_gap) return fail(Failure::Gap, i, m, norm, at_t + " k=" + fmt(grid.k(m)) + ": |x| = " + fmt(norm));
      g = std::min(g, norm);
    }
    gaps[fi] = g;
    r.min_gap = std::min(r.min_gap, g);

    for (int m = 0; m < grid.size(); ++m) {
      const double a = angle_between(f.at(m).vec(), f.at(m + 1).vec());
      if (a >= kPi / 2) {
        return fail(Failure::KStep, i, m, a, at_t + " k=" + fmt(grid.k(m)) + ": neighbouring directions " + fmt(a) + " rad apart");
      }
    }

    if (fi > 0) {
      const double delta = std::min(gaps[fi - 1], g) / 4.0;
      const SampledLoop& prev = p.frames[fi - 1];
      for (int m = 0; m < grid.size(); ++m) {
        const double d = (f.at(m).vec() - prev.at(m).vec()).norm();
        if (d > delta) {
          return fail(Failure::Continuity, i, m, d,
                      at_t + " k=" + fmt(grid.k(m)) + ": step " + fmt(d) + " exceeds gap/4 = " + fmt(delta));
        }
      }
    }
  }
  return r;
}

HomotopyPath linear_path(const SampledLoop& a, const SampledLoop& b, int steps, SymmetryClass cls) {
  if (!(a.grid == b.grid)) {
    throw Error(ErrorKind::GridMismatch, "grids of size " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "steps must be >= 1");
  HomotopyPath p{cls, {}};
  p.frames.reserve(static_cast<std::size_t>(steps + 1));
  for (int i = 0; i <= steps; ++i) {
    const double s = static_cast<double>(i) / steps;
    SampledLoop f{a.grid, {}};
    f.points.reserve(a.points.size());
    for (std::size_t m = 0; m < a.points.size(); ++m) {
      const PauliVec& p0 = a.points[m];
      const PauliVec& p1 = b.points[m];
      f.points.push_back({(1.0 - s) * p0.x + s * p1.x, (1.0 - s) * p0.y + s * p1.y, (1.0 - s) * p0.z + s * p1.z,
                          (1.0 - s) * p0.t + s * p1.t});
    }
    p.frames.push_back(std::move(f));
  }
  return p;
}

Witness witness_to_representative(const SampledLoop& loop, SymmetryClass cls, const WitnessOptions& opts) {
  Witness w;
  w.label = classify(loop, cls, opts.tol_sym);
  const KGrid g = loop.grid;

  StageResult radial = build_stage(radial_stage(loop), cls, opts);
  if (!radial.report.pass) {
    throw Error(ErrorKind::WitnessFailed, "radial normalization: " + radial.report.message);
  }
  const Frames u = unit_vectors(loop);
  const SampledLoop unit = unit_frame(g, u);

  std::mt19937_64 rng(stream_seed(opts.seed, 0x706f6c65ULL, 0));
  std::string last_failure;
  for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
    const Eigen::Matrix3d rot =
        attempt == 0 ? Eigen::Matrix3d::Identity() : random_rotation(rng, cls == SymmetryClass::ThetaPlus);
    try {
      HomotopyPath path{cls, radial.frames};
      bool ok = true;
      for (const FrameFn& f : contraction_stages(unit, u, cls, w.label, rot)) {
        StageResult stage = build_stage(f, cls, opts);
        if (!stage.report.pass) {
          last_failure = stage.report.message;
          ok = false;
          break;
        }
        path.frames.insert(path.frames.end(), std::make_move_iterator(stage.frames.begin() + 1),
                           std::make_move_iterator(stage.frames.end()));
      }
      if (ok) {
        path.frames.back() = representative_loop(w.label, g);
        w.report = verify_path(path, opts.tol_gap, opts.tol_sym);
        if (w.report.pass) {
          w.path = std::move(path);
          w.retries = attempt;
          return w;
        }
        last_failure = w.report.message;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::WitnessFailed) throw;
      last_failure = e.detail();
    }
    if (!uses_pole(cls)) break;
  }
  throw Error(ErrorKind::WitnessFailed,
              std::string(tag(cls)) + " loop to " + to_string(w.label) + ": " + last_failure);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t attempt) {
  std::uint64_t state = seed;
  state = splitmix64(state) ^ index;
  state = splitmix64(state) ^ attempt;
  return splitmix64(state);
}

Hoppings gaussian_hoppings(int range, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Hoppings h{"gaussian", {}};
  for (int j = 0; j <= range; ++j) {
    Matrix2 m;
    for (int b = 0; b < 2; ++b) {
      for (int a = 0; a < 2; ++a) {
        const double re = gauss(rng);
        m(b, a) = Complex(re, gauss(rng));
      }
    }
    if (j == 0) m = (0.5 * (m + m.adjoint())).eval();
    h.terms[j] = m;
  }
  return h;
}

SymmetricSample sample_symmetric(SymmetryClass cls, int range, std::uint64_t seed, std::uint64_t index,
                                 const KGrid& grid, double min_relative_gap, int max_attempts) {
  if (cls == SymmetryClass::ThetaMinus) {
    throw Error(ErrorKind::Gapless, "theta_minus Hamiltonians are gapless at k=0,π");
  }
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::mt19937_64 rng(stream_seed(seed, index, static_cast<std::uint64_t>(attempt)));
    Hoppings h = symmetrize(gaussian_hoppings(range, rng), cls);
    h.name = std::string(tag(cls)) + "_sample_" + std::to_string(index);
    SampledLoop loop;
    try {
      loop = sample_loop(h, grid);
      if (gap_stats(loop).relative() < min_relative_gap) continue;
      classify(loop, cls);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::TangentialCrossing || e.kind() == ErrorKind::GridCapExceeded) continue;
      throw;
    }
    return {std::move(h), std::move(loop), attempt + 1};
  }
  throw Error(ErrorKind::InvalidArgument, "no sample with relative gap >= " + fmt(min_relative_gap) + " after " +
                                              std::to_string(max_attempts) + " draws");
}

std::vector<ClassLabel> ConnectivityReport::observed_labels() const {
  std::set<ClassLabel> seen;
  for (const SampleRecord& s : samples) seen.insert(s.label);
  return {seen.begin(), seen.end()};
}

bool ConnectivityReport::components_match_labels() const {
  const std::vector<ClassLabel> labels = observed_labels();
  if (components.size() != labels.size()) return false;
  std::set<ClassLabel> component_labels;
  for (const Component& c : components) {
    if (!c.pure) return false;
    component_labels.insert(c.label);
  }
  return std::equal(labels.begin(), labels.end(), component_labels.begin(), component_labels.end());
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

ConnectivityReport connectivity_sample(const ConnectivityOptions& opts) {
  if (opts.cls == SymmetryClass::ThetaMinus) {
    throw Error(ErrorKind::Gapless, "theta_minus Hamiltonians are gapless at k=0,π");
  }
  if (opts.samples < 1 || opts.range < 1) throw Error(ErrorKind::InvalidArgument, "samples and range must be >= 1");
  const int count = opts.samples;
  const int clip = opts.clip < 0 ? opts.range : opts.clip;
  const KGrid grid(opts.grid);

  std::vector<SampleRecord> records(static_cast<std::size_t>(count));
  std::vector<Hoppings> hoppings(static_cast<std::size_t>(count));
  std::vector<SampledLoop> loops(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));

  auto work = [&](int i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      SymmetricSample s = sample_symmetric(opts.cls, opts.range, opts.seed, idx, grid, opts.min_relative_gap);
      WitnessOptions wo;
      wo.seed = stream_seed(opts.seed, idx, 0x77697463ULL);
      const Witness w = witness_to_representative(s.loop, opts.cls, wo);
      records[idx] = {i, s.attempts, w.label, w.path.steps(), w.retries, w.report.pass};
      hoppings[idx] = std::move(s.hoppings);
      loops[idx] = std::move(s.loop);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  };

  const int jobs = std::clamp(opts.jobs, 1, count);
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) work(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (int i = next++; i < count; i = next++) work(i);
      });
    }
    for (std::thread& t : pool) t.join();
  }
  for (int i = 0; i < count; ++i) {
    if (!errors[static_cast<std::size_t>(i)]) continue;
    try {
      std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
    } catch (const Error& e) {
      throw Error(e.kind(), "sample " + std::to_string(i) + ": " + e.detail());
    }
  }

  ConnectivityReport report;
  report.cls = opts.cls;
  report.samples = records;

  const std::vector<ClassLabel> admissible = admissible_labels(opts.cls, clip);
  for (const SampleRecord& r : records) {
    if (std::find(admissible.begin(), admissible.end(), r.label) == admissible.end()) ++report.out_of_clip;
  }

  // Samples are nodes 0..count-1, one representative node per observed label after them.
  const std::vector<ClassLabel> labels = report.observed_labels();
  UnionFind uf(count + static_cast<int>(labels.size()));
  auto rep_node = [&](const ClassLabel& l) {
    return count + static_cast<int>(std::lower_bound(labels.begin(), labels.end(), l) - labels.begin());
  };
  for (const SampleRecord& r : records) {
    if (r.witness_pass) uf.unite(r.index, rep_node(r.label));
  }
  std::map<int, Component> by_root;
  for (std::size_t li = 0; li < labels.size(); ++li) {
    by_root[uf.find(count + static_cast<int>(li))].label = labels[li];
  }
  for (const SampleRecord& r : records) {
    const int root = uf.find(r.index);
    auto [it, fresh] = by_root.try_emplace(root);
    if (fresh) it->second.label = r.label;
    it->second.members.push_back(r.index);
    if (!(it->second.label == r.label)) it->second.pure = false;
  }
  for (auto& [root, c] : by_root) report.components.push_back(std::move(c));

  // Soundness spot-check: straight lines between differently labelled samples
  // must not verify. This is a necessary condition only.
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      if (!(records[static_cast<std::size_t>(i)].label == records[static_cast<std::size_t>(j)].label)) {
        pairs.emplace_back(i, j);
      }
    }
  }
  report.soundness.candidate_pairs = static_cast<int>(pairs.size());
  if (static_cast<int>(pairs.size()) > opts.max_pairs) {
    std::mt19937_64 rng(stream_seed(opts.seed, 0x736f756eULL, 0));
    std::shuffle(pairs.begin(), pairs.end(), rng);
    pairs.resize(static_cast<std::size_t>(std::max(0, opts.max_pairs)));
    std::sort(pairs.begin(), pairs.end());
  }
  for (const auto& [i, j] : pairs) {
    SampledLoop a = loops[static_cast<std::size_t>(i)];
    SampledLoop b = loops[static_cast<std::size_t>(j)];
    if (!(a.grid == b.grid)) {
      const KGrid common(std::max(a.size(), b.size()));
      a = sample_on_grid(hoppings[static_cast<std::size_t>(i)], common);
      b = sample_on_grid(hoppings[static_cast<std::size_t>(j)], common);
    }
    const VerificationReport v = verify_path(linear_path(a, b, 64, opts.cls));
    ++report.soundness.checked;
    double closest = std::numeric_limits<double>::infinity();
    for (int m = 0; m < a.size(); ++m) {
      const Vec3 pa = a.at(m).vec(), d = b.at(m).vec() - pa;
      const double t = d.squaredNorm() > 0.0 ? std::clamp(-pa.dot(d) / d.squaredNorm(), 0.0, 1.0) : 0.0;
      closest = std::min(closest, (pa + t * d).norm());
    }
    report.soundness.worst_gap_ratio =
        std::max(report.soundness.worst_gap_ratio, closest / std::min(gap(a), gap(b)));
    if (!v.pass) {
      ++report.soundness.failed;
      ++report.soundness.failure_kinds[std::string(to_string(v.failure))];
    }
  }
  return report;
}

}  // namespace twoband
