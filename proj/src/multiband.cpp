#include "twoband/multiband.hpp"

#include "twoband/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace twoband {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Ground projector of the real Hamiltonian x sigma_x + z sigma_z.
Eigen::MatrixXd real_projector(double x, double z) {
  const double r = std::hypot(x, z);
  if (r <= kGapTol) throw Error(ErrorKind::Gapless, "|x| = " + fmt(r));
  x /= r;
  z /= r;
  Eigen::MatrixXd p(2, 2);
  p << 0.5 * (1.0 - z), -0.5 * x, -0.5 * x, 0.5 * (1.0 + z);
  return p;
}

RealProjectorLoop resample(const RealProjectorLoop& p, const KGrid& grid) {
  RealProjectorLoop out{p.dim, grid, {}, p.source};
  out.mats.reserve(static_cast<std::size_t>(grid.size()));
  for (int m = 0; m < grid.size(); ++m) out.mats.push_back(p.source(grid.k(m)));
  return out;
}

Eigen::VectorXd top_eigenvector(const Eigen::MatrixXd& p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
  const Eigen::VectorXd v = es.eigenvectors().col(p.rows() - 1);
  if ((p * v - v).norm() > 1e-9) {
    throw Error(ErrorKind::InvalidArgument, "matrix is not a rank-one projector (top eigenvalue " +
                                                fmt(es.eigenvalues()(p.rows() - 1)) + ")");
  }
  return v;
}

double frobenius_step(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).norm(); }

}  // namespace

RealProjectorLoop projector_from_loop(const SampledLoop& loop) {
  RealProjectorLoop out{2, loop.grid, {}, {}};
  out.mats.reserve(loop.points.size());
  for (int m = 0; m < loop.size(); ++m) {
    const PauliVec& p = loop.at(m);
    if (std::abs(p.y) >= 1e-9) {
      throw Error(ErrorKind::NotReal, "y = " + fmt(p.y) + " at k=" + fmt(loop.k(m)));
    }
    out.mats.push_back(real_projector(p.x, p.z));
  }
  // Off the grid, interpolate the direction between neighbouring nodes.
  out.source = [loop](double k) {
    const int n = loop.size();
    const double pos = (k + kPi) * n / (2.0 * kPi);
    const int m = std::clamp(static_cast<int>(std::floor(pos)), 0, n - 1);
    const double w = pos - m;
    const PauliVec& a = loop.at(m);
    const PauliVec& b = loop.at(m + 1);
    return real_projector((1.0 - w) * a.x / a.norm() + w * b.x / b.norm(), (1.0 - w) * a.z / a.norm() + w * b.z / b.norm());
  };
  return out;
}

RealProjectorLoop projector_from_hoppings(const Hoppings& h, const KGrid& grid) {
  RealProjectorLoop out{2, grid, {}, {}};
  out.source = [h](double k) {
    const PauliVec p = pauli_decompose(eval_bloch(h, k));
    if (std::abs(p.y) >= 1e-9) throw Error(ErrorKind::NotReal, "y = " + fmt(p.y) + " at k=" + fmt(k));
    return real_projector(p.x, p.z);
  };
  return resample(out, grid);
}

RealProjectorLoop embed(const RealProjectorLoop& p, int extra) {
  if (extra < 1) throw Error(ErrorKind::InvalidArgument, "embed needs extra >= 1");
  const int dim = p.dim + extra;
  auto pad = [dim](const Eigen::MatrixXd& m) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    out.topLeftCorner(m.rows(), m.cols()) = m;
    return out;
  };
  RealProjectorLoop out{dim, p.grid, {}, {}};
  out.mats.reserve(p.mats.size());
  for (const Eigen::MatrixXd& m : p.mats) out.mats.push_back(pad(m));
  if (p.source) out.source = [src = p.source, pad](double k) { return pad(src(k)); };
  return out;
}

EigenvectorLift lift_eigenvector(const RealProjectorLoop& p) {
  RealProjectorLoop cur = p;
  for (;;) {
    const int n = cur.grid.size();
    EigenvectorLift lift{cur.grid, {}, +1};
    lift.vecs.reserve(static_cast<std::size_t>(n + 1));
    bool smooth = true;
    for (int m = 0; m <= n && smooth; ++m) {
      Eigen::VectorXd v = top_eigenvector(cur.mats[static_cast<std::size_t>(m % n)]);
      if (m == 0) {
        Eigen::Index big = 0;
        v.cwiseAbs().maxCoeff(&big);
        if (v(big) < 0.0) v = -v;
      } else {
        const double overlap = v.dot(lift.vecs.back());
        if (overlap < 0.0) v = -v;
        smooth = std::abs(overlap) > 0.9;
      }
      lift.vecs.push_back(std::move(v));
    }
    if (smooth) {
      lift.endpoint_sign = lift.vecs.back().dot(lift.vecs.front()) > 0.0 ? +1 : -1;
      return lift;
    }
    if (!cur.source || 2 * n > kGridCap) {
      throw Error(ErrorKind::LiftFailed, "consecutive eigenvector overlap <= 0.9 at n=" + std::to_string(n));
    }
    cur = resample(cur, KGrid(2 * n));
  }
}

RealClass real_class(const RealProjectorLoop& p) {
  const EigenvectorLift lift = lift_eigenvector(p);
  RealClass c;
  c.dim = p.dim;
  c.endpoint_sign = lift.endpoint_sign;
  if (p.dim != 2) return c;
  double ccw = 0.0;
  for (std::size_t m = 0; m + 1 < lift.vecs.size(); ++m) {
    const Eigen::VectorXd& a = lift.vecs[m];
    const Eigen::VectorXd& b = lift.vecs[m + 1];
    ccw += std::atan2(a(0) * b(1) - a(1) * b(0), a.dot(b));
  }
  const double halves = -ccw / kPi;
  c.half_turns = static_cast<int>(std::lround(halves));
  if (std::abs(halves - c.half_turns) > 1e-6) {
    throw Error(ErrorKind::LiftFailed, "eigenvector turning " + fmt(halves) + " is not a whole number of half turns");
  }
  return c;
}

int reflection_index(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& r, double tol) {
  if (h.rows() != h.cols() || r.rows() != r.cols() || h.rows() != r.rows()) {
    throw Error(ErrorKind::InvalidArgument, "h and r must be square of equal size");
  }
  const double comm = (h * r - r * h).norm();
  if (comm > tol) throw Error(ErrorKind::NotCommuting, "|[r, h]| = " + fmt(comm));
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(r.rows(), r.cols());
  if ((r * r - id).norm() > tol || (r - r.adjoint()).norm() > tol) {
    throw Error(ErrorKind::InvalidArgument, "r is not a Hermitian involution");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  std::vector<Eigen::Index> negative;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    const double e = es.eigenvalues()(i);
    if (std::abs(e) < tol) throw Error(ErrorKind::GaplessAtK, "eigenvalue " + fmt(e));
    if (e < 0.0) negative.push_back(i);
  }
  if (negative.empty()) return 0;
  Eigen::MatrixXcd v(h.rows(), static_cast<Eigen::Index>(negative.size()));
  for (std::size_t c = 0; c < negative.size(); ++c) v.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(negative[c]);
  // r maps the negative eigenspace to itself; diagonalize it there.
  const Eigen::MatrixXcd restricted = v.adjoint() * r * v;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> parity(0.5 * (restricted + restricted.adjoint()));
  int count = 0;
  for (Eigen::Index i = 0; i < parity.eigenvalues().size(); ++i) {
    const double mu = parity.eigenvalues()(i);
    if (std::abs(std::abs(mu) - 1.0) > 1e-6) throw Error(ErrorKind::NonIntegerParity, "parity " + fmt(mu));
    if (mu < 0.0) ++count;
  }
  return count;
}

ReflectionIndex reflection_indices(const Hoppings& h, SymmetryClass cls, double tol) {
  Eigen::MatrixXcd r0, rpi;
  if (cls == SymmetryClass::Bond) {
    r0 = rpi = pauli::x();
  } else if (cls == SymmetryClass::Site) {
    r0 = pauli::identity();
    rpi = pauli::z();
  } else {
    throw Error(ErrorKind::InvalidArgument, "reflection index needs bond or site, got " + std::string(tag(cls)));
  }
  return {reflection_index(eval_bloch(h, 0.0), r0, tol), reflection_index(eval_bloch(h, kPi), rpi, tol)};
}

ChainSpectrum open_chain_spectrum(const Hoppings& h, int cells) {
  if (cells < 2) throw Error(ErrorKind::InvalidArgument, "cells must be >= 2");
  const int size = 2 * cells;
  Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(size, size);
  const int range = h.range();
  for (int i = 0; i < cells; ++i) {
    for (int ip = std::max(0, i - range); ip <= std::min(cells - 1, i + range); ++ip) {
      big.block<2, 2>(2 * i, 2 * ip) = h.block(ip - i);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(big, Eigen::EigenvaluesOnly);
  ChainSpectrum out{cells, {}};
  out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + size);
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  return out;
}

ProjectorReport verify_projector_path(const ProjectorPath& p, double tol) {
  ProjectorReport r;
  auto fail = [&r](int frame, int node, std::string msg) {
    r.pass = false;
    r.frame = frame;
    r.node = node;
    r.message = std::move(msg);
    return r;
  };
  if (p.frames.empty()) return fail(-1, -1, "path has no frames");
  const RealProjectorLoop& first = p.frames.front();
  for (std::size_t fi = 0; fi < p.frames.size(); ++fi) {
    const RealProjectorLoop& f = p.frames[fi];
    const int i = static_cast<int>(fi);
    if (f.dim != first.dim || !(f.grid == first.grid) || static_cast<int>(f.mats.size()) != f.grid.size()) {
      return fail(i, -1, "frame shape differs from frame 0");
    }
    const int n = f.grid.size();
    for (int m = 0; m < n; ++m) {
      const Eigen::MatrixXd& pm = f.mats[static_cast<std::size_t>(m)];
      if ((pm - pm.transpose()).norm() > tol) return fail(i, m, "not symmetric");
      if ((pm * pm - pm).norm() > tol) return fail(i, m, "not idempotent: |P^2 - P| = " + fmt((pm * pm - pm).norm()));
      if (std::abs(pm.trace() - 1.0) > tol) return fail(i, m, "trace " + fmt(pm.trace()));
      const Eigen::MatrixXd& next = f.mats[static_cast<std::size_t>((m + 1) % n)];
      const double overlap = (pm * next).trace();
      if (overlap <= 0.81) return fail(i, m, "neighbouring projectors overlap only " + fmt(overlap));
      if (fi > 0) {
        const double step = frobenius_step(pm, p.frames[fi - 1].mats[static_cast<std::size_t>(m)]);
        if (step > 0.25) return fail(i, m, "frame step " + fmt(step));
      }
    }
  }
  return r;
}

ProjectorPath fragile_homotopy(const RealProjectorLoop& two_band, int turns, int extra) {
  if (two_band.dim != 2) throw Error(ErrorKind::InvalidArgument, "fragile homotopy starts from a two-band loop");
  if (extra < 1) throw Error(ErrorKind::InvalidArgument, "needs at least one extra dimension");
  const EigenvectorLift lift = lift_eigenvector(two_band);
  const KGrid g = lift.grid;
  const int dim = 2 + extra;

  auto frame = [&](double t) {
    RealProjectorLoop f{dim, g, {}, {}};
    f.mats.reserve(static_cast<std::size_t>(g.size()));
    const Eigen::Vector3d e(0.0, 0.0, 1.0);
    for (int m = 0; m < g.size(); ++m) {
      const Eigen::VectorXd& w = lift.vecs[static_cast<std::size_t>(m)];
      const Eigen::Vector3d v(w(0), w(1), 0.0);
      const Eigen::Vector3d a = ((1.0 - t) * v + t * e).normalized();
      const double beta = -turns * (g.k(m) + kPi);
      const Eigen::Vector3d rv = v * std::cos(beta) + a.cross(v) * std::sin(beta) + a * a.dot(v) * (1.0 - std::cos(beta));
      Eigen::VectorXd full = Eigen::VectorXd::Zero(dim);
      full(0) = rv(0);
      full(1) = rv(1);
      full(dim - 1) = rv(2);
      f.mats.push_back(full * full.transpose());
    }
    return f;
  };

  for (int steps = 64;; steps *= 2) {
    ProjectorPath path;
    path.frames.reserve(static_cast<std::size_t>(steps + 1));
    for (int i = 0; i <= steps; ++i) path.frames.push_back(frame(static_cast<double>(i) / steps));
    const ProjectorReport r = verify_projector_path(path);
    if (r.pass) return path;
    if (steps * 2 > 4096) throw Error(ErrorKind::WitnessFailed, "projector path: " + r.message);
  }
}

}  // namespace twoband
