#include "twoband/symmetry.hpp"

#include "twoband/error.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace twoband {

namespace {

struct ClassInfo {
  SymmetryClass cls;
  std::string_view tag;
  std::vector<Constraint> constraints;
};

const std::vector<ClassInfo>& class_table() {
  static const std::vector<ClassInfo> table{
      {SymmetryClass::None, "none", {}},
      {SymmetryClass::ThetaPlus, "theta_plus", {Constraint::ThetaPlus}},
      {SymmetryClass::ThetaMinus, "theta_minus", {Constraint::ThetaMinus}},
      {SymmetryClass::CPlus, "c_plus", {Constraint::CPlus}},
      {SymmetryClass::CMinus, "c_minus", {Constraint::CMinus}},
      {SymmetryClass::Bond, "bond", {Constraint::Bond}},
      {SymmetryClass::Site, "site", {Constraint::Site}},
      {SymmetryClass::Chiral, "chiral", {Constraint::Chiral}},
      {SymmetryClass::BondTheta, "bond_theta", {Constraint::BondTheta}},
      {SymmetryClass::SiteTheta, "site_theta", {Constraint::SiteTheta}},
      {SymmetryClass::SiteAndTheta, "site_and_theta", {Constraint::Site, Constraint::ThetaPlus}},
      {SymmetryClass::BondAndTheta, "bond_and_theta", {Constraint::Bond, Constraint::ThetaPlus}},
      {SymmetryClass::CPlusAndTheta, "cplus_and_theta", {Constraint::CPlus, Constraint::ThetaPlus}},
      {SymmetryClass::CMinusAndTheta, "cminus_and_theta", {Constraint::CMinus, Constraint::ThetaPlus}},
  };
  return table;
}

const ClassInfo& info(SymmetryClass cls) { return class_table()[static_cast<std::size_t>(cls)]; }

Matrix2 gauge(double k) {
  Matrix2 g = Matrix2::Zero();
  g(0, 0) = 1.0;
  g(1, 1) = std::polar(1.0, k);
  return g;
}

// Hopping blocks for every integer j, negative ones included.
using FullHoppings = std::map<int, Matrix2>;

FullHoppings expand(const Hoppings& h) {
  FullHoppings full;
  for (const auto& [j, m] : h.terms) {
    full[j] += m;
    if (j != 0) full[-j] += m.adjoint();
  }
  return full;
}

Hoppings fold(const FullHoppings& full, std::string name) {
  Hoppings out{std::move(name), {}};
  for (const auto& [j, m] : full) {
    if (j < 0 || (m.array() == Complex(0.0)).all()) continue;
    out.terms[j] = j == 0 ? Matrix2(0.5 * (m + m.adjoint())) : m;
  }
  return out;
}

// H(k) -> H(-k)
FullHoppings reverse_k(const FullHoppings& f) {
  FullHoppings out;
  for (const auto& [j, m] : f) out[-j] = m;
  return out;
}

// entrywise complex conjugate of the blocks: H(k) -> H*(-k)
FullHoppings conj_blocks(const FullHoppings& f) {
  FullHoppings out;
  for (const auto& [j, m] : f) out[j] = m.conjugate();
  return out;
}

FullHoppings sandwich(const FullHoppings& f, const Matrix2& u, double scale) {
  FullHoppings out;
  for (const auto& [j, m] : f) out[j] = scale * (u * m * u.adjoint());
  return out;
}

// H(k) -> G_k^l H(k) G_k^{-l}: entry (b,a) moves from j to j + l(b-a).
FullHoppings shift_entries(const FullHoppings& f, int l) {
  FullHoppings out;
  for (const auto& [j, m] : f) {
    for (int b = 0; b < 2; ++b) {
      for (int a = 0; a < 2; ++a) {
        const int target = j + l * (b - a);
        auto [it, inserted] = out.try_emplace(target, Matrix2::Zero());
        it->second(b, a) += m(b, a);
      }
    }
  }
  return out;
}

FullHoppings apply_constraint(Constraint c, const FullHoppings& f) {
  switch (c) {
    case Constraint::ThetaPlus: return conj_blocks(f);
    case Constraint::ThetaMinus: return sandwich(conj_blocks(f), pauli::y(), 1.0);
    case Constraint::CPlus: return sandwich(conj_blocks(f), pauli::z(), -1.0);
    case Constraint::CMinus: return sandwich(conj_blocks(f), pauli::y(), -1.0);
    case Constraint::Bond: return sandwich(reverse_k(f), pauli::x(), 1.0);
    case Constraint::Site: return shift_entries(reverse_k(f), 1);
    case Constraint::Chiral: return sandwich(f, pauli::z(), -1.0);
    case Constraint::BondTheta: return sandwich(conj_blocks(reverse_k(f)), pauli::x(), 1.0);
    case Constraint::SiteTheta: return shift_entries(conj_blocks(reverse_k(f)), 1);
  }
  return f;
}

void accumulate(FullHoppings& into, const FullHoppings& term) {
  for (const auto& [j, m] : term) {
    auto [it, inserted] = into.try_emplace(j, Matrix2::Zero());
    it->second += m;
  }
}

}  // namespace

const std::vector<SymmetryClass>& all_classes() {
  static const std::vector<SymmetryClass> classes = [] {
    std::vector<SymmetryClass> out;
    for (const auto& row : class_table()) out.push_back(row.cls);
    return out;
  }();
  return classes;
}

std::string_view tag(SymmetryClass cls) { return info(cls).tag; }

std::optional<SymmetryClass> parse_class(std::string_view t) {
  for (const auto& row : class_table()) {
    if (row.tag == t) return row.cls;
  }
  return std::nullopt;
}

std::string_view tag(Constraint c) {
  switch (c) {
    case Constraint::ThetaPlus: return "theta_plus";
    case Constraint::ThetaMinus: return "theta_minus";
    case Constraint::CPlus: return "c_plus";
    case Constraint::CMinus: return "c_minus";
    case Constraint::Bond: return "bond";
    case Constraint::Site: return "site";
    case Constraint::Chiral: return "chiral";
    case Constraint::BondTheta: return "bond_theta";
    case Constraint::SiteTheta: return "site_theta";
  }
  return "?";
}

const std::vector<Constraint>& constraints(SymmetryClass cls) { return info(cls).constraints; }

double ResidualReport::max() const {
  double worst = 0.0;
  for (const auto& [c, r] : entries) worst = std::max(worst, r);
  return worst;
}

Matrix2 constraint_image(const SampledLoop& loop, Constraint c, int m) {
  const Matrix2 here = loop.at(m).matrix();
  const Matrix2 there = loop.at(loop.grid.mirror(loop.grid.wrap(m))).matrix();
  const double k = loop.k(loop.grid.wrap(m));
  const Matrix2 sx = pauli::x(), sy = pauli::y(), sz = pauli::z();
  switch (c) {
    case Constraint::ThetaPlus: return there.conjugate();
    case Constraint::ThetaMinus: return sy * there.conjugate() * sy;
    case Constraint::CPlus: return -(sz * there.conjugate() * sz);
    case Constraint::CMinus: return -(sy * there.conjugate() * sy);
    case Constraint::Bond: return sx * there * sx;
    case Constraint::Site: return gauge(k) * there * gauge(k).adjoint();
    case Constraint::Chiral: return -(sz * here * sz);
    case Constraint::BondTheta: return sx * here.conjugate() * sx;
    case Constraint::SiteTheta: return gauge(k) * here.conjugate() * gauge(k).adjoint();
  }
  return here;
}

ResidualReport residual(const SampledLoop& loop, SymmetryClass cls) {
  ResidualReport report;
  for (Constraint c : constraints(cls)) {
    double worst = 0.0;
    for (int m = 0; m < loop.size(); ++m) {
      worst = std::max(worst, operator_norm(loop.at(m).matrix() - constraint_image(loop, c, m)));
    }
    report.entries.emplace_back(c, worst);
  }
  return report;
}

std::vector<SymmetryClass> detect(const SampledLoop& loop, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "detection tolerance must be positive");
  std::vector<SymmetryClass> found;
  for (SymmetryClass cls : all_classes()) {
    if (residual(loop, cls).max() <= tol) found.push_back(cls);
  }
  return found;
}

Hoppings symmetrize(const Hoppings& h, SymmetryClass cls) {
  const auto& gens = constraints(cls);
  if (gens.empty()) return h;
  const FullHoppings base = expand(h);
  // The generators are commuting involutions, so the group is {products of subsets}.
  FullHoppings sum;
  const std::size_t subsets = std::size_t{1} << gens.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    FullHoppings term = base;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      if (mask & (std::size_t{1} << g)) term = apply_constraint(gens[g], term);
    }
    accumulate(sum, term);
  }
  for (auto& [j, m] : sum) m /= static_cast<double>(subsets);
  return fold(sum, h.name);
}

Hoppings gauge_transform(const Hoppings& h, int l) {
  if (l == 0) return h;
  return fold(shift_entries(expand(h), l), h.name);
}

}  // namespace twoband
