#include "twoband/io.hpp"

#include "twoband/error.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace twoband::io {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Parse, what); }

Complex parse_complex(const json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) bad("complex entry must be [re, im]");
  return {v[0].get<double>(), v[1].get<double>()};
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    bad(e.what());
  }
}

}  // namespace

Hoppings parse_hoppings(const std::string& text) {
  return guarded([&] {
    const json doc = json::parse(text);
    if (!doc.is_object() || !doc.contains("hoppings") || !doc["hoppings"].is_array()) {
      bad("expected an object with a \"hoppings\" array");
    }
    Hoppings h;
    h.name = doc.value("name", std::string("unnamed"));
    for (const json& term : doc["hoppings"]) {
      if (!term.contains("j") || !term["j"].is_number_integer()) bad("hopping term needs integer \"j\"");
      const int j = term["j"].get<int>();
      if (j < 0) bad("hopping index j must be >= 0, got " + std::to_string(j));
      if (h.terms.count(j) != 0) bad("duplicate hopping index " + std::to_string(j));
      const json& m = term.at("m");
      if (!m.is_array() || m.size() != 2) bad("\"m\" must be a 2x2 array");
      Matrix2 block;
      for (int b = 0; b < 2; ++b) {
        if (!m[b].is_array() || m[b].size() != 2) bad("\"m\" must be a 2x2 array");
        for (int a = 0; a < 2; ++a) block(b, a) = parse_complex(m[b][a]);
      }
      h.terms[j] = block;
    }
    return h;
  });
}

std::string dump_hoppings(const Hoppings& h) {
  json doc;
  doc["name"] = h.name;
  doc["hoppings"] = json::array();
  for (const auto& [j, m] : h.terms) {
    json rows = json::array();
    for (int b = 0; b < 2; ++b) {
      json row = json::array();
      // + 0.0 folds -0.0 into 0.0
      for (int a = 0; a < 2; ++a) row.push_back({m(b, a).real() + 0.0, m(b, a).imag() + 0.0});
      rows.push_back(row);
    }
    doc["hoppings"].push_back({{"j", j}, {"m", rows}});
  }
  return doc.dump(2) + "\n";
}

Hoppings read_hoppings(const std::string& path) { return parse_hoppings(read_file(path)); }
void write_hoppings(const Hoppings& h, const std::string& path) { write_file(path, dump_hoppings(h)); }

void write_loop_csv(const SampledLoop& loop, std::ostream& out) {
  out << "k,x,y,z,t\n" << std::setprecision(17);
  for (int m = 0; m < loop.size(); ++m) {
    const PauliVec& p = loop.at(m);
    out << loop.k(m) << ',' << p.x << ',' << p.y << ',' << p.z << ',' << p.t << '\n';
  }
}

HomotopyPath parse_path(const std::string& text) {
  return guarded([&] {
    const json doc = json::parse(text);
    const auto cls = parse_class(doc.at("symmetry").get<std::string>());
    if (!cls) bad("unknown symmetry tag '" + doc.at("symmetry").get<std::string>() + "'");
    const int n = doc.at("grid_n").get<int>();
    const int steps = doc.at("steps").get<int>();
    KGrid grid;
    try {
      grid = KGrid(n);
    } catch (const Error& e) {
      bad(e.detail());
    }
    const json& frames = doc.at("frames");
    if (!frames.is_array() || static_cast<int>(frames.size()) != steps + 1) bad("expected steps + 1 frames");
    HomotopyPath p{*cls, {}};
    p.frames.reserve(frames.size());
    for (const json& f : frames) {
      if (!f.is_array() || static_cast<int>(f.size()) != n) bad("every frame needs grid_n points");
      SampledLoop loop{grid, {}};
      loop.points.reserve(static_cast<std::size_t>(n));
      for (const json& pt : f) {
        if (!pt.is_array() || pt.size() != 4) bad("points are [x, y, z, t]");
        loop.points.push_back({pt[0].get<double>(), pt[1].get<double>(), pt[2].get<double>(), pt[3].get<double>()});
      }
      p.frames.push_back(std::move(loop));
    }
    return p;
  });
}

std::string dump_path(const HomotopyPath& p) {
  json doc;
  doc["symmetry"] = std::string(tag(p.symmetry));
  doc["grid_n"] = p.frames.empty() ? 0 : p.frames.front().size();
  doc["steps"] = p.steps();
  json frames = json::array();
  for (const SampledLoop& f : p.frames) {
    json pts = json::array();
    for (const PauliVec& q : f.points) pts.push_back({q.x, q.y, q.z, q.t});
    frames.push_back(std::move(pts));
  }
  doc["frames"] = std::move(frames);
  return doc.dump() + "\n";
}

HomotopyPath read_path(const std::string& path) { return parse_path(read_file(path)); }
void write_path(const HomotopyPath& p, const std::string& path) { write_file(path, dump_path(p)); }

void write_spectrum_csv(const ChainSpectrum& s, std::ostream& out) {
  out << std::setprecision(17);
  for (double e : s.eigenvalues) out << e << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) bad("cannot write '" + path + "'");
  out << contents;
  if (!out) bad("write to '" + path + "' failed");
}

}  // namespace twoband::io
