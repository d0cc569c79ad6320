#include "twoband/cli.hpp"
#include "twoband/error.hpp"
#include "twoband/homotopy.hpp"
#include "twoband/io.hpp"
#include "twoband/models.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

using namespace twoband;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("twoband_test_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) {
    if (l == line) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("hoppings JSON round trip") {
  const Hoppings h = models::xz_winding(-2);
  const Hoppings g = io::parse_hoppings(io::dump_hoppings(h));
  CHECK(g.name == h.name);
  REQUIRE(g.terms.size() == h.terms.size());
  for (const auto& [j, m] : h.terms) CHECK((g.terms.at(j) - m).norm() == 0.0);
}

TEST_CASE("malformed input is a parse error") {
  for (const char* text : {"", "{", "{\"hoppings\": 3}", "{\"hoppings\": [{\"j\": -1, \"m\": []}]}",
                           "{\"hoppings\": [{\"j\": 0, \"m\": [[1,2],[3,4]]}]}"}) {
    CAPTURE(text);
    try {
      io::parse_hoppings(text);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
    }
  }
}

TEST_CASE("path JSON round trip") {
  const SampledLoop a = sample_loop(models::r_n(1), KGrid(16));
  const HomotopyPath p = linear_path(a, a, 2, SymmetryClass::Chiral);
  const HomotopyPath q = io::parse_path(io::dump_path(p));
  CHECK(q.symmetry == SymmetryClass::Chiral);
  CHECK(q.steps() == 2);
  CHECK(q.frames[1].points == p.frames[1].points);
}

TEST_CASE("loop CSV") {
  std::ostringstream os;
  io::write_loop_csv(sample_loop(models::sigma_z(), KGrid(8)), os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "k,x,y,z,t");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 8);
}

TEST_CASE("cli: classify, witness, verify-path") {
  TempDir dir;
  REQUIRE(run({"models", "--name", "r_n", "--n", "2", "--sign", "-1", "-o", dir / "r.json"}).code == 0);

  Result c = run({"classify", dir / "r.json", "--symmetry", "chiral"});
  CHECK(c.code == 0);
  CHECK(has_line(c.out, "label=+R_2"));
  c = run({"classify", dir / "r.json", "--symmetry", "bond_and_theta"});
  CHECK(has_line(c.out, "label=-R_2"));

  c = run({"classify", dir / "r.json", "--symmetry", "auto"});
  CHECK(c.code == 0);
  CHECK(has_line(c.out, "symmetry=bond_and_theta"));

  Result w = run({"witness", dir / "r.json", "--symmetry", "bond_theta", "-o", dir / "p.json"});
  CHECK(w.code == 0);
  CHECK(has_line(w.out, "result=PASS"));
  Result v = run({"verify-path", dir / "p.json"});
  CHECK(v.code == 0);
  CHECK(has_line(v.out, "result=PASS"));
  CHECK(run({"verify-path", dir / "p.json", "--tol-gap", "2"}).code == 1);
}

TEST_CASE("cli: gauge relabels") {
  TempDir dir;
  REQUIRE(run({"models", "--name", "sigma_x", "-o", dir / "x.json"}).code == 0);
  REQUIRE(run({"gauge", dir / "x.json", "--l", "-1", "-o", dir / "g.json"}).code == 0);
  CHECK(has_line(run({"classify", dir / "g.json", "--symmetry", "chiral"}).out, "label=+R_-1"));
}

TEST_CASE("cli: the C- and Theta+ label is also printed in sigma_y form") {
  TempDir dir;
  REQUIRE(run({"models", "--name", "sigma_x", "--sign", "-1", "-o", dir / "x.json"}).code == 0);
  const Result c = run({"classify", dir / "x.json", "--symmetry", "cminus_and_theta"});
  CHECK(has_line(c.out, "label=+sigma_x"));
  CHECK(has_line(c.out, "alias_label=+sigma_y"));
}

TEST_CASE("cli: reflection index, fragile, chain, loop, symmetries") {
  TempDir dir;
  REQUIRE(run({"models", "--name", "ssh", "--v", "-1", "-o", dir / "s.json"}).code == 0);
  Result r = run({"reflection-index", dir / "s.json", "--symmetry", "site"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "n_minus_0=0"));
  CHECK(has_line(r.out, "n_minus_pi=0"));

  REQUIRE(run({"models", "--name", "xz_winding", "--w", "2", "-o", dir / "w.json"}).code == 0);
  r = run({"fragile", dir / "w.json"});
  CHECK(has_line(r.out, "half_turns=2"));
  CHECK(has_line(r.out, "endpoint_sign=+"));
  r = run({"fragile", dir / "w.json", "--embed", "1"});
  CHECK(has_line(r.out, "z2=symmetric"));

  CHECK(run({"chain", dir / "s.json", "--cells", "4", "-o", dir / "c.csv"}).code == 0);
  CHECK(fs::exists(dir / "c.csv"));
  CHECK(run({"loop", dir / "s.json", "-o", dir / "l.csv"}).code == 0);
  CHECK(io::read_file(dir / "l.csv").rfind("k,x,y,z,t\n", 0) == 0);

  r = run({"symmetries", dir / "s.json"});
  CHECK(r.out.find("class=site ") != std::string::npos);
  CHECK(r.out.find("class=chiral ") != std::string::npos);
}

TEST_CASE("cli: connectivity") {
  const Result r = run({"connectivity", "--symmetry", "chiral", "--range", "1", "--samples", "20", "--seed", "2"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "components_match_labels=yes"));
  CHECK(has_line(r.out, "witnesses_verified=yes"));
}

TEST_CASE("cli: exit codes") {
  TempDir dir;
  CHECK(run({}).code == 2);
  CHECK(run({"classify"}).code == 2);
  CHECK(run({"classify", dir / "missing.json", "--symmetry", "site"}).code == 2);
  io::write_file(dir / "bad.json", "{\"hoppings\": [{\"j\": 0, \"m\": [[[0,0],[1,0]],[[0,0],[0,0]]]}]}");
  const Result bad = run({"classify", dir / "bad.json", "--symmetry", "none"});
  CHECK(bad.code == 2);
  CHECK(bad.err.rfind("error: ", 0) == 0);
  REQUIRE(run({"models", "--name", "sigma_z", "-o", dir / "z.json"}).code == 0);
  CHECK(run({"classify", dir / "z.json", "--symmetry", "nope"}).code == 2);
  CHECK(run({"classify", dir / "z.json", "--symmetry", "theta_minus"}).code == 1);
  CHECK(run({"classify", dir / "z.json", "--symmetry", "chiral"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}
