#include "twoband/cli.hpp"

#include "twoband/core.hpp"
#include "twoband/error.hpp"
#include "twoband/homotopy.hpp"
#include "twoband/invariants.hpp"
#include "twoband/io.hpp"
#include "twoband/models.hpp"
#include "twoband/multiband.hpp"
#include "twoband/symmetry.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace twoband::cli {

namespace {

struct Options {
  RunConfig cfg;
  std::string file;
  std::string symmetry;
  std::string output;
  int l = 0;
  int range = 1;
  int samples = 100;
  int clip = -1;
  int cells = 40;
  int embed = 0;
  std::string name;
  double sign = 1.0;
  int n = 1;
  double v = 1.0;
  int w = 1;
  bool list = false;
  std::string dir;
};

class Out {
 public:
  explicit Out(std::ostream& os) : os_(os), saved_(os.precision()) { os_ << std::setprecision(12); }
  ~Out() { os_.precision(saved_); }
  Out(const Out&) = delete;
  Out& operator=(const Out&) = delete;

  template <class T>
  void operator()(std::string_view key, const T& value) {
    os_ << key << '=' << value << '\n';
  }
  std::ostream& stream() { return os_; }

 private:
  std::ostream& os_;
  std::streamsize saved_;
};

bool usage_error(ErrorKind k) { return k == ErrorKind::Parse || k == ErrorKind::InvalidArgument || k == ErrorKind::NotHermitian; }

SymmetryClass require_class(const std::string& t) {
  if (auto c = parse_class(t)) return *c;
  throw Error(ErrorKind::InvalidArgument, "unknown symmetry '" + t + "'");
}

Hoppings load(const std::string& path) {
  Hoppings h = io::read_hoppings(path);
  const auto violations = validate_hoppings(h);
  if (!violations.empty()) {
    std::string msg = path + ":";
    for (const auto& v : violations) msg += " " + v + ";";
    throw Error(ErrorKind::InvalidArgument, msg);
  }
  return h;
}

SymmetryClass most_constrained(const std::vector<SymmetryClass>& found) {
  SymmetryClass best = SymmetryClass::None;
  for (SymmetryClass c : found) {
    if (constraints(c).size() > constraints(best).size()) best = c;
  }
  return best;
}

std::string join_tags(const std::vector<SymmetryClass>& classes) {
  std::string s;
  for (SymmetryClass c : classes) s += (s.empty() ? "" : ",") + std::string(tag(c));
  return s;
}

std::string sign_str(int s) { return s < 0 ? "-" : "+"; }

// Refines the grid while the crossing count hits a tangency.
template <class F>
auto with_refinement(const Hoppings& h, SampledLoop& loop, F&& f) {
  for (;;) {
    try {
      return f(loop);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::TangentialCrossing || loop.size() * 2 > kGridCap) throw;
      loop = sample_loop(h, KGrid(loop.size() * 2));
    }
  }
}

int cmd_classify(const Options& o, Out& out) {
  const Hoppings h = load(o.file);
  SampledLoop loop = sample_loop(h, KGrid(o.cfg.grid_n));
  SymmetryClass cls;
  if (o.symmetry == "auto") {
    const auto found = detect(loop, o.cfg.tol_sym);
    out("detected", join_tags(found));
    cls = most_constrained(found);
  } else {
    cls = require_class(o.symmetry);
  }
  out("symmetry", tag(cls));
  const ClassLabel label = with_refinement(h, loop, [&](const SampledLoop& l) { return classify(l, cls, o.cfg.tol_sym); });
  const GapStats g = gap_stats(loop);
  out("grid", loop.size());
  out("gap", g.min);
  out("relative_gap", g.relative());
  for (const auto& [k, v] : invariants(loop, cls).values) {
    if (k != "gap" && k != "relative_gap") out("invariant." + k, v);
  }
  out("label", to_string(label));
  if (cls == SymmetryClass::CMinusAndTheta) out("alias_label", sign_str(label.sign) + "sigma_y");
  return kOk;
}

int cmd_symmetries(const Options& o, Out& out) {
  const SampledLoop loop = sample_loop(load(o.file), KGrid(o.cfg.grid_n));
  for (SymmetryClass c : all_classes()) {
    const double r = residual(loop, c).max();
    out.stream() << "class=" << tag(c) << " residual=" << r << " result=" << (r <= o.cfg.tol_sym ? "pass" : "fail")
                 << '\n';
  }
  return kOk;
}

int cmd_invariants(const Options& o, Out& out) {
  const Hoppings h = load(o.file);
  const SymmetryClass cls = require_class(o.symmetry);
  SampledLoop loop = sample_loop(h, KGrid(o.cfg.grid_n));
  out("symmetry", tag(cls));
  out("grid", loop.size());
  for (const auto& [k, v] : invariants(loop, cls).values) out(k, v);
  return kOk;
}

int cmd_gauge(const Options& o, Out& out) {
  Hoppings h = gauge_transform(load(o.file), o.l);
  h.name += " (gauge l=" + std::to_string(o.l) + ")";
  if (o.output.empty()) {
    out.stream() << io::dump_hoppings(h);
    return kOk;
  }
  io::write_hoppings(h, o.output);
  out("l", o.l);
  out("range", h.range());
  out("written", o.output);
  return kOk;
}

int cmd_witness(const Options& o, Out& out) {
  const Hoppings h = load(o.file);
  const SymmetryClass cls = require_class(o.symmetry);
  SampledLoop loop = sample_loop(h, KGrid(o.cfg.grid_n));
  WitnessOptions wo;
  wo.seed = o.cfg.seed;
  wo.tol_gap = o.cfg.tol_gap;
  wo.tol_sym = o.cfg.tol_sym;
  const Witness w = with_refinement(h, loop, [&](const SampledLoop& l) { return witness_to_representative(l, cls, wo); });
  out("symmetry", tag(cls));
  out("label", to_string(w.label));
  out("grid", loop.size());
  out("steps", w.path.steps());
  out("retries", w.retries);
  out("min_gap", w.report.min_gap);
  out("result", w.report.pass ? "PASS" : "FAIL");
  if (!o.output.empty()) {
    io::write_path(w.path, o.output);
    out("written", o.output);
  }
  return w.report.pass ? kOk : kFailure;
}

int cmd_verify_path(const Options& o, Out& out) {
  const HomotopyPath p = io::read_path(o.file);
  const VerificationReport r = verify_path(p, o.cfg.tol_gap, o.cfg.tol_sym);
  out("symmetry", tag(p.symmetry));
  out("steps", p.steps());
  out("result", r.pass ? "PASS" : "FAIL");
  if (std::isfinite(r.min_gap)) out("min_gap", r.min_gap);
  out("max_residual", r.max_residual);
  if (!r.pass) {
    out("failure", to_string(r.failure));
    out("frame", r.frame);
    out("node", r.node);
    out("detail", r.message);
  }
  return r.pass ? kOk : kFailure;
}

int cmd_connectivity(const Options& o, Out& out) {
  ConnectivityOptions co;
  co.cls = require_class(o.symmetry);
  co.range = o.range;
  co.samples = o.samples;
  co.seed = o.cfg.seed;
  co.clip = o.clip;
  co.jobs = o.cfg.jobs;
  co.grid = o.cfg.grid_n;
  const ConnectivityReport r = connectivity_sample(co);
  out("symmetry", tag(r.cls));
  out("samples", r.samples.size());
  out("components", r.components.size());
  for (const Component& c : r.components) {
    out.stream() << "component=" << to_string(c.label) << " size=" << c.members.size()
                 << " pure=" << (c.pure ? "yes" : "no") << '\n';
  }
  const bool verified = std::all_of(r.samples.begin(), r.samples.end(), [](const SampleRecord& s) { return s.witness_pass; });
  out("witnesses_verified", verified ? "yes" : "no");
  out("components_match_labels", r.components_match_labels() ? "yes" : "no");
  out("out_of_clip", r.out_of_clip);
  out("soundness_pairs", r.soundness.checked);
  out("soundness_failed", r.soundness.failed);
  for (const auto& [kind, count] : r.soundness.failure_kinds) out("soundness_failure." + kind, count);
  out("soundness_worst_gap_ratio", r.soundness.worst_gap_ratio);
  out("soundness_note", "straight-line failure is necessary for distinct labels, not a proof of disconnection");
  const bool ok = verified && r.components_match_labels() && r.soundness.failed == r.soundness.checked;
  return ok ? kOk : kFailure;
}

int cmd_loop(const Options& o, Out& out) {
  const SampledLoop loop = sample_loop(load(o.file), KGrid(o.cfg.grid_n));
  if (o.output.empty()) {
    io::write_loop_csv(loop, out.stream());
    return kOk;
  }
  std::ostringstream csv;
  io::write_loop_csv(loop, csv);
  io::write_file(o.output, csv.str());
  out("grid", loop.size());
  out("written", o.output);
  return kOk;
}

int cmd_chain(const Options& o, Out& out) {
  const ChainSpectrum s = open_chain_spectrum(load(o.file), o.cells);
  if (o.output.empty()) {
    io::write_spectrum_csv(s, out.stream());
    return kOk;
  }
  std::ostringstream csv;
  io::write_spectrum_csv(s, csv);
  io::write_file(o.output, csv.str());
  out("cells", s.cells);
  out("eigenvalues", s.eigenvalues.size());
  out("near_zero", std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(), [](double e) { return std::abs(e) < 1e-6; }));
  out("written", o.output);
  return kOk;
}

int cmd_fragile(const Options& o, Out& out) {
  RealProjectorLoop p = projector_from_hoppings(load(o.file), KGrid(o.cfg.grid_n));
  if (o.embed > 0) p = embed(p, o.embed);
  const RealClass c = real_class(p);
  out("dim", c.dim);
  out("endpoint_sign", sign_str(c.endpoint_sign));
  if (c.dim == 2) {
    out("half_turns", c.half_turns);
    out("winding", c.winding());
  } else {
    out("z2", c.symmetric() ? "symmetric" : "antisymmetric");
  }
  out("class", c.symmetric() ? "symmetric" : "antisymmetric");
  return kOk;
}

int cmd_reflection(const Options& o, Out& out) {
  const SymmetryClass cls = require_class(o.symmetry);
  const ReflectionIndex r = reflection_indices(load(o.file), cls, o.cfg.tol_sym);
  out("symmetry", tag(cls));
  out("n_minus_0", r.n_minus_0);
  out("n_minus_pi", r.n_minus_pi);
  return kOk;
}

Hoppings named_model(const Options& o) {
  if (o.name == "sigma_x") return models::sigma_x(o.sign);
  if (o.name == "sigma_y") return models::sigma_y(o.sign);
  if (o.name == "sigma_z") return models::sigma_z(o.sign);
  if (o.name == "r_n") return models::r_n(o.n, o.sign);
  if (o.name == "ssh") return models::ssh(o.v);
  if (o.name == "xz_winding") return models::xz_winding(o.w);
  throw Error(ErrorKind::InvalidArgument, "unknown model '" + o.name + "'");
}

std::string file_stem(const std::string& name) {
  std::string s;
  for (char c : name) {
    if (c == '+') s += "plus_";
    else if (c == '-') s += "minus_";
    else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') s += c;
    else if (c == '.' || c == '=') s += '_';
  }
  return s;
}

int cmd_models(const Options& o, Out& out) {
  if (o.list) {
    for (const char* n : {"sigma_x", "sigma_y", "sigma_z", "r_n", "ssh", "xz_winding"}) out("model", n);
    return kOk;
  }
  if (!o.dir.empty()) {
    std::filesystem::create_directories(o.dir);
    for (const Hoppings& h : models::all_fixtures()) {
      const std::string path = (std::filesystem::path(o.dir) / (file_stem(h.name) + ".json")).string();
      io::write_hoppings(h, path);
      out("written", path);
    }
    return kOk;
  }
  if (o.name.empty()) throw Error(ErrorKind::InvalidArgument, "models needs --name, --list or --dir");
  const Hoppings h = named_model(o);
  if (o.output.empty()) {
    out.stream() << io::dump_hoppings(h);
    return kOk;
  }
  io::write_hoppings(h, o.output);
  out("model", h.name);
  out("written", o.output);
  return kOk;
}

void add_grid(CLI::App* c, Options& o) {
  c->add_option("--grid", o.cfg.grid_n, "Brillouin-zone nodes (even, >= 8)")->capture_default_str();
}
void add_tol(CLI::App* c, Options& o) {
  c->add_option("--tol", o.cfg.tol_sym, "symmetry tolerance")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Homotopy classes of symmetric two-band chains", "twoband"};
  app.require_subcommand(1);
  Options o;

  auto* classify_cmd = app.add_subcommand("classify", "assign the class label");
  classify_cmd->add_option("file", o.file, "hoppings JSON")->required();
  classify_cmd->add_option("--symmetry", o.symmetry, "class tag or 'auto'")->required();
  add_grid(classify_cmd, o);
  add_tol(classify_cmd, o);

  auto* symmetries_cmd = app.add_subcommand("symmetries", "residual of every class");
  symmetries_cmd->add_option("file", o.file, "hoppings JSON")->required();
  add_grid(symmetries_cmd, o);
  add_tol(symmetries_cmd, o);

  auto* invariants_cmd = app.add_subcommand("invariants", "raw invariant values");
  invariants_cmd->add_option("file", o.file, "hoppings JSON")->required();
  invariants_cmd->add_option("--symmetry", o.symmetry, "class tag")->required();
  add_grid(invariants_cmd, o);

  auto* gauge_cmd = app.add_subcommand("gauge", "change of unit cell H -> G^l H G^-l");
  gauge_cmd->add_option("file", o.file, "hoppings JSON")->required();
  gauge_cmd->add_option("--l", o.l, "power of G")->required();
  gauge_cmd->add_option("-o,--output", o.output, "output hoppings JSON (default stdout)");

  auto* witness_cmd = app.add_subcommand("witness", "verified path to the class representative");
  witness_cmd->add_option("file", o.file, "hoppings JSON")->required();
  witness_cmd->add_option("--symmetry", o.symmetry, "class tag")->required();
  witness_cmd->add_option("-o,--output", o.output, "path JSON");
  witness_cmd->add_option("--seed", o.cfg.seed, "retry seed")->capture_default_str();
  add_grid(witness_cmd, o);
  add_tol(witness_cmd, o);

  auto* verify_cmd = app.add_subcommand("verify-path", "check a path for gap, symmetry and continuity");
  verify_cmd->add_option("file", o.file, "path JSON")->required();
  verify_cmd->add_option("--tol-gap", o.cfg.tol_gap, "smallest allowed |x|")->capture_default_str();
  verify_cmd->add_option("--tol-sym", o.cfg.tol_sym, "largest allowed residual")->capture_default_str();

  auto* conn_cmd = app.add_subcommand("connectivity", "Monte-Carlo connected components");
  conn_cmd->add_option("--symmetry", o.symmetry, "class tag")->required();
  conn_cmd->add_option("--range", o.range, "hopping range")->capture_default_str();
  conn_cmd->add_option("--samples", o.samples, "accepted samples")->capture_default_str();
  conn_cmd->add_option("--seed", o.cfg.seed, "seed")->capture_default_str();
  conn_cmd->add_option("--jobs", o.cfg.jobs, "worker threads")->capture_default_str();
  conn_cmd->add_option("--clip", o.clip, "largest |n| expected for R_n labels (default: range)");
  add_grid(conn_cmd, o);

  auto* loop_cmd = app.add_subcommand("loop", "export the Pauli-vector loop as CSV");
  loop_cmd->add_option("file", o.file, "hoppings JSON")->required();
  loop_cmd->add_option("-o,--output", o.output, "CSV file (default stdout)");
  add_grid(loop_cmd, o);

  auto* chain_cmd = app.add_subcommand("chain", "open-chain spectrum");
  chain_cmd->add_option("file", o.file, "hoppings JSON")->required();
  chain_cmd->add_option("--cells", o.cells, "unit cells")->capture_default_str();
  chain_cmd->add_option("-o,--output", o.output, "CSV file (default stdout)");

  auto* fragile_cmd = app.add_subcommand("fragile", "real-projector winding / Z2 class");
  fragile_cmd->add_option("file", o.file, "hoppings JSON of a real Hamiltonian")->required();
  fragile_cmd->add_option("--embed", o.embed, "extra ambient dimensions")->capture_default_str();
  add_grid(fragile_cmd, o);

  auto* refl_cmd = app.add_subcommand("reflection-index", "N_- at k = 0 and pi");
  refl_cmd->add_option("file", o.file, "hoppings JSON")->required();
  refl_cmd->add_option("--symmetry", o.symmetry, "bond or site")->required()->check(CLI::IsMember({"bond", "site"}));
  refl_cmd->add_option("--tol", o.cfg.tol_sym, "commutator / gap tolerance")->capture_default_str();

  auto* models_cmd = app.add_subcommand("models", "write built-in fixtures");
  models_cmd->add_option("--name", o.name, "sigma_x, sigma_y, sigma_z, r_n, ssh, xz_winding");
  models_cmd->add_option("--sign", o.sign, "overall sign")->capture_default_str();
  models_cmd->add_option("--n", o.n, "R_n index")->capture_default_str();
  models_cmd->add_option("--v", o.v, "SSH staggered potential")->capture_default_str();
  models_cmd->add_option("--w", o.w, "x-z winding")->capture_default_str();
  models_cmd->add_option("-o,--output", o.output, "output JSON (default stdout)");
  models_cmd->add_flag("--list", o.list, "list model names");
  models_cmd->add_option("--dir", o.dir, "write every fixture into this directory");

  std::vector<const char*> argv{"twoband"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  Out printer(out);
  try {
    if (o.cfg.jobs < 1) throw Error(ErrorKind::InvalidArgument, "--jobs must be >= 1");
    if (!(o.cfg.tol_sym > 0.0) || !(o.cfg.tol_gap > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerances must be > 0");
    if (*classify_cmd) return cmd_classify(o, printer);
    if (*symmetries_cmd) return cmd_symmetries(o, printer);
    if (*invariants_cmd) return cmd_invariants(o, printer);
    if (*gauge_cmd) return cmd_gauge(o, printer);
    if (*witness_cmd) return cmd_witness(o, printer);
    if (*verify_cmd) return cmd_verify_path(o, printer);
    if (*conn_cmd) return cmd_connectivity(o, printer);
    if (*loop_cmd) return cmd_loop(o, printer);
    if (*chain_cmd) return cmd_chain(o, printer);
    if (*fragile_cmd) return cmd_fragile(o, printer);
    if (*refl_cmd) return cmd_reflection(o, printer);
    if (*models_cmd) return cmd_models(o, printer);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return usage_error(e.kind()) ? kUsage : kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace twoband::cli
