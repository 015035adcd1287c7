#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "looplie/json_io.hpp"
#include "looplie/verify.hpp"

using namespace looplie;
using io::Json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitSchema = 2;
constexpr int kExitRealization = 3;
constexpr int kExitRelator = 4;
constexpr int kExitSampling = 5;

struct Globals {
  std::uint64_t seed = 1;
  std::optional<double> tol;
  int genus = 0;
  std::string group;
  std::string out;
  int parallel = 1;
};

struct ExitError : std::runtime_error {
  int code;
  ExitError(int c, const std::string& what) : std::runtime_error(what), code(c) {}
};

Json read_json(const std::string& path) {
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    buf << in.rdbuf();
  }
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(g.out, std::ios::binary);
  if (!out) throw ExitError(kExitFail, "cannot write '" + g.out + "'");
  out << text;
}

std::string line(const Json& j) { return io::rounded(j).dump() + "\n"; }

int cmd_bracket(const Globals& g, const std::string& input, std::string gamma_name,
                std::string lambda_name, bool unoriented) {
  const auto in = io::surface_from_json(read_json(input));
  if (in.curves.size() < 2 && (gamma_name.empty() || lambda_name.empty()))
    throw SchemaError("input needs at least two curves");
  auto find = [&](const std::string& name, std::size_t fallback) -> const surface::Word& {
    if (name.empty()) return in.curves[fallback].second;
    for (const auto& [n, w] : in.curves)
      if (n == name) return w;
    throw SchemaError("no curve named '" + name + "'");
  };
  const auto& gamma = find(gamma_name, 0);
  const auto& lambda = find(lambda_name, 1);
  const auto kind = unoriented ? goldman::BracketKind::Unoriented : goldman::BracketKind::Oriented;
  const auto b = goldman::bracket(gamma, lambda, kind, in.genus, g.seed);
  emit(g, line(io::to_json(b)));
  return 0;
}

int cmd_holonomy(const Globals& g, const std::string& rep_path, const std::string& word_text,
                 const std::string& pert_path, int n_max, int intervals) {
  const auto rho = io::representation_from_json(read_json(rep_path));
  const double residual = surface::relator_residual(rho);
  const double rep_tol = g.tol.value_or(tol::kRelator);
  if (residual > rep_tol) {
    std::ostringstream msg;
    msg << "relator residual " << residual << " exceeds " << rep_tol;
    throw ExitError(kExitRelator, msg.str());
  }
  const surface::Presentation pres(rho.genus);
  const auto w = surface::parse_word(word_text, pres, false);
  Json out{{"word", surface::format_word(w)}, {"relator_residual", residual}};
  if (pert_path.empty()) {
    const Matrix h = surface::holonomy_matrix(rho, w);
    out["matrix"] = io::to_json(h);
    out["trace"] = h.trace().real();
  } else {
    const auto theta = io::perturbation_from_json(read_json(pert_path), pres);
    for (const auto& [k, m] : theta)
      if (m.rows() != rho.spec.dim() || m.cols() != rho.spec.dim())
        throw SchemaError("perturbation for " + surface::letter_name(k) + " has the wrong size");
    const auto ph = chen::perturbed_holonomy(rho, w, theta, n_max, intervals);
    const Matrix direct = chen::perturbed_holonomy_rk4(rho, w, theta, intervals);
    out["matrix"] = io::to_json(ph.value);
    out["trace"] = ph.value.trace().real();
    out["flat_trace"] = ph.flat.trace().real();
    out["series_order"] = ph.series.n_max;
    out["R"] = ph.series.R;
    out["remainder_bound"] = ph.series.remainder;
    out["rk4_delta"] = operator_norm(ph.value - direct);
  }
  emit(g, line(out));
  return 0;
}

int cmd_sample_rep(const Globals& g) {
  const auto spec = g.group.empty() ? liealg::GroupSpec::gl_real(2) : io::parse_group(g.group);
  const int genus = g.genus > 0 ? g.genus : 1;
  surface::Representation rho;
  try {
    rho = surface::sample_representation(spec, surface::Presentation(genus), g.seed);
  } catch (const SamplingFailure& e) {
    throw ExitError(kExitSampling, e.what());
  }
  Json out = io::to_json(rho);
  out["relator_residual"] = surface::relator_residual(rho);
  out["seed"] = g.seed;
  emit(g, line(out));
  return 0;
}

int cmd_verify(const Globals& g, const std::string& suite, int trials) {
  if (!verify::has_suite(suite)) {
    std::string names;
    for (const auto& n : verify::suite_names()) names += (names.empty() ? "" : ", ") + n;
    throw ExitError(kExitSchema, "unknown suite '" + suite + "' (known: " + names + ")");
  }
  verify::SuiteOptions opts;
  opts.seed = g.seed;
  opts.trials = trials;
  opts.genus = g.genus;
  opts.tol = g.tol;
  opts.parallel = g.parallel;
  if (!g.group.empty()) opts.group = io::parse_group(g.group);
  const auto report = verify::run_suite(suite, opts);
  emit(g, report.jsonl());
  return report.pass ? 0 : kExitFail;
}

int cmd_dgla_check(const Globals& g, const std::string& input) {
  const auto L = [&] {
    if (!input.empty()) return io::dgla_from_json(read_json(input));
    const auto spec = g.group.empty() ? liealg::GroupSpec::gl_real(2) : io::parse_group(g.group);
    return dgla::surface_toy_instance(g.genus > 0 ? g.genus : 1, spec);
  }();
  const auto report = dgla::axioms_residual(L);
  const double t = g.tol.value_or(tol::kNumeric);
  Json axioms = Json::object();
  for (const auto& [name, val] : report.entries()) axioms[name] = val;
  const bool pass = report.passes(t);
  emit(g, line(Json{{"d0", L.d0()}, {"d1", L.d1()}, {"tol", t}, {"axioms", axioms}, {"pass", pass}}));
  return pass ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loop brackets, holonomy traces and cyclic DGLA checks on closed surfaces"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every randomized step");
  app.add_option("--tol", g.tol, "Override the command's pass threshold");
  app.add_option("--genus", g.genus, "Surface genus (where not given by the input)");
  app.add_option("--group", g.group, "Group as KIND:n or KIND:p,q, e.g. GL_R:2, O_pq:1,1");
  app.add_option("--out", g.out, "Write output to this file instead of stdout");
  app.add_option("--parallel", g.parallel, "Worker threads for verify")->check(CLI::PositiveNumber);

  std::function<int()> run;

  auto* br = app.add_subcommand("bracket", "Goldman bracket of two curves from a surface JSON file");
  std::string br_input, br_gamma, br_lambda;
  bool br_unoriented = false;
  br->add_option("input", br_input, "Surface JSON ({\"genus\", \"curves\"}) or - for stdin")->required();
  br->add_option("--gamma", br_gamma, "Name of the first curve (default: first listed)");
  br->add_option("--lambda", br_lambda, "Name of the second curve (default: second listed)");
  br->add_flag("--unoriented", br_unoriented, "Use the bracket of unoriented loops");
  br->callback([&] { run = [&] { return cmd_bracket(g, br_input, br_gamma, br_lambda, br_unoriented); }; });

  auto* hol = app.add_subcommand("holonomy", "Holonomy and trace of a word under a representation");
  std::string hol_rep, hol_word, hol_pert;
  int hol_nmax = 12, hol_intervals = 2000;
  hol->add_option("--rep", hol_rep, "Representation JSON")->required();
  hol->add_option("--word", hol_word, "Word such as \"a1 b1 A1\" (empty for the identity)");
  hol->add_option("--perturbation", hol_pert, "Per-generator perturbation JSON");
  hol->add_option("--n-max", hol_nmax, "Series order")->check(CLI::NonNegativeNumber);
  hol->add_option("--intervals", hol_intervals, "Quadrature intervals per letter")->check(CLI::PositiveNumber);
  hol->callback([&] {
    run = [&] { return cmd_holonomy(g, hol_rep, hol_word, hol_pert, hol_nmax, hol_intervals); };
  });

  auto* ver = app.add_subcommand("verify", "Run a seeded invariant battery, JSON lines per trial");
  std::string ver_suite;
  int ver_trials = 0;
  ver->add_option("suite", ver_suite, "Suite name")->required();
  ver->add_option("--trials", ver_trials, "Number of trials (default per suite)")->check(CLI::NonNegativeNumber);
  ver->callback([&] { run = [&] { return cmd_verify(g, ver_suite, ver_trials); }; });

  auto* smp = app.add_subcommand("sample-rep", "Sample a representation of the surface group");
  smp->callback([&] { run = [&] { return cmd_sample_rep(g); }; });

  auto* dg = app.add_subcommand("dgla-check", "Axiom residuals of a cyclic DGLA");
  std::string dg_input;
  dg->add_option("input", dg_input, "DGLA JSON (default: toy instance for --genus/--group)");
  dg->callback([&] { run = [&] { return cmd_dgla_check(g, dg_input); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitSchema;
  }

  try {
    return run();
  } catch (const ExitError& e) {
    std::cerr << "looplie: " << e.what() << "\n";
    return e.code;
  } catch (const SchemaError& e) {
    std::cerr << "looplie: schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const InvalidElement& e) {
    std::cerr << "looplie: schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const RealizationError& e) {
    std::cerr << "looplie: realization failed: " << e.what() << "\n";
    return kExitRealization;
  } catch (const std::exception& e) {
    std::cerr << "looplie: " << e.what() << "\n";
    return kExitFail;
  }
}
