// nslab: command-line front end for the periodic Navier-Stokes laboratory.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "nslab/beltrami.hpp"
#include "nslab/error.hpp"
#include "nslab/experiments.hpp"
#include "nslab/fft.hpp"
#include "nslab/io.hpp"
#include "nslab/littlewood_paley.hpp"
#include "nslab/norms.hpp"
#include "nslab/random.hpp"
#include "nslab/solver.hpp"
#include "nslab/spectral.hpp"

namespace fs = std::filesystem;
using namespace nslab;

namespace {

enum Exit { kOk = 0, kVerdictFail = 1, kUsage = 2, kRuntime = 3 };

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::ConditionViolated: return kVerdictFail;
    case ErrorKind::Syntax:
    case ErrorKind::Schema:
    case ErrorKind::Io:
    case ErrorKind::BadConfig:
    case ErrorKind::BadMagic:
    case ErrorKind::TruncatedPayload:
    case ErrorKind::BadExponent:
    case ErrorKind::InvalidArgument:
      return kUsage;
    default: return kRuntime;
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
}

void print_rows(const ExperimentReport& rep) {
  for (const auto& r : rep.rows)
    std::printf("%-6s %-40s measured=%-14s bound=%s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                io::format_double(r.measured).c_str(), io::format_double(r.bound).c_str());
}

// ---- generate -------------------------------------------------------------

struct GenerateOpts {
  std::string kind = "beltrami";
  int N = 16;
  int lambda_sq = 1;
  int sign = 1;
  std::uint64_t seed = 1;
  int box = 2;
  double amplitude = 0.0;
  std::string shells = "1:1";
  double b = 0.5, epsilon = 0.5, eps1 = 0.0, eps_threshold = 0.05;
  std::string out;
  std::string report;
};

int run_generate(const GenerateOpts& o) {
  SpectralField f(o.N, 3);
  int code = kOk;
  if (o.kind == "beltrami") {
    f = random_beltrami(o.N, o.lambda_sq, o.sign, o.seed);
  } else if (o.kind == "random") {
    f = random_solenoidal(o.N, o.seed, RandomBand{o.box});
  } else if (o.kind == "potential") {
    const int box = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(o.lambda_sq))));
    f = beltrami_from_potential(random_solenoidal(o.N, o.seed, RandomBand{box, o.lambda_sq, o.lambda_sq}));
  } else if (o.kind == "corollary") {
    io::Config c;
    c.entries["shells"] = {o.shells, 1, 1};
    const auto shells = c.get_shells("shells");
    std::optional<SpectralField> u02;
    if (o.eps1 > 0.0) {
      SpectralField g = random_solenoidal(o.N, o.seed + 2, RandomBand{o.box});
      g *= o.eps1 / bmo_minus1_norm(g, CylinderGrid::make(o.N)).value;
      u02 = std::move(g);
    }
    const Corollary18Data d = corollary18_data(o.N, shells, o.b, o.epsilon, o.eps1, o.eps_threshold, u02, o.seed);
    f = d.u0;
    const fs::path report = o.report.empty() ? fs::path(o.out).replace_extension(".admissibility.csv") : fs::path(o.report);
    io::CsvWriter w(report, io::fnv1a(o.shells + io::format_double(o.b) + io::format_double(o.epsilon) +
                                      io::format_double(o.eps1) + io::format_double(o.eps_threshold)),
                    {"check", "radii", "lhs", "rhs", "pass"});
    std::string radii;
    for (double l : d.lambdas) radii += (radii.empty() ? "" : ";") + io::format_double(l);
    const auto& r = d.report;
    w.row({"ordered", radii, "1", r.ordered ? "1" : "0", r.ordered ? "1" : "0"});
    w.row({"spread", radii, io::format_double(r.spread), io::format_double(r.spread_bound), r.spread_ok ? "1" : "0"});
    w.row({"epsilon1", radii, io::format_double(r.epsilon1), io::format_double(r.epsilon1_bound),
           r.epsilon1_ok ? "1" : "0"});
    w.row({"verdict", radii, "", "", r.admissible() ? "1" : "0"});
    w.close();
    std::printf("admissibility: %s (%s)\n", r.admissible() ? "PASS" : "FAIL", report.c_str());
    if (!r.admissible()) code = kVerdictFail;
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown --kind '" + o.kind + "'");
  }
  if (o.amplitude > 0.0 && o.kind != "corollary") f *= o.amplitude / l2_norm(f);
  f.set_label(o.kind);
  io::write_snapshot(f, o.out);
  std::printf("wrote %s (N=%d, l2=%s)\n", o.out.c_str(), f.grid_size(), io::format_double(l2_norm(f)).c_str());
  return code;
}

// ---- norm -----------------------------------------------------------------

struct NormOpts {
  std::string input;
  std::string norm = "bmo_minus1";
  double s = -1.0;
  int stride = 1, radii_per_octave = 1, nodes_per_level = 4;
  double r_min = 0.0, r_max = 0.0;
  std::string out;
};

int run_norm(const NormOpts& o) {
  const SpectralField f = io::read_snapshot(o.input);
  const CylinderGrid grid =
      CylinderGrid::make(f.grid_size(), o.stride, o.radii_per_octave, o.nodes_per_level, o.r_min, o.r_max);
  NormReport rep;
  if (o.norm == "bmo_minus1") rep = bmo_minus1_norm(f, grid);
  else if (o.norm == "bmo") rep = bmo_norm(f, grid);
  else if (o.norm == "bmo_minus2") rep = bmo_minus2_upper(f, grid);
  else if (o.norm == "bmo_minus1_div") rep = bmo_minus1_divergence_form(f, grid);
  else if (o.norm == "besov_inf") rep = besov_norm(f, o.s, BesovQ::Infinity);
  else if (o.norm == "besov_2") rep = besov_norm(f, o.s, BesovQ::Two);
  else if (o.norm == "l2") rep.value = l2_norm(f);
  else if (o.norm == "sup") rep.value = sup_norm(f);
  else throw Error(ErrorKind::InvalidArgument, "unknown --norm '" + o.norm + "'");

  const double h = 2.0 * M_PI / f.grid_size();
  const auto& c = rep.argmax_center;
  const std::string y0 = io::format_double(c[0] * h) + ";" + io::format_double(c[1] * h) + ";" +
                         io::format_double(c[2] * h);
  const std::string meta = rep.metadata.empty() ? grid.describe() : rep.metadata;
  const std::uint64_t hash = io::fnv1a(o.input + o.norm + grid.describe());
  const std::vector<std::string> header{"norm", "value", "argmax_y0", "argmax_r", "grid"};
  const std::vector<std::string> row{o.norm, io::format_double(rep.value), y0, io::format_double(rep.argmax_radius),
                                     "\"" + meta + "\""};
  if (o.out.empty()) {
    std::cout << io::csv_comment(hash) << "\n";
    for (std::size_t i = 0; i < header.size(); ++i) std::cout << (i ? "," : "") << header[i];
    std::cout << "\n";
    for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << row[i];
    std::cout << "\n";
  } else {
    io::CsvWriter w(o.out, hash, header);
    w.row(row);
    w.close();
  }
  return kOk;
}

// ---- solve / picard ---------------------------------------------------------

SpectralField initial_data(const io::Config& cfg) {
  if (cfg.has("input")) return io::read_snapshot(cfg.get_string("input", ""));
  const int N = static_cast<int>(cfg.get_int("N", 16));
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
  const int lambda_sq = static_cast<int>(cfg.get_int("lambda_sq", 1));
  const int box = static_cast<int>(cfg.get_int("data_box", 2));
  const double amp = cfg.get_double("amplitude", 1.0);
  const std::string kind = cfg.get_string("data", "mixed");
  SpectralField f(N, 3);
  if (kind == "beltrami" || kind == "mixed") f += random_beltrami(N, lambda_sq, 1, seed + 1);
  if (kind == "random" || kind == "mixed") {
    SpectralField g = random_solenoidal(N, seed, RandomBand{box});
    f += g * (amp / l2_norm(g));
  }
  if (kind != "beltrami" && kind != "random" && kind != "mixed")
    throw Error(ErrorKind::Schema, cfg.source + ": data must be beltrami, random or mixed");
  return f;
}

int run_solve(const std::string& config_path, const fs::path& out) {
  const io::Config cfg = io::parse_config(config_path);
  io::validate(cfg, io::schema_for("solve"));
  const SolverConfig sc = io::solver_config(cfg);
  const SpectralField u0 = initial_data(cfg);
  validate(sc, u0.grid_size());
  const Trajectory tr = solve(u0, sc);
  ensure_dir(out);
  const std::uint64_t hash = cfg.hash();
  io::write_diagnostics_csv(out / "diagnostics.csv", io::diagnostics_of(tr), hash);
  const long every = cfg.get_int("snapshot_every", 0);
  std::string manifest = io::csv_comment(hash) + "\ndiagnostics.csv\n";
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const bool last = k + 1 == tr.size();
    if (!last && (every <= 0 || k % static_cast<std::size_t>(every) != 0)) continue;
    char name[64];
    std::snprintf(name, sizeof name, "state_%05zu.nslb", k);
    SpectralField f = tr.field(k);
    f.set_label("t=" + io::format_double(tr.time(k)));
    io::write_snapshot(f, out / name);
    manifest += std::string(name) + "\n";
  }
  std::FILE* m = std::fopen((out / "manifest.txt").c_str(), "w");
  if (!m) throw Error(ErrorKind::Io, "cannot write manifest");
  std::fputs(manifest.c_str(), m);
  std::fclose(m);
  const EnergyReport er = energy_report(tr);
  std::printf("solved to t=%s in %zu records; energy identity residual %s\n",
              io::format_double(tr.times().back()).c_str(), tr.size(),
              io::format_double(er.max_identity_residual).c_str());
  return kOk;
}

int run_picard(const std::string& config_path, const fs::path& out) {
  const io::Config cfg = io::parse_config(config_path);
  io::validate(cfg, io::schema_for("picard"));
  const int N = static_cast<int>(cfg.get_int("N", 16));
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
  const int lambda_sq = static_cast<int>(cfg.get_int("lambda_sq", 1));
  const int box = static_cast<int>(cfg.get_int("data_box", 2));
  const double M0 = cfg.get_double("M0", 1.0);
  const double lambda = std::sqrt(static_cast<double>(lambda_sq));
  const double T1 = cfg.has("T1") ? cfg.get_double("T1", 0.0)
                                  : t1_horizon(M0, cfg.get_double("epsilon", 0.05), lambda, cfg.get_double("b", 0.5),
                                               cfg.get_double("C", 0.1));
  const int steps = static_cast<int>(cfg.get_int("steps", 20));

  SpectralField u2p(N, 3);
  if (lambda_sq > 0) {
    u2p = random_beltrami(N, lambda_sq, 1, seed + 1);
    u2p *= M0 / bmo_minus1_norm(u2p, CylinderGrid::make(N)).value;
  }
  SpectralField u01 = random_solenoidal(N, seed, RandomBand{box});
  u01 *= cfg.get_double("amplitude", 1e-3) / l2_norm(u01);
  std::vector<double> times;
  for (int k = 0; k <= steps; ++k) times.push_back(T1 * k / steps);
  const Trajectory u = heat_extension(u2p, times);

  ensure_dir(out);
  const std::uint64_t hash = cfg.hash();
  io::CsvWriter w(out / "picard.csv", hash, {"iterate", "difference", "ratio"});
  int code = kOk;
  try {
    auto [v, rep] = picard_solve(u01, u, T1, cfg.get_double("tol", 1e-8), static_cast<int>(cfg.get_int("max_iter", 50)));
    for (std::size_t k = 0; k < rep.differences.size(); ++k)
      w.row({std::to_string(k + 1), io::format_double(rep.differences[k]),
             k == 0 ? "" : io::format_double(rep.ratios[k - 1])});
    io::write_snapshot(v.fields().back(), out / "v_final.nslb");
    std::printf("T1=%s iterates=%d converged=%s\n", io::format_double(T1).c_str(), rep.iterates,
                rep.converged ? "yes" : "no");
    if (!rep.converged) code = kVerdictFail;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoConvergence) throw;
    std::printf("no convergence: %s\n", e.what());
    code = kVerdictFail;
  }
  w.close();
  return code;
}

// ---- verify ---------------------------------------------------------------

int run_verify(const std::string& input, std::optional<double> lambda) {
  const SpectralField f = io::read_snapshot(input);
  struct Row {
    std::string name;
    double measured, bound;
  };
  std::vector<Row> rows;
  const double scale = std::max(l2_norm(f), 1e-300);
  rows.push_back({"mean_zero", f.mean_magnitude() / scale, 1e-12});
  if (f.components() == 3) rows.push_back({"divergence_free", divergence_residual(f), 1e-11});
  if (f.is_real()) rows.push_back({"hermitian", f.hermitian_defect() / scale, 1e-13});
  if (lambda && f.components() == 3) {
    const double sup = std::max(sup_norm(f), 1e-300);
    rows.push_back({"curl_eigen", sup_norm(curl(f) - f * *lambda) / (std::abs(*lambda) * sup), 1e-12});
  }
  bool ok = true;
  for (const auto& r : rows) {
    const bool pass = r.measured <= r.bound;
    ok = ok && pass;
    std::printf("%-6s %-16s measured=%-14s bound=%s\n", pass ? "PASS" : "FAIL", r.name.c_str(),
                io::format_double(r.measured).c_str(), io::format_double(r.bound).c_str());
  }
  return ok ? kOk : kVerdictFail;
}

// ---- experiment -----------------------------------------------------------

int run_experiment_cmd(const std::string& scenario_name, const std::string& config_path, const fs::path& out) {
  const Scenario sc = scenario_from_string(scenario_name);
  const io::Config cfg = io::parse_config(config_path);
  const ExperimentConfig ec = io::experiment_config(cfg, sc);
  const std::uint64_t hash = cfg.hash();
  try {
    ExperimentReport rep = run_experiment(ec);
    io::write_report(rep, out, hash);
    print_rows(rep);
    std::printf("verdict: %s (%s)\n", rep.passed() ? "PASS" : "FAIL", out.c_str());
    return rep.passed() ? kOk : kVerdictFail;
  } catch (const ConditionViolation& e) {
    ExperimentReport rep = e.report();
    io::write_report(rep, out, hash);
    print_rows(rep);
    std::printf("verdict: FAIL, %s\n", e.what());
    return kVerdictFail;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nslab: periodic 3-D Navier-Stokes laboratory (spectral fields, BMO-type norms, solvers, experiments).\n"
               "Exit codes: 0 success, 1 verdict failed, 2 usage or config error, 3 runtime error.\n"
               "NSLB_THREADS caps the number of worker threads."};
  app.require_subcommand(1);

  GenerateOpts gen;
  auto* g = app.add_subcommand("generate", "construct initial data and write a snapshot");
  g->add_option("--kind", gen.kind, "beltrami | random | potential | corollary")
      ->check(CLI::IsMember({"beltrami", "random", "potential", "corollary"}))
      ->capture_default_str();
  g->add_option("-N,--grid", gen.N, "grid size")->capture_default_str();
  g->add_option("--lambda-sq", gen.lambda_sq, "shell |n|^2")->capture_default_str();
  g->add_option("--sign", gen.sign, "helicity sign (+1 or -1)")->check(CLI::IsMember({-1, 1}))->capture_default_str();
  g->add_option("--seed", gen.seed, "random seed")->capture_default_str();
  g->add_option("--box", gen.box, "random band |n_i| <= box")->capture_default_str();
  g->add_option("--amplitude", gen.amplitude, "rescale to this l2 norm (0 keeps the raw draw)")->capture_default_str();
  g->add_option("--shells", gen.shells, "corollary shells, lambda_sq:amplitude list")->capture_default_str();
  g->add_option("--b", gen.b, "exponent b in (0, 1)")->capture_default_str();
  g->add_option("--epsilon", gen.epsilon, "radius spread smallness")->capture_default_str();
  g->add_option("--eps1", gen.eps1, "BMO^-1 size of the u02 part")->capture_default_str();
  g->add_option("--eps-threshold", gen.eps_threshold, "admissible epsilon(b, M0)")->capture_default_str();
  g->add_option("-o,--out", gen.out, "snapshot path")->required();
  g->add_option("--report", gen.report, "admissibility CSV (corollary; default <out>.admissibility.csv)");

  NormOpts nrm;
  auto* n = app.add_subcommand("norm", "evaluate a norm of a snapshot; prints one CSV row");
  n->add_option("-i,--input", nrm.input, "snapshot path")->required()->check(CLI::ExistingFile);
  n->add_option("--norm", nrm.norm, "bmo_minus1 | bmo | bmo_minus2 | bmo_minus1_div | besov_inf | besov_2 | l2 | sup")
      ->capture_default_str();
  n->add_option("--s", nrm.s, "Besov smoothness")->capture_default_str();
  n->add_option("--stride", nrm.stride, "center stride")->capture_default_str();
  n->add_option("--radii-per-octave", nrm.radii_per_octave, "radii per octave")->capture_default_str();
  n->add_option("--nodes-per-level", nrm.nodes_per_level, "time nodes per dyadic level (>= 4)")->capture_default_str();
  n->add_option("--r-min", nrm.r_min, "smallest radius (0: grid spacing)")->capture_default_str();
  n->add_option("--r-max", nrm.r_max, "largest radius (0: pi)")->capture_default_str();
  n->add_option("-o,--out", nrm.out, "CSV path (default stdout)");

  std::string config, out = "out", scenario, verify_input;
  std::optional<double> verify_lambda;
  auto* s = app.add_subcommand("solve", "integrate the Navier-Stokes system from a config file");
  s->add_option("-c,--config", config, "config file\n" + io::describe(io::schema_for("solve")))->required();
  s->add_option("-o,--out", out, "output directory")->capture_default_str();

  auto* p = app.add_subcommand("picard", "Picard iteration of the perturbation system from a config file");
  p->add_option("-c,--config", config, "config file\n" + io::describe(io::schema_for("picard")))->required();
  p->add_option("-o,--out", out, "output directory")->capture_default_str();

  auto* v = app.add_subcommand("verify", "check the structural invariants of a snapshot");
  v->add_option("-i,--input", verify_input, "snapshot path")->required()->check(CLI::ExistingFile);
  v->add_option("--lambda", verify_lambda, "also check curl f = lambda f");

  auto* e = app.add_subcommand("experiment", "run a scenario: theorem13 | corollary18 | estimate_suite | beltrami_exactness");
  e->add_option("scenario", scenario, "scenario name")
      ->required()
      ->check(CLI::IsMember({"theorem13", "corollary18", "estimate_suite", "beltrami_exactness"}));
  e->add_option("-c,--config", config,
                "config file; keys:\n" + io::describe(io::schema_for("experiment:theorem13")))
      ->required();
  e->add_option("-o,--out", out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& h) {
    return app.exit(h);
  } catch (const CLI::CallForAllHelp& h) {
    return app.exit(h);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kUsage;
  }

  try {
    if (*g) return run_generate(gen);
    if (*n) return run_norm(nrm);
    if (*s) return run_solve(config, out);
    if (*p) return run_picard(config, out);
    if (*v) return run_verify(verify_input, verify_lambda);
    if (*e) return run_experiment_cmd(scenario, config, out);
  } catch (const Error& err) {
    std::fprintf(stderr, "nslab: %s\n", err.what());
    return exit_code(err);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "nslab: %s\n", err.what());
    return kRuntime;
  }
  return kUsage;
}
