// hitchin_lab: command-line driver for the solvers and sweeps.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hitchin/errors.hpp"
#include "hitchin/fiducial.hpp"
#include "hitchin/gauge.hpp"
#include "hitchin/gluing.hpp"
#include "hitchin/linearized.hpp"
#include "hitchin/painleve.hpp"
#include "hitchin/report.hpp"
#include "hitchin/topology.hpp"

namespace fs = std::filesystem;
using hitchin::report::Json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::vector<double> t;
  int grid = 0;
  int lmax = 0;
  double tol = 0;
  std::string out = "out";
  int jobs = 1;
  std::string format = "json";
  std::vector<int> gamma;

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["t"] = t;
    j["grid"] = grid;
    j["lmax"] = lmax;
    j["tol"] = tol;
    j["out"] = out;
    j["jobs"] = jobs;
    j["format"] = format;
    j["gamma"] = gamma;
    return j;
  }
};

// Per-command defaults.
RunConfig defaults(const std::string& cmd) {
  RunConfig c;
  c.command = cmd;
  c.tol = 1e-10;
  if (cmd == "solve-psi") {
    c.grid = 3000;
  } else if (cmd == "fiducial") {
    c.t = {1, 2, 4, 8};
    c.grid = 400;
  } else if (cmd == "spectrum") {
    c.t = {1, 2, 4, 8};
    c.grid = 2000;
    c.lmax = 32;
  } else if (cmd == "indicial") {
    c.lmax = 10;
  } else if (cmd == "glue") {
    c.t = {2, 4, 8};
    c.grid = 2000;
    c.tol = 1e-11;
  } else if (cmd == "torus") {
    c.gamma = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  }
  return c;
}

struct Flags {
  std::vector<double> t;
  int grid = 0, lmax = 0, jobs = 1;
  double tol = 0;
  std::string out, format, config;
  std::vector<int> gamma;
  CLI::Option *o_t{}, *o_grid{}, *o_lmax{}, *o_tol{}, *o_out{}, *o_jobs{}, *o_format{}, *o_gamma{}, *o_config{};
};

RunConfig resolve(const std::string& cmd, const Flags& f) {
  RunConfig c = defaults(cmd);
  if (f.o_config->count()) {
    std::ifstream in(f.config);
    if (!in) throw UsageError("cannot read config file " + f.config);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
      throw UsageError(std::string("malformed config file: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    try {
      if (j.contains("t")) c.t = j["t"].is_array() ? j["t"].get<std::vector<double>>() : std::vector<double>{j["t"].get<double>()};
      if (j.contains("grid")) c.grid = j["grid"].get<int>();
      if (j.contains("lmax")) c.lmax = j["lmax"].get<int>();
      if (j.contains("tol")) c.tol = j["tol"].get<double>();
      if (j.contains("out")) c.out = j["out"].get<std::string>();
      if (j.contains("jobs")) c.jobs = j["jobs"].get<int>();
      if (j.contains("format")) c.format = j["format"].get<std::string>();
      if (j.contains("gamma"))
        c.gamma = j["gamma"].is_array() ? j["gamma"].get<std::vector<int>>() : std::vector<int>{j["gamma"].get<int>()};
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("bad config value: ") + e.what());
    }
  }
  // Flags win over the config file.
  if (f.o_t->count()) c.t = f.t;
  if (f.o_grid->count()) c.grid = f.grid;
  if (f.o_lmax->count()) c.lmax = f.lmax;
  if (f.o_tol->count()) c.tol = f.tol;
  if (f.o_out->count()) c.out = f.out;
  if (f.o_jobs->count()) c.jobs = f.jobs;
  if (f.o_format->count()) c.format = f.format;
  if (f.o_gamma->count()) c.gamma = f.gamma;
  return c;
}

void validate(const RunConfig& c) {
  if (!(c.tol > 0)) throw UsageError("tolerance must be positive");
  for (double t : c.t)
    if (!(t > 0)) throw UsageError("t values must be positive");
  if (c.jobs < 1) throw UsageError("--jobs must be at least 1");
  if (c.format != "json" && c.format != "csv") throw UsageError("--format must be csv or json");
  if ((c.command == "fiducial" || c.command == "spectrum" || c.command == "glue") && c.t.empty())
    throw UsageError("at least one t value is required");
  if (c.command != "indicial" && c.command != "torus" && c.grid < 16) throw UsageError("grid size must be at least 16");
  if (c.command == "spectrum" && c.lmax < 1) throw UsageError("l_max must be at least 1");
  if (c.command == "indicial" && c.lmax < 0) throw UsageError("l_max must be nonnegative");
  if (c.command == "torus") {
    if (c.gamma.empty()) throw UsageError("at least one genus is required");
    for (int g : c.gamma)
      if (g < 2) throw UsageError("genus must be at least 2");
  }
}

fs::path prepare_out(const std::string& out) {
  const fs::path p(out);
  std::error_code ec;
  if (fs::is_directory(p, ec)) return p;
  if (fs::exists(p, ec)) throw UsageError("output path exists and is not a directory: " + out);
  const fs::path parent = p.has_parent_path() ? p.parent_path() : fs::path(".");
  if (!fs::is_directory(parent, ec)) throw UsageError("parent of output directory does not exist: " + parent.string());
  if (!fs::create_directory(p, ec) && ec) throw UsageError("cannot create output directory: " + ec.message());
  return p;
}

template <typename F>
void parallel_for(std::size_t n, int jobs, F&& body) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t k = 0; k < n; ++k) body(k);
    return;
  }
  std::vector<std::future<void>> pool;
  const std::size_t workers = std::min<std::size_t>(jobs, n);
  for (std::size_t w = 0; w < workers; ++w)
    pool.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t k = w; k < n; k += workers) body(k);
    }));
  for (auto& f : pool) f.get();
}

std::string tag(double t) {
  std::ostringstream s;
  s << t;
  return s.str();
}

hitchin::painleve::PsiProfile solve_profile(double tol, int nodes) {
  hitchin::painleve::SolveOptions o;
  o.tol = tol;
  o.nodes_per_side = nodes;
  return hitchin::painleve::solve_connection(o);
}

Json profile_json(const hitchin::painleve::PsiProfile& p) {
  Json j;
  j["a0"] = p.a0;
  j["lambda"] = p.lambda;
  j["residual"] = p.residual_max;
  j["mismatch"] = p.mismatch;
  j["newton_iterations"] = p.newton_iterations;
  return j;
}

// ---- commands ---------------------------------------------------------------

void cmd_solve_psi(const RunConfig& c, const fs::path& dir) {
  const auto p = solve_profile(c.tol, c.grid);
  std::ostringstream csv;
  hitchin::painleve::write_csv(p, csv);
  hitchin::report::write_text(dir / "psi.csv", csv.str());

  Json j;
  j["config"] = c.to_json();
  j["a0"] = p.a0;
  j["lambda"] = p.lambda;
  j["residual"] = p.residual_max;
  j["ode_residual"] = hitchin::painleve::ode_residual(p);
  j["mismatch"] = p.mismatch;
  j["newton_iterations"] = p.newton_iterations;
  j["rho_min"] = p.rho_min();
  j["rho_max"] = p.rho_max();
  j["eta_at_rho_max"] = hitchin::painleve::eta(p, p.rho_max());
  j["nodes"] = p.rho.size();
  hitchin::report::write_text(dir / "summary.json", hitchin::report::dump(j));
}

void cmd_fiducial(const RunConfig& c, const fs::path& dir) {
  const auto p = solve_profile(1e-10, 3000);
  std::vector<Json> rows(c.t.size());
  std::vector<std::string> csvs(c.t.size());
  parallel_for(c.t.size(), c.jobs, [&](std::size_t k) {
    const double t = c.t[k];
    const auto fam = hitchin::build_family(t, p, hitchin::default_fiducial_grid(c.grid));
    const auto pair = hitchin::fiducial_pair(fam);
    const auto res = hitchin::hitchin_residual(pair, t, 1e-3);
    const auto b = hitchin::verify_f_bounds(fam);
    Json j;
    j["t"] = t;
    j["hitchin_residual"] = res.max();
    j["curvature_residual"] = res.combined_max;
    j["holomorphic_residual"] = res.holomorphic_max;
    j["reduced_residual"] = hitchin::reduced_residual(fam);
    j["painleve_residual"] = hitchin::painleve_residual(fam);
    j["determinant_defect"] = hitchin::determinant_defect(pair);
    j["sup_f_over_r"] = b.sup_f_over_r;
    j["sup_f_over_r2"] = b.sup_f_over_r2;
    j["normalized_f_over_r"] = b.normalized_r;
    j["normalized_f_over_r2"] = b.normalized_r2;
    j["f_min"] = b.f_min;
    j["f_max"] = b.f_max;
    j["f_in_range"] = b.f_in_range;
    j["f_monotone"] = b.f_monotone;
    j["phi_sup"] = hitchin::phi_sup_bound(fam);
    j["orbit_discrepancy"] = hitchin::verify_orbit_finite_t(fam);
    j["b0"] = hitchin::painleve::small_r_constant(p, t);
    rows[k] = j;
    if (c.format == "csv") {
      std::ostringstream s;
      hitchin::write_family_csv(fam, s);
      csvs[k] = s.str();
    }
  });
  Json j;
  j["config"] = c.to_json();
  j["profile"] = profile_json(p);
  j["limit_orbit_discrepancy"] = hitchin::verify_limit_orbit(hitchin::default_fiducial_grid(c.grid));
  j["families"] = rows;
  hitchin::report::write_text(dir / "fiducial.json", hitchin::report::dump(j));
  if (c.format == "csv")
    for (std::size_t k = 0; k < c.t.size(); ++k)
      hitchin::report::write_text(dir / ("fiducial_t" + tag(c.t[k]) + ".csv"), csvs[k]);
}

Json indicial_json(int lmax) {
  const auto roots = hitchin::indicial_roots(-lmax, lmax);
  Json j;
  std::vector<std::string> names;
  std::vector<double> values;
  std::vector<int> mult;
  for (const auto& r : roots) {
    names.push_back(r.nu.str());
    values.push_back(r.nu.value());
    mult.push_back(r.multiplicity);
  }
  // Compare against {m/2 : |m| <= 2 lmax + 1}.
  bool grid = static_cast<int>(roots.size()) == 2 * (2 * lmax + 1) + 1;
  for (std::size_t i = 0; grid && i < roots.size(); ++i) grid = roots[i].nu.twice == static_cast<int>(i) - (2 * lmax + 1);
  std::vector<std::string> restricted;
  for (const auto& r : hitchin::restricted_indicial_roots(lmax)) restricted.push_back(r.str());
  j["l_max"] = lmax;
  j["roots"] = names;
  j["values"] = values;
  j["multiplicity"] = mult;
  j["equals_half_integer_grid"] = grid;
  j["restricted"] = restricted;
  return j;
}

void cmd_spectrum(const RunConfig& c, const fs::path& dir) {
  const auto p = solve_profile(1e-10, 3000);
  std::vector<hitchin::SpectralReport> reps(c.t.size());
  // Modes are dispatched to the pool inside each t; t values run in order.
  for (std::size_t k = 0; k < c.t.size(); ++k) reps[k] = hitchin::green_norms(c.t[k], c.lmax, p, c.grid, c.jobs);
  std::vector<Json> rows;
  std::ostringstream csv;
  csv << "t,block,l,lambda_min,g_l2,g_h2,floor\n";
  double l2_lo = INFINITY, l2_hi = 0, h2_lo = INFINITY, h2_hi = 0;
  for (const auto& r : reps) {
    Json j;
    j["t"] = r.t;
    std::vector<int> ls;
    std::vector<std::string> blocks;
    std::vector<double> lam, gh2;
    for (const auto& m : r.modes) {
      const char* b = m.kind == hitchin::BlockKind::Scalar ? "scalar" : "coupled";
      ls.push_back(m.ell);
      blocks.push_back(b);
      lam.push_back(m.lambda_min);
      gh2.push_back(m.g_h2);
      csv << hitchin::report::fmt17(r.t) << ',' << b << ',' << m.ell << ',' << hitchin::report::fmt17(m.lambda_min)
          << ',' << hitchin::report::fmt17(m.g_l2) << ',' << hitchin::report::fmt17(m.g_h2) << ','
          << hitchin::report::fmt17(m.floor) << '\n';
    }
    j["l"] = ls;
    j["block"] = blocks;
    j["lambda_min"] = lam;
    j["g_h2_by_mode"] = gh2;
    j["g_norm_l2"] = r.g_norm_l2;
    j["g_norm_h2_surrogate"] = r.g_norm_h2;
    j["g_norm_h2_over_t2"] = r.g_norm_h2 / (r.t * r.t);
    j["kappa"] = r.kappa;
    j["tail_ok"] = r.tail_ok;
    rows.push_back(j);
    l2_lo = std::min(l2_lo, r.g_norm_l2);
    l2_hi = std::max(l2_hi, r.g_norm_l2);
    h2_lo = std::min(h2_lo, r.g_norm_h2 / (r.t * r.t));
    h2_hi = std::max(h2_hi, r.g_norm_h2 / (r.t * r.t));
  }
  Json j;
  j["config"] = c.to_json();
  j["spectra"] = rows;
  j["l2_variation"] = l2_hi / l2_lo;
  j["h2_over_t2_variation"] = h2_hi / h2_lo;
  j["indicial"] = indicial_json(std::min(c.lmax, 10))["roots"];
  hitchin::report::write_text(dir / "spectrum.json", hitchin::report::dump(j));
  if (c.format == "csv") hitchin::report::write_text(dir / "spectrum.csv", csv.str());
}

void cmd_indicial(const RunConfig& c, const fs::path& dir) {
  Json j;
  j["config"] = c.to_json();
  const Json roots = indicial_json(c.lmax);
  for (auto it = roots.begin(); it != roots.end(); ++it) j[it.key()] = it.value();
  hitchin::report::write_text(dir / "indicial.json", hitchin::report::dump(j));
}

void cmd_glue(const RunConfig& c, const fs::path& dir) {
  const auto p = solve_profile(1e-10, 3000);
  struct Run {
    hitchin::CorrectionReport rep;
    hitchin::NewtonResult res;
    std::string profile_csv;
  };
  std::vector<Run> runs(c.t.size());
  hitchin::NewtonOptions opt;
  opt.tol = c.tol;
  parallel_for(c.t.size(), c.jobs, [&](std::size_t k) {
    const auto s = hitchin::build_glued(c.t[k], p, {}, c.grid);
    runs[k].res = hitchin::newton_correct(s, opt);
    runs[k].rep = hitchin::corrected_solution_check(s, runs[k].res);
    if (c.format == "csv") {
      std::ostringstream o;
      o << "r,h_chi,u,residual\n";
      for (int i = 0; i <= s.mesh.intervals(); ++i)
        o << hitchin::report::fmt17(s.mesh.r[i]) << ',' << hitchin::report::fmt17(s.h_chi[i]) << ','
          << hitchin::report::fmt17(runs[k].res.u[i]) << ',' << hitchin::report::fmt17(s.residual[i]) << '\n';
      runs[k].profile_csv = o.str();
    }
  });
  const std::vector<double> sweep_t{2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto sweep = hitchin::approx_error_sweep(sweep_t, p, {}, c.grid, c.jobs);

  std::ostringstream log;
  log << "t,iteration,residual_sup,residual_l2,step_sup\n";
  std::vector<Json> rows;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& r = runs[k].rep;
    Json j;
    j["t"] = r.t;
    j["residual_pre"] = r.residual_pre;
    j["residual_post"] = r.residual_post;
    j["residual_post_l2"] = r.residual_post_l2;
    j["smooth_residual"] = r.smooth_residual;
    j["newton_iters"] = r.newton_iterations;
    j["sup_u"] = r.sup_u;
    j["interior_deviation"] = r.interior_deviation;
    j["g_norm"] = r.g_norm;
    j["apriori_bound"] = r.apriori_bound;
    j["quadratic_constant"] = r.quadratic_constant;
    j["quadratic_pairs"] = r.quadratic_pairs;
    rows.push_back(j);
    for (const auto& h : runs[k].res.history)
      log << hitchin::report::fmt17(r.t) << ',' << h.iteration << ',' << hitchin::report::fmt17(h.residual_sup) << ','
          << hitchin::report::fmt17(h.residual_l2) << ',' << hitchin::report::fmt17(h.step_sup) << '\n';
  }
  Json fit;
  fit["t"] = sweep.t;
  fit["residual_l2"] = sweep.l2;
  fit["residual_sup"] = sweep.sup;
  fit["delta"] = sweep.delta;
  fit["log_c"] = sweep.log_c;
  fit["r2"] = sweep.r2;
  Json j;
  j["config"] = c.to_json();
  j["runs"] = rows;
  j["delta_fit"] = fit;
  hitchin::report::write_text(dir / "glue.json", hitchin::report::dump(j));
  hitchin::report::write_text(dir / "glue_iterations.csv", log.str());
  if (c.format == "csv")
    for (std::size_t k = 0; k < runs.size(); ++k)
      hitchin::report::write_text(dir / ("glue_t" + tag(c.t[k]) + ".csv"), runs[k].profile_csv);
}

void cmd_torus(const RunConfig& c, const fs::path& dir) {
  std::vector<Json> rows;
  for (int g : c.gamma) {
    const int k = 4 * g - 4;
    const auto d = hitchin::twisted_cohomology_dims(hitchin::build_complex(g, k));
    Json j;
    j["gamma"] = g;
    j["k"] = k;
    j["h0"] = d.h0;
    j["h1"] = d.h1;
    j["dim"] = d.h1;
    j["expected"] = 6 * g - 6;
    rows.push_back(j);
  }
  Json j;
  j["config"] = c.to_json();
  j["results"] = rows;
  hitchin::report::write_text(dir / "torus.json", hitchin::report::dump(j));
  if (c.format == "csv") {
    std::ostringstream s;
    hitchin::write_torus_csv(c.gamma, s);
    hitchin::report::write_text(dir / "torus.csv", s.str());
  }
}

void error_record(const std::string& kind, const std::string& cmd, const std::string& msg,
                  const std::vector<double>& history = {}) {
  Json j;
  j["error"] = kind;
  j["command"] = cmd;
  j["message"] = msg;
  if (!history.empty()) j["history"] = history;
  std::cerr << hitchin::report::dump(j, -1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the fiducial solutions and gluing of Hitchin's equations on the disk"};
  app.require_subcommand(1, 1);
  Flags f;
  const std::vector<std::string> names{"solve-psi", "fiducial", "spectrum", "indicial", "glue", "torus"};
  const std::vector<std::string> about{
      "solve the Painleve connection problem; writes psi.csv and summary.json",
      "build and verify the fiducial family; writes fiducial.json",
      "Green-operator norms of the linearized blocks; writes spectrum.json",
      "indicial roots of the conic Laplacian; writes indicial.json",
      "glued approximate solution and Newton correction; writes glue.json and glue_iterations.csv",
      "twisted cohomology dimension count; writes torus.json"};
  for (std::size_t i = 0; i < names.size(); ++i) app.add_subcommand(names[i], about[i]);

  f.o_t = app.add_option("--t", f.t, "t value (repeatable)")->take_all();
  f.o_grid = app.add_option("--grid", f.grid, "grid size");
  f.o_lmax = app.add_option("--lmax", f.lmax, "largest angular mode");
  f.o_tol = app.add_option("--tol", f.tol, "tolerance");
  f.o_out = app.add_option("--out", f.out, "output directory (default: out)");
  f.o_jobs = app.add_option("--jobs", f.jobs, "worker threads");
  f.o_format = app.add_option("--format", f.format, "csv or json");
  f.o_gamma = app.add_option("--gamma", f.gamma, "genus (repeatable)")->take_all();
  f.o_config = app.add_option("--config", f.config, "JSON config file; flags take precedence");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  fs::path dir;
  try {
    cfg = resolve(cmd, f);
    validate(cfg);
    dir = prepare_out(cfg.out);
  } catch (const UsageError& e) {
    error_record("usage", cmd, e.what());
    return 2;
  }

  try {
    if (cmd == "solve-psi") cmd_solve_psi(cfg, dir);
    else if (cmd == "fiducial") cmd_fiducial(cfg, dir);
    else if (cmd == "spectrum") cmd_spectrum(cfg, dir);
    else if (cmd == "indicial") cmd_indicial(cfg, dir);
    else if (cmd == "glue") cmd_glue(cfg, dir);
    else if (cmd == "torus") cmd_torus(cfg, dir);
  } catch (const hitchin::NumericalFailure& e) {
    error_record("numerical_failure", cmd, e.what(), e.history);
    return 1;
  } catch (const std::invalid_argument& e) {
    error_record("usage", cmd, e.what());
    return 2;
  } catch (const std::exception& e) {
    error_record("failure", cmd, e.what());
    return 1;
  }
  return 0;
}
