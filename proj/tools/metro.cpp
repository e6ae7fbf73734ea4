// metro: regenerate the figure, table and scalar data as CSV (+ optional SVG)
// and evaluate single probes from a JSON config.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "twomode/error.hpp"
#include "twomode/experiments.hpp"
#include "twomode/probe.hpp"
#include "twomode/report.hpp"

namespace fs = std::filesystem;
using namespace twomode;
using report::CsvTable;
using report::format_number;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;

struct Options {
  int nmin = 8;
  int nmax = 160;
  int step = 4;
  std::string out = "out";
  double tol = kDefaultResidualTol;
  int threads = 1;
  bool svg = false;
  // fig4
  int opt_step = 8;
  bool trace = false;
  // probe
  std::string config;
};

std::string num(double x) { return format_number(x); }
std::string num(std::optional<double> x) { return format_number(x); }
std::string integer(long long x) { return std::to_string(x); }

class Run {
 public:
  Run(std::string command, const Options& o) : o_(o), start_(std::chrono::steady_clock::now()) {
    manifest_.command = std::move(command);
    manifest_.parameters = {{"nmin", o.nmin}, {"nmax", o.nmax}, {"step", o.step}, {"out", o.out}, {"svg", o.svg}};
    manifest_.tolerances = {{"eigen_residual", o.tol}};
  }

  int threads() const { return resolve_threads(o_.threads); }
  nlohmann::json& parameters() { return manifest_.parameters; }
  nlohmann::json& tolerances() { return manifest_.tolerances; }

  fs::path dir() {
    fs::create_directories(o_.out);
    return o_.out;
  }

  void emit(const CsvTable& t, const std::string& name) {
    t.write(dir() / name);
    manifest_.outputs.push_back(name);
  }
  void emit(const report::SvgPlot& p, const std::string& name) {
    p.write(dir() / name);
    manifest_.outputs.push_back(name);
  }
  void emit_json(const nlohmann::json& j, const std::string& name) {
    std::ofstream f(dir() / name);
    f << j.dump(2) << '\n';
    if (!f) throw Error("write failed: " + name);
    manifest_.outputs.push_back(name);
  }

  // Writes the manifest; returns `code`.
  int finish(int code, const std::string& error = {}) {
    manifest_.exit_code = code;
    manifest_.error = error;
    manifest_.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    try {
      manifest_.write(dir() / (manifest_.command + ".manifest.json"));
    } catch (const std::exception& e) {
      std::cerr << "metro: could not write manifest: " << e.what() << '\n';
      if (code == 0) code = 1;
    }
    return code;
  }

 private:
  const Options& o_;
  report::RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

void cmd_fig1(Run& run, const Options& o) {
  const auto d = fig1(o.nmax, o.tol);
  run.parameters()["N"] = o.nmax;
  CsvTable ev("fig1_eigenvalues", 1, {"n", "eigenvalue"});
  for (size_t i = 0; i < d.eigenvalues.size(); ++i) ev.add_row({integer(i + 1), num(d.eigenvalues[i])});
  run.emit(ev, "fig1_eigenvalues.csv");
  CsvTable gaps("fig1_gaps", 1, {"n", "intrapair", "interpair"});
  for (const auto& g : d.gaps) gaps.add_row({integer(g.n), num(g.intrapair), num(g.interpair)});
  run.emit(gaps, "fig1_gaps.csv");
  if (o.svg) {
    report::SvgPlot p{"Pair-tunnelling spectrum, N=" + std::to_string(d.N), "n", "eigenvalue"};
    report::Series s{"E_n"};
    for (size_t i = 0; i < d.eigenvalues.size(); ++i) {
      s.x.push_back(i + 1.0);
      s.y.push_back(d.eigenvalues[i]);
    }
    p.series.push_back(s);
    run.emit(p, "fig1.svg");
  }
}

void cmd_fig2(Run& run, const Options& o) {
  auto ns = SweepRange{o.nmin, o.nmax, o.step}.values();
  for (int n : ns)
    if (n < 4) throw DomainError("fig2 needs N >= 4, got N=" + std::to_string(n));
  const bool has4 = std::find(ns.begin(), ns.end(), 4) != ns.end();
  if (!has4) ns.push_back(4);
  const auto rows = parallel_map(ns, run.threads(), [&](int n) { return fig2_row(n, o.tol); });
  CsvTable t("fig2_fidelity", 1,
             {"N", "c_tilde", "fid_plus_e1", "fid_plus_e2", "fid_minus_e1", "fid_minus_e2", "best_infidelity", "exact_c"});
  for (const auto& r : rows)
    t.add_row({integer(r.N), num(r.c), num(r.plus_e1), num(r.plus_e2), num(r.minus_e1), num(r.minus_e2),
               num(r.best_infidelity()), integer(r.exact_c)});
  run.emit(t, "fig2_fidelity.csv");
  if (o.svg) {
    report::SvgPlot p{"omega(c) fidelity with the two lowest states", "N", "1 - fidelity"};
    p.log_y = true;
    report::Series a{"omega+ vs E1", {}, {}, "#000000"}, b{"omega+ vs E2", {}, {}, "#cc0000"},
        c{"omega- vs E1", {}, {}, "#0044cc"}, d{"omega- vs E2", {}, {}, "#ee9900"};
    for (const auto& r : rows) {
      for (auto* s : {&a, &b, &c, &d}) s->x.push_back(r.N);
      a.y.push_back(1 - r.plus_e1);
      b.y.push_back(1 - r.plus_e2);
      c.y.push_back(1 - r.minus_e1);
      d.y.push_back(1 - r.minus_e2);
    }
    p.series = {a, b, c, d};
    run.emit(p, "fig2.svg");
  }
}

void cmd_fig3(Run& run, const Options& o) {
  const auto ns = SweepRange{o.nmin, o.nmax, o.step}.values();
  const auto rows = parallel_map(ns, run.threads(), [&](int n) { return fig3_row(n, o.tol); });
  CsvTable t("fig3_infidelity", 1, {"N", "infidelity_plus", "infidelity_minus", "best_infidelity", "best_sign"});
  for (const auto& r : rows)
    t.add_row({integer(r.N), num(r.infidelity_plus), num(r.infidelity_minus), num(r.best_infidelity()),
               std::string(1, r.best_sign())});
  run.emit(t, "fig3_infidelity.csv");
  if (o.svg) {
    report::SvgPlot p{"(|i> +/- |-i>) vs pair ground state", "N", "1 - fidelity"};
    p.log_y = true;
    report::Series plus{"+ better", {}, {}, "#000000"}, minus{"- better", {}, {}, "#cc0000"};
    for (const auto& r : rows) {
      auto& s = r.best_sign() == '+' ? plus : minus;
      s.x.push_back(r.N);
      s.y.push_back(r.best_infidelity());
    }
    p.series = {plus, minus};
    run.emit(p, "fig3.svg");
  }
}

void cmd_fig4(Run& run, const Options& o) {
  if (o.opt_step <= 0) throw DomainError("--opt-step must be positive");
  const auto ns = SweepRange{o.nmin, o.nmax, o.step}.values();
  run.parameters()["opt_step"] = o.opt_step;
  run.parameters()["trace"] = o.trace;
  const auto cfg = fig4_optimizer_config(0.0, 0.0);
  run.tolerances()["optimizer_tol_f"] = cfg.tol_f;
  run.tolerances()["optimizer_tol_x"] = cfg.tol_x;
  run.parameters()["optimizer"] = {{"simplex_scale", cfg.simplex_scale}, {"max_iter", cfg.max_iter},
                                   {"restarts", cfg.restarts},           {"restart_shift", cfg.restart_shift}};
  const auto rows = parallel_map(ns, run.threads(), [&](int n) { return fig4_row(n, n % o.opt_step == 0, o.trace, o.tol); });
  CsvTable t("fig4_infidelity", 1,
             {"N", "lambda0", "zeta0", "infidelity_coherent", "w_tilde", "z_tilde_sq", "infidelity_two_eq", "w0", "z0",
              "infidelity_opt", "opt_iterations", "opt_converged"});
  CsvTable tr("fig4_trace", 1, {"N", "iteration", "w", "z", "log_infidelity"});
  int unconverged = 0;
  for (const auto& r : rows) {
    std::vector<std::string> cells = {integer(r.N),      num(r.lambda0), num(r.zeta0), num(r.infidelity_coherent),
                                      num(r.xi.w),       num(r.xi.z_squared), num(r.infidelity_two_eq)};
    if (r.opt) {
      cells.insert(cells.end(), {num(r.opt->w0), num(r.opt->z0), num(r.opt->infidelity), integer(r.opt->iterations),
                                 integer(r.opt->converged)});
      unconverged += !r.opt->converged;
      for (const auto& p : r.opt->trace) tr.add_row({integer(r.N), integer(p.iteration), num(p.params[0]), num(p.params[1]), num(p.value)});
    } else {
      cells.insert(cells.end(), {"", "", "", "", ""});
    }
    t.add_row(std::move(cells));
  }
  run.emit(t, "fig4_infidelity.csv");
  if (o.trace) run.emit(tr, "fig4_trace.csv");
  if (unconverged) std::cerr << "metro: optimizer did not converge at " << unconverged << " N value(s); see opt_converged\n";
  if (o.svg) {
    report::SvgPlot p{"Weighted-tunnelling ground state: variational infidelity", "N", "1 - fidelity"};
    p.log_y = true;
    report::Series a{"coherent", {}, {}, "#000000"}, b{"two-equation pair state", {}, {}, "#cc0000"},
        c{"optimized pair state", {}, {}, "#0044cc"};
    for (const auto& r : rows) {
      a.x.push_back(r.N);
      a.y.push_back(r.infidelity_coherent);
      b.x.push_back(r.N);
      b.y.push_back(r.infidelity_two_eq);
      if (r.opt) {
        c.x.push_back(r.N);
        c.y.push_back(r.opt->infidelity);
      }
    }
    p.series = {a, b, c};
    run.emit(p, "fig4.svg");
  }
}

void cmd_table1(Run& run, const Options& o, bool sweep_given) {
  const auto ns = sweep_given ? SweepRange{o.nmin, o.nmax, o.step}.values(false) : table1_default_ns();
  const auto rows = parallel_map(ns, run.threads(), [&](int n) { return table1_row(n, o.tol); });
  CsvTable t("table1", 1, {"N", "qfi_over_4N2", "qfi"});
  for (const auto& r : rows) t.add_row({integer(r.N), num(r.normalized), num(r.qfi)});
  run.emit(t, "table1.csv");
  run.parameters()["N_values"] = ns;
}

void cmd_scalars(Run& run, const Options& o) {
  const auto s = headline_scalars(o.nmax, o.tol);
  const auto scan = conjecture_scan(o.nmax);
  run.parameters()["N"] = o.nmax;
  CsvTable t("scalars", 1, {"quantity", "value"});
  auto row = [&](const std::string& k, double v) { t.add_row({k, num(v)}); };
  row("N", s.N);
  row("lambda_min", s.lambda_min);
  row("lambda_max", s.lambda_max);
  row("f_max", s.f_max);
  row("qfi_gap_family", s.gap_family);
  row("qfi_gap_psi4", s.gap_psi4);
  row("nu_ratio", s.nu_ratio);
  row("nu_ratio_lambda_max_sq", s.nu_ratio_lambda_max_sq);
  row("c_tilde", s.consistency.c_tilde);
  row("c_printed", s.consistency.printed_c);
  row("lambda_tilde", s.consistency.lambda_tilde);
  row("lambda_printed", s.consistency.printed_lambda);
  row("lambda_tilde_over_N2", s.consistency.lambda_tilde / (double(s.N) * s.N));
  row("omega_ground_fidelity", s.ground_fidelity);
  row("psi4_variance", s.psi4_variance);
  row("psi4_variance_closed_form", s.psi4_closed_form);
  row("conjecture_c", scan.best_c);
  row("conjecture_residual", scan.best_residual);
  run.emit(t, "scalars.csv");
}

void cmd_probe(Run& run, const Options& o) {
  nlohmann::json config;
  {
    std::ifstream f(o.config);
    if (!f) throw DomainError("cannot read config file '" + o.config + "'");
    try {
      config = nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
  }
  run.parameters()["config"] = o.config;
  const auto report = run_probe(config);
  run.emit_json(report, "probe_report.json");
  std::cout << report.dump(2) << '\n';
}

void add_common(CLI::App* sub, Options& o, bool sweep) {
  if (sweep) {
    sub->add_option("--nmin", o.nmin, "smallest N of the sweep")->capture_default_str();
    sub->add_option("--step", o.step, "N increment of the sweep")->capture_default_str();
  }
  sub->add_option("--nmax", o.nmax, sweep ? "largest N of the sweep" : "particle number N")->capture_default_str();
  sub->add_option("--out", o.out, "output directory")->capture_default_str();
  sub->add_option("--tol", o.tol, "eigen-residual tolerance relative to the spectral radius")->capture_default_str();
  sub->add_option("--threads", o.threads, "worker threads (METRO_THREADS overrides)")->capture_default_str();
  sub->add_flag("--svg", o.svg, "also write an SVG plot");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"metro: two-mode boson metrology data generator"};
  app.set_version_flag("--version", report::tool_version());
  app.require_subcommand(1);

  auto* f1 = app.add_subcommand("fig1", "pair-operator spectrum and pair gaps at N=--nmax");
  add_common(f1, o, false);
  auto* f2 = app.add_subcommand("fig2", "fidelity of omega(+/-) with the two lowest pair eigenstates");
  add_common(f2, o, true);
  auto* f3 = app.add_subcommand("fig3", "infidelity of (|i> +/- |-i>) with the pair ground state");
  add_common(f3, o, true);
  auto* f4 = app.add_subcommand("fig4", "variational infidelities for the weighted-tunnelling ground state");
  add_common(f4, o, true);
  f4->add_option("--opt-step", o.opt_step, "run the optimizer at N divisible by this")->capture_default_str();
  f4->add_flag("--trace", o.trace, "write optimizer traces to fig4_trace.csv");
  auto* t1 = app.add_subcommand("table1", "normalized QFI of the -pair ground state along 2Jx");
  add_common(t1, o, true);
  auto* sc = app.add_subcommand("scalars", "headline scalars at N=--nmax");
  add_common(sc, o, false);
  auto* pr = app.add_subcommand("probe", "evaluate one probe from a JSON config");
  pr->add_option("config", o.config, "JSON config file")->required();
  pr->add_option("--out", o.out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  auto* sub = app.get_subcommands().front();
  Run run(sub->get_name(), o);
  try {
    if (!(o.tol > 0.0)) throw DomainError("--tol must be positive");
    if (o.threads < 1) throw DomainError("--threads must be at least 1");
    run.parameters()["threads"] = run.threads();
    if (sub == f1) cmd_fig1(run, o);
    else if (sub == f2) cmd_fig2(run, o);
    else if (sub == f3) cmd_fig3(run, o);
    else if (sub == f4) cmd_fig4(run, o);
    else if (sub == t1) cmd_table1(run, o, t1->count("--nmin") + t1->count("--nmax") + t1->count("--step") > 0);
    else if (sub == sc) cmd_scalars(run, o);
    else if (sub == pr) cmd_probe(run, o);
    return run.finish(0);
  } catch (const ConvergenceError& e) {
    std::cerr << "metro: no convergence: " << e.what() << '\n';
    return run.finish(kExitConvergence, e.what());
  } catch (const DomainError& e) {
    std::cerr << "metro: invalid input: " << e.what() << '\n';
    return run.finish(kExitValidation, e.what());
  } catch (const std::exception& e) {
    std::cerr << "metro: " << e.what() << '\n';
    return run.finish(1, e.what());
  }
}
