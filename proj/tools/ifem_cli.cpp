// Command-line driver: single runs, convergence sweeps, solution dumps and
// the discrete inertial-identity diagnostic.
//
// Subcommands:
//   run             one scheme at one resolution, prints an error report
//   convergence     scheme x level sweep, CSV output
//   dump-solution   run once and write nodal values as x,y,u rows
//   verify-identity evaluate the inertial interface identity on a trajectory
//
// Exit codes: 0 all runs converged, 2 any run diverged, 1 usage/internal
// error. Flags may also be given through a JSON config file (--config) with
// identical field names; explicit flags override file values.
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ifem/analysis.hpp"
#include "ifem/manufactured.hpp"
#include "ifem/mesh.hpp"
#include "ifem/schemes.hpp"

using namespace ifem;

namespace {

struct CliOptions {
  std::string scheme = "coupled";
  int n = 8;
  std::vector<int> levels = {8, 16, 32};
  std::string dt_rule = "h2";
  double T = 1.0;
  double rho1 = 1.0;
  double rho2 = 1.0;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  std::string history_init = "zero-rate";
  bool swap_roles = false;
  bool lumped_coupled = false;
  std::string out;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string source = "manufactured";
  std::string config_path;
};

// Registers the shared flag set on a subcommand, bound to `opt`.
void add_common_flags(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--config", opt.config_path, "JSON config file; flags override its values");
  cmd->add_option("--scheme", opt.scheme, "coupled|dn|rr|irn|irr");
  cmd->add_option("--n", opt.n, "subdivisions per unit square");
  cmd->add_option("--levels", opt.levels, "refinement levels for sweeps")->delimiter(',');
  cmd->add_option("--dt-rule", opt.dt_rule, "h2 | h | fixed:<value>");
  cmd->add_option("--T", opt.T, "final time");
  cmd->add_option("--rho1", opt.rho1, "density in Omega_1");
  cmd->add_option("--rho2", opt.rho2, "density in Omega_2");
  cmd->add_option("--alpha1", opt.alpha1, "Robin parameter, step 1");
  cmd->add_option("--alpha2", opt.alpha2, "Robin parameter, step 2");
  cmd->add_option("--history-init", opt.history_init, "zero-rate | exact");
  cmd->add_flag("--swap-roles", opt.swap_roles, "mirror the subdomain roles");
  cmd->add_flag("--lumped-coupled", opt.lumped_coupled, "lumped-mass coupled variant");
  cmd->add_option("--out", opt.out, "output path (default stdout)");
  cmd->add_option("--jobs", opt.jobs, "max concurrent sweep runs");
  cmd->add_option("--source", opt.source, "manufactured | zero");
}

// Applies JSON config values for every field whose flag was not given
// explicitly on the command line.
void apply_config_file(const CLI::App* cmd, CliOptions& opt) {
  if (opt.config_path.empty()) return;
  std::ifstream in(opt.config_path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + opt.config_path);
  nlohmann::json j;
  in >> j;

  const auto unset = [&](const std::string& flag) { return cmd->count(flag) == 0; };
  if (j.contains("scheme") && unset("--scheme")) opt.scheme = j["scheme"];
  if (j.contains("n") && unset("--n")) opt.n = j["n"];
  if (j.contains("levels") && unset("--levels")) opt.levels = j["levels"].get<std::vector<int>>();
  if (j.contains("dt-rule") && unset("--dt-rule")) opt.dt_rule = j["dt-rule"];
  if (j.contains("T") && unset("--T")) opt.T = j["T"];
  if (j.contains("rho1") && unset("--rho1")) opt.rho1 = j["rho1"];
  if (j.contains("rho2") && unset("--rho2")) opt.rho2 = j["rho2"];
  if (j.contains("alpha1") && unset("--alpha1")) opt.alpha1 = j["alpha1"];
  if (j.contains("alpha2") && unset("--alpha2")) opt.alpha2 = j["alpha2"];
  if (j.contains("history-init") && unset("--history-init")) opt.history_init = j["history-init"];
  if (j.contains("swap-roles") && unset("--swap-roles")) opt.swap_roles = j["swap-roles"];
  if (j.contains("lumped-coupled") && unset("--lumped-coupled"))
    opt.lumped_coupled = j["lumped-coupled"];
  if (j.contains("out") && unset("--out")) opt.out = j["out"];
  if (j.contains("jobs") && unset("--jobs")) opt.jobs = j["jobs"];
  if (j.contains("source") && unset("--source")) opt.source = j["source"];
}

double dt_from_rule(const std::string& rule, int n) {
  const double h = 1.0 / n;
  if (rule == "h2") return h * h;
  if (rule == "h") return h;
  if (rule.rfind("fixed:", 0) == 0) {
    const double v = std::stod(rule.substr(6));
    if (v <= 0.0) throw std::invalid_argument("--dt-rule fixed value must be positive");
    return v;
  }
  throw std::invalid_argument("unknown --dt-rule: " + rule);
}

SchemeConfig make_config(const CliOptions& opt, int n) {
  const auto kind = parse_scheme(opt.scheme);
  if (!kind) throw std::invalid_argument("unknown --scheme: " + opt.scheme);
  SchemeConfig cfg;
  cfg.kind = *kind;
  cfg.subdivisions = n;
  cfg.dt = dt_from_rule(opt.dt_rule, n);
  cfg.final_time = opt.T;
  cfg.rho1 = opt.rho1;
  cfg.rho2 = opt.rho2;
  cfg.alpha1 = opt.alpha1;
  cfg.alpha2 = opt.alpha2;
  cfg.swap_roles = opt.swap_roles;
  cfg.lumped_coupled = opt.lumped_coupled;
  if (opt.history_init == "zero-rate") {
    cfg.history_init = HistoryInit::zero_rate;
  } else if (opt.history_init == "exact") {
    cfg.history_init = HistoryInit::exact_history;
  } else {
    throw std::invalid_argument("unknown --history-init: " + opt.history_init);
  }
  if (opt.source == "manufactured") {
    cfg.source = SourceMode::manufactured;
  } else if (opt.source == "zero") {
    cfg.source = SourceMode::zero;
  } else {
    throw std::invalid_argument("unknown --source: " + opt.source);
  }
  return cfg;
}

ManufacturedProblem make_problem(const CliOptions& opt) {
  ManufacturedProblem prob;
  prob.rho1 = opt.rho1;
  prob.rho2 = opt.rho2;
  prob.final_time = opt.T;
  return prob;
}

// Formats with 6 significant digits; infinities print as "inf".
std::string fmt(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

void write_solution_dump(std::ostream& os, const SimulationRun& run, int n) {
  os << "x,y,u\n";
  const auto mesh1 = build_subdomain_mesh(n, Side::omega1);
  const auto mesh2 = build_subdomain_mesh(n, Side::omega2);
  for (int i = 0; i < mesh1.node_count(); ++i) {
    os << fmt(mesh1.nodes[i][0]) << ',' << fmt(mesh1.nodes[i][1]) << ','
       << fmt(run.u1.values[i]) << '\n';
  }
  for (int i = 0; i < mesh2.node_count(); ++i) {
    os << fmt(mesh2.nodes[i][0]) << ',' << fmt(mesh2.nodes[i][1]) << ','
       << fmt(run.u2.values[i]) << '\n';
  }
}

int cmd_run(const CliOptions& opt) {
  const auto cfg = make_config(opt, opt.n);
  const auto prob = make_problem(opt);
  const auto run = run_simulation(cfg, prob);
  const auto rep = compute_errors(run, prob);

  std::printf("scheme=%s n=%d h=%s dt=%s T=%s status=%s\n", scheme_name(cfg.kind),
              opt.n, fmt(rep.h).c_str(), fmt(rep.dt).c_str(), fmt(run.final_time).c_str(),
              run.status == RunStatus::converged ? "converged" : "diverged");
  std::printf("l2_error=%s (omega1 %s, omega2 %s)\n", fmt(rep.l2_combined).c_str(),
              fmt(rep.l2_omega1).c_str(), fmt(rep.l2_omega2).c_str());
  std::printf("h1_error=%s (omega1 %s, omega2 %s)\n", fmt(rep.h1_combined).c_str(),
              fmt(rep.h1_omega1).c_str(), fmt(rep.h1_omega2).c_str());

  if (!opt.out.empty()) {
    std::ofstream file;
    write_solution_dump(open_output(opt.out, file), run, opt.n);
  }
  return run.status == RunStatus::converged ? 0 : 2;
}

int cmd_dump_solution(const CliOptions& opt) {
  const auto cfg = make_config(opt, opt.n);
  const auto prob = make_problem(opt);
  const auto run = run_simulation(cfg, prob);
  std::ofstream file;
  write_solution_dump(open_output(opt.out, file), run, opt.n);
  return run.status == RunStatus::converged ? 0 : 2;
}

int cmd_convergence(const CliOptions& opt, const std::vector<std::string>& schemes) {
  if (opt.levels.size() < 2) throw std::invalid_argument("--levels needs at least two entries");
  std::vector<int> levels = opt.levels;
  std::sort(levels.begin(), levels.end());

  struct Row {
    std::string scheme;
    int n = 0;
    ErrorReport report;
  };
  std::vector<Row> rows;
  for (const auto& s : schemes) {
    if (!parse_scheme(s)) throw std::invalid_argument("unknown scheme in sweep: " + s);
    for (int n : levels) rows.push_back({s, n, {}});
  }

  // Rows are independent; run them concurrently up to --jobs, then emit in
  // deterministic scheme-major, level-minor order.
  std::atomic<std::size_t> next{0};
  const int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(rows.size())));
  std::vector<std::thread> workers;
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t k = next.fetch_add(1); k < rows.size(); k = next.fetch_add(1)) {
        CliOptions local = opt;
        local.scheme = rows[k].scheme;
        const auto cfg = make_config(local, rows[k].n);
        const auto prob = make_problem(local);
        rows[k].report = compute_errors(run_simulation(cfg, prob), prob);
      }
    });
  }
  for (auto& w : workers) w.join();

  std::ofstream file;
  std::ostream& os = open_output(opt.out, file);
  os << "scheme,n,h,dt,l2_error,h1_error,rate_l2,status\n";
  bool any_diverged = false;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    const bool first_of_scheme = k % levels.size() == 0;
    std::string rate = "";
    if (!first_of_scheme) {
      const double prev = rows[k - 1].report.l2_combined;
      const double cur = r.report.l2_combined;
      if (std::isfinite(prev) && std::isfinite(cur)) rate = fmt(std::log2(prev / cur));
    }
    const bool diverged = r.report.status == RunStatus::diverged;
    any_diverged = any_diverged || diverged;
    os << r.scheme << ',' << r.n << ',' << fmt(r.report.h) << ',' << fmt(r.report.dt) << ','
       << fmt(r.report.l2_combined) << ',' << fmt(r.report.h1_combined) << ',' << rate << ','
       << (diverged ? "diverged" : "converged") << '\n';
  }
  return any_diverged ? 2 : 0;
}

int cmd_verify_identity(const CliOptions& opt) {
  CliOptions local = opt;
  auto cfg = make_config(local, opt.n);
  cfg.store_trajectory = true;
  const auto prob = make_problem(local);
  const auto run = run_simulation(cfg, prob);
  const double residual = verify_inertial_identity(run, prob);
  std::printf("scheme=%s n=%d lumped_coupled=%d identity_residual=%s\n", scheme_name(cfg.kind),
              opt.n, cfg.lumped_coupled ? 1 : 0, fmt(residual).c_str());
  return run.status == RunStatus::converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interface-coupled parabolic FEM laboratory"};
  app.require_subcommand(1);

  CliOptions opt_run, opt_conv, opt_dump, opt_verify;
  std::vector<std::string> sweep_schemes = {"coupled"};

  auto* run = app.add_subcommand("run", "single scheme/level run");
  add_common_flags(run, opt_run);

  auto* conv = app.add_subcommand("convergence", "scheme x level sweep, CSV output");
  add_common_flags(conv, opt_conv);
  conv->add_option("--schemes", sweep_schemes, "schemes for the sweep")->delimiter(',');

  auto* dump = app.add_subcommand("dump-solution", "run and write x,y,u rows");
  add_common_flags(dump, opt_dump);

  auto* verify = app.add_subcommand("verify-identity", "inertial interface identity residual");
  add_common_flags(verify, opt_verify);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      apply_config_file(run, opt_run);
      return cmd_run(opt_run);
    }
    if (conv->parsed()) {
      apply_config_file(conv, opt_conv);
      if (conv->count("--schemes") == 0 && !opt_conv.scheme.empty() &&
          conv->count("--scheme") > 0) {
        sweep_schemes = {opt_conv.scheme};
      }
      return cmd_convergence(opt_conv, sweep_schemes);
    }
    if (dump->parsed()) {
      apply_config_file(dump, opt_dump);
      return cmd_dump_solution(opt_dump);
    }
    apply_config_file(verify, opt_verify);
    return cmd_verify_identity(opt_verify);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
