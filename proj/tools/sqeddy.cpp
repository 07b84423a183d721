// sqeddy: command-line driver for the square eddy stability analysis.
//
// Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
// 4 verification threshold breached.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sqeddy/critical.hpp"
#include "sqeddy/eig.hpp"
#include "sqeddy/error.hpp"
#include "sqeddy/hopf.hpp"
#include "sqeddy/io.hpp"
#include "sqeddy/timestep.hpp"
#include "sqeddy/verify.hpp"

namespace fs = std::filesystem;
using namespace sqeddy;

namespace {

struct Overrides {
  std::string config;
  std::optional<int> N;
  std::optional<double> mu;
  std::optional<double> nu;
  std::optional<double> nu_min;
  std::optional<double> nu_max;
  std::optional<int> trunc;
  std::optional<int> time_modes;
  std::vector<double> eps;
  std::optional<int> grid;
  std::optional<std::string> out;
  std::optional<std::string> critical;
};

RunConfig resolve(const Overrides& o, bool trunc_is_branch) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.N) c.N = *o.N;
  if (o.mu) c.mu = *o.mu;
  if (o.nu) c.nu = *o.nu;
  if (o.nu_min) c.nu_min = *o.nu_min;
  if (o.nu_max) c.nu_max = *o.nu_max;
  if (o.trunc) (trunc_is_branch ? c.branch_cutoff : c.cutoff) = *o.trunc;
  if (o.time_modes) c.time_modes = *o.time_modes;
  if (!o.eps.empty()) c.epsilons = o.eps;
  if (o.grid) c.grid = *o.grid;
  if (o.out) c.out = *o.out;
  if (o.critical) c.critical = *o.critical;
  c.validate();
  return c;
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

RootOptions root_options(const RunConfig& c) {
  RootOptions r;
  r.tolerance = c.root_tolerance;
  return r;
}

void write(const RunConfig& c, const std::string& name, const std::string& content) {
  const fs::path path = fs::path(c.out) / name;
  write_atomic(path, content);
  std::cerr << "wrote " << path.string() << "\n";
}

/// Critical point from --critical if given, else located from the bracket.
CriticalPoint obtain_critical(const RunConfig& c) {
  if (c.critical) return critical_from_json(json::parse(read_file(*c.critical)));
  return find_critical(c.params(), c.mu, {c.nu_min, c.nu_max}, c.cutoff, root_options(c));
}

void fail_on_breach(const VerificationReport& report) {
  const auto failures = verification_failures(report);
  if (failures.empty()) return;
  std::string msg = "verification failed:";
  for (const auto& f : failures) msg += "\n  " + f;
  throw VerificationError(msg);
}

int run_critical(const RunConfig& c) {
  const CriticalPoint cp = find_critical(c.params(), c.mu, {c.nu_min, c.nu_max}, c.cutoff, root_options(c));
  const VerificationReport report = verify_critical(cp, c.simplicity_cutoff);
  write(c, "critical.json", dump(to_json(cp, report)));
  std::cout << "nu_c = " << g17(cp.nu_c) << "\nomega_c = " << g17(cp.omega_c) << "\nmu_c = " << g17(cp.mu_c)
            << "\ncrossing = " << g17(cp.crossing_derivative.real()) << " " << g17(cp.crossing_derivative.imag())
            << "i\n";
  fail_on_breach(report);
  return 0;
}

int run_spectrum(const RunConfig& c) {
  const double nu = c.nu.value_or(0.5 * (c.nu_min + c.nu_max));
  const auto modes = ModeSet::lattice(c.params(), c.cutoff);
  const auto spectrum = full_spectrum(assemble(modes, nu, c.mu));
  std::string csv = "index,re,im,residual,energy_residual\r\n";
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const auto& s = spectrum[i];
    csv += std::to_string(i) + "," + g17(s.lambda.real()) + "," + g17(s.lambda.imag()) + "," + g17(s.residual) + "," +
           g17(energy_identity_residual(s)) + "\r\n";
  }
  write(c, "spectrum.csv", csv);

  std::vector<int> cutoffs;
  const int step = 2 * c.params().N;
  for (int K = c.cutoff % step + step; K <= c.cutoff; K += step) cutoffs.push_back(K);
  if (cutoffs.empty() || cutoffs.back() != c.cutoff) cutoffs.push_back(c.cutoff);
  const auto study = convergence_study(c.params(), nu, c.mu, cutoffs, c.eigen_tolerance);
  std::string conv = "K,dim,re,im,delta\r\n";
  for (const auto& row : study.rows) {
    conv += std::to_string(row.cutoff) + "," + std::to_string(row.dim) + "," + g17(row.lambda.real()) + "," +
            g17(row.lambda.imag()) + "," + g17(row.delta) + "\r\n";
  }
  write(c, "convergence.csv", conv);
  std::cout << "rightmost = " << g17(spectrum.front().lambda.real()) << " " << g17(spectrum.front().lambda.imag())
            << "i\n";
  if (study.converged_cutoff) {
    std::cout << "converged at K = " << *study.converged_cutoff << "\n";
  } else {
    std::cout << "not converged below tolerance " << c.eigen_tolerance << "\n";
  }
  return 0;
}

int run_verify(const RunConfig& c) {
  if (!c.critical) throw ConfigError("verify needs --critical PATH");
  const CriticalPoint cp = critical_from_json(json::parse(read_file(*c.critical)));
  const VerificationReport report = verify_critical(cp, c.simplicity_cutoff);
  write(c, "verification.json", dump(to_json(report)));
  fail_on_breach(report);
  std::cout << "all verification thresholds hold\n";
  return 0;
}

int run_branch(const RunConfig& c) {
  // The branch lives on its own (smaller) space cutoff, so the critical
  // point is relocated there, bracketing around a persisted value if given.
  std::pair<double, double> bracket{c.nu_min, c.nu_max};
  if (c.critical) {
    const CriticalPoint ref = critical_from_json(json::parse(read_file(*c.critical)));
    bracket = {0.9 * ref.nu_c, 1.1 * ref.nu_c};
  }
  const CriticalPoint cp = find_critical(c.params(), c.mu, bracket, c.branch_cutoff, root_options(c));
  const HopfProblem problem(cp, c.time_modes);
  BranchOptions options;
  options.tolerance = c.fixed_point_tolerance;

  std::vector<BranchPoint> points;
  for (std::size_t i = 0; i < c.epsilons.size(); ++i) {
    const double eps = c.epsilons[i];
    BranchPoint p = problem.solve_branch(eps, options);
    std::cerr << "eps = " << eps << ": sigma = " << g17(p.sigma) << ", omega = " << g17(p.omega) << ", "
              << p.iterations << " iterations, residual " << p.residual_aabb << "\n";
    char name[48];
    std::snprintf(name, sizeof name, "branch_%03zu.json", i);
    write(c, name, dump(to_json(p)));
    points.push_back(std::move(p));
  }
  write(c, "branch.csv", branch_csv(points));
  return 0;
}

int run_field(const RunConfig& c) {
  const CriticalPoint cp = obtain_critical(c);
  write(c, "field.csv", field_csv(export_field(cp.psi_c, c.grid)));
  return 0;
}

int run_oracle(const RunConfig& c) {
  const double nu = c.nu.value_or(0.5 * (c.nu_min + c.nu_max));
  const DomainParams p = c.params();
  const auto modes = ModeSet::lattice(p, c.branch_cutoff);
  const auto steps = static_cast<int>(std::ceil(c.oracle_time / c.dt));
  // Sample roughly every 0.02 time units; crossings are interpolated anyway.
  const int every = std::max(1, static_cast<int>(0.02 / c.dt));
  const Trajectory traj =
      integrate_linearized(CoefficientField::unit(modes, {p.n0, p.m0}), nu, c.mu, c.dt, steps, {every, true});
  if (traj.warning) std::cerr << "warning: " << *traj.warning << "\n";
  const GrowthEstimate est = growth_rate(traj, 0.25 * c.oracle_time);
  const cplx lambda = rightmost_eigenvalue(assemble(modes, nu, c.mu));
  json j = {
      {"nu", nu},
      {"mu", c.mu},
      {"K", c.branch_cutoff},
      {"dt", c.dt},
      {"time", steps * c.dt},
      {"growth", est.growth},
      {"frequency", est.frequency},
      {"frequency_reliable", est.frequency_reliable},
      {"fit_residual", est.fit_residual},
      {"eig_rightmost", to_json(lambda)},
  };
  write(c, "oracle.json", dump(j));
  std::cout << "time-domain: " << g17(est.growth) << " +- " << g17(est.frequency) << "i\n"
            << "eigensolver: " << g17(lambda.real()) << " +- " << g17(std::abs(lambda.imag())) << "i\n";
  return 0;
}

int run_sweep(const RunConfig& c) {
  std::vector<double> nus = c.sweep_nus;
  if (nus.empty()) {
    for (int i = 0; i <= 6; ++i) nus.push_back(c.nu_min + (c.nu_max - c.nu_min) * i / 6.0);
  }
  const std::vector<int> cutoffs = c.sweep_cutoffs.empty() ? std::vector<int>{c.cutoff} : c.sweep_cutoffs;
  const auto rows = sweep(c.params(), c.mu, nus, cutoffs);
  std::string csv = "K,nu,re,im\r\n";
  for (const auto& r : rows) {
    csv += std::to_string(r.cutoff) + "," + g17(r.nu) + "," + g17(r.lambda.real()) + "," + g17(r.lambda.imag()) +
           "\r\n";
  }
  write(c, "sweep.csv", csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral stability and Hopf branch analysis of the square eddy flow"};
  app.require_subcommand(1);
  Overrides o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON configuration file");
    sub->add_option("--N", o.N, "domain scale (odd, >= 5)");
    sub->add_option("--mu", o.mu, "friction coefficient");
    sub->add_option("--nu", o.nu, "viscosity");
    sub->add_option("--nu-min", o.nu_min, "lower end of the viscosity bracket");
    sub->add_option("--nu-max", o.nu_max, "upper end of the viscosity bracket");
    sub->add_option("--trunc", o.trunc, "space cutoff K");
    sub->add_option("--time-modes", o.time_modes, "time-Fourier cutoff F");
    sub->add_option("--eps", o.eps, "branch amplitudes");
    sub->add_option("--grid", o.grid, "field export resolution");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--critical", o.critical, "persisted critical-point document");
  };

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
    bool branch_trunc;
  };
  const Command commands[] = {
      {"critical", "locate and verify the Hopf point", run_critical, false},
      {"spectrum", "lattice spectrum and cutoff convergence", run_spectrum, false},
      {"verify", "re-verify a persisted critical point", run_verify, false},
      {"branch", "solve the bifurcating periodic branch", run_branch, true},
      {"field", "export the critical eigenfunction on a grid", run_field, false},
      {"oracle", "time-domain growth-rate cross-check", run_oracle, true},
      {"sweep", "rightmost eigenvalue over (nu, K)", run_sweep, false},
  };
  std::vector<CLI::App*> subs;
  for (const auto& cmd : commands) {
    subs.push_back(app.add_subcommand(cmd.name, cmd.help));
    add_common(subs.back());
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) return commands[i].run(resolve(o, commands[i].branch_trunc));
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const VerificationError& e) {
    std::cerr << e.what() << "\n";
    return 4;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
