// SPDX-License-Identifier: Apache-2.0
#include "femtocap/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "femtocap/allocator.hpp"
#include "femtocap/config.hpp"
#include "femtocap/montecarlo.hpp"
#include "femtocap/qoscap.hpp"
#include "femtocap/units.hpp"

namespace femtocap::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& what, const std::vector<std::string>& items) {
  std::vector<double> out;
  out.reserve(items.size());
  for (const std::string& s : items) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || std::isnan(v))
      throw UsageError(what + ": cannot parse '" + s + "' as a number");
    out.push_back(v);
  }
  return out;
}

struct RunOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::string> out;
  std::optional<std::string> ibar_mode;
  std::optional<double> qos_gamma;
  std::optional<double> qos_epsilon;
  std::optional<std::size_t> threads;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--config", o.config_path, "flat JSON config file (keys listed in --help of the root command)");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--reps", o.reps, "number of drops")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--ibar-mode", o.ibar_mode, "exact or approx")->check(CLI::IsMember({"exact", "approx"}));
  cmd->add_option("--qos-gamma", o.qos_gamma, "replace the QoS settings with one using this gamma");
  cmd->add_option("--qos-epsilon", o.qos_epsilon, "replace the QoS settings with one using this epsilon");
  cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
}

Config resolve_config(const RunOptions& o) {
  Config c = o.config_path.empty() ? Config{} : load_config(o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (o.reps) c.reps = *o.reps;
  if (o.out) c.out_dir = *o.out;
  if (o.ibar_mode) c.ibar_mode = parse_ibar_mode(*o.ibar_mode);
  if (o.threads) c.threads = *o.threads;
  if (o.qos_gamma || o.qos_epsilon) {
    const QosSpec primary = c.qos.front().spec;
    c.qos = {{"override", {o.qos_gamma.value_or(primary.gamma), o.qos_epsilon.value_or(primary.epsilon)}}};
  }
  c.validate();
  return c;
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os << std::setprecision(12);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

int cmd_allocate(const std::vector<std::string>& floors_in, const std::vector<std::string>& caps_in, double budget,
                 const std::string& solver, std::ostream& out) {
  ChannelState state;
  state.floors = parse_list("--floors", floors_in);
  state.caps = caps_in.empty() ? std::vector<double>(state.floors.size(), kNoCap) : parse_list("--caps", caps_in);
  state.total_power = budget;
  if (state.floors.size() != state.caps.size())
    throw UsageError("--floors has " + std::to_string(state.floors.size()) + " entries but --caps has " +
                     std::to_string(state.caps.size()));
  for (double f : state.floors)
    if (!(f > 0.0) || !std::isfinite(f)) throw UsageError("--floors entries must be positive and finite");
  for (double k : state.caps)
    if (!(k >= 0.0)) throw UsageError("--caps entries must be >= 0 (inf allowed)");
  if (!(budget >= 0.0) || !std::isfinite(budget)) throw UsageError("--budget must be >= 0");

  const AllocationResult r =
      solver == "bisection" ? waterfill_capped_bisection(state) : waterfill_capped_iterative(state);
  out << std::setprecision(12);
  out << "solver: " << solver << "\n";
  out << "powers: " << join(r.powers) << "\n";
  out << "sum_rate_bps_hz: " << r.sum_rate << "\n";
  out << "water_level: " << r.water_level << "\n";
  out << "lambda: " << r.certificate.lambda << "\n";
  out << "kkt_residual: " << r.certificate.max_residual << "\n";
  return r.certificate.certifies(kKktTolerance) ? kExitOk : kExitFailed;
}

int cmd_cap(double gamma, double epsilon, double wall_db, double antenna_db, double ibar, double hbar, bool inside,
            std::ostream& out) {
  const QosSpec spec{gamma, epsilon};
  MacroSideEstimate est;
  est.avg_interference = ibar;
  est.avg_cross_gain = hbar;
  est.femto_antenna_gain = db_to_linear(antenna_db);
  if (!(wall_db >= 0.0)) throw UsageError("--wall-db must be >= 0");
  est.wall = inside ? WallLoss::none() : WallLoss::from_db(wall_db);
  CapParams p;
  try {
    p = power_cap(spec, est);
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  out << std::setprecision(12);
  out << "zeta: " << p.zeta << "\n";
  out << "delta: " << p.delta << "\n";
  out << "kappa_w: " << p.kappa << "\n";
  out << "cap_w: " << p.cap << "\n";
  return kExitOk;
}

void write_atomically(const fs::path& dir, const std::vector<std::pair<std::string, std::string>>& files) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<fs::path> staged;
  for (const auto& [name, body] : files) {
    const fs::path tmp = dir / (name + ".tmp");
    std::ofstream f(tmp, std::ios::binary);
    f << body;
    f.close();
    if (!f) {
      for (const auto& p : staged) fs::remove(p, ec);
      fs::remove(tmp, ec);
      throw std::runtime_error("cannot write " + tmp.string());
    }
    staged.push_back(tmp);
  }
  for (std::size_t i = 0; i < files.size(); ++i) fs::rename(staged[i], dir / files[i].first);
}

int cmd_simulate(const RunOptions& o, std::optional<std::size_t> fading_trials, std::ostream& out) {
  Config c = resolve_config(o);
  if (fading_trials) c.fading_trials = *fading_trials;
  const ExperimentReport report = run_experiment(c, c.reps, c.seed);
  const std::vector<std::pair<std::string, std::string>> files{
      {"fig2.csv", fig2_csv(report)}, {"fig3.csv", fig3_csv(report)}, {"summary.json", summary_json(report)}};
  write_atomically(c.out_dir, files);
  out << "seed: " << c.seed << "\n";
  out << "config_hash: " << config_hash(report.config) << "\n";
  out << "drops: " << report.reps << ", macro users: " << report.reps * c.scenario.macro_users << "\n";
  out << "wrote: " << (fs::path(c.out_dir) / "fig2.csv").string() << ", fig3.csv, summary.json\n";
  return kExitOk;
}

int cmd_validate_qos(const RunOptions& o, std::size_t trials, double cap_scale, bool femto_off, std::ostream& out) {
  if (trials < 10000) throw UsageError("--trials must be >= 10000");
  Config c = resolve_config(o);
  c.fading_trials = trials;
  c.cap_scale = cap_scale;
  if (femto_off) c.femto_enabled = false;
  c.validate();
  const ExperimentReport report = run_experiment(c, c.reps, c.seed);

  out << "seed: " << c.seed << "  config_hash: " << config_hash(report.config) << "\n";
  out << std::left << std::setw(10) << "setting" << std::setw(17) << "scheme" << std::setw(9) << "ring"
      << std::right << std::setw(10) << "trials" << std::setw(11) << "rate" << std::setw(11) << "ci95_lo"
      << std::setw(11) << "ci95_hi" << std::setw(11) << "eps+3sig" << "  verdict\n";
  bool pass = true;
  for (const ViolationRate& v : report.violations) {
    if (v.trials == 0) continue;
    const double n = static_cast<double>(v.trials);
    const double half = 1.96 * std::sqrt(std::max(v.rate * (1.0 - v.rate), 1.0 / n) / n);
    const bool gated = v.setting == c.qos.front().name && v.scheme == Scheme::ProposedExact;
    const bool ok = v.within_bound();
    if (gated && !ok) pass = false;
    out << std::left << std::setw(10) << v.setting << std::setw(17) << scheme_name(v.scheme) << std::setw(9)
        << ring_name(v.ring) << std::right << std::setw(10) << v.trials << std::fixed << std::setprecision(5)
        << std::setw(11) << v.rate << std::setw(11) << std::max(0.0, v.rate - half) << std::setw(11)
        << std::min(1.0, v.rate + half) << std::setw(11) << v.epsilon + 3.0 * v.sigma << "  "
        << (gated ? (ok ? "PASS" : "FAIL") : (ok ? "ok" : "over")) << "\n";
    out.unsetf(std::ios::fixed);
  }
  out << (pass ? "QoS guarantee holds" : "QoS guarantee VIOLATED") << " (gate: " << c.qos.front().name
      << ", exact interference caps)\n";
  return pass ? kExitOk : kExitFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Femtocell downlink power allocation under a probabilistic macro-user QoS constraint", "femtocap"};
  app.require_subcommand(1);
  app.footer("Config keys (flat JSON, dB units at the interface):\n" + describe_config_keys() +
             "\nExit codes: 0 success, 1 check failed, 2 usage error.");

  auto* allocate = app.add_subcommand("allocate", "capped water-filling for given floors, caps and budget");
  std::vector<std::string> floors, caps;
  double budget = 0.0;
  std::string solver = "iterative";
  allocate->add_option("--floors", floors, "comma-separated noise-plus-interference floors [W]")
      ->required()
      ->delimiter(',');
  allocate->add_option("--caps", caps, "comma-separated caps [W], 'inf' for none (default: all inf)")->delimiter(',');
  allocate->add_option("--budget", budget, "total power budget [W]")->required();
  allocate->add_option("--solver", solver, "iterative or bisection")->check(CLI::IsMember({"iterative", "bisection"}));

  auto* cap = app.add_subcommand("cap", "closed-form per-sub-channel power cap");
  double gamma = 0, epsilon = 0, wall_db = 3.0, antenna_db = 2.0, ibar = 0, hbar = 0;
  bool inside = false;
  cap->add_option("--gamma", gamma, "allowed SINR ratio gamma in (0,1]")->required();
  cap->add_option("--epsilon", epsilon, "allowed violation probability in (0,1)")->required();
  cap->add_option("--wall-db", wall_db, "wall loss [dB]");
  cap->add_option("--antenna-db", antenna_db, "femto antenna gain [dBi]");
  cap->add_option("--ibar", ibar, "mean macro interference at the user [W]")->required();
  cap->add_option("--hbar", hbar, "mean femto-to-user gain, path loss and shadowing only")->required();
  cap->add_flag("--inside", inside, "macro user is inside the building (no wall term)");

  RunOptions sim_opts;
  std::optional<std::size_t> sim_trials;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo experiment; writes fig2.csv, fig3.csv, summary.json");
  add_run_options(simulate, sim_opts);
  simulate->add_option("--fading-trials", sim_trials, "fading draws per macro user for violation counts");

  RunOptions val_opts;
  std::size_t trials = 10000;
  double cap_scale = 1.0;
  bool femto_off = false;
  auto* validate = app.add_subcommand("validate-qos", "empirical Prob(psi <= gamma) per ring with confidence intervals");
  add_run_options(validate, val_opts);
  validate->add_option("--trials", trials, "fading draws per macro user (>= 10000)");
  validate->add_option("--cap-scale", cap_scale, "multiply every cap (stress test)");
  validate->add_flag("--femto-off", femto_off, "silence the femto base station");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*allocate) return cmd_allocate(floors, caps, budget, solver, out);
    if (*cap) return cmd_cap(gamma, epsilon, wall_db, antenna_db, ibar, hbar, inside, out);
    if (*simulate) return cmd_simulate(sim_opts, sim_trials, out);
    if (*validate) return cmd_validate_qos(val_opts, trials, cap_scale, femto_off, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}

}  // namespace femtocap::cli
