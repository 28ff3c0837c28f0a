// SPDX-License-Identifier: Apache-2.0
#include "femtocap/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "femtocap/allocator.hpp"
#include "femtocap/units.hpp"

namespace femtocap {

namespace {

std::vector<double> scaled(std::vector<double> caps, double factor) {
  if (factor != 1.0)
    for (double& k : caps) k *= factor;
  return caps;
}

}  // namespace

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::Unconstrained: return "unconstrained";
    case Scheme::ProposedExact: return "proposed_exact";
    case Scheme::ProposedApprox: return "proposed_approx";
  }
  return "unconstrained";
}

double FemtoOutcome::rate(Scheme scheme) const {
  switch (scheme) {
    case Scheme::Unconstrained: return rate_unconstrained;
    case Scheme::ProposedExact: return rate_exact;
    case Scheme::ProposedApprox: return rate_approx;
  }
  return rate_unconstrained;
}

double FemtoOutcome::degradation(Scheme scheme) const {
  if (rate_unconstrained <= 0.0) return 0.0;
  return 1.0 - rate(scheme) / rate_unconstrained;
}

TrialOutcome evaluate_drop(const Drop& drop, const Config& cfg, std::uint64_t seed, std::size_t index) {
  const std::size_t n = drop.subchannels();
  const std::size_t settings = cfg.qos.size();
  TrialOutcome out;
  out.drop = index;
  out.femto.resize(settings);
  out.violations.resize(settings);

  const ChannelState free_state = channel_state_for_fms(drop);
  std::vector<double> unconstrained(n, 0.0);
  double rate_unconstrained = 0.0;
  if (cfg.femto_enabled) {
    const AllocationResult r = waterfill_capped_iterative(free_state);
    unconstrained = r.powers;
    rate_unconstrained = r.sum_rate;
  }

  // per setting: exact-mode and approx-mode proposed powers
  std::vector<std::array<std::vector<double>, 2>> proposed(settings);
  for (std::size_t s = 0; s < settings; ++s) {
    const std::vector<QosSpec> qos(n, cfg.qos[s].spec);
    FemtoOutcome& f = out.femto[s];
    f.rate_unconstrained = rate_unconstrained;
    for (int m = 0; m < 2; ++m) {
      const IbarMode mode = m == 0 ? IbarMode::Exact : IbarMode::Approx;
      if (!cfg.femto_enabled) {
        proposed[s][m].assign(n, 0.0);
        continue;
      }
      const ChannelState st = channel_state_for_fms(drop, scaled(subchannel_caps(drop, qos, mode), cfg.cap_scale));
      AllocationResult r = waterfill_capped_iterative(st);
      (m == 0 ? f.rate_exact : f.rate_approx) = r.sum_rate;
      proposed[s][m] = std::move(r.powers);
    }
  }

  const std::vector<double>& primary = proposed[0][cfg.ibar_mode == IbarMode::Exact ? 0 : 1];
  out.macro_users.reserve(drop.config.macro_users);
  for (std::size_t j = 0; j < drop.config.macro_users; ++j) {
    MacroUserOutcome m;
    m.drop = index;
    m.user = j;
    m.ring = drop.ring(j);
    m.sinr_no_femto_db = linear_to_db(sinr_mms(drop, j));
    m.sinr_unconstrained_db = linear_to_db(sinr_terms(drop, j, unconstrained).sinr_with_femto());
    const SinrTerms t = sinr_terms(drop, j, primary);
    m.sinr_proposed_db = linear_to_db(t.sinr_with_femto());
    m.psi_proposed = psi_exact(t);
    out.macro_users.push_back(m);
  }

  if (cfg.fading_trials == 0) return out;

  // Fresh fading on the cross link and on every interferer, shared by all
  // schemes and settings so their rates are compared on the same draws.
  Rng rng = make_rng(seed, index, Stream::Validation);
  std::exponential_distribution<double> exp1(1.0);
  const double pm = drop.power.macro_power;
  const double noise = drop.power.noise;
  for (std::size_t j = 0; j < drop.config.macro_users; ++j) {
    const ReceiverLinks& links = drop.macro_users[j];
    const std::size_t sc = drop.assignment.subchannel_of_user[j];
    const auto ring = static_cast<std::size_t>(drop.ring(j));
    // femto -> user mean gain already carries A_F and, for outside users, the wall
    const double cross = links.femto.gain.mean_gain;
    std::vector<std::array<double, 3>> p(settings);
    for (std::size_t s = 0; s < settings; ++s) p[s] = {unconstrained[sc], proposed[s][0][sc], proposed[s][1][sc]};
    std::vector<std::array<std::uint64_t, 3>> hits(settings, {0, 0, 0});
    for (std::size_t t = 0; t < cfg.fading_trials; ++t) {
      const double h = exp1(rng);
      double interference = 0.0;
      for (const Link& l : links.neighbors) interference += pm * l.gain.mean_gain * exp1(rng);
      const double base = interference + noise;
      for (std::size_t s = 0; s < settings; ++s) {
        const double gamma = cfg.qos[s].spec.gamma;
        for (std::size_t k = 0; k < 3; ++k) {
          const double psi = base / (p[s][k] * cross * h + base);
          if (psi <= gamma) ++hits[s][k];
        }
      }
    }
    for (std::size_t s = 0; s < settings; ++s)
      for (std::size_t k = 0; k < 3; ++k) {
        Tally& tl = out.violations[s][k][ring];
        tl.hits += hits[s][k];
        tl.trials += cfg.fading_trials;
      }
  }
  return out;
}

ExperimentReport run_experiment(const Config& config, std::size_t reps, std::uint64_t seed) {
  config.validate();
  if (reps == 0) throw std::invalid_argument("reps must be >= 1");
  ExperimentReport report;
  report.config = config;
  report.config.reps = reps;
  report.config.seed = seed;
  report.seed = seed;
  report.reps = reps;
  report.trials.resize(reps);

  std::size_t workers = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, reps);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t i = next++; i < reps; i = next++) {
        const Drop drop = build_drop(config.scenario, seed, i);
        report.trials[i] = evaluate_drop(drop, config, seed, i);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = reps;
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  report.violations = qos_protection_summary(report.trials, config);
  return report;
}

std::vector<CcdfPoint> degradation_cdf(std::span<const double> samples, std::span<const double> thresholds) {
  if (samples.empty()) throw std::invalid_argument("degradation_cdf needs at least one outcome");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<CcdfPoint> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) {
    const auto at_or_above = sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), t);
    out.push_back({t, static_cast<double>(at_or_above) / static_cast<double>(sorted.size())});
  }
  return out;
}

std::vector<ViolationRate> qos_protection_summary(std::span<const TrialOutcome> outcomes, const Config& config) {
  if (outcomes.empty()) throw std::invalid_argument("qos_protection_summary needs at least one outcome");
  std::vector<ViolationRate> out;
  for (std::size_t s = 0; s < config.qos.size(); ++s)
    for (Scheme scheme : kAllSchemes)
      for (Ring ring : kAllRings) {
        ViolationRate v;
        v.setting = config.qos[s].name;
        v.scheme = scheme;
        v.ring = ring;
        v.gamma = config.qos[s].spec.gamma;
        v.epsilon = config.qos[s].spec.epsilon;
        for (const TrialOutcome& o : outcomes) {
          if (o.violations.size() <= s) continue;
          const Tally& t = o.violations[s][static_cast<std::size_t>(scheme)][static_cast<std::size_t>(ring)];
          v.hits += t.hits;
          v.trials += t.trials;
        }
        if (v.trials > 0) {
          v.rate = static_cast<double>(v.hits) / static_cast<double>(v.trials);
          v.sigma = std::sqrt(v.epsilon * (1.0 - v.epsilon) / static_cast<double>(v.trials));
        }
        out.push_back(v);
      }
  return out;
}

std::vector<double> degradations(const ExperimentReport& report, std::size_t setting, Scheme scheme) {
  std::vector<double> d;
  d.reserve(report.trials.size());
  for (const TrialOutcome& t : report.trials) d.push_back(t.femto.at(setting).degradation(scheme));
  return d;
}

std::vector<double> default_thresholds() {
  std::vector<double> t;
  for (int i = 0; i <= 100; ++i) t.push_back(i / 100.0);
  return t;
}

namespace {

Scheme proposed_scheme(const Config& c) {
  return c.ibar_mode == IbarMode::Exact ? Scheme::ProposedExact : Scheme::ProposedApprox;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

std::string fig2_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "drop,mms_id,ring,sinr_no_femto_db,sinr_unconstrained_db,sinr_proposed_db\n";
  for (const TrialOutcome& t : report.trials)
    for (const MacroUserOutcome& m : t.macro_users)
      os << m.drop << ',' << m.user << ',' << ring_name(m.ring) << ',' << fmt(m.sinr_no_femto_db) << ','
         << fmt(m.sinr_unconstrained_db) << ',' << fmt(m.sinr_proposed_db) << '\n';
  return os.str();
}

std::string fig3_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "setting,gamma,epsilon,ibar_mode,threshold,ccdf\n";
  const std::vector<double> thresholds = default_thresholds();
  for (std::size_t s = 0; s < report.config.qos.size(); ++s) {
    const QosSetting& q = report.config.qos[s];
    for (Scheme scheme : {Scheme::ProposedExact, Scheme::ProposedApprox}) {
      const auto mode = scheme == Scheme::ProposedExact ? "exact" : "approx";
      for (const CcdfPoint& p : degradation_cdf(degradations(report, s, scheme), thresholds))
        os << q.name << ',' << fmt(q.spec.gamma) << ',' << fmt(q.spec.epsilon) << ',' << mode << ','
           << fmt(p.threshold) << ',' << fmt(p.ccdf) << '\n';
    }
  }
  return os.str();
}

std::string summary_json(const ExperimentReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["seed"] = report.seed;
  j["reps"] = report.reps;
  j["config_hash"] = config_hash(report.config);
  j["macro_user_samples"] = report.reps * report.config.scenario.macro_users;
  j["ibar_mode"] = to_string(report.config.ibar_mode);

  ordered_json settings = ordered_json::array();
  const std::vector<double> marks{0.03, 0.08};
  for (std::size_t s = 0; s < report.config.qos.size(); ++s) {
    const QosSetting& q = report.config.qos[s];
    ordered_json e;
    e["name"] = q.name;
    e["gamma"] = q.spec.gamma;
    e["epsilon"] = q.spec.epsilon;
    for (Scheme scheme : kAllSchemes) {
      double mean = 0.0;
      for (const TrialOutcome& t : report.trials) mean += t.femto[s].rate(scheme);
      e["mean_rate_" + std::string(scheme_name(scheme))] = mean / static_cast<double>(report.trials.size());
    }
    for (Scheme scheme : {Scheme::ProposedExact, Scheme::ProposedApprox}) {
      ordered_json c;
      for (const CcdfPoint& p : degradation_cdf(degradations(report, s, scheme), marks)) c[fmt(p.threshold)] = p.ccdf;
      e["degradation_ccdf_" + std::string(scheme_name(scheme))] = c;
    }
    e["primary"] = s == 0;
    e["proposed_scheme"] = scheme_name(proposed_scheme(report.config));
    settings.push_back(e);
  }
  j["settings"] = settings;

  ordered_json v = ordered_json::array();
  for (const ViolationRate& r : report.violations) {
    if (r.trials == 0) continue;
    v.push_back({{"setting", r.setting},
                 {"scheme", scheme_name(r.scheme)},
                 {"ring", ring_name(r.ring)},
                 {"gamma", r.gamma},
                 {"epsilon", r.epsilon},
                 {"hits", r.hits},
                 {"trials", r.trials},
                 {"rate", r.rate},
                 {"bound", r.epsilon + 3.0 * r.sigma},
                 {"within_bound", r.within_bound()}});
  }
  j["violations"] = v;
  ordered_json snapshot = ordered_json::parse(serialize_config(report.config));
  snapshot.erase("out_dir");
  snapshot.erase("threads");
  j["config"] = snapshot;
  return j.dump(2) + "\n";
}

}  // namespace femtocap
