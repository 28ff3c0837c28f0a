// SPDX-License-Identifier: Apache-2.0
#include "femtocap/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"

namespace femtocap {

namespace {

using nlohmann::ordered_json;

// One accessor per flat key, so parse, serialize and --help stay in sync.
struct Field {
  const char* key;
  const char* help;
  std::function<ordered_json(const Config&)> get;
  std::function<void(Config&, const ordered_json&)> set;
};

double as_number(const std::string& key, const ordered_json& v) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(key, "must be finite");
  return d;
}

std::size_t as_count(const std::string& key, const ordered_json& v) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(key, "expected a non-negative integer");
  return v.get<std::size_t>();
}

Field scenario_real(const char* key, const char* help, double ScenarioConfig::*member) {
  return {key, help, [member](const Config& c) { return ordered_json(c.scenario.*member); },
          [member, key](Config& c, const ordered_json& v) { c.scenario.*member = as_number(key, v); }};
}

Field model_real(const char* key, const char* help, PathLossModel ScenarioConfig::*model, double PathLossModel::*member) {
  return {key, help, [model, member](const Config& c) { return ordered_json(c.scenario.*model.*member); },
          [model, member, key](Config& c, const ordered_json& v) { c.scenario.*model.*member = as_number(key, v); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = [] {
    std::vector<Field> v;
    v.push_back({"seed", "master RNG seed",
                 [](const Config& c) { return ordered_json(c.seed); },
                 [](Config& c, const ordered_json& j) {
                   if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
                     throw ConfigError("seed", "expected a non-negative integer");
                   c.seed = j.get<std::uint64_t>();
                 }});
    v.push_back({"reps", "number of independent drops",
                 [](const Config& c) { return ordered_json(c.reps); },
                 [](Config& c, const ordered_json& j) { c.reps = as_count("reps", j); }});
    v.push_back({"fading_trials", "fresh fading draws per macro user for violation counting (0 skips)",
                 [](const Config& c) { return ordered_json(c.fading_trials); },
                 [](Config& c, const ordered_json& j) { c.fading_trials = as_count("fading_trials", j); }});
    v.push_back({"threads", "worker threads, 0 = hardware concurrency",
                 [](const Config& c) { return ordered_json(c.threads); },
                 [](Config& c, const ordered_json& j) { c.threads = as_count("threads", j); }});
    v.push_back({"ibar_mode", "macro interference used in the caps: \"exact\" or \"approx\"",
                 [](const Config& c) { return ordered_json(to_string(c.ibar_mode)); },
                 [](Config& c, const ordered_json& j) {
                   if (!j.is_string()) throw ConfigError("ibar_mode", "expected \"exact\" or \"approx\"");
                   c.ibar_mode = parse_ibar_mode(j.get<std::string>());
                 }});
    v.push_back({"femto_enabled", "false silences the femto base station",
                 [](const Config& c) { return ordered_json(c.femto_enabled); },
                 [](Config& c, const ordered_json& j) {
                   if (!j.is_boolean()) throw ConfigError("femto_enabled", "expected true or false");
                   c.femto_enabled = j.get<bool>();
                 }});
    v.push_back({"cap_scale", "factor applied to every power cap (stress testing)",
                 [](const Config& c) { return ordered_json(c.cap_scale); },
                 [](Config& c, const ordered_json& j) { c.cap_scale = as_number("cap_scale", j); }});
    v.push_back({"out_dir", "output directory for simulate",
                 [](const Config& c) { return ordered_json(c.out_dir); },
                 [](Config& c, const ordered_json& j) {
                   if (!j.is_string()) throw ConfigError("out_dir", "expected a string");
                   c.out_dir = j.get<std::string>();
                 }});
    v.push_back(scenario_real("macro_radius_m", "macro cell radius [m]", &ScenarioConfig::macro_radius_m));
    v.push_back(scenario_real("building_radius_m", "femto building radius R_f [m]", &ScenarioConfig::building_radius_m));
    v.push_back(scenario_real("femto_distance_m", "macro site to femto building distance d_f [m]",
                              &ScenarioConfig::femto_distance_m));
    v.push_back(scenario_real("femto_bearing_deg", "bearing of the femto building from the macro site [deg]",
                              &ScenarioConfig::femto_bearing_deg));
    v.push_back({"macro_users", "macro users per drop (one sub-channel each)",
                 [](const Config& c) { return ordered_json(c.scenario.macro_users); },
                 [](Config& c, const ordered_json& j) { c.scenario.macro_users = as_count("macro_users", j); }});
    v.push_back({"subchannels", "number of sub-channels N (must equal macro_users)",
                 [](const Config& c) { return ordered_json(c.scenario.subchannels); },
                 [](Config& c, const ordered_json& j) { c.scenario.subchannels = as_count("subchannels", j); }});
    v.push_back({"carrier_ghz", "carrier frequency [GHz], both tiers",
                 [](const Config& c) { return ordered_json(c.scenario.macro_model.carrier_ghz); },
                 [](Config& c, const ordered_json& j) {
                   const double fc = as_number("carrier_ghz", j);
                   c.scenario.macro_model.carrier_ghz = fc;
                   c.scenario.femto_model.carrier_ghz = fc;
                 }});
    using SC = ScenarioConfig;
    using PM = PathLossModel;
    v.push_back(model_real("macro_pl_slope", "macro path loss: dB per decade of distance", &SC::macro_model, &PM::slope));
    v.push_back(model_real("macro_pl_intercept", "macro path loss: intercept [dB]", &SC::macro_model, &PM::intercept));
    v.push_back(model_real("macro_pl_freq_coef", "macro path loss: dB per decade of GHz", &SC::macro_model, &PM::freq_coef));
    v.push_back(model_real("macro_shadowing_db", "macro shadowing stddev [dB]", &SC::macro_model, &PM::shadowing_db));
    v.push_back(model_real("femto_pl_slope", "femto path loss: dB per decade of distance", &SC::femto_model, &PM::slope));
    v.push_back(model_real("femto_pl_intercept", "femto path loss: intercept [dB]", &SC::femto_model, &PM::intercept));
    v.push_back(model_real("femto_pl_freq_coef", "femto path loss: dB per decade of GHz", &SC::femto_model, &PM::freq_coef));
    v.push_back(model_real("femto_shadowing_db", "femto shadowing stddev [dB]", &SC::femto_model, &PM::shadowing_db));
    v.push_back(scenario_real("wall_loss_db", "loss per wall crossing [dB]", &SC::wall_loss_db));
    v.push_back(scenario_real("macro_antenna_dbi", "macro antenna gain A_M [dBi]", &SC::macro_antenna_dbi));
    v.push_back(scenario_real("femto_antenna_dbi", "femto antenna gain A_F [dBi]", &SC::femto_antenna_dbi));
    v.push_back(scenario_real("macro_tx_power_dbm", "macro transmit power over all sub-channels [dBm]",
                              &SC::macro_tx_power_dbm));
    v.push_back(scenario_real("femto_tx_power_dbm", "femto total power budget P_F [dBm]", &SC::femto_tx_power_dbm));
    v.push_back(scenario_real("noise_psd_dbm_hz", "thermal noise density [dBm/Hz]", &SC::noise_psd_dbm_hz));
    v.push_back(scenario_real("subchannel_bandwidth_hz", "bandwidth of one sub-channel [Hz]",
                              &SC::subchannel_bandwidth_hz));
    v.push_back(scenario_real("noise_figure_db", "receiver noise figure [dB]", &SC::noise_figure_db));
    return v;
  }();
  return f;
}

bool split_qos_key(const std::string& key, std::string& name, bool& is_gamma) {
  constexpr std::string_view prefix = "qos_";
  if (key.rfind(prefix, 0) != 0) return false;
  for (const auto& [suffix, g] : {std::pair{std::string_view{"_gamma"}, true}, {std::string_view{"_epsilon"}, false}}) {
    if (key.size() > prefix.size() + suffix.size() && key.ends_with(suffix)) {
      name = key.substr(prefix.size(), key.size() - prefix.size() - suffix.size());
      is_gamma = g;
      return true;
    }
  }
  return false;
}

}  // namespace

std::string to_string(IbarMode mode) { return mode == IbarMode::Exact ? "exact" : "approx"; }

IbarMode parse_ibar_mode(const std::string& text) {
  if (text == "exact") return IbarMode::Exact;
  if (text == "approx") return IbarMode::Approx;
  throw ConfigError("ibar_mode", "expected \"exact\" or \"approx\", got \"" + text + "\"");
}

void Config::validate() const {
  for (const auto& [prefix, m] : {std::pair{"macro", &scenario.macro_model}, {"femto", &scenario.femto_model}}) {
    const std::string p = prefix;
    if (!(m->carrier_ghz > 0.0)) throw ConfigError("carrier_ghz", "must be positive");
    if (!(m->shadowing_db >= 0.0)) throw ConfigError(p + "_shadowing_db", "must be >= 0");
    if (!(m->slope > 0.0)) throw ConfigError(p + "_pl_slope", "must be positive (path loss increases with distance)");
  }
  try {
    scenario.validate();
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    throw ConfigError(what.substr(0, what.find(' ')), what);
  }
  if (qos.empty()) throw ConfigError("qos", "at least one QoS setting is required");
  for (const QosSetting& q : qos) {
    if (q.name.empty()) throw ConfigError("qos", "setting names must be non-empty");
    const std::string key = "qos_" + q.name;
    if (!(q.spec.gamma > 0.0 && q.spec.gamma <= 1.0)) throw ConfigError(key + "_gamma", "must lie in (0, 1]");
    if (!(q.spec.epsilon > 0.0 && q.spec.epsilon < 1.0)) throw ConfigError(key + "_epsilon", "must lie in (0, 1)");
  }
  if (reps < 1) throw ConfigError("reps", "must be >= 1");
  if (!(cap_scale >= 0.0) || !std::isfinite(cap_scale)) throw ConfigError("cap_scale", "must be >= 0 and finite");
  if (out_dir.empty()) throw ConfigError("out_dir", "must be non-empty");
}

std::string serialize_config(const Config& config) {
  ordered_json j;
  for (const Field& f : fields()) j[f.key] = f.get(config);
  for (const QosSetting& q : config.qos) {
    j["qos_" + q.name + "_gamma"] = q.spec.gamma;
    j["qos_" + q.name + "_epsilon"] = q.spec.epsilon;
  }
  return j.dump(2) + "\n";
}

Config parse_config(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<file>", std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("<file>", "expected a flat JSON object");

  Config c;
  std::map<std::string, const Field*> by_key;
  for (const Field& f : fields()) by_key[f.key] = &f;

  std::vector<QosSetting> qos;
  bool saw_qos = false;
  for (const auto& [key, value] : j.items()) {
    if (auto it = by_key.find(key); it != by_key.end()) {
      it->second->set(c, value);
      continue;
    }
    std::string name;
    bool is_gamma = false;
    if (!split_qos_key(key, name, is_gamma)) throw ConfigError(key, "unknown key");
    saw_qos = true;
    auto q = std::find_if(qos.begin(), qos.end(), [&](const QosSetting& s) { return s.name == name; });
    if (q == qos.end()) {
      qos.push_back({name, QosSpec{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()}});
      q = qos.end() - 1;
    }
    (is_gamma ? q->spec.gamma : q->spec.epsilon) = as_number(key, value);
  }
  if (saw_qos) {
    for (const QosSetting& q : qos) {
      if (std::isnan(q.spec.gamma)) throw ConfigError("qos_" + q.name + "_gamma", "missing");
      if (std::isnan(q.spec.epsilon)) throw ConfigError("qos_" + q.name + "_epsilon", "missing");
    }
    c.qos = std::move(qos);
  }
  c.validate();
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_hash(const Config& config) {
  Config c = config;
  c.out_dir = Config{}.out_dir;
  c.threads = Config{}.threads;
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : serialize_config(c)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string describe_config_keys() {
  std::ostringstream os;
  const Config defaults;
  for (const Field& f : fields()) os << "  " << f.key << " (default " << f.get(defaults).dump() << "): " << f.help << "\n";
  os << "  qos_<name>_gamma / qos_<name>_epsilon: one QoS setting per <name>, first listed is primary"
        " (defaults: tight 0.93/0.01, loose 0.5/0.1)\n";
  return os.str();
}

}  // namespace femtocap
