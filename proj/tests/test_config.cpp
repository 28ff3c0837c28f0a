// SPDX-License-Identifier: Apache-2.0
#include <string>

#include "doctest.h"
#include "femtocap/config.hpp"
#include "json.hpp"

using namespace femtocap;

namespace {

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults round-trip through the flat JSON form") {
  const Config c;
  const std::string s = serialize_config(c);
  const Config back = parse_config(s);
  CHECK(serialize_config(back) == s);
  CHECK(config_hash(back) == config_hash(c));
  const auto j = nlohmann::json::parse(s);
  CHECK(j["macro_radius_m"] == 500.0);
  CHECK(j["wall_loss_db"] == 3.0);
  CHECK(j["femto_distance_m"] == 400.0);
  CHECK(j["ibar_mode"] == "approx");
  CHECK(j.contains("qos_tight_gamma"));
  CHECK(j.contains("qos_loose_epsilon"));
}

TEST_CASE("edited configs round-trip and change the hash") {
  Config c;
  c.seed = 7;
  c.scenario.femto_distance_m = 250.0;
  c.scenario.femto_model.slope = 40.0;
  c.qos = {{"a", {0.7, 0.2}}, {"b", {0.9, 0.05}}, {"c", {1.0, 0.5}}};
  c.ibar_mode = IbarMode::Exact;
  const Config back = parse_config(serialize_config(c));
  CHECK(back.seed == 7);
  CHECK(back.scenario.femto_distance_m == 250.0);
  CHECK(back.scenario.femto_model.slope == 40.0);
  REQUIRE(back.qos.size() == 3);
  CHECK(back.qos[0].name == "a");
  CHECK(back.qos[2].spec.gamma == 1.0);
  CHECK(back.ibar_mode == IbarMode::Exact);
  CHECK(config_hash(c) != config_hash(Config{}));
  Config moved;
  moved.out_dir = "elsewhere";
  moved.threads = 3;
  CHECK(config_hash(moved) == config_hash(Config{}));
}

TEST_CASE("partial configs keep the defaults") {
  const Config c = parse_config(R"({"seed": 3, "reps": 5})");
  CHECK(c.seed == 3);
  CHECK(c.reps == 5);
  CHECK(c.scenario.macro_radius_m == 500.0);
  CHECK(c.qos.size() == 2);
}

TEST_CASE("errors name the offending field") {
  CHECK(field_of(R"({"bogus": 1})") == "bogus");
  CHECK(field_of(R"({"reps": 0})") == "reps");
  CHECK(field_of(R"({"reps": -2})") == "reps");
  CHECK(field_of(R"({"wall_loss_db": "x"})") == "wall_loss_db");
  CHECK(field_of(R"({"qos_t_gamma": 0.0, "qos_t_epsilon": 0.1})") == "qos_t_gamma");
  CHECK(field_of(R"({"qos_t_gamma": 0.5, "qos_t_epsilon": 1.0})") == "qos_t_epsilon");
  CHECK(field_of(R"({"qos_t_gamma": 0.5})") == "qos_t_epsilon");
  CHECK(field_of(R"({"ibar_mode": "fast"})") == "ibar_mode");
  CHECK(field_of(R"({"carrier_ghz": -1})") == "carrier_ghz");
  CHECK(field_of(R"({"femto_pl_slope": 0})") == "femto_pl_slope");
  CHECK(field_of(R"({"cap_scale": -1})") == "cap_scale");
  CHECK(field_of("[1,2]") == "<file>");
  CHECK(field_of("{") == "<file>");
  CHECK_THROWS_AS(load_config("/nonexistent/dir/cfg.json"), ConfigError);
}

TEST_CASE("interference mode names") {
  CHECK(parse_ibar_mode("exact") == IbarMode::Exact);
  CHECK(to_string(IbarMode::Approx) == "approx");
  CHECK_THROWS_AS(parse_ibar_mode("EXACT"), ConfigError);
  CHECK(describe_config_keys().find("femto_distance_m") != std::string::npos);
}
