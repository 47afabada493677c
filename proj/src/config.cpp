#include "leotrack/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "json.hpp"

namespace leotrack {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const char* ctx) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (item.key() == a) {
        known = true;
        break;
      }
    }
    if (!known) fail("unknown key \"" + item.key() + "\" in " + ctx);
  }
}

double num(const json& v, const std::string& key) {
  if (!v.is_number()) fail("field \"" + key + "\" must be a number");
  return v.get<double>();
}

bool boolean(const json& v, const std::string& key) {
  if (!v.is_boolean()) fail("field \"" + key + "\" must be a boolean");
  return v.get<bool>();
}

// Accepts either <base>_deg or <base>_rad (not both); writes radians.
void read_angle(const json& obj, const std::string& base, const char* ctx,
                double* out) {
  const std::string kd = base + "_deg";
  const std::string kr = base + "_rad";
  const bool hd = obj.contains(kd);
  const bool hr = obj.contains(kr);
  if (hd && hr) fail(std::string(ctx) + ": give only one of " + kd + " and " + kr);
  if (hd) *out = deg2rad(num(obj.at(kd), kd));
  if (hr) *out = num(obj.at(kr), kr);
}

Vec3 vec3_field(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 3) {
    fail("field \"" + key + "\" must be an array of 3 numbers");
  }
  Vec3 out;
  for (int i = 0; i < 3; ++i) out[i] = num(v.at(i), key);
  return out;
}

ScenarioConfig parse(const json& j) {
  if (!j.is_object()) fail("top level must be a JSON object");
  check_keys(j,
             {"orbit", "ue_start", "ue_velocity_kms", "ue_speed_kms", "earth",
              "noise", "clock", "f_t_hz", "c_kms", "dt_s", "t0_s", "t1_s",
              "seed", "theta_min_deg", "theta_min_rad", "measurement_mode",
              "direct_position_sigma_km", "truth_process_noise",
              "gate_updates_to_visibility"},
             "top level");

  ScenarioConfig cfg = default_scenario_config();

  if (j.contains("orbit")) {
    const json& o = j.at("orbit");
    if (!o.is_object()) fail("\"orbit\" must be an object");
    check_keys(o,
               {"altitude_km", "inclination_deg", "inclination_rad", "raan_deg",
                "raan_rad", "phase_deg", "phase_rad"},
               "orbit");
    if (o.contains("altitude_km")) cfg.orbit.altitude = num(o.at("altitude_km"), "altitude_km");
    read_angle(o, "inclination", "orbit", &cfg.orbit.inclination);
    read_angle(o, "raan", "orbit", &cfg.orbit.raan);
    read_angle(o, "phase", "orbit", &cfg.orbit.phase);
  }

  if (j.contains("ue_start")) {
    const json& u = j.at("ue_start");
    if (!u.is_object()) fail("\"ue_start\" must be an object");
    check_keys(u,
               {"latitude_deg", "latitude_rad", "longitude_deg", "longitude_rad",
                "height_km"},
               "ue_start");
    read_angle(u, "latitude", "ue_start", &cfg.ue_start.latitude);
    read_angle(u, "longitude", "ue_start", &cfg.ue_start.longitude);
    if (u.contains("height_km")) cfg.ue_start.height = num(u.at("height_km"), "height_km");
  }

  const bool has_velocity = j.contains("ue_velocity_kms");
  const bool has_speed = j.contains("ue_speed_kms");
  if (has_velocity && has_speed) {
    fail("give only one of ue_velocity_kms and ue_speed_kms");
  }
  if (has_velocity) {
    cfg.ue_velocity = vec3_field(j.at("ue_velocity_kms"), "ue_velocity_kms");
  } else {
    // Speed along local east at the (possibly overridden) start longitude.
    const double speed = has_speed ? num(j.at("ue_speed_kms"), "ue_speed_kms") : 0.30677;
    cfg.ue_velocity = speed * Vec3(-std::sin(cfg.ue_start.longitude),
                                   std::cos(cfg.ue_start.longitude), 0.0);
  }

  if (j.contains("earth")) {
    const json& e = j.at("earth");
    if (!e.is_object()) fail("\"earth\" must be an object");
    check_keys(e, {"equatorial_radius_km", "polar_radius_km", "mu_km3_s2"}, "earth");
    if (e.contains("equatorial_radius_km")) {
      cfg.earth.equatorial_radius = num(e.at("equatorial_radius_km"), "equatorial_radius_km");
    }
    if (e.contains("polar_radius_km")) {
      cfg.earth.polar_radius = num(e.at("polar_radius_km"), "polar_radius_km");
    }
    if (e.contains("mu_km3_s2")) cfg.earth.mu = num(e.at("mu_km3_s2"), "mu_km3_s2");
  }

  if (j.contains("noise")) {
    const json& nz = j.at("noise");
    if (!nz.is_object()) fail("\"noise\" must be an object");
    check_keys(nz, {"q_diag", "r_diag"}, "noise");
    if (nz.contains("q_diag")) {
      const json& q = nz.at("q_diag");
      if (!q.is_array() || q.size() != 12) fail("\"q_diag\" must be an array of 12 numbers");
      cfg.noise.Q = Mat12::Zero();
      for (int i = 0; i < 12; ++i) cfg.noise.Q(i, i) = num(q.at(i), "q_diag");
    }
    if (nz.contains("r_diag")) {
      const json& r = nz.at("r_diag");
      if (!r.is_array() || r.size() != 2) fail("\"r_diag\" must be an array of 2 numbers");
      cfg.noise.R = Mat2::Zero();
      for (int i = 0; i < 2; ++i) cfg.noise.R(i, i) = num(r.at(i), "r_diag");
    }
  }

  if (j.contains("clock")) {
    const json& c = j.at("clock");
    if (!c.is_object()) fail("\"clock\" must be an object");
    check_keys(c, {"eps1", "eps2"}, "clock");
    if (c.contains("eps1")) cfg.clock.eps1 = num(c.at("eps1"), "eps1");
    if (c.contains("eps2")) cfg.clock.eps2 = num(c.at("eps2"), "eps2");
  }

  if (j.contains("f_t_hz")) cfg.f_T = num(j.at("f_t_hz"), "f_t_hz");
  if (j.contains("c_kms")) cfg.c_kms = num(j.at("c_kms"), "c_kms");
  if (j.contains("dt_s")) cfg.dt = num(j.at("dt_s"), "dt_s");
  if (j.contains("t0_s")) cfg.t0 = num(j.at("t0_s"), "t0_s");
  if (j.contains("t1_s")) cfg.t1 = num(j.at("t1_s"), "t1_s");

  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() &&
                                   s.get<long long>() < 0)) {
      fail("field \"seed\" must be a nonnegative integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }

  read_angle(j, "theta_min", "top level", &cfg.theta_min);

  if (j.contains("measurement_mode")) {
    const json& m = j.at("measurement_mode");
    if (!m.is_string()) fail("field \"measurement_mode\" must be a string");
    const std::string v = m.get<std::string>();
    if (v == "range_elevation") {
      cfg.measurement_mode = MeasurementMode::kRangeElevation;
    } else if (v == "direct_position") {
      cfg.measurement_mode = MeasurementMode::kDirectPosition;
    } else {
      fail("measurement_mode must be \"range_elevation\" or \"direct_position\"");
    }
  }

  if (j.contains("direct_position_sigma_km")) {
    cfg.direct_position_sigma_km =
        num(j.at("direct_position_sigma_km"), "direct_position_sigma_km");
  }
  if (j.contains("truth_process_noise")) {
    cfg.truth_process_noise = boolean(j.at("truth_process_noise"), "truth_process_noise");
  }
  if (j.contains("gate_updates_to_visibility")) {
    cfg.gate_updates_to_visibility =
        boolean(j.at("gate_updates_to_visibility"), "gate_updates_to_visibility");
  }

  cfg.validate();
  return cfg;
}

}  // namespace

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

ScenarioConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return parse(j);
}

std::string config_to_json(const ScenarioConfig& cfg) {
  json j;
  j["orbit"] = {{"altitude_km", cfg.orbit.altitude},
                {"inclination_rad", cfg.orbit.inclination},
                {"raan_rad", cfg.orbit.raan},
                {"phase_rad", cfg.orbit.phase}};
  j["ue_start"] = {{"latitude_rad", cfg.ue_start.latitude},
                   {"longitude_rad", cfg.ue_start.longitude},
                   {"height_km", cfg.ue_start.height}};
  j["ue_velocity_kms"] = {cfg.ue_velocity[0], cfg.ue_velocity[1], cfg.ue_velocity[2]};
  j["earth"] = {{"equatorial_radius_km", cfg.earth.equatorial_radius},
                {"polar_radius_km", cfg.earth.polar_radius},
                {"mu_km3_s2", cfg.earth.mu}};
  json q = json::array();
  for (int i = 0; i < 12; ++i) q.push_back(cfg.noise.Q(i, i));
  json r = json::array();
  for (int i = 0; i < 2; ++i) r.push_back(cfg.noise.R(i, i));
  j["noise"] = {{"q_diag", q}, {"r_diag", r}};
  j["clock"] = {{"eps1", cfg.clock.eps1}, {"eps2", cfg.clock.eps2}};
  j["f_t_hz"] = cfg.f_T;
  j["c_kms"] = cfg.c_kms;
  j["dt_s"] = cfg.dt;
  j["t0_s"] = cfg.t0;
  j["t1_s"] = cfg.t1;
  j["seed"] = cfg.seed;
  j["theta_min_rad"] = cfg.theta_min;
  j["measurement_mode"] = cfg.measurement_mode == MeasurementMode::kDirectPosition
                              ? "direct_position"
                              : "range_elevation";
  j["direct_position_sigma_km"] = cfg.direct_position_sigma_km;
  j["truth_process_noise"] = cfg.truth_process_noise;
  j["gate_updates_to_visibility"] = cfg.gate_updates_to_visibility;
  return j.dump(2) + "\n";
}

}  // namespace leotrack
