#include "leotrack/results_io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "leotrack/config.hpp"

namespace leotrack {

namespace {

using nlohmann::json;

std::string now_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// JSON has no NaN/inf; emit null for non-finite statistics.
json json_num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("output: cannot write " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw ConfigError("output: write failed for " + path);
}

void write_states_csv(const std::string& path, const ScenarioResult& r) {
  auto out = open_out(path);
  out << "time";
  const char* blocks[3] = {"truth", "est", "var"};
  const char* comps[12] = {"sat_px", "sat_py", "sat_pz", "sat_vx", "sat_vy",
                           "sat_vz", "ue_px",  "ue_py",  "ue_pz",  "ue_vx",
                           "ue_vy",  "ue_vz"};
  for (const char* b : blocks) {
    for (const char* c : comps) out << ',' << b << '_' << c;
  }
  out << ",meas_0,meas_1,meas_2,innov_0,innov_1,innov_2,nees,visible,updated\n";

  for (const auto& rec : r.records) {
    out << format_number(rec.time);
    const Vec12 tv = rec.truth.to_vector();
    const Vec12 ev = rec.estimate.to_vector();
    for (int i = 0; i < 12; ++i) out << ',' << format_number(tv[i]);
    for (int i = 0; i < 12; ++i) out << ',' << format_number(ev[i]);
    for (int i = 0; i < 12; ++i) out << ',' << format_number(rec.cov_diag[i]);
    for (int i = 0; i < 3; ++i) out << ',' << format_number(rec.measurement[i]);
    for (int i = 0; i < 3; ++i) out << ',' << format_number(rec.innovation[i]);
    out << ',' << format_number(rec.nees) << ',' << (rec.visible ? '1' : '0')
        << ',' << (rec.updated ? '1' : '0') << '\n';
  }
  finish(out, path);
}

void write_link_csv(const std::string& path, const ScenarioResult& r) {
  auto out = open_out(path);
  out << "time,ta,doppler,tdoa,gamma,theta,visible"
         ",range_rate,tdoa_measured,clock_offset"
         ",truth_ta,truth_doppler,truth_range_rate,truth_tdoa"
         ",truth_gamma,truth_theta,updated\n";
  for (const auto& rec : r.records) {
    out << format_number(rec.time) << ',' << format_number(rec.link.ta) << ','
        << format_number(rec.link.doppler) << ','
        << format_number(rec.link.tdoa_prev) << ',' << format_number(rec.gamma)
        << ',' << format_number(rec.theta) << ',' << (rec.visible ? '1' : '0')
        << ',' << format_number(rec.link.range_rate) << ','
        << format_number(rec.tdoa_measured) << ','
        << format_number(rec.clock_offset) << ','
        << format_number(rec.truth_link.ta) << ','
        << format_number(rec.truth_link.doppler) << ','
        << format_number(rec.truth_link.range_rate) << ','
        << format_number(rec.truth_link.tdoa_prev) << ','
        << format_number(rec.truth_gamma) << ','
        << format_number(rec.truth_theta) << ',' << (rec.updated ? '1' : '0')
        << '\n';
  }
  finish(out, path);
}

void write_windows_csv(const std::string& path,
                       const std::vector<VisibilityWindow>& windows) {
  auto out = open_out(path);
  out << "t_start,t_end,theta_max,t_theta_max\n";
  for (const auto& w : windows) {
    out << format_number(w.t_start) << ',' << format_number(w.t_end) << ','
        << format_number(w.theta_max) << ',' << format_number(w.t_theta_max)
        << '\n';
  }
  finish(out, path);
}

json summary_to_json(const ScenarioSummary& s) {
  json out;
  out["mpe_percent"] = {json_num(s.mpe[0]), json_num(s.mpe[1]), json_num(s.mpe[2])};
  json rmse = json::array();
  for (int i = 0; i < 12; ++i) rmse.push_back(json_num(s.rmse[i]));
  out["rmse"] = rmse;
  out["nees_mean"] = json_num(s.nees_mean);
  json ws = json::array();
  for (const auto& w : s.windows) {
    ws.push_back({{"t_start", w.t_start},
                  {"t_end", w.t_end},
                  {"theta_max", w.theta_max},
                  {"t_theta_max", w.t_theta_max}});
  }
  out["windows"] = ws;
  return out;
}

void write_summary_json(const std::string& path, const ScenarioResult& r,
                        const MonteCarloResult* mc) {
  json j = summary_to_json(r.summary);
  j["epochs"] = r.records.size();
  if (mc != nullptr) {
    json per_run = json::array();
    for (const auto& s : mc->run_summaries) {
      per_run.push_back({{"nees_mean", json_num(s.nees_mean)},
                         {"mpe_percent",
                          {json_num(s.mpe[0]), json_num(s.mpe[1]), json_num(s.mpe[2])}}});
    }
    j["monte_carlo"] = {
        {"runs", mc->run_summaries.size()},
        {"nees_mc_mean", json_num(mc->nees_mc_mean)},
        {"mpe_mc_mean",
         {json_num(mc->mpe_mc_mean[0]), json_num(mc->mpe_mc_mean[1]),
          json_num(mc->mpe_mc_mean[2])}},
        {"per_run", per_run}};
  }
  auto out = open_out(path);
  out << j.dump(2) << "\n";
  finish(out, path);
}

}  // namespace

std::string format_number(double v) {
  char buf[48];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

RunManifest emit_results(const ScenarioResult& r, const std::string& dir,
                         const ScenarioConfig& cfg, const std::string& command,
                         int runs, const MonteCarloResult* mc,
                         const std::string& ephemeris_path) {
  RunManifest man;
  man.tool_version = LEOTRACK_VERSION;
  man.command = command;
  man.seed = cfg.seed;
  man.runs = runs;
  man.ephemeris_path = ephemeris_path;
  man.started_utc = now_utc();
  man.config_json = config_to_json(cfg);

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("output: cannot create directory " + dir);

  const auto join = [&dir](const char* name) {
    return (std::filesystem::path(dir) / name).string();
  };
  write_states_csv(join("states.csv"), r);
  write_link_csv(join("link.csv"), r);
  write_windows_csv(join("windows.csv"), r.summary.windows);
  write_summary_json(join("summary.json"), r, mc);
  man.outputs = {"states.csv", "link.csv", "windows.csv", "summary.json"};
  man.finished_utc = now_utc();
  write_manifest(man, dir);
  return man;
}

void write_manifest(const RunManifest& man, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("output: cannot create directory " + dir);

  json jm;
  jm["tool_version"] = man.tool_version;
  jm["command"] = man.command;
  jm["seed"] = man.seed;
  jm["runs"] = man.runs;
  jm["ephemeris_path"] = man.ephemeris_path;
  jm["started_utc"] = man.started_utc;
  jm["finished_utc"] = man.finished_utc;
  jm["outputs"] = man.outputs;
  jm["config"] = json::parse(man.config_json);
  const std::string path = (std::filesystem::path(dir) / "run_manifest.json").string();
  auto out = open_out(path);
  out << jm.dump(2) << "\n";
  finish(out, path);
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("manifest: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
  RunManifest man;
  try {
    man.tool_version = j.at("tool_version").get<std::string>();
    man.command = j.at("command").get<std::string>();
    man.seed = j.at("seed").get<std::uint64_t>();
    man.runs = j.at("runs").get<int>();
    man.ephemeris_path = j.value("ephemeris_path", std::string{});
    man.started_utc = j.value("started_utc", std::string{});
    man.finished_utc = j.value("finished_utc", std::string{});
    if (j.contains("outputs")) {
      man.outputs = j.at("outputs").get<std::vector<std::string>>();
    }
    man.config_json = j.at("config").dump();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest: ") + path + ": " + e.what());
  }
  return man;
}

}  // namespace leotrack
