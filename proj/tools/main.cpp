#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "leotrack/config.hpp"
#include "leotrack/dynamics.hpp"
#include "leotrack/geo.hpp"
#include "leotrack/link.hpp"
#include "leotrack/results_io.hpp"
#include "leotrack/scenario.hpp"

using namespace leotrack;

namespace {

struct Overrides {
  CLI::Option* seed_opt = nullptr;
  CLI::Option* theta_opt = nullptr;
  CLI::Option* freq_opt = nullptr;
  std::uint64_t seed = 0;
  double theta_min_deg = 0.0;
  double freq_ghz = 0.0;

  void attach(CLI::App* cmd, bool with_seed) {
    if (with_seed) {
      seed_opt = cmd->add_option("--seed", seed, "Override the RNG seed");
    }
    theta_opt = cmd->add_option("--theta-min-deg", theta_min_deg,
                                "Override the visibility threshold (degrees)");
    freq_opt = cmd->add_option("--freq-ghz", freq_ghz,
                               "Override the carrier frequency (GHz)");
  }

  void apply(ScenarioConfig* cfg) const {
    if (seed_opt != nullptr && seed_opt->count() > 0) cfg->seed = seed;
    if (theta_opt->count() > 0) cfg->theta_min = deg2rad(theta_min_deg);
    if (freq_opt->count() > 0) cfg->f_T = freq_ghz * 1e9;
  }
};

ScenarioConfig base_config(const std::string& config_path) {
  return config_path.empty() ? default_scenario_config() : load_config(config_path);
}

std::string fmt_mpe(const Vec3& mpe) {
  return "[" + format_number(mpe[0]) + ", " + format_number(mpe[1]) + ", " +
         format_number(mpe[2]) + "] %";
}

void print_scenario_summary(const ScenarioResult& res) {
  std::cout << "epochs: " << res.records.size() << "\n"
            << "visibility windows: " << res.summary.windows.size() << "\n"
            << "satellite position MPE (visible epochs): "
            << fmt_mpe(res.summary.mpe) << "\n"
            << "NEES mean (6 satellite states): "
            << format_number(res.summary.nees_mean) << "\n";
}

int cmd_simulate_or_track(const std::string& command, const std::string& config_path,
                          const std::string& replay_path,
                          const std::string& ephemeris_path,
                          const std::string& out_dir, int runs, bool runs_given,
                          const Overrides& ov) {
  ScenarioConfig cfg;
  std::string eph_path = ephemeris_path;
  std::string manifest_command = command;
  if (!replay_path.empty()) {
    if (!config_path.empty()) {
      throw ConfigError("simulate: give --config or --replay, not both");
    }
    const RunManifest man = load_manifest(replay_path);
    cfg = config_from_json_text(man.config_json);
    if (!runs_given) runs = man.runs;
    if (eph_path.empty()) eph_path = man.ephemeris_path;
    manifest_command = man.command;
  } else {
    cfg = base_config(config_path);
  }
  ov.apply(&cfg);
  cfg.validate();

  std::vector<EphemerisRecord> eph;
  const std::vector<EphemerisRecord>* eph_ptr = nullptr;
  if (!eph_path.empty()) {
    eph = load_ephemeris(eph_path, cfg.earth);
    eph_ptr = &eph;
  }

  if (runs < 1) throw ConfigError("--runs must be >= 1");
  if (runs == 1) {
    const ScenarioResult res = run_scenario(cfg, 0, eph_ptr);
    emit_results(res, out_dir, cfg, manifest_command, 1, nullptr, eph_path);
    print_scenario_summary(res);
  } else {
    const MonteCarloResult mc = monte_carlo(cfg, runs, eph_ptr);
    emit_results(mc.run0, out_dir, cfg, manifest_command, runs, &mc, eph_path);
    print_scenario_summary(mc.run0);
    std::cout << "monte carlo runs: " << runs << "\n"
              << "NEES mean over runs: " << format_number(mc.nees_mc_mean) << "\n"
              << "MPE mean over runs: " << fmt_mpe(mc.mpe_mc_mean) << "\n";
  }
  std::cout << "outputs written to " << out_dir << "\n";
  return 0;
}

int cmd_geometry(const std::string& config_path, const std::string& out_dir,
                 const Overrides& ov) {
  ScenarioConfig cfg = base_config(config_path);
  ov.apply(&cfg);
  cfg.validate();

  const Vec3 ue0 = geodetic_to_ecef(cfg.ue_start, cfg.earth);
  const int n = static_cast<int>(std::floor((cfg.t1 - cfg.t0) / cfg.dt + 1e-9)) + 1;

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ConfigError("output: cannot create directory " + out_dir);
  const std::string path =
      (std::filesystem::path(out_dir) / "geometry.csv").string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("output: cannot write " + path);

  out << "time,range,gamma,theta,ta,doppler,visible\n";
  for (int k = 0; k < n; ++k) {
    const double t = cfg.t0 + k * cfg.dt;
    const SatState s = truth_orbit_state(cfg.orbit, t, cfg.earth);
    JointState x;
    x.sat_pos = s.pos;
    x.sat_vel = s.vel;
    x.ue_pos = ue0 + cfg.ue_velocity * (t - cfg.t0);
    x.ue_vel = cfg.ue_velocity;
    const double d = slant_range(x.sat_pos, x.ue_pos);
    const double gamma = earth_centered_angle(x.ue_pos, x.sat_pos);
    const double theta = elevation_angle(x.sat_pos, x.ue_pos);
    out << format_number(t) << ',' << format_number(d) << ','
        << format_number(gamma) << ',' << format_number(theta) << ','
        << format_number(timing_advance(d, cfg.c_kms)) << ','
        << format_number(doppler_shift(x, cfg.f_T, cfg.c_kms)) << ','
        << (theta >= cfg.theta_min ? '1' : '0') << '\n';
  }
  if (!out) throw ConfigError("output: write failed for " + path);
  out.close();

  RunManifest man;
  man.tool_version = LEOTRACK_VERSION;
  man.command = "geometry";
  man.seed = cfg.seed;
  man.runs = 1;
  man.outputs = {"geometry.csv"};
  man.config_json = config_to_json(cfg);
  write_manifest(man, out_dir);
  std::cout << "wrote " << path << " (" << n << " rows)\n";
  return 0;
}

int cmd_windows(const std::string& config_path, const std::string& out_dir,
                const Overrides& ov) {
  ScenarioConfig cfg = base_config(config_path);
  ov.apply(&cfg);
  cfg.validate();

  const Vec3 ue0 = geodetic_to_ecef(cfg.ue_start, cfg.earth);
  const auto traj = [&](double t) { return (ue0 + cfg.ue_velocity * (t - cfg.t0)).eval(); };
  const auto windows = visibility_windows(cfg.orbit, traj, cfg.theta_min, cfg.t0,
                                          cfg.t1, cfg.dt, cfg.earth);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ConfigError("output: cannot create directory " + out_dir);
  const std::string path = (std::filesystem::path(out_dir) / "windows.csv").string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("output: cannot write " + path);
  out << "t_start,t_end,theta_max,t_theta_max\n";
  for (const auto& w : windows) {
    out << format_number(w.t_start) << ',' << format_number(w.t_end) << ','
        << format_number(w.theta_max) << ',' << format_number(w.t_theta_max)
        << '\n';
  }
  if (!out) throw ConfigError("output: write failed for " + path);
  out.close();

  RunManifest man;
  man.tool_version = LEOTRACK_VERSION;
  man.command = "windows";
  man.seed = cfg.seed;
  man.runs = 1;
  man.outputs = {"windows.csv"};
  man.config_json = config_to_json(cfg);
  write_manifest(man, out_dir);

  for (const auto& w : windows) {
    std::cout << "window [" << format_number(w.t_start) << ", "
              << format_number(w.t_end) << "] s, peak elevation "
              << format_number(rad2deg(w.theta_max)) << " deg at t="
              << format_number(w.t_theta_max) << " s\n";
  }
  if (windows.empty()) std::cout << "no visibility within the horizon\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LEO satellite / UE joint state estimation and link geometry"};
  app.require_subcommand(1);

  std::string sim_config, sim_replay, sim_out = "out";
  int sim_runs = 1;
  Overrides sim_ov;
  auto* sim = app.add_subcommand("simulate", "Run the full estimation scenario");
  sim->add_option("--config", sim_config, "Scenario configuration JSON");
  sim->add_option("--replay", sim_replay, "Re-run from a run_manifest.json");
  sim->add_option("--out", sim_out, "Output directory");
  auto* sim_runs_opt = sim->add_option("--runs", sim_runs, "Monte Carlo replicates");
  sim_ov.attach(sim, true);

  std::string trk_config, trk_eph, trk_out = "out";
  int trk_runs = 1;
  Overrides trk_ov;
  auto* trk = app.add_subcommand("track", "Scenario with an external trajectory as truth");
  trk->add_option("--config", trk_config, "Scenario configuration JSON");
  trk->add_option("--ephemeris", trk_eph, "Trajectory CSV (time,px,py,pz,vx,vy,vz[,ax,ay,az])")
      ->required();
  trk->add_option("--out", trk_out, "Output directory");
  auto* trk_runs_opt = trk->add_option("--runs", trk_runs, "Monte Carlo replicates");
  trk_ov.attach(trk, true);

  std::string geo_config, geo_out = "out";
  Overrides geo_ov;
  auto* geo = app.add_subcommand("geometry", "Noise-free geometry/link tables, no filtering");
  geo->add_option("--config", geo_config, "Scenario configuration JSON");
  geo->add_option("--out", geo_out, "Output directory");
  geo_ov.attach(geo, false);

  std::string win_config, win_out = "out";
  Overrides win_ov;
  auto* win = app.add_subcommand("windows", "Visibility windows only");
  win->add_option("--config", win_config, "Scenario configuration JSON");
  win->add_option("--out", win_out, "Output directory");
  win_ov.attach(win, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) {
      return cmd_simulate_or_track("simulate", sim_config, sim_replay, "", sim_out,
                                   sim_runs, sim_runs_opt->count() > 0, sim_ov);
    }
    if (trk->parsed()) {
      return cmd_simulate_or_track("track", trk_config, "", trk_eph, trk_out,
                                   trk_runs, trk_runs_opt->count() > 0, trk_ov);
    }
    if (geo->parsed()) return cmd_geometry(geo_config, geo_out, geo_ov);
    if (win->parsed()) return cmd_windows(win_config, win_out, win_ov);
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
