#pragma once

#include <cstdint>
#include <vector>

#include "leotrack/ephemeris.hpp"
#include "leotrack/estimator.hpp"
#include "leotrack/link.hpp"
#include "leotrack/types.hpp"

namespace leotrack {

enum class MeasurementMode { kRangeElevation, kDirectPosition };

// Everything a simulation run depends on. validate() throws ConfigError
// naming the first violated field.
struct ScenarioConfig {
  OrbitElements orbit;
  GeodeticPosition ue_start;
  Vec3 ue_velocity = Vec3::Zero();  // km/s, ECEF
  EarthModel earth;
  NoiseConfig noise;
  ClockModel clock;
  double f_T = 10.7e9;  // carrier, Hz
  double c_kms = constants::kDefaultSpeedOfLight;
  double dt = 0.01;  // s
  double t0 = 0.0;
  double t1 = 20.0;
  std::uint64_t seed = 1;
  double theta_min = 0.0;  // rad
  MeasurementMode measurement_mode = MeasurementMode::kRangeElevation;
  double direct_position_sigma_km = 0.1;  // per-axis, direct_position mode
  // The synthetic truth is an RK4/linear backbone; when set, per-step noise
  // with the filter's process covariance is added on top, which is the model
  // the filter is actually tuned for (and what makes NEES chi-square scaled).
  bool truth_process_noise = true;
  // Use measurements only while the (truth) satellite is above theta_min.
  bool gate_updates_to_visibility = true;

  void validate() const;
};

// The stock simulation: 375 km / 55 deg circular orbit passing near-overhead
// of a UE in Paris moving east at 306.77 m/s, 20 s horizon at 10 ms steps,
// range sigma 0.1 km, elevation sigma 1e-3 rad, velocity process noise 1e-4.
ScenarioConfig default_scenario_config();

// Diagonal covariance used to perturb the truth into the initial belief:
// 1 km^2 satellite position, 1e-2 satellite velocity and UE position,
// 1e-4 UE velocity, per axis.
Mat12 initial_belief_covariance();

// One simulation epoch. measurement/innovation hold (range, elevation, 0) in
// range_elevation mode and the full 3-vector in direct_position mode.
struct EpochRecord {
  double time = 0.0;
  JointState truth;
  JointState estimate;
  Vec12 cov_diag = Vec12::Zero();
  Vec3 measurement = Vec3::Zero();
  Vec3 innovation = Vec3::Zero();
  LinkMetrics link;        // derived from the estimated state
  LinkMetrics truth_link;  // same quantities from the truth, for error reporting
  double gamma = 0.0;      // earth-centered angle of the estimate, rad
  double theta = 0.0;      // elevation of the estimate, rad
  double truth_gamma = 0.0;
  double truth_theta = 0.0;
  bool visible = false;  // truth_theta >= theta_min
  bool updated = false;  // measurement applied this epoch
  double clock_offset = 0.0;   // injected clock-drift TDoA deviation, s
  double tdoa_measured = 0.0;  // link.tdoa_prev + clock_offset
  double nees = 0.0;           // satellite-state NEES; NaN if cov singular
};

struct ScenarioSummary {
  Vec3 mpe = Vec3::Zero();  // % per axis, satellite position, visible epochs
  Vec12 rmse = Vec12::Zero();
  std::vector<VisibilityWindow> windows;  // grid-resolution, truth flag runs
  double nees_mean = 0.0;
};

struct ScenarioResult {
  std::vector<EpochRecord> records;
  ScenarioSummary summary;
};

// h(truth) plus zero-mean Gaussian noise with covariance noise.R, one per
// epoch; elevation clamped to [-pi/2, pi/2]. Bit-identical for equal seeds.
std::vector<Measurement> synthesize_measurements(
    const std::vector<JointState>& truth, const std::vector<double>& times,
    const NoiseConfig& noise, std::uint64_t seed, std::uint64_t run = 0);

// Full pipeline: truth generation (RK4 + linear UE, or an external ephemeris
// when given), measurement synthesis, filtering, link metrics, summary.
// `run` selects the Monte Carlo replicate's random streams. Filter failures
// abort with NumericalError carrying the epoch index.
ScenarioResult run_scenario(const ScenarioConfig& cfg, std::uint64_t run = 0,
                            const std::vector<EphemerisRecord>* ephemeris = nullptr);

// Per-axis mean of 100*|est - truth|/|truth|; epochs with |truth_i| < 1 km
// are excluded from axis i (axis becomes NaN if nothing remains).
Vec3 mean_percentage_error(const std::vector<Vec3>& est,
                           const std::vector<Vec3>& truth);

// e' P^-1 e per epoch over the six satellite states; NaN where the covariance
// block is not invertible.
std::vector<double> nees_series(const std::vector<JointState>& est,
                                const std::vector<JointState>& truth,
                                const std::vector<Mat12>& cov);

struct MonteCarloResult {
  ScenarioResult run0;  // full records for the first replicate
  std::vector<ScenarioSummary> run_summaries;
  double nees_mc_mean = 0.0;  // mean over replicates of per-run NEES means
  Vec3 mpe_mc_mean = Vec3::Zero();
};

MonteCarloResult monte_carlo(const ScenarioConfig& cfg, int runs,
                             const std::vector<EphemerisRecord>* ephemeris = nullptr);

}  // namespace leotrack
