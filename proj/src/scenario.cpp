#include "leotrack/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "leotrack/dynamics.hpp"
#include "leotrack/geo.hpp"
#include "leotrack/rng.hpp"

namespace leotrack {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) {
    throw ConfigError(std::string(what) + ": covariance eigensolve failed");
  }
  if (es.eigenvalues().minCoeff() < -1e-9) {
    throw ConfigError(std::string(what) + ": covariance not positive semidefinite");
  }
  return es.eigenvectors() *
         es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

int epoch_count(double t0, double t1, double dt) {
  return static_cast<int>(std::floor((t1 - t0) / dt + 1e-9)) + 1;
}

std::vector<double> epoch_times(const ScenarioConfig& cfg) {
  const int n = epoch_count(cfg.t0, cfg.t1, cfg.dt);
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k) t[k] = cfg.t0 + k * cfg.dt;
  return t;
}

// RK4/linear deterministic backbone, optionally with additive per-step noise
// drawn from the process covariance.
std::vector<JointState> build_truth(const ScenarioConfig& cfg, std::uint64_t run,
                                    const std::vector<EphemerisRecord>* eph,
                                    const std::vector<double>& times) {
  const int n = static_cast<int>(times.size());
  std::vector<JointState> truth(n);

  JointState x;
  x.ue_pos = geodetic_to_ecef(cfg.ue_start, cfg.earth);
  x.ue_vel = cfg.ue_velocity;
  if (eph != nullptr) {
    const SatState s = interpolate_ephemeris(*eph, times[0]);
    x.sat_pos = s.pos;
    x.sat_vel = s.vel;
  } else {
    const SatState s = truth_orbit_state(cfg.orbit, times[0], cfg.earth);
    x.sat_pos = s.pos;
    x.sat_vel = s.vel;
  }

  // An external ephemeris *is* the truth; noise only applies to the synthetic
  // generator.
  const bool noisy = cfg.truth_process_noise && eph == nullptr;
  Rng pn = Rng::stream(cfg.seed, Rng::kProcessNoise, run);
  Mat12 lq = Mat12::Zero();
  if (noisy) lq = psd_sqrt(cfg.noise.Q, "noise.Q");

  for (int k = 0; k < n; ++k) {
    truth[k] = x;
    if (k + 1 >= n) break;
    if (eph != nullptr) {
      const SatState s = interpolate_ephemeris(*eph, times[k + 1]);
      x.sat_pos = s.pos;
      x.sat_vel = s.vel;
    } else {
      SatState s{x.sat_pos, x.sat_vel};
      s = truth_orbit_step_rk4(s, cfg.dt, cfg.earth);
      x.sat_pos = s.pos;
      x.sat_vel = s.vel;
    }
    x.ue_pos += x.ue_vel * cfg.dt;
    if (noisy) {
      Vec12 z;
      for (int i = 0; i < 12; ++i) z[i] = pn.normal();
      x = JointState::from_vector(x.to_vector() + lq * z);
    }
  }
  return truth;
}

double clamp_elevation(double th) {
  return std::clamp(th, -0.5 * constants::kPi, 0.5 * constants::kPi);
}

std::vector<VisibilityWindow> windows_from_flags(
    const std::vector<double>& times, const std::vector<double>& truth_theta,
    const std::vector<char>& visible) {
  std::vector<VisibilityWindow> out;
  const int n = static_cast<int>(times.size());
  int k = 0;
  while (k < n) {
    if (!visible[k]) {
      ++k;
      continue;
    }
    int j = k;
    int peak = k;
    while (j < n && visible[j]) {
      if (truth_theta[j] > truth_theta[peak]) peak = j;
      ++j;
    }
    VisibilityWindow w;
    w.t_start = times[k];
    w.t_end = times[j - 1];
    w.theta_max = truth_theta[peak];
    w.t_theta_max = times[peak];
    out.push_back(w);
    k = j;
  }
  return out;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("config: dt must be positive");
  if (!(t1 > t0)) throw ConfigError("config: t1 must exceed t0");
  if (!(f_T > 0.0)) throw ConfigError("config: f_T must be positive");
  if (!(c_kms > 0.0)) throw ConfigError("config: c_kms must be positive");
  if (!(orbit.altitude > 0.0)) throw ConfigError("config: orbit.altitude must be positive");
  if (!(earth.equatorial_radius > 0.0) || !(earth.polar_radius > 0.0)) {
    throw ConfigError("config: earth radii must be positive");
  }
  if (!(earth.mu > 0.0)) throw ConfigError("config: earth.mu must be positive");
  if (std::abs(ue_start.latitude) > 0.5 * constants::kPi) {
    throw ConfigError("config: ue_start.latitude out of [-pi/2, pi/2]");
  }
  if (std::abs(clock.eps1) >= 1e-3 || std::abs(clock.eps2) >= 1e-3) {
    throw ConfigError("config: clock rates must satisfy |eps| < 1e-3");
  }
  if (!(direct_position_sigma_km > 0.0)) {
    throw ConfigError("config: direct_position_sigma_km must be positive");
  }
  if (std::abs(theta_min) > 0.5 * constants::kPi) {
    throw ConfigError("config: theta_min out of [-pi/2, pi/2]");
  }
  if ((noise.Q - noise.Q.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw ConfigError("config: noise.Q must be symmetric");
  }
  if ((noise.R - noise.R.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw ConfigError("config: noise.R must be symmetric");
  }
  psd_sqrt(noise.Q, "config: noise.Q");
  psd_sqrt(noise.R, "config: noise.R");
}

ScenarioConfig default_scenario_config() {
  ScenarioConfig cfg;
  cfg.orbit.altitude = 375.0;
  cfg.orbit.inclination = deg2rad(55.0);
  // A pass whose ground track culminates ~1.2 deg north of the UE at t = 10 s:
  // high peak elevation (~71 deg) without the ill-conditioned zenith geometry.
  cfg.orbit.raan = deg2rad(-54.324329154459953);
  cfg.orbit.phase = deg2rad(68.674025158465469);
  cfg.ue_start.latitude = deg2rad(48.8566);   // Paris
  cfg.ue_start.longitude = deg2rad(2.3522);
  cfg.ue_start.height = 0.0;
  // 306.77 m/s due east at the start longitude.
  cfg.ue_velocity = 0.30677 * Vec3(-std::sin(cfg.ue_start.longitude),
                                   std::cos(cfg.ue_start.longitude), 0.0);
  cfg.noise.Q = Mat12::Zero();
  for (int i : {3, 4, 5, 9, 10, 11}) cfg.noise.Q(i, i) = 1e-4;
  cfg.noise.R = Mat2::Zero();
  cfg.noise.R(0, 0) = 0.1 * 0.1;
  cfg.noise.R(1, 1) = 1e-3 * 1e-3;
  return cfg;
}

Mat12 initial_belief_covariance() {
  Vec12 d;
  d << 1.0, 1.0, 1.0, 1e-2, 1e-2, 1e-2, 1e-2, 1e-2, 1e-2, 1e-4, 1e-4, 1e-4;
  return d.asDiagonal();
}

std::vector<Measurement> synthesize_measurements(
    const std::vector<JointState>& truth, const std::vector<double>& times,
    const NoiseConfig& noise, std::uint64_t seed, std::uint64_t run) {
  if (truth.size() != times.size()) {
    throw std::domain_error("synthesize_measurements: truth/times size mismatch");
  }
  const Eigen::MatrixXd lr = psd_sqrt(noise.R, "noise.R");
  Rng mr = Rng::stream(seed, Rng::kMeasurementNoise, run);

  std::vector<Measurement> out(truth.size());
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const Measurement ideal = measurement_model(truth[k]);
    Eigen::Vector2d z;
    z << mr.normal(), mr.normal();
    const Eigen::Vector2d e = lr * z;
    out[k].time = times[k];
    out[k].range = ideal.range + e(0);
    out[k].elevation = clamp_elevation(ideal.elevation + e(1));
  }
  return out;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, std::uint64_t run,
                            const std::vector<EphemerisRecord>* ephemeris) {
  cfg.validate();
  if (ephemeris != nullptr) {
    if (ephemeris->empty()) throw ConfigError("ephemeris: no records");
    if (ephemeris->front().time > cfg.t0 || ephemeris->back().time < cfg.t1) {
      throw ConfigError("ephemeris: does not cover the scenario span [t0, t1]");
    }
  }

  const std::vector<double> times = epoch_times(cfg);
  const int n = static_cast<int>(times.size());
  const std::vector<JointState> truth = build_truth(cfg, run, ephemeris, times);

  // Truth-side geometry drives visibility (and hence gating).
  std::vector<double> truth_theta(n);
  std::vector<char> visible(n);
  for (int k = 0; k < n; ++k) {
    truth_theta[k] = elevation_angle(truth[k].sat_pos, truth[k].ue_pos);
    visible[k] = truth_theta[k] >= cfg.theta_min ? 1 : 0;
  }

  const bool direct = cfg.measurement_mode == MeasurementMode::kDirectPosition;
  std::vector<Measurement> meas;
  std::vector<Vec3> meas_direct;
  if (direct) {
    Rng mr = Rng::stream(cfg.seed, Rng::kMeasurementNoise, run);
    meas_direct.resize(n);
    for (int k = 0; k < n; ++k) {
      Vec3 z(mr.normal(), mr.normal(), mr.normal());
      meas_direct[k] = truth[k].sat_pos + cfg.direct_position_sigma_km * z;
    }
  } else {
    meas = synthesize_measurements(truth, times, cfg.noise, cfg.seed, run);
  }
  const Eigen::Matrix3d r_direct =
      cfg.direct_position_sigma_km * cfg.direct_position_sigma_km *
      Eigen::Matrix3d::Identity();

  // Initial belief: truth perturbed by the documented prior covariance.
  GaussianBelief b;
  b.cov = initial_belief_covariance();
  {
    Rng ir = Rng::stream(cfg.seed, Rng::kInitialBelief, run);
    const Eigen::MatrixXd lp = psd_sqrt(b.cov, "initial covariance");
    Vec12 z;
    for (int i = 0; i < 12; ++i) z[i] = ir.normal();
    b.mean = JointState::from_vector(truth[0].to_vector() + lp * z);
  }

  ScenarioResult res;
  res.records.resize(n);
  std::vector<JointState> est(n);
  std::vector<Mat12> covs(n);

  double prev_d_est = 0.0, prev_d_truth = 0.0;
  for (int k = 0; k < n; ++k) {
    EpochRecord& rec = res.records[k];
    rec.time = times[k];
    rec.truth = truth[k];
    rec.visible = visible[k] != 0;

    try {
      if (k > 0) b = predict(b, cfg.dt, cfg.noise.Q, cfg.earth);
      if (!cfg.gate_updates_to_visibility || rec.visible) {
        if (direct) {
          auto [post, innov] =
              update_direct_position(b, meas_direct[k], r_direct);
          b = post;
          rec.innovation = innov;
        } else {
          auto [post, innov] = update(b, meas[k], cfg.noise.R);
          b = post;
          rec.innovation.head<2>() = innov;
        }
        rec.updated = true;
      }
    } catch (const NumericalError& e) {
      throw NumericalError("scenario aborted at epoch " + std::to_string(k) +
                           " (t=" + std::to_string(times[k]) + "): " + e.what());
    }

    if (direct) {
      rec.measurement = meas_direct[k];
    } else {
      rec.measurement.head<2>() << meas[k].range, meas[k].elevation;
    }

    rec.estimate = b.mean;
    rec.cov_diag = b.cov.diagonal();
    est[k] = b.mean;
    covs[k] = b.cov;

    // Link quantities from the estimate (primary) and from the truth
    // (reference series for error reporting).
    const double d_est = slant_range(b.mean.sat_pos, b.mean.ue_pos);
    const double d_truth = slant_range(truth[k].sat_pos, truth[k].ue_pos);
    rec.link.time = times[k];
    rec.link.ta = timing_advance(d_est, cfg.c_kms);
    rec.link.doppler = doppler_shift(b.mean, cfg.f_T, cfg.c_kms);
    {
      const Vec3 rel = b.mean.sat_pos - b.mean.ue_pos;
      rec.link.range_rate = rel.dot(b.mean.sat_vel - b.mean.ue_vel) / d_est;
    }
    rec.truth_link.time = times[k];
    rec.truth_link.ta = timing_advance(d_truth, cfg.c_kms);
    rec.truth_link.doppler = doppler_shift(truth[k], cfg.f_T, cfg.c_kms);
    {
      const Vec3 rel = truth[k].sat_pos - truth[k].ue_pos;
      rec.truth_link.range_rate =
          rel.dot(truth[k].sat_vel - truth[k].ue_vel) / d_truth;
    }
    if (k > 0) {
      rec.link.tdoa_prev = tdoa(prev_d_est, d_est, cfg.c_kms);
      rec.truth_link.tdoa_prev = tdoa(prev_d_truth, d_truth, cfg.c_kms);
      if (cfg.clock.enabled() && times[k - 1] >= 0.0) {
        rec.clock_offset = clock_drift(times[k - 1], times[k], cfg.clock);
      }
    }
    rec.tdoa_measured = rec.link.tdoa_prev + rec.clock_offset;
    prev_d_est = d_est;
    prev_d_truth = d_truth;

    rec.gamma = earth_centered_angle(b.mean.ue_pos, b.mean.sat_pos);
    rec.theta = elevation_angle(b.mean.sat_pos, b.mean.ue_pos);
    rec.truth_gamma = earth_centered_angle(truth[k].ue_pos, truth[k].sat_pos);
    rec.truth_theta = truth_theta[k];
  }

  // Consistency statistic and summary.
  const std::vector<double> nees = nees_series(est, truth, covs);
  double nees_acc = 0.0;
  int nees_n = 0;
  for (int k = 0; k < n; ++k) {
    res.records[k].nees = nees[k];
    if (std::isfinite(nees[k])) {
      nees_acc += nees[k];
      ++nees_n;
    }
  }
  res.summary.nees_mean = nees_n > 0 ? nees_acc / nees_n : kNaN;

  std::vector<Vec3> est_pos, truth_pos;
  for (int k = 0; k < n; ++k) {
    if (!visible[k]) continue;
    est_pos.push_back(est[k].sat_pos);
    truth_pos.push_back(truth[k].sat_pos);
  }
  res.summary.mpe = est_pos.empty() ? Vec3::Constant(kNaN).eval()
                                    : mean_percentage_error(est_pos, truth_pos);

  Vec12 se = Vec12::Zero();
  for (int k = 0; k < n; ++k) {
    const Vec12 e = est[k].to_vector() - truth[k].to_vector();
    se += e.cwiseProduct(e);
  }
  res.summary.rmse = (se / n).cwiseSqrt();

  res.summary.windows = windows_from_flags(times, truth_theta, visible);
  return res;
}

Vec3 mean_percentage_error(const std::vector<Vec3>& est,
                           const std::vector<Vec3>& truth) {
  if (est.empty()) throw std::domain_error("mean_percentage_error: empty series");
  if (est.size() != truth.size()) {
    throw std::domain_error("mean_percentage_error: length mismatch");
  }
  Vec3 acc = Vec3::Zero();
  Eigen::Vector3i cnt = Eigen::Vector3i::Zero();
  for (std::size_t k = 0; k < est.size(); ++k) {
    for (int ax = 0; ax < 3; ++ax) {
      const double t = truth[k][ax];
      if (std::abs(t) < 1.0) continue;  // division guard
      acc[ax] += 100.0 * std::abs(est[k][ax] - t) / std::abs(t);
      cnt[ax] += 1;
    }
  }
  Vec3 out;
  for (int ax = 0; ax < 3; ++ax) {
    out[ax] = cnt[ax] > 0 ? acc[ax] / cnt[ax] : kNaN;
  }
  return out;
}

std::vector<double> nees_series(const std::vector<JointState>& est,
                                const std::vector<JointState>& truth,
                                const std::vector<Mat12>& cov) {
  if (est.size() != truth.size() || est.size() != cov.size()) {
    throw std::domain_error("nees_series: length mismatch");
  }
  std::vector<double> out(est.size(), kNaN);
  for (std::size_t k = 0; k < est.size(); ++k) {
    const Eigen::Matrix<double, 6, 1> e =
        (est[k].to_vector() - truth[k].to_vector()).head<6>();
    const Eigen::Matrix<double, 6, 6> p = cov[k].topLeftCorner<6, 6>();
    Eigen::LLT<Eigen::Matrix<double, 6, 6>> llt(p);
    if (llt.info() != Eigen::Success) continue;  // flagged, excluded from means
    out[k] = e.dot(llt.solve(e));
  }
  return out;
}

MonteCarloResult monte_carlo(const ScenarioConfig& cfg, int runs,
                             const std::vector<EphemerisRecord>* ephemeris) {
  if (runs < 1) throw ConfigError("monte_carlo: runs must be >= 1");
  MonteCarloResult out;
  double nees_acc = 0.0;
  int nees_n = 0;
  Vec3 mpe_acc = Vec3::Zero();
  Eigen::Vector3i mpe_n = Eigen::Vector3i::Zero();
  for (int r = 0; r < runs; ++r) {
    ScenarioResult res = run_scenario(cfg, static_cast<std::uint64_t>(r), ephemeris);
    if (std::isfinite(res.summary.nees_mean)) {
      nees_acc += res.summary.nees_mean;
      ++nees_n;
    }
    for (int ax = 0; ax < 3; ++ax) {
      if (std::isfinite(res.summary.mpe[ax])) {
        mpe_acc[ax] += res.summary.mpe[ax];
        mpe_n[ax] += 1;
      }
    }
    out.run_summaries.push_back(res.summary);
    if (r == 0) out.run0 = std::move(res);
  }
  out.nees_mc_mean = nees_n > 0 ? nees_acc / nees_n : kNaN;
  for (int ax = 0; ax < 3; ++ax) {
    out.mpe_mc_mean[ax] = mpe_n[ax] > 0 ? mpe_acc[ax] / mpe_n[ax] : kNaN;
  }
  return out;
}

}  // namespace leotrack
