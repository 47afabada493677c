#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "leotrack/config.hpp"
#include "leotrack/dynamics.hpp"
#include "leotrack/ephemeris.hpp"
#include "leotrack/estimator.hpp"
#include "leotrack/geo.hpp"
#include "leotrack/link.hpp"
#include "leotrack/results_io.hpp"
#include "leotrack/scenario.hpp"

namespace py = pybind11;
using namespace leotrack;

namespace {

// Flatten per-epoch records into numpy-friendly arrays.
py::dict result_to_dict(const ScenarioResult& res) {
  const int n = static_cast<int>(res.records.size());
  Eigen::VectorXd time(n), nees(n), theta(n), gamma(n), truth_theta(n),
      truth_gamma(n), ta(n), doppler(n), tdoa_prev(n), tdoa_measured(n),
      clock_offset(n), truth_ta(n), truth_doppler(n), truth_tdoa(n);
  Eigen::MatrixXd truth(n, 12), estimate(n, 12), cov_diag(n, 12),
      measurement(n, 3), innovation(n, 3);
  Eigen::VectorXi visible(n), updated(n);
  for (int k = 0; k < n; ++k) {
    const EpochRecord& r = res.records[k];
    time[k] = r.time;
    truth.row(k) = r.truth.to_vector().transpose();
    estimate.row(k) = r.estimate.to_vector().transpose();
    cov_diag.row(k) = r.cov_diag.transpose();
    measurement.row(k) = r.measurement.transpose();
    innovation.row(k) = r.innovation.transpose();
    nees[k] = r.nees;
    theta[k] = r.theta;
    gamma[k] = r.gamma;
    truth_theta[k] = r.truth_theta;
    truth_gamma[k] = r.truth_gamma;
    ta[k] = r.link.ta;
    doppler[k] = r.link.doppler;
    tdoa_prev[k] = r.link.tdoa_prev;
    tdoa_measured[k] = r.tdoa_measured;
    clock_offset[k] = r.clock_offset;
    truth_ta[k] = r.truth_link.ta;
    truth_doppler[k] = r.truth_link.doppler;
    truth_tdoa[k] = r.truth_link.tdoa_prev;
    visible[k] = r.visible ? 1 : 0;
    updated[k] = r.updated ? 1 : 0;
  }
  py::list windows;
  for (const auto& w : res.summary.windows) {
    windows.append(py::make_tuple(w.t_start, w.t_end, w.theta_max, w.t_theta_max));
  }
  py::dict d;
  d["time"] = time;
  d["truth"] = truth;
  d["estimate"] = estimate;
  d["cov_diag"] = cov_diag;
  d["measurement"] = measurement;
  d["innovation"] = innovation;
  d["nees"] = nees;
  d["theta"] = theta;
  d["gamma"] = gamma;
  d["truth_theta"] = truth_theta;
  d["truth_gamma"] = truth_gamma;
  d["ta"] = ta;
  d["doppler"] = doppler;
  d["tdoa"] = tdoa_prev;
  d["tdoa_measured"] = tdoa_measured;
  d["clock_offset"] = clock_offset;
  d["truth_ta"] = truth_ta;
  d["truth_doppler"] = truth_doppler;
  d["truth_tdoa"] = truth_tdoa;
  d["visible"] = visible;
  d["updated"] = updated;
  d["mpe_percent"] = res.summary.mpe;
  d["rmse"] = res.summary.rmse;
  d["nees_mean"] = res.summary.nees_mean;
  d["windows"] = windows;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "LEO satellite / UE joint state estimation core";
  m.attr("__version__") = LEOTRACK_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<GeodeticPosition>(m, "GeodeticPosition")
      .def(py::init<>())
      .def(py::init([](double lat, double lon, double h) {
             return GeodeticPosition{lat, lon, h};
           }),
           py::arg("latitude"), py::arg("longitude"), py::arg("height") = 0.0)
      .def_readwrite("latitude", &GeodeticPosition::latitude)
      .def_readwrite("longitude", &GeodeticPosition::longitude)
      .def_readwrite("height", &GeodeticPosition::height);

  py::class_<EarthModel>(m, "EarthModel")
      .def(py::init<>())
      .def_readwrite("equatorial_radius", &EarthModel::equatorial_radius)
      .def_readwrite("polar_radius", &EarthModel::polar_radius)
      .def_readwrite("mu", &EarthModel::mu)
      .def("spherical", &EarthModel::spherical);

  py::class_<SatState>(m, "SatState")
      .def(py::init<>())
      .def_readwrite("pos", &SatState::pos)
      .def_readwrite("vel", &SatState::vel);

  py::class_<JointState>(m, "JointState")
      .def(py::init<>())
      .def_readwrite("sat_pos", &JointState::sat_pos)
      .def_readwrite("sat_vel", &JointState::sat_vel)
      .def_readwrite("ue_pos", &JointState::ue_pos)
      .def_readwrite("ue_vel", &JointState::ue_vel)
      .def("to_vector", &JointState::to_vector)
      .def_static("from_vector", &JointState::from_vector);

  py::class_<OrbitElements>(m, "OrbitElements")
      .def(py::init<>())
      .def_readwrite("altitude", &OrbitElements::altitude)
      .def_readwrite("inclination", &OrbitElements::inclination)
      .def_readwrite("raan", &OrbitElements::raan)
      .def_readwrite("phase", &OrbitElements::phase);

  // Geometry
  m.def("geodetic_to_ecef", &geodetic_to_ecef, py::arg("g"),
        py::arg("earth") = EarthModel{});
  m.def("earth_centered_angle", &earth_centered_angle, py::arg("p_u"), py::arg("p_l"));
  m.def("elevation_angle", &elevation_angle, py::arg("p_l"), py::arg("p_u"));
  m.def("slant_range", &slant_range, py::arg("p_l"), py::arg("p_u"));
  m.def("slant_range_from_gamma", &slant_range_from_gamma, py::arg("gamma"),
        py::arg("r_l"), py::arg("earth") = EarthModel{});

  // Dynamics
  m.def("gravitational_acceleration", &gravitational_acceleration, py::arg("p_l"),
        py::arg("earth") = EarthModel{});
  m.def("propagate_joint", &propagate_joint, py::arg("x"), py::arg("dt"),
        py::arg("earth") = EarthModel{});
  m.def("motion_jacobian", &motion_jacobian, py::arg("x"), py::arg("dt"),
        py::arg("earth") = EarthModel{});
  m.def("truth_orbit_state", &truth_orbit_state, py::arg("elements"), py::arg("t"),
        py::arg("earth") = EarthModel{});
  m.def("truth_orbit_step_rk4", &truth_orbit_step_rk4, py::arg("state"),
        py::arg("dt"), py::arg("earth") = EarthModel{});
  m.def("mean_motion", &mean_motion, py::arg("elements"), py::arg("earth") = EarthModel{});

  // Estimator
  py::class_<GaussianBelief>(m, "GaussianBelief")
      .def(py::init<>())
      .def_readwrite("mean", &GaussianBelief::mean)
      .def_readwrite("cov", &GaussianBelief::cov);

  py::class_<Measurement>(m, "Measurement")
      .def(py::init<>())
      .def_readwrite("time", &Measurement::time)
      .def_readwrite("range", &Measurement::range)
      .def_readwrite("elevation", &Measurement::elevation);

  py::class_<NoiseConfig>(m, "NoiseConfig")
      .def(py::init<>())
      .def_readwrite("Q", &NoiseConfig::Q)
      .def_readwrite("R", &NoiseConfig::R);

  py::enum_<CovarianceUpdate>(m, "CovarianceUpdate")
      .value("JOSEPH", CovarianceUpdate::kJoseph)
      .value("PLAIN", CovarianceUpdate::kPlain);

  m.def("predict", &predict, py::arg("belief"), py::arg("dt"), py::arg("Q"),
        py::arg("earth") = EarthModel{});
  m.def("measurement_model", &measurement_model, py::arg("x"));
  m.def("measurement_jacobian", &measurement_jacobian, py::arg("x"));
  m.def("kalman_gain", &kalman_gain, py::arg("P_pred"), py::arg("H"), py::arg("R"));
  m.def("update", &update, py::arg("belief"), py::arg("y"), py::arg("R"),
        py::arg("form") = CovarianceUpdate::kJoseph);
  m.def("update_direct_position", &update_direct_position, py::arg("belief"),
        py::arg("y"), py::arg("R"), py::arg("form") = CovarianceUpdate::kJoseph);
  m.def("steady_state_covariance_scalar", &steady_state_covariance_scalar,
        py::arg("F"), py::arg("H"), py::arg("Q"), py::arg("R"));
  m.def("posterior_density", &posterior_density, py::arg("belief"), py::arg("x"));

  // Link
  py::class_<LinkMetrics>(m, "LinkMetrics")
      .def(py::init<>())
      .def_readwrite("time", &LinkMetrics::time)
      .def_readwrite("ta", &LinkMetrics::ta)
      .def_readwrite("doppler", &LinkMetrics::doppler)
      .def_readwrite("range_rate", &LinkMetrics::range_rate)
      .def_readwrite("tdoa_prev", &LinkMetrics::tdoa_prev);

  py::class_<ClockModel>(m, "ClockModel")
      .def(py::init<>())
      .def_readwrite("eps1", &ClockModel::eps1)
      .def_readwrite("eps2", &ClockModel::eps2);

  py::class_<VisibilityWindow>(m, "VisibilityWindow")
      .def(py::init<>())
      .def_readwrite("t_start", &VisibilityWindow::t_start)
      .def_readwrite("t_end", &VisibilityWindow::t_end)
      .def_readwrite("theta_max", &VisibilityWindow::theta_max)
      .def_readwrite("t_theta_max", &VisibilityWindow::t_theta_max);

  m.def("timing_advance", &timing_advance, py::arg("d"), py::arg("c"));
  m.def("doppler_shift", &doppler_shift, py::arg("x"), py::arg("f_T"), py::arg("c"));
  m.def("tdoa", &tdoa, py::arg("d_t"), py::arg("d_t1"), py::arg("c"));
  m.def("clock_drift", &clock_drift, py::arg("t11"), py::arg("t12"), py::arg("clock"));
  m.def("fit_clock_drift", &fit_clock_drift, py::arg("samples"));
  m.def("visibility_windows", &visibility_windows, py::arg("orbit"),
        py::arg("ue_traj"), py::arg("theta_min"), py::arg("t0"), py::arg("t1"),
        py::arg("dt"), py::arg("earth") = EarthModel{});

  // Scenario
  py::enum_<MeasurementMode>(m, "MeasurementMode")
      .value("RANGE_ELEVATION", MeasurementMode::kRangeElevation)
      .value("DIRECT_POSITION", MeasurementMode::kDirectPosition);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("orbit", &ScenarioConfig::orbit)
      .def_readwrite("ue_start", &ScenarioConfig::ue_start)
      .def_readwrite("ue_velocity", &ScenarioConfig::ue_velocity)
      .def_readwrite("earth", &ScenarioConfig::earth)
      .def_readwrite("noise", &ScenarioConfig::noise)
      .def_readwrite("clock", &ScenarioConfig::clock)
      .def_readwrite("f_T", &ScenarioConfig::f_T)
      .def_readwrite("c_kms", &ScenarioConfig::c_kms)
      .def_readwrite("dt", &ScenarioConfig::dt)
      .def_readwrite("t0", &ScenarioConfig::t0)
      .def_readwrite("t1", &ScenarioConfig::t1)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def_readwrite("theta_min", &ScenarioConfig::theta_min)
      .def_readwrite("measurement_mode", &ScenarioConfig::measurement_mode)
      .def_readwrite("direct_position_sigma_km", &ScenarioConfig::direct_position_sigma_km)
      .def_readwrite("truth_process_noise", &ScenarioConfig::truth_process_noise)
      .def_readwrite("gate_updates_to_visibility",
                     &ScenarioConfig::gate_updates_to_visibility)
      .def("validate", &ScenarioConfig::validate);

  m.def("default_scenario_config", &default_scenario_config);
  m.def("initial_belief_covariance", &initial_belief_covariance);
  m.def("synthesize_measurements", &synthesize_measurements, py::arg("truth"),
        py::arg("times"), py::arg("noise"), py::arg("seed"), py::arg("run") = 0);

  m.def(
      "run_scenario",
      [](const ScenarioConfig& cfg, std::uint64_t run) {
        return result_to_dict(run_scenario(cfg, run));
      },
      py::arg("config"), py::arg("run") = 0,
      "Run one scenario replicate; returns a dict of per-epoch arrays plus "
      "summary entries (mpe_percent, rmse, nees_mean, windows).");

  m.def(
      "monte_carlo",
      [](const ScenarioConfig& cfg, int runs) {
        const MonteCarloResult mc = monte_carlo(cfg, runs);
        Eigen::VectorXd nees(mc.run_summaries.size());
        Eigen::MatrixXd mpe(mc.run_summaries.size(), 3);
        for (std::size_t i = 0; i < mc.run_summaries.size(); ++i) {
          nees[static_cast<int>(i)] = mc.run_summaries[i].nees_mean;
          mpe.row(static_cast<int>(i)) = mc.run_summaries[i].mpe.transpose();
        }
        py::dict d;
        d["run0"] = result_to_dict(mc.run0);
        d["nees_mc_mean"] = mc.nees_mc_mean;
        d["mpe_mc_mean"] = mc.mpe_mc_mean;
        d["per_run_nees"] = nees;
        d["per_run_mpe"] = mpe;
        return d;
      },
      py::arg("config"), py::arg("runs"));

  m.def(
      "mean_percentage_error",
      [](const Eigen::MatrixXd& est, const Eigen::MatrixXd& truth) {
        if (est.cols() != 3 || truth.cols() != 3) {
          throw std::domain_error("mean_percentage_error: expect n x 3 arrays");
        }
        std::vector<Vec3> e(est.rows()), t(truth.rows());
        for (int k = 0; k < est.rows(); ++k) e[k] = est.row(k).transpose();
        for (int k = 0; k < truth.rows(); ++k) t[k] = truth.row(k).transpose();
        return mean_percentage_error(e, t);
      },
      py::arg("est"), py::arg("truth"));

  // Config / files
  m.def("load_config", &load_config, py::arg("path"));
  m.def("config_from_json_text", &config_from_json_text, py::arg("text"));
  m.def("config_to_json", &config_to_json, py::arg("config"));

  py::class_<EphemerisRecord>(m, "EphemerisRecord")
      .def(py::init<>())
      .def_readwrite("time", &EphemerisRecord::time)
      .def_readwrite("pos", &EphemerisRecord::pos)
      .def_readwrite("vel", &EphemerisRecord::vel)
      .def_readwrite("acc", &EphemerisRecord::acc)
      .def_readwrite("has_acc", &EphemerisRecord::has_acc);

  m.def("load_ephemeris", &load_ephemeris, py::arg("path"),
        py::arg("earth") = EarthModel{});
  m.def("save_ephemeris", &save_ephemeris, py::arg("path"), py::arg("records"));
  m.def(
      "track_scenario",
      [](const ScenarioConfig& cfg, const std::vector<EphemerisRecord>& eph,
         std::uint64_t run) { return result_to_dict(run_scenario(cfg, run, &eph)); },
      py::arg("config"), py::arg("ephemeris"), py::arg("run") = 0,
      "Scenario with an external trajectory as the satellite truth.");
}
