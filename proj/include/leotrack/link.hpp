#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "leotrack/types.hpp"

namespace leotrack {

// Link-layer quantities at one epoch. Angles in radians, times in seconds,
// frequencies in Hz, distances in km.
struct LinkMetrics {
  double time = 0.0;
  double ta = 0.0;          // round-trip timing advance, s
  double doppler = 0.0;     // carrier shift, Hz; positive when approaching
  double range_rate = 0.0;  // km/s
  double tdoa_prev = 0.0;   // arrival-time difference vs previous epoch, s
};

// Two-clock error model: eps1 is the offset rate accumulated up to the first
// reference time, eps2 the drift rate at the second.
struct ClockModel {
  double eps1 = 0.0;
  double eps2 = 0.0;

  bool enabled() const { return eps1 != 0.0 || eps2 != 0.0; }
};

struct VisibilityWindow {
  double t_start = 0.0;
  double t_end = 0.0;
  double theta_max = 0.0;  // rad
  double t_theta_max = 0.0;
};

// TA = 2 d / c (round trip). d >= 0 and c > 0 required.
double timing_advance(double d, double c);

// Carrier shift from the line-of-sight range rate of the joint state:
// doppler = -f_T * d_dot / c. Approaching geometry (negative range rate)
// gives a positive shift.
double doppler_shift(const JointState& x, double f_T, double c);

// Signed arrival-time difference between two epochs: (d_t1 - d_t) / c.
double tdoa(double d_t, double d_t1, double c);

// Clock-induced TDoA deviation t12*eps2 - t11*eps1. Requires t12 > t11 >= 0.
double clock_drift(double t11, double t12, const ClockModel& clk);

// Least-squares line through (t, drift) samples; returns (alpha, beta) with
// drift ~= alpha*t + beta. Needs at least two distinct times.
std::pair<double, double> fit_clock_drift(
    const std::vector<std::pair<double, double>>& samples);

// Maximal intervals of theta(t) >= theta_min for a Keplerian orbit against a
// UE trajectory, scanned on a dt grid with boundaries refined by bisection to
// 1 ms. theta_max is located by golden-section refinement inside each window.
std::vector<VisibilityWindow> visibility_windows(
    const OrbitElements& orbit, const std::function<Vec3(double)>& ue_traj,
    double theta_min, double t0, double t1, double dt,
    const EarthModel& earth = {});

}  // namespace leotrack
