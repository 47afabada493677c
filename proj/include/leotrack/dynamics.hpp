#pragma once

#include "leotrack/types.hpp"

namespace leotrack {

// Two-body gravitational acceleration at position p_l.
Vec3 gravitational_acceleration(const Vec3& p_l, const EarthModel& m = {});

// One Euler step of the joint motion model: satellite under gravity,
// UE at constant velocity. This is the filter's process model; no noise.
JointState propagate_joint(const JointState& x, double dt, const EarthModel& m = {});

// Jacobian of propagate_joint with respect to the 12-vector state.
Mat12 motion_jacobian(const JointState& x, double dt, const EarthModel& m = {});

// Analytic circular orbit used as simulation ground truth.
SatState truth_orbit_state(const OrbitElements& el, double t, const EarthModel& m = {});

// Classical RK4 step of pdot = v, vdot = gravity(p).
SatState truth_orbit_step_rk4(const SatState& s, double dt, const EarthModel& m = {});

// Mean motion n = sqrt(mu / r^3) for a circular orbit at the element altitude.
double mean_motion(const OrbitElements& el, const EarthModel& m = {});

}  // namespace leotrack
