#include "leotrack/dynamics.hpp"

#include <cmath>

namespace leotrack {

Vec3 gravitational_acceleration(const Vec3& p_l, const EarthModel& m) {
  const double r = p_l.norm();
  if (r == 0.0) {
    throw std::domain_error("gravitational_acceleration: zero position vector");
  }
  return -m.mu / (r * r * r) * p_l;
}

JointState propagate_joint(const JointState& x, double dt, const EarthModel& m) {
  JointState out;
  out.sat_pos = x.sat_pos + x.sat_vel * dt;
  out.sat_vel = x.sat_vel + gravitational_acceleration(x.sat_pos, m) * dt;
  out.ue_pos = x.ue_pos + x.ue_vel * dt;
  out.ue_vel = x.ue_vel;
  return out;
}

Mat12 motion_jacobian(const JointState& x, double dt, const EarthModel& m) {
  const double r2 = x.sat_pos.squaredNorm();
  if (r2 == 0.0) {
    throw std::domain_error("motion_jacobian: zero satellite position");
  }
  const double r = std::sqrt(r2);
  const double r5 = r2 * r2 * r;
  // d(gravity)/d(pos): symmetric, trace-free.
  const Eigen::Matrix3d a =
      (-m.mu / r5) *
      (r2 * Eigen::Matrix3d::Identity() - 3.0 * x.sat_pos * x.sat_pos.transpose());

  Mat12 f = Mat12::Identity();
  f.block<3, 3>(0, 3) = dt * Eigen::Matrix3d::Identity();
  f.block<3, 3>(3, 0) = a * dt;
  f.block<3, 3>(6, 9) = dt * Eigen::Matrix3d::Identity();
  return f;
}

double mean_motion(const OrbitElements& el, const EarthModel& m) {
  const double r = m.equatorial_radius + el.altitude;
  return std::sqrt(m.mu / (r * r * r));
}

SatState truth_orbit_state(const OrbitElements& el, double t, const EarthModel& m) {
  const double r = m.equatorial_radius + el.altitude;
  const double n = mean_motion(el, m);
  const double u = el.phase + n * t;

  const Vec3 in_plane_pos(r * std::cos(u), r * std::sin(u), 0.0);
  const Vec3 in_plane_vel(-r * n * std::sin(u), r * n * std::cos(u), 0.0);

  const double co = std::cos(el.raan), so = std::sin(el.raan);
  const double ci = std::cos(el.inclination), si = std::sin(el.inclination);
  Eigen::Matrix3d rot;
  rot << co, -so * ci, so * si,
         so, co * ci, -co * si,
         0.0, si, ci;

  SatState s;
  s.pos = rot * in_plane_pos;
  s.vel = rot * in_plane_vel;
  return s;
}

SatState truth_orbit_step_rk4(const SatState& s, double dt, const EarthModel& m) {
  const Vec3 k1p = s.vel;
  const Vec3 k1v = gravitational_acceleration(s.pos, m);
  const Vec3 k2p = s.vel + 0.5 * dt * k1v;
  const Vec3 k2v = gravitational_acceleration(s.pos + 0.5 * dt * k1p, m);
  const Vec3 k3p = s.vel + 0.5 * dt * k2v;
  const Vec3 k3v = gravitational_acceleration(s.pos + 0.5 * dt * k2p, m);
  const Vec3 k4p = s.vel + dt * k3v;
  const Vec3 k4v = gravitational_acceleration(s.pos + dt * k3p, m);

  SatState out;
  out.pos = s.pos + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  out.vel = s.vel + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  return out;
}

}  // namespace leotrack
