#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace leotrack {

using Vec3 = Eigen::Vector3d;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat12 = Eigen::Matrix<double, 12, 12>;
using Mat2 = Eigen::Matrix2d;

// Thrown for malformed configuration / input files; maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when filter linear algebra becomes untrustworthy (singular or
// ill-conditioned innovation covariance); maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Latitude/longitude in radians, height in km above the surface.
struct GeodeticPosition {
  double latitude = 0.0;
  double longitude = 0.0;
  double height = 0.0;
};

// Spherical by default; the transform also accepts an oblate ellipsoid.
struct EarthModel {
  double equatorial_radius = 6371.0;  // km
  double polar_radius = 6371.0;       // km
  double mu = 398600.4418;            // km^3/s^2

  bool spherical() const { return equatorial_radius == polar_radius; }
};

struct SatState {
  Vec3 pos = Vec3::Zero();  // km
  Vec3 vel = Vec3::Zero();  // km/s
};

// Joint satellite + user state, flattened as [sat_pos sat_vel ue_pos ue_vel].
struct JointState {
  Vec3 sat_pos = Vec3::Zero();
  Vec3 sat_vel = Vec3::Zero();
  Vec3 ue_pos = Vec3::Zero();
  Vec3 ue_vel = Vec3::Zero();

  Vec12 to_vector() const {
    Vec12 v;
    v << sat_pos, sat_vel, ue_pos, ue_vel;
    return v;
  }

  static JointState from_vector(const Vec12& v) {
    JointState s;
    s.sat_pos = v.segment<3>(0);
    s.sat_vel = v.segment<3>(3);
    s.ue_pos = v.segment<3>(6);
    s.ue_vel = v.segment<3>(9);
    return s;
  }
};

// Circular-orbit parameters for the synthetic truth generator.
struct OrbitElements {
  double altitude = 375.0;    // km above the surface
  double inclination = 0.0;   // rad
  double raan = 0.0;          // rad, right ascension of ascending node
  double phase = 0.0;         // rad, argument of latitude at t = 0
};

namespace constants {
inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kDefaultSpeedOfLight = 3.0e5;  // km/s
}  // namespace constants

inline double deg2rad(double d) { return d * constants::kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / constants::kPi; }

}  // namespace leotrack
