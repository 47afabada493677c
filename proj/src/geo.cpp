#include "leotrack/geo.hpp"

#include <cmath>

namespace leotrack {

namespace {

double clamp_unit(double x) { return std::min(1.0, std::max(-1.0, x)); }

}  // namespace

Vec3 geodetic_to_ecef(const GeodeticPosition& g, const EarthModel& m) {
  if (!std::isfinite(g.latitude) || !std::isfinite(g.longitude) ||
      !std::isfinite(g.height)) {
    throw std::domain_error("geodetic_to_ecef: non-finite input");
  }
  const double a = m.equatorial_radius;
  const double b = m.polar_radius;
  const double sphi = std::sin(g.latitude);
  const double cphi = std::cos(g.latitude);
  // Prime-vertical radius of curvature.
  const double n = a * a / std::sqrt(a * a * cphi * cphi + b * b * sphi * sphi);
  const double x = (n + g.height) * cphi * std::cos(g.longitude);
  const double y = (n + g.height) * cphi * std::sin(g.longitude);
  const double z = (b * b / (a * a) * n + g.height) * sphi;
  return Vec3(x, y, z);
}

double earth_centered_angle(const Vec3& p_u, const Vec3& p_l) {
  const double nu = p_u.norm();
  const double nl = p_l.norm();
  if (nu == 0.0 || nl == 0.0) {
    throw std::domain_error("earth_centered_angle: zero-magnitude vector");
  }
  return std::acos(clamp_unit(p_u.dot(p_l) / (nu * nl)));
}

double elevation_angle(const Vec3& p_l, const Vec3& p_u) {
  const double nu = p_u.norm();
  if (nu == 0.0) {
    throw std::domain_error("elevation_angle: UE at the earth center");
  }
  const Vec3 rel = p_l - p_u;
  const double d = rel.norm();
  if (d == 0.0) {
    throw std::domain_error("elevation_angle: coincident positions");
  }
  return std::asin(clamp_unit(rel.dot(p_u / nu) / d));
}

double slant_range(const Vec3& p_l, const Vec3& p_u) { return (p_l - p_u).norm(); }

double slant_range_from_gamma(double gamma, double r_l, const EarthModel& m) {
  const double re = m.equatorial_radius;
  if (r_l < re) {
    throw std::domain_error("slant_range_from_gamma: satellite radius below surface");
  }
  return std::sqrt(re * re + r_l * r_l - 2.0 * re * r_l * std::cos(gamma));
}

}  // namespace leotrack
