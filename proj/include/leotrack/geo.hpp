#pragma once

#include "leotrack/types.hpp"

namespace leotrack {

// Geodetic -> geocentric cartesian. Full ellipsoidal form; with a spherical
// model the result magnitude is exactly radius + height.
Vec3 geodetic_to_ecef(const GeodeticPosition& g, const EarthModel& m = {});

// Angle at the earth center between the two position vectors, in [0, pi].
double earth_centered_angle(const Vec3& p_u, const Vec3& p_l);

// Satellite elevation above the UE's local horizon plane, in [-pi/2, pi/2].
double elevation_angle(const Vec3& p_l, const Vec3& p_u);

// Euclidean satellite-UE distance.
double slant_range(const Vec3& p_l, const Vec3& p_u);

// Cosine-law slant range for a surface UE given the earth-centered angle and
// the satellite's geocentric radius.
double slant_range_from_gamma(double gamma, double r_l, const EarthModel& m = {});

}  // namespace leotrack
