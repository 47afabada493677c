#pragma once

#include <string>
#include <vector>

#include "leotrack/types.hpp"

namespace leotrack {

// One row of an external trajectory table. Units: s, km, km/s, km/s^2.
struct EphemerisRecord {
  double time = 0.0;
  Vec3 pos = Vec3::Zero();
  Vec3 vel = Vec3::Zero();
  Vec3 acc = Vec3::Zero();
  bool has_acc = false;
};

// Strict CSV reader. Expected header: time,px,py,pz,vx,vy,vz with optional
// trailing ax,ay,az. Throws ConfigError naming the offending row for malformed
// fields, non-increasing time, or positions at/below the surface.
std::vector<EphemerisRecord> load_ephemeris(const std::string& path,
                                            const EarthModel& earth = {});

// Piecewise-linear position/velocity at time t; t must lie inside the table's
// span (std::domain_error otherwise).
SatState interpolate_ephemeris(const std::vector<EphemerisRecord>& table,
                               double t);

// Writes records in the same CSV dialect load_ephemeris reads.
void save_ephemeris(const std::string& path,
                    const std::vector<EphemerisRecord>& records);

}  // namespace leotrack
