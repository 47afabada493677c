#include "leotrack/ephemeris.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "leotrack/results_io.hpp"

namespace leotrack {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_field(const std::string& path, int line_no, const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError(path + ": line " + std::to_string(line_no) +
                      ": malformed number \"" + s + "\"");
  }
  return v;
}

}  // namespace

std::vector<EphemerisRecord> load_ephemeris(const std::string& path,
                                            const EarthModel& earth) {
  std::ifstream in(path);
  if (!in) throw ConfigError("ephemeris: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
  const std::string header = trim(line);
  bool with_acc = false;
  if (header == "time,px,py,pz,vx,vy,vz") {
    with_acc = false;
  } else if (header == "time,px,py,pz,vx,vy,vz,ax,ay,az") {
    with_acc = true;
  } else {
    throw ConfigError(path + ": line 1: unexpected header \"" + header +
                      "\" (want time,px,py,pz,vx,vy,vz[,ax,ay,az])");
  }

  std::vector<EphemerisRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    const std::size_t want = with_acc ? 10 : 7;
    if (fields.size() != want) {
      throw ConfigError(path + ": line " + std::to_string(line_no) + ": expected " +
                        std::to_string(want) + " fields, got " +
                        std::to_string(fields.size()));
    }
    EphemerisRecord r;
    r.time = parse_field(path, line_no, fields[0]);
    for (int i = 0; i < 3; ++i) r.pos[i] = parse_field(path, line_no, fields[1 + i]);
    for (int i = 0; i < 3; ++i) r.vel[i] = parse_field(path, line_no, fields[4 + i]);
    if (with_acc) {
      for (int i = 0; i < 3; ++i) r.acc[i] = parse_field(path, line_no, fields[7 + i]);
      r.has_acc = true;
    }
    if (!out.empty() && r.time <= out.back().time) {
      throw ConfigError(path + ": line " + std::to_string(line_no) +
                        ": time not strictly increasing");
    }
    if (r.pos.norm() <= earth.equatorial_radius) {
      throw ConfigError(path + ": line " + std::to_string(line_no) +
                        ": position at or below the surface");
    }
    out.push_back(r);
  }
  return out;
}

SatState interpolate_ephemeris(const std::vector<EphemerisRecord>& table,
                               double t) {
  if (table.empty()) throw std::domain_error("interpolate_ephemeris: empty table");
  if (t < table.front().time || t > table.back().time) {
    throw std::domain_error("interpolate_ephemeris: time outside table span");
  }
  const auto it = std::lower_bound(
      table.begin(), table.end(), t,
      [](const EphemerisRecord& r, double v) { return r.time < v; });
  if (it->time == t) return {it->pos, it->vel};
  const EphemerisRecord& hi = *it;
  const EphemerisRecord& lo = *(it - 1);
  const double s = (t - lo.time) / (hi.time - lo.time);
  return {lo.pos + s * (hi.pos - lo.pos), lo.vel + s * (hi.vel - lo.vel)};
}

void save_ephemeris(const std::string& path,
                    const std::vector<EphemerisRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("ephemeris: cannot write " + path);
  const bool with_acc = !records.empty() && records.front().has_acc;
  out << (with_acc ? "time,px,py,pz,vx,vy,vz,ax,ay,az" : "time,px,py,pz,vx,vy,vz")
      << "\n";
  for (const auto& r : records) {
    out << format_number(r.time);
    for (int i = 0; i < 3; ++i) out << ',' << format_number(r.pos[i]);
    for (int i = 0; i < 3; ++i) out << ',' << format_number(r.vel[i]);
    if (with_acc) {
      for (int i = 0; i < 3; ++i) out << ',' << format_number(r.acc[i]);
    }
    out << "\n";
  }
  if (!out) throw ConfigError("ephemeris: write failed for " + path);
}

}  // namespace leotrack
