#include "leotrack/link.hpp"

#include <cmath>
#include <stdexcept>

#include "leotrack/dynamics.hpp"
#include "leotrack/geo.hpp"

namespace leotrack {

double timing_advance(double d, double c) {
  if (d < 0.0) throw std::domain_error("timing_advance: negative range");
  if (c <= 0.0) throw std::domain_error("timing_advance: c must be positive");
  return 2.0 * d / c;
}

double doppler_shift(const JointState& x, double f_T, double c) {
  const Vec3 rel = x.sat_pos - x.ue_pos;
  const double d = rel.norm();
  if (d == 0.0) throw std::domain_error("doppler_shift: coincident positions");
  const double range_rate = rel.dot(x.sat_vel - x.ue_vel) / d;
  return -f_T * range_rate / c;
}

double tdoa(double d_t, double d_t1, double c) { return (d_t1 - d_t) / c; }

double clock_drift(double t11, double t12, const ClockModel& clk) {
  if (t11 < 0.0 || t12 <= t11) {
    throw std::domain_error("clock_drift: requires t12 > t11 >= 0");
  }
  return t12 * clk.eps2 - t11 * clk.eps1;
}

std::pair<double, double> fit_clock_drift(
    const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2) {
    throw std::domain_error("fit_clock_drift: need at least two samples");
  }
  double t_mean = 0.0, y_mean = 0.0;
  for (const auto& [t, y] : samples) {
    t_mean += t;
    y_mean += y;
  }
  t_mean /= static_cast<double>(samples.size());
  y_mean /= static_cast<double>(samples.size());

  double stt = 0.0, sty = 0.0;
  for (const auto& [t, y] : samples) {
    stt += (t - t_mean) * (t - t_mean);
    sty += (t - t_mean) * (y - y_mean);
  }
  if (stt == 0.0) {
    throw std::domain_error("fit_clock_drift: all sample times identical");
  }
  const double alpha = sty / stt;
  return {alpha, y_mean - alpha * t_mean};
}

namespace {

constexpr double kBoundaryTol = 1e-3;  // s, window edge refinement
constexpr double kPeakTol = 1e-6;      // s, theta_max refinement

double bisect_crossing(const std::function<double(double)>& f, double lo,
                       double hi) {
  // f(lo) and f(hi) straddle zero; shrink to kBoundaryTol.
  double flo = f(lo);
  while (hi - lo > kBoundaryTol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double* arg) {
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c1 = b - kInvPhi * (b - a);
  double c2 = a + kInvPhi * (b - a);
  double f1 = f(c1), f2 = f(c2);
  while (b - a > kPeakTol) {
    if (f1 < f2) {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + kInvPhi * (b - a);
      f2 = f(c2);
    } else {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - kInvPhi * (b - a);
      f1 = f(c1);
    }
  }
  *arg = 0.5 * (a + b);
  return f(*arg);
}

}  // namespace

std::vector<VisibilityWindow> visibility_windows(
    const OrbitElements& orbit, const std::function<Vec3(double)>& ue_traj,
    double theta_min, double t0, double t1, double dt, const EarthModel& earth) {
  if (t1 <= t0) throw std::domain_error("visibility_windows: t1 must exceed t0");
  if (dt <= 0.0) throw std::domain_error("visibility_windows: dt must be positive");

  const auto theta = [&](double t) {
    return elevation_angle(truth_orbit_state(orbit, t, earth).pos, ue_traj(t));
  };
  const auto excess = [&](double t) { return theta(t) - theta_min; };

  // Grid sample times: t0, t0+dt, ..., then t1 itself.
  std::vector<double> grid;
  for (double t = t0; t < t1; t += dt) grid.push_back(t);
  grid.push_back(t1);

  std::vector<VisibilityWindow> out;
  bool inside = excess(grid[0]) >= 0.0;
  double start = inside ? t0 : 0.0;

  const auto close_window = [&](double end) {
    VisibilityWindow w;
    w.t_start = start;
    w.t_end = end;
    // Locate the grid peak inside [start, end], then refine around it.
    double best_t = start, best_th = -constants::kPi;
    for (double t : grid) {
      if (t < start || t > end) continue;
      const double th = theta(t);
      if (th > best_th) {
        best_th = th;
        best_t = t;
      }
    }
    const double lo = std::max(start, best_t - dt);
    const double hi = std::min(end, best_t + dt);
    w.theta_max = golden_max(theta, lo, hi, &w.t_theta_max);
    out.push_back(w);
  };

  for (std::size_t k = 1; k < grid.size(); ++k) {
    const bool vis = excess(grid[k]) >= 0.0;
    if (vis && !inside) {
      start = bisect_crossing(excess, grid[k - 1], grid[k]);
      inside = true;
    } else if (!vis && inside) {
      close_window(bisect_crossing(excess, grid[k - 1], grid[k]));
      inside = false;
    }
  }
  if (inside) close_window(t1);
  return out;
}

}  // namespace leotrack
