#pragma once

#include <utility>

#include "leotrack/types.hpp"

namespace leotrack {

struct GaussianBelief {
  JointState mean;
  Mat12 cov = Mat12::Identity();
};

struct Measurement {
  double time = 0.0;
  double range = 0.0;      // km
  double elevation = 0.0;  // rad
};

struct NoiseConfig {
  Mat12 Q = Mat12::Zero();
  Mat2 R = Mat2::Zero();
};

// Covariance update form. Joseph is the default (numerically robust,
// algebraically identical for the optimal gain); the plain form is kept
// callable and tested against it.
enum class CovarianceUpdate { kJoseph, kPlain };

// Time update: mean through the nonlinear motion model, covariance through
// its Jacobian at the pre-step mean. Throws ConfigError for non-PSD Q.
GaussianBelief predict(const GaussianBelief& b, double dt, const Mat12& Q,
                       const EarthModel& m = {});

// Range + elevation predicted from a joint state.
Measurement measurement_model(const JointState& x);

// 2x12 measurement Jacobian: analytic range row, central-difference elevation
// row (step 1e-6 km), zero velocity columns.
Eigen::Matrix<double, 2, 12> measurement_jacobian(const JointState& x);

// K = P H' (H P H' + R)^-1 for any conformal sizes. Throws NumericalError if
// the innovation covariance is singular or conditioned worse than 1e12.
Eigen::MatrixXd kalman_gain(const Eigen::MatrixXd& P_pred, const Eigen::MatrixXd& H,
                            const Eigen::MatrixXd& R);

// Measurement update; returns the posterior belief and the innovation.
std::pair<GaussianBelief, Eigen::Vector2d> update(
    const GaussianBelief& b_pred, const Measurement& y, const Mat2& R,
    CovarianceUpdate form = CovarianceUpdate::kJoseph);

// Update against a direct satellite-position observation (H = [I3 0]).
std::pair<GaussianBelief, Vec3> update_direct_position(
    const GaussianBelief& b_pred, const Vec3& y, const Eigen::Matrix3d& R,
    CovarianceUpdate form = CovarianceUpdate::kJoseph);

// Closed-form scalar steady-state covariance P = (R/H^2)(F + sqrt(F^2 + H^2 Q / R)).
double steady_state_covariance_scalar(double F, double H, double Q, double R);

// Multivariate normal density of x under the belief. Throws std::domain_error
// if the covariance is not positive definite.
double posterior_density(const GaussianBelief& b, const JointState& x);

}  // namespace leotrack
