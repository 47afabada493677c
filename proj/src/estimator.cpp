#include "leotrack/estimator.hpp"

#include <cmath>

#include "leotrack/geo.hpp"
#include "leotrack/dynamics.hpp"

namespace leotrack {

namespace {

void resymmetrize(Mat12& p) { p = 0.5 * (p + p.transpose()).eval(); }

bool is_psd(const Eigen::MatrixXd& m, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return es.info() == Eigen::Success && es.eigenvalues().minCoeff() >= -tol;
}

// Generic posterior covariance given gain and Jacobian.
template <typename HMat, typename RMat, typename KMat>
Mat12 posterior_cov(const Mat12& p, const HMat& h, const RMat& r, const KMat& k,
                    CovarianceUpdate form) {
  if (form == CovarianceUpdate::kPlain) {
    return (Mat12::Identity() - k * h) * p;
  }
  const Mat12 ikh = Mat12::Identity() - k * h;
  return ikh * p * ikh.transpose() + k * r * k.transpose();
}

}  // namespace

GaussianBelief predict(const GaussianBelief& b, double dt, const Mat12& Q,
                       const EarthModel& m) {
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-9 || !is_psd(Q, 1e-9)) {
    throw ConfigError("predict: process covariance Q must be symmetric PSD");
  }
  const Mat12 f = motion_jacobian(b.mean, dt, m);
  GaussianBelief out;
  out.mean = propagate_joint(b.mean, dt, m);
  out.cov = f * b.cov * f.transpose() + Q;
  resymmetrize(out.cov);
  return out;
}

Measurement measurement_model(const JointState& x) {
  Measurement y;
  y.range = slant_range(x.sat_pos, x.ue_pos);
  y.elevation = elevation_angle(x.sat_pos, x.ue_pos);
  return y;
}

Eigen::Matrix<double, 2, 12> measurement_jacobian(const JointState& x) {
  const Vec3 rel = x.sat_pos - x.ue_pos;
  const double d = rel.norm();
  if (d == 0.0) {
    throw std::domain_error("measurement_jacobian: coincident positions");
  }

  Eigen::Matrix<double, 2, 12> h = Eigen::Matrix<double, 2, 12>::Zero();
  h.block<1, 3>(0, 0) = rel.transpose() / d;
  h.block<1, 3>(0, 6) = -rel.transpose() / d;

  // Elevation row by central differences over the six position coordinates.
  Vec12 v = x.to_vector();
  const double step = 1e-6;
  for (int j : {0, 1, 2, 6, 7, 8}) {
    const double orig = v[j];
    const double hi = orig + step;
    const double lo = orig - step;
    v[j] = hi;
    const double th_hi = elevation_angle(v.segment<3>(0), v.segment<3>(6));
    v[j] = lo;
    const double th_lo = elevation_angle(v.segment<3>(0), v.segment<3>(6));
    v[j] = orig;
    h(1, j) = (th_hi - th_lo) / (hi - lo);
  }
  return h;
}

Eigen::MatrixXd kalman_gain(const Eigen::MatrixXd& P_pred, const Eigen::MatrixXd& H,
                            const Eigen::MatrixXd& R) {
  const Eigen::MatrixXd s = H * P_pred * H.transpose() + R;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()));
  if (es.info() != Eigen::Success) {
    throw NumericalError("kalman_gain: innovation covariance eigensolve failed");
  }
  const double lmax = es.eigenvalues().maxCoeff();
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin <= 0.0 || lmax / lmin > 1e12) {
    throw NumericalError("kalman_gain: innovation covariance singular or ill-conditioned");
  }
  return P_pred * H.transpose() * s.inverse();
}

std::pair<GaussianBelief, Eigen::Vector2d> update(const GaussianBelief& b_pred,
                                                  const Measurement& y, const Mat2& R,
                                                  CovarianceUpdate form) {
  const Eigen::Matrix<double, 2, 12> h = measurement_jacobian(b_pred.mean);
  const Eigen::MatrixXd k = kalman_gain(b_pred.cov, h, R);

  const Measurement pred = measurement_model(b_pred.mean);
  Eigen::Vector2d innov(y.range - pred.range, y.elevation - pred.elevation);

  GaussianBelief out;
  out.mean = JointState::from_vector(b_pred.mean.to_vector() + k * innov);
  out.cov = posterior_cov(b_pred.cov, h, R, k, form);
  resymmetrize(out.cov);
  return {out, innov};
}

std::pair<GaussianBelief, Vec3> update_direct_position(const GaussianBelief& b_pred,
                                                       const Vec3& y,
                                                       const Eigen::Matrix3d& R,
                                                       CovarianceUpdate form) {
  Eigen::Matrix<double, 3, 12> h = Eigen::Matrix<double, 3, 12>::Zero();
  h.block<3, 3>(0, 0).setIdentity();
  const Eigen::MatrixXd k = kalman_gain(b_pred.cov, h, R);

  const Vec3 innov = y - b_pred.mean.sat_pos;
  GaussianBelief out;
  out.mean = JointState::from_vector(b_pred.mean.to_vector() + k * innov);
  out.cov = posterior_cov(b_pred.cov, h, R, k, form);
  resymmetrize(out.cov);
  return {out, innov};
}

double steady_state_covariance_scalar(double F, double H, double Q, double R) {
  if (H == 0.0) {
    throw std::domain_error("steady_state_covariance_scalar: H must be nonzero");
  }
  if (R <= 0.0) {
    throw std::domain_error("steady_state_covariance_scalar: R must be positive");
  }
  return R / (H * H) * (F + std::sqrt(F * F + H * H * Q / R));
}

double posterior_density(const GaussianBelief& b, const JointState& x) {
  Eigen::LLT<Mat12> llt(b.cov);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("posterior_density: covariance not positive definite");
  }
  const Vec12 e = x.to_vector() - b.mean.to_vector();
  const Vec12 w = llt.matrixL().solve(e);
  double log_det = 0.0;
  for (int i = 0; i < 12; ++i) log_det += std::log(llt.matrixL()(i, i));
  log_det *= 2.0;
  const double log_norm =
      -0.5 * (12.0 * std::log(2.0 * constants::kPi) + log_det);
  return std::exp(log_norm - 0.5 * w.squaredNorm());
}

}  // namespace leotrack
