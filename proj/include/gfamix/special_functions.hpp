#pragma once

#include <Eigen/Dense>

namespace gfamix {

/// psi(x) for x > 0, accurate to ~1e-12 relative down to x = 1e-14.
double digamma(double x);
double log_gamma(double x);

/// log(sum(exp(v))) with max-shift.
double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& v);

/// log det of an SPD matrix via Cholesky; throws NumericalError if not SPD.
double log_det_spd(const Eigen::Ref<const Eigen::MatrixXd>& A);

/// Inverse of an SPD matrix via Cholesky; throws NumericalError if not SPD.
Eigen::MatrixXd inverse_spd(const Eigen::Ref<const Eigen::MatrixXd>& A, const char* what = "matrix");

} // namespace gfamix
