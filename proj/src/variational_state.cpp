#include "gfamix/variational_state.hpp"

#include <cmath>
#include <string>

#include "gfamix/error.hpp"

namespace gfamix {

Eigen::MatrixXd VariationalState::latent_second_moment(int n) const
{
    return z_mean.row(n).transpose() * z_mean.row(n) + z_cov[n];
}

Eigen::MatrixXd VariationalState::joint_loading_mean(int c, int m) const
{
    Eigen::MatrixXd out(view_dims[m], n_factors());
    out.leftCols(K) = w_mean[c][m];
    out.rightCols(K_hat) = what_mean[m];
    return out;
}

Eigen::MatrixXd VariationalState::joint_loading_second_moment(int c, int m) const
{
    const double D = view_dims[m];
    const auto& Wm = w_mean[c][m];
    const auto& Hm = what_mean[m];
    Eigen::MatrixXd out(n_factors(), n_factors());
    out.topLeftCorner(K, K) = Wm.transpose() * Wm + D * w_cov[c][m];
    out.topRightCorner(K, K_hat) = Wm.transpose() * Hm;
    out.bottomLeftCorner(K_hat, K) = out.topRightCorner(K, K_hat).transpose();
    out.bottomRightCorner(K_hat, K_hat) = Hm.transpose() * Hm + D * what_cov[m];
    return out;
}

double VariationalState::column_second_moment(int c, int m, int k) const
{
    return w_mean[c][m].col(k).squaredNorm() + view_dims[m] * w_cov[c][m](k, k);
}

double VariationalState::shared_column_second_moment(int m, int k) const
{
    return what_mean[m].col(k).squaredNorm() + view_dims[m] * what_cov[m](k, k);
}

namespace {

void check_spd(const Eigen::MatrixXd& A, const std::string& what)
{
    if (A.rows() == 0)
        return;
    if (!A.allFinite() || (A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + A.cwiseAbs().maxCoeff()))
        throw NumericalError(what + " is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || lo < 1e-300 * hi)
        throw NumericalError(what + " is not positive definite");
}

void check_positive(double v, const std::string& what)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw NumericalError(what + " must be positive");
}

} // namespace

void VariationalState::validate() const
{
    const int N = n_samples();
    const int M = n_views();
    for (int n = 0; n < N; ++n)
        check_spd(z_cov[n], "latent covariance " + std::to_string(n));
    for (int c = 0; c < S; ++c) {
        for (int m = 0; m < M; ++m) {
            check_spd(w_cov[c][m], "loading covariance");
            check_positive(tau[c][m].shape, "tau shape");
            check_positive(tau[c][m].rate, "tau rate");
            for (const auto& a : alpha[c][m]) {
                check_positive(a.shape, "alpha shape");
                check_positive(a.rate, "alpha rate");
            }
        }
        check_positive(gamma[c].a, "gamma a");
        check_positive(gamma[c].b, "gamma b");
        check_positive(pi.conc(c), "pi concentration");
    }
    for (int m = 0; m < M; ++m) {
        check_spd(what_cov[m], "shared loading covariance");
        for (const auto& a : alpha_hat[m]) {
            check_positive(a.shape, "alpha_hat shape");
            check_positive(a.rate, "alpha_hat rate");
        }
    }
    for (int n = 0; n < N; ++n) {
        if ((resp.row(n).array() < 0.0).any() || std::abs(resp.row(n).sum() - 1.0) > 1e-12)
            throw NumericalError("responsibilities of sample " + std::to_string(n) + " are not a distribution");
    }
}

} // namespace gfamix
