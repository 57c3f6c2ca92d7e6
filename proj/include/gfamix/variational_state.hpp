#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gfamix/distributions.hpp"

namespace gfamix {

/// Mean-field posterior q(c) q(pi) q(Z) q(W_hat) q(alpha_hat) prod_{c,m} q(W_c^m) q(tau_c^m) q(gamma_c) q(alpha_c^m).
///
/// Latents: one joint Gaussian per sample over u_n = [z_n; z_hat_n] (L = K + K_hat).
/// Loadings: rows of W_c^(m) are independent Gaussians sharing one K x K covariance
/// per (c, m); rows of W_hat^(m) likewise share a K_hat x K_hat covariance per m.
struct VariationalState
{
    int K = 0;
    int K_hat = 0;
    int S = 0;
    std::vector<int> view_dims;

    Eigen::MatrixXd z_mean;               // N x L
    std::vector<Eigen::MatrixXd> z_cov;   // N entries, L x L

    std::vector<std::vector<Eigen::MatrixXd>> w_mean; // [c][m], D_m x K
    std::vector<std::vector<Eigen::MatrixXd>> w_cov;  // [c][m], K x K
    std::vector<Eigen::MatrixXd> what_mean;           // [m], D_m x K_hat
    std::vector<Eigen::MatrixXd> what_cov;            // [m], K_hat x K_hat

    std::vector<std::vector<std::vector<GammaDist>>> alpha; // [c][m][k]
    std::vector<std::vector<GammaDist>> alpha_hat;          // [m][k]
    std::vector<std::vector<GammaDist>> tau;                // [c][m]
    DirichletDist pi;
    std::vector<BetaDist> gamma;                            // [c]
    Eigen::MatrixXd resp;                                   // N x S

    // Bound contribution of factors removed by pruning (their loading and ARD
    // terms are frozen at removal time).
    double pruned_offset = 0.0;

    int n_factors() const { return K + K_hat; }
    int n_views() const { return static_cast<int>(view_dims.size()); }
    int n_samples() const { return static_cast<int>(z_mean.rows()); }

    /// E[u_n u_n^T].
    Eigen::MatrixXd latent_second_moment(int n) const;
    /// [E W_c^(m), E W_hat^(m)], D_m x L.
    Eigen::MatrixXd joint_loading_mean(int c, int m) const;
    /// E[W~^T W~] for W~ = [W_c^(m), W_hat^(m)], L x L, including row-covariance terms.
    Eigen::MatrixXd joint_loading_second_moment(int c, int m) const;
    /// E ||w_{c,k}^(m)||^2 and E ||w_hat_k^(m)||^2.
    double column_second_moment(int c, int m, int k) const;
    double shared_column_second_moment(int m, int k) const;

    /// Throws NumericalError when a covariance is not SPD, a distribution parameter is
    /// not positive, or responsibilities are not row-stochastic.
    void validate() const;
};

} // namespace gfamix
