#include "gfamix/updates.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gfamix/error.hpp"
#include "gfamix/special_functions.hpp"

namespace gfamix {

namespace {

const Labels& require_labels(const MultiViewDataset& data)
{
    if (!data.labels)
        throw ValidationError("labels are required for training");
    return *data.labels;
}

// Responsibility-weighted latent moments for one cluster.
struct ClusterMoments
{
    double count = 0.0;     // sum_n r_nc
    Eigen::MatrixXd uu;     // sum_n r_nc E[u u^T], L x L
    Eigen::MatrixXd mean;   // sum_n r_nc E[u_n]^T weighted rows, N x L (rows scaled by r_nc)
};

ClusterMoments cluster_moments(const VariationalState& s, int c)
{
    const int N = s.n_samples();
    const int L = s.n_factors();
    ClusterMoments out;
    out.uu = Eigen::MatrixXd::Zero(L, L);
    out.mean = s.z_mean;
    for (int n = 0; n < N; ++n) {
        const double r = s.resp(n, c);
        out.count += r;
        out.mean.row(n) *= r;
        if (r != 0.0)
            out.uu.noalias() += r * s.latent_second_moment(n);
    }
    return out;
}

} // namespace

void update_latents(VariationalState& s, const MultiViewDataset& data)
{
    const int N = s.n_samples();
    const int L = s.n_factors();
    const int M = s.n_views();

    std::vector<Eigen::MatrixXd> precision_part(s.S, Eigen::MatrixXd::Zero(L, L));
    std::vector<Eigen::MatrixXd> projection(s.S, Eigen::MatrixXd::Zero(L, N));
    for (int c = 0; c < s.S; ++c) {
        for (int m = 0; m < M; ++m) {
            const double tau = s.tau[c][m].mean();
            precision_part[c] += tau * s.joint_loading_second_moment(c, m);
            projection[c].noalias() += tau * s.joint_loading_mean(c, m).transpose() * data.views[m].transpose();
        }
    }

    for (int n = 0; n < N; ++n) {
        Eigen::MatrixXd P = Eigen::MatrixXd::Identity(L, L);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(L);
        for (int c = 0; c < s.S; ++c) {
            const double r = s.resp(n, c);
            if (r == 0.0)
                continue;
            P += r * precision_part[c];
            b += r * projection[c].col(n);
        }
        s.z_cov[n] = inverse_spd(P, "latents");
        s.z_mean.row(n) = (s.z_cov[n] * b).transpose();
    }
}

void update_cluster_loadings(VariationalState& s, const MultiViewDataset& data)
{
    const int K = s.K;
    if (K == 0)
        return;
    const int M = s.n_views();
    for (int c = 0; c < s.S; ++c) {
        const auto mom = cluster_moments(s, c);
        const Eigen::MatrixXd zz = mom.uu.topLeftCorner(K, K);
        const Eigen::MatrixXd z_zhat = mom.uu.topRightCorner(K, s.K_hat);
        for (int m = 0; m < M; ++m) {
            const double tau = s.tau[c][m].mean();
            Eigen::MatrixXd P = tau * zz;
            for (int k = 0; k < K; ++k)
                P(k, k) += s.alpha[c][m][k].mean();
            s.w_cov[c][m] = inverse_spd(P, "cluster loadings");
            const Eigen::MatrixXd rhs =
                data.views[m].transpose() * mom.mean.leftCols(K) - s.what_mean[m] * z_zhat.transpose();
            s.w_mean[c][m] = tau * rhs * s.w_cov[c][m];
        }
    }
}

void update_shared_loadings(VariationalState& s, const MultiViewDataset& data)
{
    const int K = s.K;
    const int K_hat = s.K_hat;
    if (K_hat == 0)
        return;
    const int M = s.n_views();
    std::vector<ClusterMoments> moms;
    for (int c = 0; c < s.S; ++c)
        moms.push_back(cluster_moments(s, c));

    for (int m = 0; m < M; ++m) {
        Eigen::MatrixXd P = Eigen::MatrixXd::Zero(K_hat, K_hat);
        Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(s.view_dims[m], K_hat);
        for (int c = 0; c < s.S; ++c) {
            const double tau = s.tau[c][m].mean();
            P += tau * moms[c].uu.bottomRightCorner(K_hat, K_hat);
            rhs += tau * (data.views[m].transpose() * moms[c].mean.rightCols(K_hat) -
                          s.w_mean[c][m] * moms[c].uu.topRightCorner(K, K_hat));
        }
        for (int k = 0; k < K_hat; ++k)
            P(k, k) += s.alpha_hat[m][k].mean();
        s.what_cov[m] = inverse_spd(P, "shared loadings");
        s.what_mean[m] = rhs * s.what_cov[m];
    }
}

void update_loadings(VariationalState& s, const MultiViewDataset& data)
{
    update_cluster_loadings(s, data);
    update_shared_loadings(s, data);
}

void update_ard(VariationalState& s, const Hyperparameters& hyper)
{
    const int M = s.n_views();
    for (int m = 0; m < M; ++m) {
        const double half_d = 0.5 * s.view_dims[m];
        for (int c = 0; c < s.S; ++c) {
            for (int k = 0; k < s.K; ++k) {
                s.alpha[c][m][k].shape = hyper.ard_shape + half_d;
                s.alpha[c][m][k].rate = hyper.ard_rate + 0.5 * s.column_second_moment(c, m, k);
            }
        }
        for (int k = 0; k < s.K_hat; ++k) {
            s.alpha_hat[m][k].shape = hyper.shared_ard_shape + half_d;
            s.alpha_hat[m][k].rate = hyper.shared_ard_rate + 0.5 * s.shared_column_second_moment(m, k);
        }
    }
}

void update_noise(VariationalState& s, const MultiViewDataset& data, const Hyperparameters& hyper)
{
    const int M = s.n_views();
    for (int c = 0; c < s.S; ++c) {
        const auto mom = cluster_moments(s, c);
        for (int m = 0; m < M; ++m) {
            const auto& X = data.views[m];
            const Eigen::VectorXd r = s.resp.col(c);
            const double xx = (X.rowwise().squaredNorm().array() * r.array()).sum();
            // sum_n r_nc x_n^T W~ E[u_n]
            const double cross = (X * s.joint_loading_mean(c, m)).cwiseProduct(mom.mean).sum();
            const double quad = s.joint_loading_second_moment(c, m).cwiseProduct(mom.uu).sum();
            const double sq = std::max(0.0, xx - 2.0 * cross + quad);
            s.tau[c][m].shape = hyper.noise_shape + 0.5 * mom.count * s.view_dims[m];
            s.tau[c][m].rate = hyper.noise_rate + 0.5 * sq;
        }
    }
}

Eigen::MatrixXd expected_log_likelihood(const VariationalState& s, const MultiViewDataset& data)
{
    const int N = s.n_samples();
    const int M = s.n_views();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(N, s.S);
    const double log_2pi = std::log(2.0 * std::numbers::pi);
    for (int m = 0; m < M; ++m) {
        const auto& X = data.views[m];
        const Eigen::VectorXd xx = X.rowwise().squaredNorm();
        const double D = s.view_dims[m];
        for (int c = 0; c < s.S; ++c) {
            const double tau = s.tau[c][m].mean();
            const double base = 0.5 * D * (s.tau[c][m].mean_log() - log_2pi);
            const Eigen::MatrixXd proj = X * s.joint_loading_mean(c, m); // N x L
            const Eigen::MatrixXd A = s.joint_loading_second_moment(c, m);
            for (int n = 0; n < N; ++n) {
                const auto mu = s.z_mean.row(n);
                const double cross = proj.row(n).dot(mu);
                const double quad = mu * A * mu.transpose() + A.cwiseProduct(s.z_cov[n]).sum();
                out(n, c) += base - 0.5 * tau * (xx(n) - 2.0 * cross + quad);
            }
        }
    }
    return out;
}

void update_assignments(VariationalState& s, const MultiViewDataset& data, const Hyperparameters& hyper)
{
    const auto& labels = require_labels(data);
    const int N = s.n_samples();
    const Eigen::VectorXd log_pi = s.pi.mean_log();
    Eigen::MatrixXd log_rho = expected_log_likelihood(s, data);
    for (int n = 0; n < N; ++n) {
        for (int c = 0; c < s.S; ++c) {
            const double label_term = labels[n] == 1 ? s.gamma[c].mean_log() : s.gamma[c].mean_log_complement();
            log_rho(n, c) += log_pi(c) + hyper.beta_weight * label_term;
        }
        const double hi = log_rho.row(n).maxCoeff();
        if (!std::isfinite(hi) || !log_rho.row(n).allFinite())
            throw NumericalError("non-finite assignment scores for sample " + std::to_string(n));
        Eigen::RowVectorXd p = (log_rho.row(n).array() - hi).exp();
        s.resp.row(n) = p / p.sum();
    }
}

void update_mixture_weights(VariationalState& s, const Hyperparameters& hyper)
{
    s.pi.conc = Eigen::VectorXd::Constant(s.S, hyper.dirichlet_conc) + s.resp.colwise().sum().transpose();
}

void update_label_probs(VariationalState& s, const MultiViewDataset& data, const Hyperparameters& hyper)
{
    const auto& labels = require_labels(data);
    const int N = s.n_samples();
    for (int c = 0; c < s.S; ++c) {
        double ones = 0.0, zeros = 0.0;
        for (int n = 0; n < N; ++n) {
            if (labels[n] == 1)
                ones += s.resp(n, c);
            else
                zeros += s.resp(n, c);
        }
        s.gamma[c].a = hyper.beta_a + hyper.beta_weight * ones;
        s.gamma[c].b = hyper.beta_b + hyper.beta_weight * zeros;
    }
}

} // namespace gfamix
