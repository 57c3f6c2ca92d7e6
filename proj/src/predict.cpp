#include "gfamix/predict.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gfamix/error.hpp"
#include "gfamix/special_functions.hpp"

namespace gfamix {

namespace {

void check_dims(const TrainedModel& model, const MultiViewDataset& data)
{
    if (data.view_dims() != model.view_dims)
        throw ValidationError("dimension mismatch: data views do not match the model's view dimensions");
}

} // namespace

Eigen::MatrixXd cluster_log_likelihood(const TrainedModel& model, const MultiViewDataset& data)
{
    check_dims(model, data);
    const auto& s = model.state;
    const int N = static_cast<int>(data.n_samples());
    const int M = s.n_views();
    const int L = s.n_factors();
    const double log_2pi = std::log(2.0 * std::numbers::pi);
    const double total_dim = data.total_dim();

    Eigen::MatrixXd out(N, s.S);
    for (int c = 0; c < s.S; ++c) {
        // Matrix determinant lemma / Woodbury on C = W~ W~^T + T^-1.
        Eigen::MatrixXd P = Eigen::MatrixXd::Identity(L, L);
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(L, N);
        Eigen::VectorXd xx = Eigen::VectorXd::Zero(N);
        double log_det_noise = 0.0;
        for (int m = 0; m < M; ++m) {
            const double tau = s.tau[c][m].mean();
            const Eigen::MatrixXd W = s.joint_loading_mean(c, m);
            P.noalias() += tau * W.transpose() * W;
            b.noalias() += tau * W.transpose() * data.views[m].transpose();
            xx += tau * data.views[m].rowwise().squaredNorm();
            log_det_noise -= s.view_dims[m] * std::log(tau);
        }
        Eigen::LLT<Eigen::MatrixXd> llt(P);
        if (llt.info() != Eigen::Success)
            throw NumericalError("predictive precision is not positive definite");
        const double log_det_c = log_det_spd(P) + log_det_noise;
        const Eigen::MatrixXd Pinv_b = llt.solve(b);
        for (int n = 0; n < N; ++n) {
            const double quad = xx(n) - b.col(n).dot(Pinv_b.col(n));
            out(n, c) = -0.5 * (total_dim * log_2pi + log_det_c + quad);
        }
    }
    return out;
}

PredictionResult predict(const TrainedModel& model, const MultiViewDataset& new_data)
{
    const auto& s = model.state;
    Eigen::MatrixXd scores = cluster_log_likelihood(model, new_data);
    const Eigen::VectorXd log_weights = s.pi.mean().array().log();
    Eigen::VectorXd gamma_mean(s.S);
    for (int c = 0; c < s.S; ++c)
        gamma_mean(c) = s.gamma[c].mean();

    PredictionResult out;
    out.responsibilities = Eigen::MatrixXd(scores.rows(), s.S);
    out.prob_class1 = Eigen::VectorXd(scores.rows());
    for (Eigen::Index n = 0; n < scores.rows(); ++n) {
        Eigen::RowVectorXd row = scores.row(n) + log_weights.transpose();
        if (!std::isfinite(row.maxCoeff()))
            throw NumericalError("non-finite predictive score for test sample " + std::to_string(n));
        row = (row.array() - row.maxCoeff()).exp();
        out.responsibilities.row(n) = row / row.sum();
        out.prob_class1(n) = std::clamp(out.responsibilities.row(n).dot(gamma_mean), 0.0, 1.0);
    }
    return out;
}

std::vector<Eigen::MatrixXd> reconstruct(const TrainedModel& model, int cluster, bool include_shared)
{
    const auto& s = model.state;
    if (cluster < 0 || cluster >= s.S)
        throw ValidationError("cluster index " + std::to_string(cluster + 1) + " out of range 1.." +
                              std::to_string(s.S));
    std::vector<Eigen::MatrixXd> out;
    const Eigen::MatrixXd z = s.z_mean.leftCols(s.K);
    const Eigen::MatrixXd z_hat = s.z_mean.rightCols(s.K_hat);
    for (int m = 0; m < s.n_views(); ++m) {
        Eigen::MatrixXd r = z * s.w_mean[cluster][m].transpose();
        if (include_shared)
            r += z_hat * s.what_mean[m].transpose();
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<Eigen::MatrixXd> reconstruct_shared(const TrainedModel& model)
{
    const auto& s = model.state;
    std::vector<Eigen::MatrixXd> out;
    const Eigen::MatrixXd z_hat = s.z_mean.rightCols(s.K_hat);
    for (int m = 0; m < s.n_views(); ++m)
        out.push_back(z_hat * s.what_mean[m].transpose());
    return out;
}

std::vector<Eigen::VectorXd> trial_average(const std::vector<Eigen::MatrixXd>& recon, const std::vector<bool>& trial_mask)
{
    std::vector<Eigen::VectorXd> out;
    const auto selected = std::count(trial_mask.begin(), trial_mask.end(), true);
    if (selected == 0)
        throw ValidationError("trial mask selects no trials");
    for (const auto& view : recon) {
        if (static_cast<std::size_t>(view.rows()) != trial_mask.size())
            throw ValidationError("trial mask length does not match the reconstruction");
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(view.cols());
        for (Eigen::Index n = 0; n < view.rows(); ++n)
            if (trial_mask[static_cast<std::size_t>(n)])
                sum += view.row(n).transpose();
        out.push_back(sum / static_cast<double>(selected));
    }
    return out;
}

} // namespace gfamix
