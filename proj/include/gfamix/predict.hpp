#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gfamix/dataset.hpp"
#include "gfamix/fit.hpp"

namespace gfamix {

struct PredictionResult
{
    Eigen::MatrixXd responsibilities; // N_test x S
    Eigen::VectorXd prob_class1;
};

/// Test-time assignment: for each cluster, the exact marginal likelihood of x under
/// the posterior-mean loadings and noise precisions, plus log E[pi_c]; labels ignored.
PredictionResult predict(const TrainedModel& model, const MultiViewDataset& new_data);

/// Per-cluster marginal log-likelihood log N(x_n; 0, W~ W~^T + T^-1) at posterior means, N x S.
Eigen::MatrixXd cluster_log_likelihood(const TrainedModel& model, const MultiViewDataset& new_data);

/// E[Z] E[W_c^(m)]^T per view for the training samples; with include_shared the
/// shared block E[Z_hat] E[W_hat^(m)]^T is added.
std::vector<Eigen::MatrixXd> reconstruct(const TrainedModel& model, int cluster, bool include_shared = false);

/// Shared block alone: E[Z_hat] E[W_hat^(m)]^T.
std::vector<Eigen::MatrixXd> reconstruct_shared(const TrainedModel& model);

/// Row mean over the selected trials, per view. Throws ValidationError on an empty mask.
std::vector<Eigen::VectorXd> trial_average(const std::vector<Eigen::MatrixXd>& recon, const std::vector<bool>& trial_mask);

} // namespace gfamix
