#pragma once

#include "gfamix/dataset.hpp"
#include "gfamix/hyperparameters.hpp"
#include "gfamix/variational_state.hpp"

namespace gfamix {

// Closed-form coordinate-ascent steps. Each replaces one block of factors with
// its exact maximizer of the (label-weighted) evidence lower bound given the rest.

void update_latents(VariationalState& state, const MultiViewDataset& data);

/// Cluster-specific loadings for every (c, m), then shared loadings.
void update_loadings(VariationalState& state, const MultiViewDataset& data);
void update_cluster_loadings(VariationalState& state, const MultiViewDataset& data);
void update_shared_loadings(VariationalState& state, const MultiViewDataset& data);

void update_ard(VariationalState& state, const Hyperparameters& hyper);
void update_noise(VariationalState& state, const MultiViewDataset& data, const Hyperparameters& hyper);

/// Requires labels. Throws NumericalError when a row of log-responsibilities is not finite.
void update_assignments(VariationalState& state, const MultiViewDataset& data, const Hyperparameters& hyper);
void update_mixture_weights(VariationalState& state, const Hyperparameters& hyper);
void update_label_probs(VariationalState& state, const MultiViewDataset& data, const Hyperparameters& hyper);

/// Sum over views of E_q[log N(x_n^(m); W~_c^(m) u_n, tau_c^(m)^-1 I)], N x S.
Eigen::MatrixXd expected_log_likelihood(const VariationalState& state, const MultiViewDataset& data);

} // namespace gfamix
