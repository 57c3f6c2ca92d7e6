#pragma once

#include <optional>

namespace gfamix {

struct Hyperparameters
{
    int K = 2;      // cluster-specific factors
    int K_hat = 4;  // shared factors
    int S = 2;      // clusters

    double ard_shape = 1e-14;
    double ard_rate = 1e-14;
    double shared_ard_shape = 30.0;
    double shared_ard_rate = 1.0;
    double noise_shape = 1e-14;
    double noise_rate = 1e-14;
    double beta_weight = 100.0;
    double dirichlet_conc = 1.0;
    double beta_a = 0.5;
    double beta_b = 0.5;

    int max_iter = 1000;
    double elbo_rel_tol = 1e-5;
    std::optional<double> prune_threshold;  // disabled when empty

    int n_factors() const { return K + K_hat; }

    /// Throws ValidationError when any invariant fails.
    void validate() const;
};

Hyperparameters default_hyperparameters(int K, int K_hat, int S);

} // namespace gfamix
