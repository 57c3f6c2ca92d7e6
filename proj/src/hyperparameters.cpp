#include "gfamix/hyperparameters.hpp"

#include <cmath>
#include <string>

#include "gfamix/error.hpp"

namespace gfamix {

namespace {

void require_positive(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw ValidationError(std::string(name) + " must be a positive finite number");
}

} // namespace

void Hyperparameters::validate() const
{
    if (K < 0 || K_hat < 0)
        throw ValidationError("K and K_hat must be non-negative");
    if (K + K_hat < 1)
        throw ValidationError("K + K_hat must be at least 1");
    if (S < 1)
        throw ValidationError("S must be at least 1");
    require_positive(ard_shape, "ard_shape");
    require_positive(ard_rate, "ard_rate");
    require_positive(shared_ard_shape, "shared_ard_shape");
    require_positive(shared_ard_rate, "shared_ard_rate");
    require_positive(noise_shape, "noise_shape");
    require_positive(noise_rate, "noise_rate");
    require_positive(beta_weight, "beta_weight");
    require_positive(dirichlet_conc, "dirichlet_conc");
    require_positive(beta_a, "beta_a");
    require_positive(beta_b, "beta_b");
    require_positive(elbo_rel_tol, "elbo_rel_tol");
    if (max_iter < 1)
        throw ValidationError("max_iter must be at least 1");
    if (prune_threshold)
        require_positive(*prune_threshold, "prune_threshold");
}

Hyperparameters default_hyperparameters(int K, int K_hat, int S)
{
    Hyperparameters h;
    h.K = K;
    h.K_hat = K_hat;
    h.S = S;
    h.validate();
    return h;
}

} // namespace gfamix
