#pragma once

#include "gfamix/dataset.hpp"
#include "gfamix/hyperparameters.hpp"
#include "gfamix/variational_state.hpp"

namespace gfamix {

/// Additive pieces of the bound. The label term is already multiplied by beta_weight.
struct ElboTerms
{
    double data = 0.0;            // E log p(X | W, Z, c, tau)
    double labels = 0.0;          // beta * E log p(r | gamma, c)
    double assignments = 0.0;     // E log p(c | pi) - E log q(c)
    double mixture_weights = 0.0; // E log p(pi) - E log q(pi)
    double label_probs = 0.0;     // E log p(gamma) - E log q(gamma)
    double latents = 0.0;         // E log p(Z) - E log q(Z)
    double loadings = 0.0;        // E log p(W_c | alpha) - E log q(W_c), all c, m
    double shared_loadings = 0.0; // same for W_hat
    double ard = 0.0;             // E log p(alpha) - E log q(alpha), cluster-specific
    double shared_ard = 0.0;
    double noise = 0.0;           // E log p(tau) - E log q(tau)
    double pruned_offset = 0.0;

    double total() const;
};

/// Throws NumericalError when the result is not finite. Requires labels.
ElboTerms elbo_terms(const VariationalState& state, const MultiViewDataset& data, const Hyperparameters& hyper);
/// Only the loading and ARD pieces (no data needed); other fields are zero.
ElboTerms loading_terms(const VariationalState& state, const Hyperparameters& hyper);

double elbo(const VariationalState& state, const MultiViewDataset& data, const Hyperparameters& hyper);

} // namespace gfamix
