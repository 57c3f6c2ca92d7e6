#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "gfamix/dataset.hpp"
#include "gfamix/hyperparameters.hpp"
#include "gfamix/variational_state.hpp"

namespace gfamix {

struct TrainedModel
{
    Hyperparameters hyper;
    VariationalState state;
    std::vector<double> elbo_trace;
    int n_iterations = 0;
    bool converged = false;
    std::vector<int> view_dims;
};

/// Initial posterior: k-means++ responsibilities softened to 0.9 / rest,
/// SVD latent means, small random loadings, conjugate factors at their priors
/// except the noise precisions, which start at 1000 / (view mean square).
/// Throws ValidationError when labels are missing or fewer than S distinct samples exist.
VariationalState initialize(const MultiViewDataset& data, const Hyperparameters& hyper, std::uint64_t seed);

enum class UpdateStep { Latents, Loadings, Ard, Noise, Assignments, MixtureWeights, LabelProbs, Prune };

std::string_view to_string(UpdateStep step);

/// Called after every individual update inside fit().
using FitObserver = std::function<void(UpdateStep, const VariationalState&)>;

/// One full cycle: loadings, latents, ard, noise, assignments, mixture weights, label probs.
void run_update_cycle(VariationalState& state, const MultiViewDataset& data, const Hyperparameters& hyper,
                      const FitObserver& observer = {});

/// Coordinate ascent until the relative bound change drops below elbo_rel_tol
/// or max_iter cycles ran. Pruning (when enabled) runs every 10 cycles.
TrainedModel fit(const MultiViewDataset& data, const Hyperparameters& hyper, std::uint64_t seed,
                 const FitObserver& observer = {});

struct PruneResult
{
    VariationalState state;
    std::vector<int> removed_cluster_factors; // indices in the input state
    std::vector<int> removed_shared_factors;
    bool refused = false; // pruning would have left no factors
};

/// Drops a factor when E[alpha]^-1 < threshold in every view (and, for
/// cluster-specific factors, in every cluster). The removed blocks' loading and
/// ARD bound terms move into pruned_offset.
PruneResult prune_factors(const VariationalState& state, const Hyperparameters& hyper, double threshold);

} // namespace gfamix
