#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gfamix/dataset.hpp"
#include "gfamix/hyperparameters.hpp"

namespace gfamix {

/// Ground-truth parameters of the generative model.
/// W[c][m] is D_m x K, W_hat[m] is D_m x K_hat, tau[c][m] > 0.
struct GenerativeParams
{
    std::vector<std::vector<Eigen::MatrixXd>> W;
    std::vector<Eigen::MatrixXd> W_hat;
    std::vector<std::vector<double>> tau;
    Eigen::VectorXd pi;
    Eigen::VectorXd gamma;

    int n_clusters() const { return static_cast<int>(pi.size()); }
    std::vector<int> view_dims() const;

    /// Throws ValidationError on invalid probabilities, precisions or shapes.
    void validate(const Hyperparameters& hyper) const;
};

/// Latent draws behind a simulated dataset. Cluster indices are 0-based.
struct LatentRecord
{
    Eigen::MatrixXd z;      // N x K
    Eigen::MatrixXd z_hat;  // N x K_hat
    std::vector<int> c;
    Labels r;
};

struct SimulatedData
{
    MultiViewDataset data;
    LatentRecord latent;
};

/// Draws N samples: c ~ Cat(pi), z, z_hat ~ N(0, I),
/// x^(m) ~ N(W_c z + W_hat z_hat, tau_c^-1 I), r ~ Bernoulli(gamma_c).
SimulatedData sample_generative(const GenerativeParams& params, const Hyperparameters& hyper, int N,
                                std::uint64_t seed);

struct BenchmarkOptions
{
    int K_true = 2;            // cluster-specific factors per cluster
    int K_hat_true = 4;        // shared factors
    double signal_ratio = 5.0; // ||W_hat||_F / ||W_c||_F
    double shared_scale = 1.0; // rms of shared loading entries
    double noise_sd = 0.1;
    int specific_views = 0;    // views each cluster-specific factor loads on; 0 = all
    double shared_overlap = 0.95; // weight of the shared-span part in each specific column
};

struct Benchmark
{
    GenerativeParams params;
    MultiViewDataset data;
    LatentRecord latent;
};

/// Two clusters with gamma = (1, 0), pi = (1/2, 1/2); strong shared loadings and
/// weak cluster-specific loadings, mostly aligned with the shared span. Requires N >= 8 even, M >= 2, D >= 2.
Benchmark make_weak_signal_benchmark(int N, int M, int D, std::uint64_t seed,
                                     const BenchmarkOptions& options = {});

} // namespace gfamix
