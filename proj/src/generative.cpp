#include "gfamix/generative.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "gfamix/error.hpp"

namespace gfamix {

std::vector<int> GenerativeParams::view_dims() const
{
    std::vector<int> dims;
    for (const auto& w : W_hat)
        dims.push_back(static_cast<int>(w.rows()));
    return dims;
}

void GenerativeParams::validate(const Hyperparameters& hyper) const
{
    const int S = hyper.S;
    if (pi.size() != S || gamma.size() != S || static_cast<int>(W.size()) != S || static_cast<int>(tau.size()) != S)
        throw ValidationError("generative parameters do not have S = " + std::to_string(S) + " clusters");
    if ((pi.array() < 0.0).any() || std::abs(pi.sum() - 1.0) > 1e-12)
        throw ValidationError("pi must be a probability vector");
    if ((gamma.array() < 0.0).any() || (gamma.array() > 1.0).any())
        throw ValidationError("gamma entries must lie in [0, 1]");
    const std::size_t M = W_hat.size();
    if (M == 0)
        throw ValidationError("generative parameters need at least one view");
    for (std::size_t m = 0; m < M; ++m) {
        if (W_hat[m].cols() != hyper.K_hat || W_hat[m].rows() < 1)
            throw ValidationError("shared loadings of view " + std::to_string(m + 1) + " have the wrong shape");
    }
    for (int c = 0; c < S; ++c) {
        if (W[c].size() != M || tau[c].size() != M)
            throw ValidationError("cluster " + std::to_string(c + 1) + " has the wrong number of views");
        for (std::size_t m = 0; m < M; ++m) {
            if (W[c][m].rows() != W_hat[m].rows() || W[c][m].cols() != hyper.K)
                throw ValidationError("loadings of cluster " + std::to_string(c + 1) + ", view " +
                                      std::to_string(m + 1) + " have the wrong shape");
            if (!(tau[c][m] > 0.0) || !std::isfinite(tau[c][m]))
                throw ValidationError("noise precisions must be positive");
        }
    }
}

SimulatedData sample_generative(const GenerativeParams& params, const Hyperparameters& hyper, int N,
                                std::uint64_t seed)
{
    params.validate(hyper);
    if (N < 1)
        throw ValidationError("N must be at least 1");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const int K = hyper.K, K_hat = hyper.K_hat, S = hyper.S;
    const auto dims = params.view_dims();
    const std::size_t M = dims.size();

    LatentRecord latent;
    latent.z = Eigen::MatrixXd(N, K);
    latent.z_hat = Eigen::MatrixXd(N, K_hat);
    latent.c.resize(N);
    latent.r.resize(N);
    std::vector<Eigen::MatrixXd> views;
    for (int d : dims)
        views.emplace_back(N, d);

    for (int n = 0; n < N; ++n) {
        // Inverse-CDF draw; zero-probability clusters are never selected.
        const double u = unif(rng);
        int c = -1;
        double acc = 0.0;
        for (int j = 0; j < S; ++j) {
            acc += params.pi(j);
            if (params.pi(j) > 0.0) {
                c = j;
                if (u < acc)
                    break;
            }
        }
        latent.c[n] = c;
        for (int k = 0; k < K; ++k)
            latent.z(n, k) = normal(rng);
        for (int k = 0; k < K_hat; ++k)
            latent.z_hat(n, k) = normal(rng);
        for (std::size_t m = 0; m < M; ++m) {
            Eigen::VectorXd mean = params.W[c][m] * latent.z.row(n).transpose() +
                                   params.W_hat[m] * latent.z_hat.row(n).transpose();
            const double sd = 1.0 / std::sqrt(params.tau[c][m]);
            for (int d = 0; d < dims[m]; ++d)
                views[m](n, d) = mean(d) + sd * normal(rng);
        }
        latent.r[n] = unif(rng) < params.gamma(c) ? 1 : 0;
    }

    SimulatedData out;
    out.data = validate_dataset(std::move(views), latent.r);
    out.latent = std::move(latent);
    return out;
}

Benchmark make_weak_signal_benchmark(int N, int M, int D, std::uint64_t seed, const BenchmarkOptions& options)
{
    if (N < 8 || N % 2 != 0)
        throw ValidationError("benchmark needs N >= 8 and even (got N = " + std::to_string(N) + ")");
    if (M < 2)
        throw ValidationError("benchmark needs M >= 2 views");
    if (D < 2)
        throw ValidationError("benchmark needs D >= 2 dimensions per view");
    if (options.K_true < 1 || options.K_hat_true < 1 || !(options.signal_ratio > 0.0) ||
        !(options.shared_scale > 0.0) || !(options.noise_sd > 0.0) || options.specific_views < 0 ||
        !(options.shared_overlap >= 0.0 && options.shared_overlap < 1.0))
        throw ValidationError("invalid benchmark options");

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> normal(0.0, 1.0);

    const int S = 2;
    Hyperparameters hyper;
    hyper.K = options.K_true;
    hyper.K_hat = options.K_hat_true;
    hyper.S = S;

    GenerativeParams p;
    p.pi = Eigen::VectorXd::Constant(S, 0.5);
    p.gamma = Eigen::Vector2d(1.0, 0.0);
    p.tau.assign(S, std::vector<double>(M, 1.0 / (options.noise_sd * options.noise_sd)));

    double shared_sq = 0.0;
    for (int m = 0; m < M; ++m) {
        Eigen::MatrixXd w(D, options.K_hat_true);
        for (Eigen::Index i = 0; i < w.size(); ++i)
            w(i) = normal(rng);
        shared_sq += w.squaredNorm();
        p.W_hat.push_back(std::move(w));
    }
    const double shared_rescale = options.shared_scale / std::sqrt(shared_sq / (M * D * options.K_hat_true));
    for (auto& w : p.W_hat)
        w *= shared_rescale;
    const double shared_norm = std::sqrt(shared_sq) * shared_rescale;

    const int active_views = options.specific_views > 0 ? std::min(options.specific_views, M) : M;
    p.W.resize(S);
    for (int c = 0; c < S; ++c) {
        for (int m = 0; m < M; ++m)
            p.W[c].push_back(Eigen::MatrixXd::Zero(D, options.K_true));
        for (int k = 0; k < options.K_true; ++k) {
            std::vector<int> order(M);
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), rng);
            for (int a = 0; a < active_views; ++a)
                for (int d = 0; d < D; ++d)
                    p.W[c][order[a]](d, k) = normal(rng);
        }
        // Tilt each specific column towards a random direction inside the shared span,
        // so the cluster difference sits under the dominant shared variance.
        if (options.shared_overlap > 0.0) {
            for (int k = 0; k < options.K_true; ++k) {
                Eigen::VectorXd mix(options.K_hat_true);
                for (Eigen::Index j = 0; j < mix.size(); ++j)
                    mix(j) = normal(rng);
                double own = 0.0, inside = 0.0;
                for (int m = 0; m < M; ++m) {
                    own += p.W[c][m].col(k).squaredNorm();
                    inside += (p.W_hat[m] * mix).squaredNorm();
                }
                const double a = options.shared_overlap / std::sqrt(inside);
                const double b = std::sqrt(1.0 - options.shared_overlap * options.shared_overlap) / std::sqrt(own);
                for (int m = 0; m < M; ++m)
                    p.W[c][m].col(k) = b * p.W[c][m].col(k) + a * (p.W_hat[m] * mix);
            }
        }
        double sq = 0.0;
        for (const auto& w : p.W[c])
            sq += w.squaredNorm();
        const double scale = shared_norm / (options.signal_ratio * std::sqrt(sq));
        for (auto& w : p.W[c])
            w *= scale;
    }

    auto sim = sample_generative(p, hyper, N, seed);
    Benchmark out;
    out.params = std::move(p);
    out.data = std::move(sim.data);
    out.latent = std::move(sim.latent);
    return out;
}

} // namespace gfamix
