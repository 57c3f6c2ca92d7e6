#include "gfamix/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>

#include "gfamix/elbo.hpp"
#include "gfamix/error.hpp"
#include "gfamix/updates.hpp"

namespace gfamix {

std::string_view to_string(UpdateStep step)
{
    switch (step) {
    case UpdateStep::Latents: return "latents";
    case UpdateStep::Loadings: return "loadings";
    case UpdateStep::Ard: return "ard";
    case UpdateStep::Noise: return "noise";
    case UpdateStep::Assignments: return "assignments";
    case UpdateStep::MixtureWeights: return "mixture_weights";
    case UpdateStep::LabelProbs: return "label_probs";
    case UpdateStep::Prune: return "prune";
    }
    return "unknown";
}

namespace {

Eigen::MatrixXd standardized(const Eigen::MatrixXd& X)
{
    Eigen::MatrixXd Z = X.rowwise() - X.colwise().mean();
    for (Eigen::Index j = 0; j < Z.cols(); ++j) {
        const double sd = std::sqrt(Z.col(j).squaredNorm() / static_cast<double>(Z.rows()));
        if (sd > 0.0)
            Z.col(j) /= sd;
    }
    return Z;
}

std::size_t count_distinct_rows(const Eigen::MatrixXd& X)
{
    std::set<std::vector<double>> rows;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        std::vector<double> r(static_cast<std::size_t>(X.cols()));
        for (Eigen::Index j = 0; j < X.cols(); ++j)
            r[static_cast<std::size_t>(j)] = X(i, j);
        rows.insert(std::move(r));
    }
    return rows.size();
}

// k-means++ seeding followed by a few Lloyd sweeps.
std::vector<int> kmeans_assign(const Eigen::MatrixXd& X, int S, std::mt19937_64& rng)
{
    const Eigen::Index N = X.rows();
    std::vector<Eigen::RowVectorXd> centers;
    std::uniform_int_distribution<Eigen::Index> pick(0, N - 1);
    centers.push_back(X.row(pick(rng)));
    Eigen::VectorXd d2(N);
    while (static_cast<int>(centers.size()) < S) {
        for (Eigen::Index i = 0; i < N; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& ctr : centers)
                best = std::min(best, (X.row(i) - ctr).squaredNorm());
            d2(i) = best;
        }
        const double total = d2.sum();
        Eigen::Index chosen = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double target = u(rng), acc = 0.0;
            chosen = N - 1;
            for (Eigen::Index i = 0; i < N; ++i) {
                acc += d2(i);
                if (d2(i) > 0.0 && acc >= target) {
                    chosen = i;
                    break;
                }
            }
        }
        centers.push_back(X.row(chosen));
    }

    std::vector<int> assign(static_cast<std::size_t>(N), 0);
    for (int sweep = 0; sweep < 10; ++sweep) {
        bool changed = false;
        for (Eigen::Index i = 0; i < N; ++i) {
            int best_c = 0;
            double best = std::numeric_limits<double>::infinity();
            for (int c = 0; c < S; ++c) {
                const double d = (X.row(i) - centers[c]).squaredNorm();
                if (d < best) {
                    best = d;
                    best_c = c;
                }
            }
            changed = changed || assign[i] != best_c;
            assign[i] = best_c;
        }
        if (sweep > 0 && !changed)
            break;
        for (int c = 0; c < S; ++c) {
            Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(X.cols());
            int count = 0;
            for (Eigen::Index i = 0; i < N; ++i)
                if (assign[i] == c) {
                    sum += X.row(i);
                    ++count;
                }
            if (count > 0)
                centers[c] = sum / count;
        }
    }
    return assign;
}

} // namespace

VariationalState initialize(const MultiViewDataset& data, const Hyperparameters& hyper, std::uint64_t seed)
{
    hyper.validate();
    if (!data.labels)
        throw ValidationError("labels are required for training");
    const int N = static_cast<int>(data.n_samples());
    const int M = static_cast<int>(data.n_views());
    const int S = hyper.S, K = hyper.K, K_hat = hyper.K_hat, L = hyper.n_factors();

    const Eigen::MatrixXd X = data.concatenated();
    if (static_cast<int>(count_distinct_rows(X)) < S)
        throw ValidationError("fewer distinct samples than clusters (S = " + std::to_string(S) + ")");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    VariationalState s;
    s.K = K;
    s.K_hat = K_hat;
    s.S = S;
    s.view_dims = data.view_dims();

    const Eigen::MatrixXd Z = standardized(X);
    const auto assign = kmeans_assign(Z, S, rng);
    s.resp = Eigen::MatrixXd(N, S);
    for (int n = 0; n < N; ++n) {
        if (S == 1) {
            s.resp(n, 0) = 1.0;
            continue;
        }
        s.resp.row(n).setConstant(0.1 / (S - 1));
        s.resp(n, assign[n]) = 0.9;
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(Z, Eigen::ComputeThinU);
    // Leading components go to the shared block, the next ones to the cluster block.
    s.z_mean = Eigen::MatrixXd::Zero(N, L);
    const Eigen::MatrixXd scores = std::sqrt(static_cast<double>(N)) * svd.matrixU();
    for (int j = 0; j < L && j < scores.cols(); ++j)
        s.z_mean.col(j < K_hat ? K + j : j - K_hat) = scores.col(j);
    s.z_cov.assign(N, Eigen::MatrixXd::Identity(L, L));

    auto small_random = [&](int rows, int cols) {
        Eigen::MatrixXd w(rows, cols);
        for (Eigen::Index i = 0; i < w.size(); ++i)
            w(i) = 0.01 * normal(rng);
        return w;
    };
    s.w_mean.resize(S);
    s.w_cov.resize(S);
    for (int c = 0; c < S; ++c)
        for (int m = 0; m < M; ++m) {
            s.w_mean[c].push_back(small_random(s.view_dims[m], K));
            s.w_cov[c].push_back(Eigen::MatrixXd::Identity(K, K));
        }
    for (int m = 0; m < M; ++m) {
        s.what_mean.push_back(small_random(s.view_dims[m], K_hat));
        s.what_cov.push_back(Eigen::MatrixXd::Identity(K_hat, K_hat));
    }

    s.alpha.assign(S, std::vector<std::vector<GammaDist>>(M, std::vector<GammaDist>(K, {hyper.ard_shape, hyper.ard_rate})));
    s.alpha_hat.assign(M, std::vector<GammaDist>(K_hat, {hyper.shared_ard_shape, hyper.shared_ard_rate}));
    // Noise starts at 0.1% of each view's mean square so weak structure is not
    // absorbed into the noise before the loadings have formed.
    s.tau.assign(S, std::vector<GammaDist>(M));
    for (int m = 0; m < M; ++m) {
        const double mean_square = std::max(data.views[m].squaredNorm() / data.views[m].size(), 1e-300);
        const double shape = hyper.noise_shape + 0.5 * N * s.view_dims[m];
        for (int c = 0; c < S; ++c)
            s.tau[c][m] = {shape, shape * mean_square / 1000.0};
    }
    s.pi.conc = Eigen::VectorXd::Constant(S, hyper.dirichlet_conc);
    s.gamma.assign(S, {hyper.beta_a, hyper.beta_b});
    return s;
}

void run_update_cycle(VariationalState& s, const MultiViewDataset& data, const Hyperparameters& hyper,
                      const FitObserver& observer)
{
    auto notify = [&](UpdateStep step) {
        if (observer)
            observer(step, s);
    };
    update_loadings(s, data);
    notify(UpdateStep::Loadings);
    update_latents(s, data);
    notify(UpdateStep::Latents);
    update_ard(s, hyper);
    notify(UpdateStep::Ard);
    update_noise(s, data, hyper);
    notify(UpdateStep::Noise);
    update_assignments(s, data, hyper);
    notify(UpdateStep::Assignments);
    update_mixture_weights(s, hyper);
    notify(UpdateStep::MixtureWeights);
    update_label_probs(s, data, hyper);
    notify(UpdateStep::LabelProbs);
}

TrainedModel fit(const MultiViewDataset& data, const Hyperparameters& hyper, std::uint64_t seed,
                 const FitObserver& observer)
{
    TrainedModel model;
    model.hyper = hyper;
    model.view_dims = data.view_dims();
    model.state = initialize(data, hyper, seed);

    auto& s = model.state;
    for (int it = 1; it <= hyper.max_iter; ++it) {
        run_update_cycle(s, data, hyper, observer);
        if (hyper.prune_threshold && it % 10 == 0) {
            auto pruned = prune_factors(s, hyper, *hyper.prune_threshold);
            if (!pruned.removed_cluster_factors.empty() || !pruned.removed_shared_factors.empty()) {
                s = std::move(pruned.state);
                model.hyper.K = s.K;
                model.hyper.K_hat = s.K_hat;
                if (observer)
                    observer(UpdateStep::Prune, s);
            }
        }
        const double value = elbo(s, data, model.hyper);
        model.elbo_trace.push_back(value);
        model.n_iterations = it;
        if (model.elbo_trace.size() >= 2) {
            const double prev = model.elbo_trace[model.elbo_trace.size() - 2];
            if (std::abs(value - prev) < hyper.elbo_rel_tol * std::abs(prev)) {
                model.converged = true;
                break;
            }
        }
    }
    return model;
}

PruneResult prune_factors(const VariationalState& s, const Hyperparameters& hyper, double threshold)
{
    PruneResult out;
    const int M = s.n_views();
    std::vector<int> keep_k, keep_kh;
    for (int k = 0; k < s.K; ++k) {
        bool dead = true;
        for (int c = 0; c < s.S && dead; ++c)
            for (int m = 0; m < M && dead; ++m)
                dead = 1.0 / s.alpha[c][m][k].mean() < threshold;
        (dead ? out.removed_cluster_factors : keep_k).push_back(k);
    }
    for (int k = 0; k < s.K_hat; ++k) {
        bool dead = true;
        for (int m = 0; m < M && dead; ++m)
            dead = 1.0 / s.alpha_hat[m][k].mean() < threshold;
        (dead ? out.removed_shared_factors : keep_kh).push_back(k);
    }

    if (keep_k.empty() && keep_kh.empty()) {
        out.state = s;
        out.refused = true;
        out.removed_cluster_factors.clear();
        out.removed_shared_factors.clear();
        return out;
    }
    if (out.removed_cluster_factors.empty() && out.removed_shared_factors.empty()) {
        out.state = s;
        return out;
    }

    const int K = static_cast<int>(keep_k.size());
    const int K_hat = static_cast<int>(keep_kh.size());
    std::vector<int> keep_u(keep_k);
    for (int k : keep_kh)
        keep_u.push_back(s.K + k);

    auto take_cols = [](const Eigen::MatrixXd& A, const std::vector<int>& idx) {
        Eigen::MatrixXd B(A.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t j = 0; j < idx.size(); ++j)
            B.col(static_cast<Eigen::Index>(j)) = A.col(idx[j]);
        return B;
    };
    auto take_square = [](const Eigen::MatrixXd& A, const std::vector<int>& idx) {
        const auto n = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXd B(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                B(i, j) = A(idx[i], idx[j]);
        return B;
    };

    VariationalState p = s;
    p.K = K;
    p.K_hat = K_hat;
    p.z_mean = take_cols(s.z_mean, keep_u);
    for (auto& cov : p.z_cov)
        cov = take_square(cov, keep_u);
    for (int c = 0; c < s.S; ++c)
        for (int m = 0; m < M; ++m) {
            p.w_mean[c][m] = take_cols(s.w_mean[c][m], keep_k);
            p.w_cov[c][m] = take_square(s.w_cov[c][m], keep_k);
            std::vector<GammaDist> a;
            for (int k : keep_k)
                a.push_back(s.alpha[c][m][k]);
            p.alpha[c][m] = std::move(a);
        }
    for (int m = 0; m < M; ++m) {
        p.what_mean[m] = take_cols(s.what_mean[m], keep_kh);
        p.what_cov[m] = take_square(s.what_cov[m], keep_kh);
        std::vector<GammaDist> a;
        for (int k : keep_kh)
            a.push_back(s.alpha_hat[m][k]);
        p.alpha_hat[m] = std::move(a);
    }

    const auto before = loading_terms(s, hyper);
    const auto after = loading_terms(p, hyper);
    p.pruned_offset += (before.loadings + before.shared_loadings + before.ard + before.shared_ard) -
                       (after.loadings + after.shared_loadings + after.ard + after.shared_ard);
    out.state = std::move(p);
    return out;
}

} // namespace gfamix
