#include "gfamix/elbo.hpp"

#include <cmath>

#include "gfamix/error.hpp"
#include "gfamix/special_functions.hpp"
#include "gfamix/updates.hpp"

namespace gfamix {

double ElboTerms::total() const
{
    return data + labels + assignments + mixture_weights + label_probs + latents + loadings + shared_loadings + ard +
           shared_ard + noise + pruned_offset;
}

namespace {

// E log N(W | 0, diag(alpha)^-1 rowwise) - E log q(W) for one D x K block whose rows
// share covariance V.
double loading_block(const Eigen::MatrixXd& mean, const Eigen::MatrixXd& cov, const std::vector<GammaDist>& alpha)
{
    const int K = static_cast<int>(mean.cols());
    if (K == 0)
        return 0.0;
    const double D = static_cast<double>(mean.rows());
    double out = 0.5 * D * log_det_spd(cov) + 0.5 * D * K;
    for (int k = 0; k < K; ++k) {
        const double second = mean.col(k).squaredNorm() + D * cov(k, k);
        out += 0.5 * D * alpha[k].mean_log() - 0.5 * alpha[k].mean() * second;
    }
    return out;
}

double gamma_block(const GammaDist& q, double prior_shape, double prior_rate)
{
    return q.expected_log_prior(prior_shape, prior_rate) + q.entropy();
}

} // namespace

ElboTerms loading_terms(const VariationalState& s, const Hyperparameters& hyper)
{
    ElboTerms t;
    for (int m = 0; m < s.n_views(); ++m) {
        for (int c = 0; c < s.S; ++c) {
            t.loadings += loading_block(s.w_mean[c][m], s.w_cov[c][m], s.alpha[c][m]);
            for (int k = 0; k < s.K; ++k)
                t.ard += gamma_block(s.alpha[c][m][k], hyper.ard_shape, hyper.ard_rate);
        }
        t.shared_loadings += loading_block(s.what_mean[m], s.what_cov[m], s.alpha_hat[m]);
        for (int k = 0; k < s.K_hat; ++k)
            t.shared_ard += gamma_block(s.alpha_hat[m][k], hyper.shared_ard_shape, hyper.shared_ard_rate);
    }
    return t;
}

ElboTerms elbo_terms(const VariationalState& s, const MultiViewDataset& data, const Hyperparameters& hyper)
{
    if (!data.labels)
        throw ValidationError("labels are required to evaluate the bound");
    const auto& labels = *data.labels;
    const int N = s.n_samples();
    const int M = s.n_views();
    const int L = s.n_factors();

    ElboTerms t;
    t.pruned_offset = s.pruned_offset;

    const Eigen::MatrixXd ell = expected_log_likelihood(s, data);
    t.data = s.resp.cwiseProduct(ell).sum();

    const Eigen::VectorXd log_pi = s.pi.mean_log();
    for (int n = 0; n < N; ++n) {
        for (int c = 0; c < s.S; ++c) {
            const double r = s.resp(n, c);
            if (r == 0.0)
                continue;
            const double label_term = labels[n] == 1 ? s.gamma[c].mean_log() : s.gamma[c].mean_log_complement();
            t.labels += hyper.beta_weight * r * label_term;
            t.assignments += r * (log_pi(c) - std::log(r));
        }
    }

    t.mixture_weights = s.pi.expected_log_prior(hyper.dirichlet_conc) + s.pi.entropy();
    for (int c = 0; c < s.S; ++c)
        t.label_probs += s.gamma[c].expected_log_prior(hyper.beta_a, hyper.beta_b) + s.gamma[c].entropy();

    for (int n = 0; n < N; ++n) {
        const auto& cov = s.z_cov[n];
        t.latents += 0.5 * (L + log_det_spd(cov) - cov.trace() - s.z_mean.row(n).squaredNorm());
    }

    const auto lt = loading_terms(s, hyper);
    t.loadings = lt.loadings;
    t.shared_loadings = lt.shared_loadings;
    t.ard = lt.ard;
    t.shared_ard = lt.shared_ard;
    for (int m = 0; m < M; ++m)
        for (int c = 0; c < s.S; ++c)
            t.noise += gamma_block(s.tau[c][m], hyper.noise_shape, hyper.noise_rate);

    if (!std::isfinite(t.total()))
        throw NumericalError("evidence lower bound is not finite");
    return t;
}

double elbo(const VariationalState& s, const MultiViewDataset& data, const Hyperparameters& hyper)
{
    return elbo_terms(s, data, hyper).total();
}

} // namespace gfamix
