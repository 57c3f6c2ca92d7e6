#pragma once

// Independent reference implementations used only by tests. Written with plain
// loops and boost special functions so they share no code with the library.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>
#include <Eigen/Dense>

#include "gfamix/dataset.hpp"
#include "gfamix/hyperparameters.hpp"
#include "gfamix/variational_state.hpp"

namespace oracle {

inline double brute_force_auc(const std::vector<double>& s, const std::vector<int>& y)
{
    double num = 0.0, pairs = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (y[i] != 1)
            continue;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (y[j] != 0)
                continue;
            pairs += 1.0;
            if (s[i] > s[j])
                num += 1.0;
            else if (s[i] == s[j])
                num += 0.5;
        }
    }
    return num / pairs;
}

/// log N(x; 0, cov) by dense LU.
inline double gaussian_logpdf(const Eigen::VectorXd& x, const Eigen::MatrixXd& cov)
{
    Eigen::FullPivLU<Eigen::MatrixXd> lu(cov);
    const double logdet = std::log(std::abs(lu.determinant()));
    const double quad = x.dot(lu.solve(x));
    return -0.5 * (static_cast<double>(x.size()) * std::log(2.0 * std::numbers::pi) + logdet + quad);
}

struct Logistic
{
    double b = 0.0;
    Eigen::VectorXd w;
};

/// Unpenalized logistic regression by plain gradient descent with step 1/L.
inline Logistic logistic_gd(const Eigen::MatrixXd& X, const std::vector<int>& y, double grad_tol = 1e-10,
                            int max_iter = 5000000)
{
    const auto N = X.rows();
    Eigen::MatrixXd A(N, X.cols() + 1);
    A.col(0).setOnes();
    A.rightCols(X.cols()) = X;
    const double L = 0.25 * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A.transpose() * A / N).eigenvalues().maxCoeff();
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(A.cols());
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd eta = A * theta;
        Eigen::VectorXd r(N);
        for (Eigen::Index n = 0; n < N; ++n)
            r(n) = 1.0 / (1.0 + std::exp(-eta(n))) - y[n];
        Eigen::VectorXd g = A.transpose() * r / static_cast<double>(N);
        if (g.norm() < grad_tol)
            break;
        theta -= g / L;
    }
    return {theta(0), theta.tail(X.cols())};
}

inline double gamma_elbo_block(double shape, double rate, double a0, double b0)
{
    using boost::math::digamma;
    const double elog = digamma(shape) - std::log(rate);
    const double mean = shape / rate;
    const double prior = a0 * std::log(b0) - std::lgamma(a0) + (a0 - 1.0) * elog - b0 * mean;
    const double entropy = shape - std::log(rate) + std::lgamma(shape) + (1.0 - shape) * digamma(shape);
    return prior + entropy;
}

inline double beta_elbo_block(double a, double b, double a0, double b0, double& elog, double& elog1m)
{
    using boost::math::digamma;
    elog = digamma(a) - digamma(a + b);
    elog1m = digamma(b) - digamma(a + b);
    auto lbeta = [](double p, double q) { return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q); };
    const double prior = -lbeta(a0, b0) + (a0 - 1.0) * elog + (b0 - 1.0) * elog1m;
    const double entropy = lbeta(a, b) - (a - 1.0) * digamma(a) - (b - 1.0) * digamma(b) +
                           (a + b - 2.0) * digamma(a + b);
    return prior + entropy;
}

/// Bound of a single-cluster model with no shared block: plain group factor
/// analysis plus the beta-weighted label likelihood of its one cluster.
inline double plain_gfa_elbo(const gfamix::VariationalState& s, const gfamix::MultiViewDataset& data,
                             const gfamix::Hyperparameters& h)
{
    const int N = static_cast<int>(data.n_samples());
    const int K = s.K;
    const double log2pi = std::log(2.0 * std::numbers::pi);
    double total = 0.0;

    for (std::size_t m = 0; m < data.n_views(); ++m) {
        const auto& X = data.views[m];
        const auto& W = s.w_mean[0][m];
        const auto& V = s.w_cov[0][m];
        const int D = static_cast<int>(X.cols());
        const double tau_shape = s.tau[0][m].shape, tau_rate = s.tau[0][m].rate;
        const double etau = tau_shape / tau_rate;
        const double elogtau = boost::math::digamma(tau_shape) - std::log(tau_rate);

        Eigen::MatrixXd WtW = Eigen::MatrixXd::Zero(K, K);
        for (int d = 0; d < D; ++d)
            WtW += W.row(d).transpose() * W.row(d) + V;

        for (int n = 0; n < N; ++n) {
            Eigen::VectorXd mu = s.z_mean.row(n).transpose();
            Eigen::MatrixXd Ezz = s.z_cov[n] + mu * mu.transpose();
            double resid = X.row(n).squaredNorm() - 2.0 * X.row(n).dot(W * mu) + (WtW * Ezz).trace();
            total += 0.5 * D * (elogtau - log2pi) - 0.5 * etau * resid;
        }
        total += gamma_elbo_block(tau_shape, tau_rate, h.noise_shape, h.noise_rate);

        // p(W | alpha) and q(W): D rows share covariance V
        for (int k = 0; k < K; ++k) {
            const auto& a = s.alpha[0][m][k];
            const double ealpha = a.shape / a.rate;
            const double elogalpha = boost::math::digamma(a.shape) - std::log(a.rate);
            double ew2 = 0.0;
            for (int d = 0; d < D; ++d)
                ew2 += W(d, k) * W(d, k) + V(k, k);
            total += 0.5 * D * (elogalpha - log2pi) - 0.5 * ealpha * ew2;
            total += gamma_elbo_block(a.shape, a.rate, h.ard_shape, h.ard_rate);
        }
        total += 0.5 * D * (K * (1.0 + log2pi) + std::log(V.determinant()));
    }

    for (int n = 0; n < N; ++n) {
        Eigen::VectorXd mu = s.z_mean.row(n).transpose();
        const auto& C = s.z_cov[n];
        total += -0.5 * K * log2pi - 0.5 * (C.trace() + mu.squaredNorm());
        total += 0.5 * (K * (1.0 + log2pi) + std::log(C.determinant()));
    }

    double elog = 0.0, elog1m = 0.0;
    total += beta_elbo_block(s.gamma[0].a, s.gamma[0].b, h.beta_a, h.beta_b, elog, elog1m);
    for (int n = 0; n < N; ++n)
        total += h.beta_weight * ((*data.labels)[n] == 1 ? elog : elog1m);
    return total;
}

} // namespace oracle
