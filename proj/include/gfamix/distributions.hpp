#pragma once

#include <Eigen/Dense>

namespace gfamix {

// Exponential-family factors used by the mean-field posterior. Each carries
// the expectations the coordinate updates and the bound need.

struct GammaDist
{
    double shape = 1.0;
    double rate = 1.0;

    double mean() const { return shape / rate; }
    double mean_log() const;
    double entropy() const;
    /// E_q[log Gamma(x; prior_shape, prior_rate)] under q = *this.
    double expected_log_prior(double prior_shape, double prior_rate) const;
};

struct BetaDist
{
    double a = 0.5;
    double b = 0.5;

    double mean() const { return a / (a + b); }
    double mean_log() const;          // E[log p]
    double mean_log_complement() const; // E[log(1 - p)]
    double entropy() const;
    double expected_log_prior(double prior_a, double prior_b) const;
};

struct DirichletDist
{
    Eigen::VectorXd conc;

    Eigen::VectorXd mean() const { return conc / conc.sum(); }
    Eigen::VectorXd mean_log() const;
    double entropy() const;
    /// Symmetric Dirichlet prior with concentration prior_conc in every slot.
    double expected_log_prior(double prior_conc) const;
};

} // namespace gfamix
