#include "gfamix/distributions.hpp"

#include <cmath>

#include "gfamix/special_functions.hpp"

namespace gfamix {

double GammaDist::mean_log() const
{
    return digamma(shape) - std::log(rate);
}

double GammaDist::entropy() const
{
    return shape - std::log(rate) + log_gamma(shape) + (1.0 - shape) * digamma(shape);
}

double GammaDist::expected_log_prior(double prior_shape, double prior_rate) const
{
    return prior_shape * std::log(prior_rate) - log_gamma(prior_shape) + (prior_shape - 1.0) * mean_log() -
           prior_rate * mean();
}

double BetaDist::mean_log() const
{
    return digamma(a) - digamma(a + b);
}

double BetaDist::mean_log_complement() const
{
    return digamma(b) - digamma(a + b);
}

static double log_beta_fn(double a, double b)
{
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double BetaDist::entropy() const
{
    return log_beta_fn(a, b) - (a - 1.0) * digamma(a) - (b - 1.0) * digamma(b) + (a + b - 2.0) * digamma(a + b);
}

double BetaDist::expected_log_prior(double prior_a, double prior_b) const
{
    return -log_beta_fn(prior_a, prior_b) + (prior_a - 1.0) * mean_log() + (prior_b - 1.0) * mean_log_complement();
}

Eigen::VectorXd DirichletDist::mean_log() const
{
    const double total = digamma(conc.sum());
    Eigen::VectorXd out(conc.size());
    for (Eigen::Index c = 0; c < conc.size(); ++c)
        out(c) = digamma(conc(c)) - total;
    return out;
}

double DirichletDist::entropy() const
{
    const double a0 = conc.sum();
    double h = -log_gamma(a0) + (a0 - static_cast<double>(conc.size())) * digamma(a0);
    for (Eigen::Index c = 0; c < conc.size(); ++c)
        h += log_gamma(conc(c)) - (conc(c) - 1.0) * digamma(conc(c));
    return h;
}

double DirichletDist::expected_log_prior(double prior_conc) const
{
    const double S = static_cast<double>(conc.size());
    return log_gamma(S * prior_conc) - S * log_gamma(prior_conc) + (prior_conc - 1.0) * mean_log().sum();
}

} // namespace gfamix
