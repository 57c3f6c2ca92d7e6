#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gfamix/dataset.hpp"

namespace gfamix {

/// Logistic regression with one l2 group penalty per view:
///   (1/N) sum_n logloss(y_n, b + sum_m x_n^(m) . w^(m)) + lambda sum_m sqrt(D_m) ||w^(m)||
/// solved on standardized features. Coefficients are stored on both scales.
struct GLassoModel
{
    double intercept = 0.0;                  // original scale
    std::vector<Eigen::VectorXd> weights;    // original scale, per view
    double lambda_selected = 0.0;
    std::vector<double> lambda_path;
    std::vector<double> cv_curve;            // mean validation log-loss per lambda

    // Standardization used during fitting.
    std::vector<Eigen::VectorXd> feature_mean;
    std::vector<Eigen::VectorXd> feature_sd;
    double std_intercept = 0.0;
    std::vector<Eigen::VectorXd> std_weights;

    int n_active_groups() const;
};

struct GLassoOptions
{
    double tol = 1e-10;      // max absolute coefficient change per sweep
    int max_sweeps = 100000;
    std::function<void(double)> on_block; // penalized objective after every block step, if set
};

/// Smallest lambda for which all groups are zero on the standardized problem.
double glasso_lambda_max(const MultiViewDataset& data);

/// Fits at a single lambda (no CV). warm_start may be null.
GLassoModel fit_glasso_at(const MultiViewDataset& data, double lambda, const GLassoOptions& options = {},
                          const GLassoModel* warm_start = nullptr);

/// Lambda path log-spaced from lambda_max down by 1e-3, stratified CV on mean
/// validation log-loss, refit on all data at the selected lambda.
GLassoModel fit_glasso(const MultiViewDataset& data, int n_lambda = 20, int cv_folds = 5, std::uint64_t seed = 0,
                       const GLassoOptions& options = {});

/// Refits on all data along a path (warm-started, decreasing lambda order as given).
std::vector<GLassoModel> glasso_path(const MultiViewDataset& data, const std::vector<double>& lambdas,
                                     const GLassoOptions& options = {});

Eigen::VectorXd predict_glasso(const GLassoModel& model, const MultiViewDataset& data);

/// Penalized objective on the model's standardized scale.
double glasso_objective(const GLassoModel& model, const MultiViewDataset& data, double lambda);

struct GLassoKkt
{
    double max_zero_group_excess = 0.0;   // max over zero groups of ||grad|| - lambda sqrt(D_m)
    double max_active_residual = 0.0;     // max over active groups of ||grad + lambda sqrt(D_m) w/||w|| ||
    double intercept_gradient = 0.0;
};

GLassoKkt glasso_kkt(const GLassoModel& model, const MultiViewDataset& data, double lambda);

/// Stratified fold ids in [0, folds); each fold gets a share of both classes.
std::vector<int> stratified_folds(const std::vector<int>& labels, int folds, std::uint64_t seed);

} // namespace gfamix
