#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gfamix/dataset.hpp"

namespace gfamix {

/// Fits on the training set and returns a class-1 score per test sample.
using Classifier = std::function<Eigen::VectorXd(const MultiViewDataset& train, const MultiViewDataset& test,
                                                 std::uint64_t seed)>;

struct ResampleDraw
{
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    std::uint64_t seed = 0; // handed to the classifier
};

struct EvalReport
{
    std::vector<int> train_sizes;
    std::vector<double> auc_mean;
    std::vector<std::vector<double>> auc_per_draw;
    int n_repeats = 0;
    std::uint64_t seed = 0;
};

struct ResampleOptions
{
    std::vector<int> train_sizes{4, 8, 16, 28, 42};
    int test_size = 10;
    int n_repeats = 10;
    std::uint64_t seed = 0;
};

/// Disjoint train/test index sets for every (size, repeat), drawn uniformly
/// without replacement; redrawn (up to 100 times) until both the training and
/// the test set contain both classes. draws[s][r].
std::vector<std::vector<ResampleDraw>> draw_resamples(const MultiViewDataset& data, const ResampleOptions& options);

EvalReport resample_eval(const MultiViewDataset& data, const Classifier& classifier, const ResampleOptions& options);

/// Same as resample_eval but on precomputed draws (paired comparisons).
EvalReport evaluate_draws(const MultiViewDataset& data, const Classifier& classifier,
                          const std::vector<std::vector<ResampleDraw>>& draws, const ResampleOptions& options);

} // namespace gfamix
