#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gfamix/glasso.hpp"
#include "gfamix/hyperparameters.hpp"
#include "gfamix/resample.hpp"

namespace gfamix::cli {

struct RunConfig
{
    std::string command;
    std::filesystem::path data;
    std::filesystem::path model;
    std::filesystem::path out;
    std::uint64_t seed = 1;
    Hyperparameters hyper = default_hyperparameters(2, 4, 2);

    std::string classifier = "gfamix";
    std::vector<int> train_sizes{4, 8, 16, 28, 42};
    int test_size = 10;
    int repeats = 10;

    // simulate
    int n_samples = 60;
    int n_views = 4;
    int view_dim = 5;
};

inline const std::vector<std::string> kClassifierNames{"gfamix", "gfamix-noshared", "glasso"};

/// Fit/predict adapter for a named classifier. "gfamix-noshared" moves the
/// shared factor budget into the cluster-specific block (K + K_hat, 0).
Classifier make_classifier(const std::string& name, const Hyperparameters& hyper,
                           const GLassoOptions& glasso_options = {});

// Each command validates its inputs before writing anything.
void cmd_simulate(const RunConfig& config, std::ostream& log);
void cmd_train(const RunConfig& config, std::ostream& log);
void cmd_predict(const RunConfig& config, std::ostream& log);
void cmd_evaluate(const RunConfig& config, std::ostream& log);
void cmd_reconstruct(const RunConfig& config, std::ostream& log);
void cmd_compare(const RunConfig& config, std::ostream& log);

/// Parses argv, runs the command and maps failures onto exit codes:
/// 0 success, 2 validation, 3 IO, 4 numerical.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gfamix::cli
