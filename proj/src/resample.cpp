#include "gfamix/resample.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "gfamix/error.hpp"
#include "gfamix/metrics.hpp"
#include "gfamix/seed.hpp"

namespace gfamix {

namespace {

bool both_classes(const Labels& labels, const std::vector<std::size_t>& idx)
{
    bool zero = false, one = false;
    for (auto i : idx) {
        zero = zero || labels[i] == 0;
        one = one || labels[i] == 1;
    }
    return zero && one;
}

void check_options(const MultiViewDataset& data, const ResampleOptions& options)
{
    if (!data.labels)
        throw ValidationError("resampling evaluation needs labels");
    if (options.train_sizes.empty())
        throw ValidationError("no training sizes given");
    if (options.test_size < 2)
        throw ValidationError("test size must be at least 2");
    if (options.n_repeats < 1)
        throw ValidationError("repeats must be at least 1");
    for (int size : options.train_sizes) {
        if (size < 2)
            throw ValidationError("training size " + std::to_string(size) + " is below 2");
        if (static_cast<std::size_t>(size + options.test_size) > data.n_samples())
            throw ValidationError("infeasible sizes: training size " + std::to_string(size) + " + test size " +
                                  std::to_string(options.test_size) + " exceeds N = " +
                                  std::to_string(data.n_samples()));
    }
}

} // namespace

std::vector<std::vector<ResampleDraw>> draw_resamples(const MultiViewDataset& data, const ResampleOptions& options)
{
    check_options(data, options);
    const auto& labels = *data.labels;
    const std::size_t N = data.n_samples();

    std::vector<std::vector<ResampleDraw>> draws;
    for (std::size_t si = 0; si < options.train_sizes.size(); ++si) {
        const auto size = static_cast<std::size_t>(options.train_sizes[si]);
        std::vector<ResampleDraw> per_size;
        for (int rep = 0; rep < options.n_repeats; ++rep) {
            const auto stream = derive_seed(options.seed, {si, static_cast<std::uint64_t>(rep)});
            std::mt19937_64 rng(stream);
            std::vector<std::size_t> idx(N);
            ResampleDraw draw;
            bool ok = false;
            for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
                std::iota(idx.begin(), idx.end(), 0);
                std::shuffle(idx.begin(), idx.end(), rng);
                draw.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(size));
                draw.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(size),
                                 idx.begin() + static_cast<std::ptrdiff_t>(size + options.test_size));
                ok = both_classes(labels, draw.train) && both_classes(labels, draw.test);
            }
            if (!ok)
                throw ValidationError("could not draw train/test sets containing both classes after 100 attempts");
            draw.seed = mix64(stream);
            per_size.push_back(std::move(draw));
        }
        draws.push_back(std::move(per_size));
    }
    return draws;
}

EvalReport evaluate_draws(const MultiViewDataset& data, const Classifier& classifier,
                          const std::vector<std::vector<ResampleDraw>>& draws, const ResampleOptions& options)
{
    check_options(data, options);
    EvalReport report;
    report.train_sizes = options.train_sizes;
    report.n_repeats = options.n_repeats;
    report.seed = options.seed;
    for (const auto& per_size : draws) {
        std::vector<double> aucs;
        for (const auto& draw : per_size) {
            const auto train = data.subset(draw.train);
            auto test = data.subset(draw.test);
            const Labels truth = *test.labels;
            test.labels.reset();
            const Eigen::VectorXd scores = classifier(train, test, draw.seed);
            aucs.push_back(auc(std::span<const double>(scores.data(), static_cast<std::size_t>(scores.size())), truth));
        }
        report.auc_mean.push_back(std::accumulate(aucs.begin(), aucs.end(), 0.0) / static_cast<double>(aucs.size()));
        report.auc_per_draw.push_back(std::move(aucs));
    }
    return report;
}

EvalReport resample_eval(const MultiViewDataset& data, const Classifier& classifier, const ResampleOptions& options)
{
    return evaluate_draws(data, classifier, draw_resamples(data, options), options);
}

} // namespace gfamix
