#include "gfamix/metrics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "gfamix/error.hpp"

namespace gfamix {

double auc(std::span<const double> scores, std::span<const int> labels)
{
    if (scores.size() != labels.size())
        throw ValidationError("auc: scores and labels differ in length");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Rank-sum over positives with midranks for ties, kept in half-units so the
    // result is exact in double for moderate n.
    double pos = 0.0, neg = 0.0, rank_sum2 = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]])
            ++j;
        const double midrank2 = static_cast<double>(i + 1 + j); // 2 * average of ranks i+1..j
        for (std::size_t t = i; t < j; ++t) {
            const int y = labels[order[t]];
            if (y == 1) {
                pos += 1.0;
                rank_sum2 += midrank2;
            } else if (y == 0) {
                neg += 1.0;
            } else {
                throw ValidationError("auc: label outside {0,1}");
            }
        }
        i = j;
    }
    if (pos == 0.0 || neg == 0.0)
        throw ValidationError("auc: both classes must be present");
    const double u2 = rank_sum2 - pos * (pos + 1.0);
    return u2 / (2.0 * pos * neg);
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b)
{
    if (a.size() != b.size())
        throw ValidationError("adjusted_rand_index: labelings differ in length");
    std::map<std::pair<int, int>, double> table;
    std::map<int, double> rows, cols;
    for (std::size_t i = 0; i < a.size(); ++i) {
        table[{a[i], b[i]}] += 1.0;
        rows[a[i]] += 1.0;
        cols[b[i]] += 1.0;
    }
    auto choose2 = [](double x) { return 0.5 * x * (x - 1.0); };
    double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
    for (const auto& [_, v] : table)
        index += choose2(v);
    for (const auto& [_, v] : rows)
        sum_rows += choose2(v);
    for (const auto& [_, v] : cols)
        sum_cols += choose2(v);
    const double total = choose2(static_cast<double>(a.size()));
    const double expected = total > 0.0 ? sum_rows * sum_cols / total : 0.0;
    const double max_index = 0.5 * (sum_rows + sum_cols);
    if (max_index == expected)
        return 1.0;
    return (index - expected) / (max_index - expected);
}

} // namespace gfamix
