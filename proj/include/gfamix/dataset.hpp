#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gfamix {

using Labels = std::vector<int>;

/// N samples observed in M views; view m is an N x D_m matrix.
/// Construct through validate_dataset() so the invariants hold.
struct MultiViewDataset
{
    std::vector<Eigen::MatrixXd> views;
    std::vector<std::string> view_names;
    std::optional<Labels> labels;

    std::size_t n_samples() const { return views.empty() ? 0 : static_cast<std::size_t>(views.front().rows()); }
    std::size_t n_views() const { return views.size(); }
    std::vector<int> view_dims() const;
    int total_dim() const;
    bool has_labels() const { return labels.has_value(); }

    /// Row-concatenation of all views (N x sum D_m).
    Eigen::MatrixXd concatenated() const;

    /// New dataset holding the given rows (labels follow if present).
    MultiViewDataset subset(const std::vector<std::size_t>& rows) const;
};

/// Checks shapes, finiteness and label values. Throws ValidationError.
/// Empty view_names are replaced by "view1".."viewM".
MultiViewDataset validate_dataset(std::vector<Eigen::MatrixXd> views,
                                  std::optional<Labels> labels = std::nullopt,
                                  std::vector<std::string> view_names = {});

// On-disk layout: manifest.json + one headerless CSV per view (+ labels CSV).
// Paths inside the manifest are relative to the manifest's directory.
MultiViewDataset read_dataset(const std::filesystem::path& manifest);
void write_dataset(const MultiViewDataset& data, const std::filesystem::path& directory,
                   const std::string& manifest_name = "manifest.json");

} // namespace gfamix
