#include "gfamix/dataset.hpp"

#include <numeric>
#include <string>

#include "json.hpp"

#include "gfamix/csv.hpp"
#include "gfamix/error.hpp"
#include "gfamix/io.hpp"

namespace gfamix {

std::vector<int> MultiViewDataset::view_dims() const
{
    std::vector<int> dims;
    dims.reserve(views.size());
    for (const auto& v : views)
        dims.push_back(static_cast<int>(v.cols()));
    return dims;
}

int MultiViewDataset::total_dim() const
{
    const auto dims = view_dims();
    return std::accumulate(dims.begin(), dims.end(), 0);
}

Eigen::MatrixXd MultiViewDataset::concatenated() const
{
    Eigen::MatrixXd out(static_cast<Eigen::Index>(n_samples()), total_dim());
    Eigen::Index col = 0;
    for (const auto& v : views) {
        out.middleCols(col, v.cols()) = v;
        col += v.cols();
    }
    return out;
}

MultiViewDataset MultiViewDataset::subset(const std::vector<std::size_t>& rows) const
{
    MultiViewDataset out;
    out.view_names = view_names;
    for (const auto& v : views) {
        Eigen::MatrixXd sub(static_cast<Eigen::Index>(rows.size()), v.cols());
        for (std::size_t i = 0; i < rows.size(); ++i)
            sub.row(static_cast<Eigen::Index>(i)) = v.row(static_cast<Eigen::Index>(rows[i]));
        out.views.push_back(std::move(sub));
    }
    if (labels) {
        Labels sub;
        sub.reserve(rows.size());
        for (auto r : rows)
            sub.push_back((*labels)[r]);
        out.labels = std::move(sub);
    }
    return out;
}

MultiViewDataset validate_dataset(std::vector<Eigen::MatrixXd> views, std::optional<Labels> labels,
                                  std::vector<std::string> view_names)
{
    if (views.empty())
        throw ValidationError("dataset needs at least one view");
    const Eigen::Index n = views.front().rows();
    if (n < 1)
        throw ValidationError("dataset needs at least one sample");
    for (std::size_t m = 0; m < views.size(); ++m) {
        if (views[m].cols() < 1)
            throw ValidationError("empty view " + std::to_string(m + 1));
        if (views[m].rows() != n)
            throw ValidationError("row-count mismatch: view " + std::to_string(m + 1) + " has " +
                                  std::to_string(views[m].rows()) + " rows, expected " + std::to_string(n));
        if (!views[m].allFinite())
            throw ValidationError("non-finite entry in view " + std::to_string(m + 1));
    }
    if (labels) {
        if (static_cast<Eigen::Index>(labels->size()) != n)
            throw ValidationError("label length mismatch: " + std::to_string(labels->size()) + " labels for " +
                                  std::to_string(n) + " samples");
        for (int r : *labels)
            if (r != 0 && r != 1)
                throw ValidationError("label outside {0,1}: " + std::to_string(r));
    }
    if (view_names.empty()) {
        for (std::size_t m = 0; m < views.size(); ++m)
            view_names.push_back("view" + std::to_string(m + 1));
    } else if (view_names.size() != views.size()) {
        throw ValidationError("view name count does not match view count");
    }

    MultiViewDataset out;
    out.views = std::move(views);
    out.view_names = std::move(view_names);
    out.labels = std::move(labels);
    return out;
}

MultiViewDataset read_dataset(const std::filesystem::path& manifest)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(manifest));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("malformed manifest " + manifest.string() + ": " + e.what());
    }
    const auto dir = manifest.parent_path();
    try {
        const auto n = j.at("n_samples").get<long>();
        std::vector<Eigen::MatrixXd> views;
        std::vector<std::string> names;
        for (const auto& v : j.at("views")) {
            auto mat = csv::read_matrix(dir / v.at("file").get<std::string>());
            const auto dim = v.at("dim").get<long>();
            if (mat.rows() != n || mat.cols() != dim)
                throw ValidationError("view '" + v.at("name").get<std::string>() + "' declared " + std::to_string(n) +
                                      "x" + std::to_string(dim) + " but file holds " + std::to_string(mat.rows()) +
                                      "x" + std::to_string(mat.cols()));
            views.push_back(std::move(mat));
            names.push_back(v.at("name").get<std::string>());
        }
        std::optional<Labels> labels;
        if (j.contains("labels") && !j.at("labels").is_null()) {
            const auto lab = csv::read_matrix(dir / j.at("labels").get<std::string>());
            if (lab.rows() != n || (n > 0 && lab.cols() != 1))
                throw ValidationError("labels file does not hold " + std::to_string(n) + " rows of one column");
            Labels r;
            for (Eigen::Index i = 0; i < lab.rows(); ++i) {
                const double v = lab(i, 0);
                if (v != 0.0 && v != 1.0)
                    throw ValidationError("label outside {0,1}: " + csv::format_double(v));
                r.push_back(static_cast<int>(v));
            }
            labels = std::move(r);
        }
        return validate_dataset(std::move(views), std::move(labels), std::move(names));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("malformed manifest " + manifest.string() + ": " + e.what());
    }
}

void write_dataset(const MultiViewDataset& data, const std::filesystem::path& directory,
                   const std::string& manifest_name)
{
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec)
        throw IoError("cannot create directory " + directory.string());

    nlohmann::json j;
    j["format"] = "gfamix.dataset";
    j["version"] = 1;
    j["n_samples"] = data.n_samples();
    j["views"] = nlohmann::json::array();
    for (std::size_t m = 0; m < data.n_views(); ++m) {
        const std::string file = data.view_names[m] + ".csv";
        write_file_atomically(directory / file, csv::matrix_to_string(data.views[m]));
        j["views"].push_back({{"name", data.view_names[m]}, {"file", file}, {"dim", data.views[m].cols()}});
    }
    if (data.labels) {
        std::string text;
        for (int r : *data.labels)
            text += std::to_string(r) + "\n";
        write_file_atomically(directory / "labels.csv", text);
        j["labels"] = "labels.csv";
    } else {
        j["labels"] = nullptr;
    }
    write_file_atomically(directory / manifest_name, j.dump(2) + "\n");
}

} // namespace gfamix
