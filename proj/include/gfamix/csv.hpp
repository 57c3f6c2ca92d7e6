#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gfamix::csv {

/// Decimal with 17 significant digits.
std::string format_double(double v);

/// Headerless numeric matrix.
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);
std::string matrix_to_string(const Eigen::MatrixXd& m);

/// Simple table with header row. Fields must not contain commas.
struct Table
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_string() const;
    static Table parse(const std::string& text);
    static Table read(const std::filesystem::path& path);
};

} // namespace gfamix::csv
