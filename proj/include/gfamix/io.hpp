#pragma once

#include <filesystem>
#include <string>

namespace gfamix {

/// Writes to a sibling temporary file and renames on success. Throws IoError.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

} // namespace gfamix
