#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace cohort::detail {

/// Whole-file read; throws IoError naming `what` and the path.
std::string read_file(const std::filesystem::path& path, std::string_view what = "file");

/// Creates parent directories as needed; throws IoError on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace cohort::detail
