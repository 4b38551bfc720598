#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cohort/common/matrix.hpp"

namespace cohort::testing {

struct LabelledData {
  Matrix x;
  std::vector<int> y;
};

/// Isotropic Gaussian blobs, one per class, centres spaced `distance` apart
/// along the first axis; rows alternate between classes.
LabelledData gaussian_blobs(std::size_t n, std::size_t dims, int classes, double distance, double sigma,
                            std::uint64_t seed);

/// The four XOR corners replicated `copies` times with Gaussian noise.
LabelledData xor_data(std::size_t copies, double noise, std::uint64_t seed);

/// Rows `rows` of a labelled set.
LabelledData take_rows(const LabelledData& data, std::size_t begin, std::size_t end);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string slurp(const std::filesystem::path& p);

}  // namespace cohort::testing
