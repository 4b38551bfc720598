#include "fixtures.hpp"

#include <unistd.h>

#include <fstream>
#include <sstream>

#include "cohort/common/rng.hpp"

namespace cohort::testing {

LabelledData gaussian_blobs(std::size_t n, std::size_t dims, int classes, double distance, double sigma,
                            std::uint64_t seed) {
  Rng rng(seed);
  LabelledData d;
  d.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dims));
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % static_cast<std::size_t>(classes));
    d.y.push_back(label);
    for (std::size_t j = 0; j < dims; ++j) {
      const double centre = j == 0 ? distance * label : 0.0;
      d.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rng.normal(centre, sigma);
    }
  }
  return d;
}

LabelledData xor_data(std::size_t copies, double noise, std::uint64_t seed) {
  Rng rng(seed);
  LabelledData d;
  d.x.resize(static_cast<Eigen::Index>(4 * copies), 2);
  std::size_t row = 0;
  for (std::size_t c = 0; c < copies; ++c) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        d.x(static_cast<Eigen::Index>(row), 0) = a + rng.normal(0.0, noise);
        d.x(static_cast<Eigen::Index>(row), 1) = b + rng.normal(0.0, noise);
        d.y.push_back(a ^ b);
        ++row;
      }
    }
  }
  return d;
}

LabelledData take_rows(const LabelledData& data, std::size_t begin, std::size_t end) {
  LabelledData out;
  out.x = data.x.middleRows(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(end - begin));
  out.y.assign(data.y.begin() + static_cast<std::ptrdiff_t>(begin), data.y.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

TempDir::TempDir(const std::string& tag) {
  static int counter = 0;
  path_ = std::filesystem::temp_directory_path() /
          ("cohort-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace cohort::testing
