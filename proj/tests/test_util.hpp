#pragma once

#include "asel/dataset.hpp"
#include "asel/dgp.hpp"

#include <cstring>
#include <filesystem>
#include <string>

namespace asel::test {

inline std::string temp_path(const std::string& name) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("asel_tests_" + std::to_string(++counter));
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

inline bool bit_equal(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

inline bool bit_equal(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return std::memcmp(a.data(), b.data(),
                     sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

inline bool bit_equal(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return false;
  return std::memcmp(a.data(), b.data(),
                     sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

// J=2 dataset with unit block widths and hand-picked values
inline Dataset tiny_dataset() {
  Dataset d;
  d.blocks.a_widths = {1, 1};
  d.blocks.h_widths = {1, 1};
  d.A.resize(3, 2);
  d.A << 0.5, -1.0, 1.5, 2.0, -0.25, 0.75;
  d.H.resize(3, 2);
  d.H << 1.0, 0.0, -0.5, 2.5, 0.25, -1.25;
  d.Y.resize(3);
  d.Y << 2.0, -1.0, 0.5;
  return d;
}

// independence spec: Y carries no signal from (A, H)
inline dgp::DgpSpec independence_spec(int j_count) {
  const Vector zero = Vector::Zero(j_count);
  return dgp::make_proxy_spec(j_count, Matrix::Identity(j_count, j_count),
                              0.5, 0.8, zero, zero, zero, 0.0, 1.0);
}

}  // namespace asel::test
