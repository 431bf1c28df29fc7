#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace rwa {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Unordered pair of basis indices, 0-based. Reports print them 1-based.
struct IndexPair {
  std::size_t l = 0;
  std::size_t m = 0;
  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

}  // namespace rwa
