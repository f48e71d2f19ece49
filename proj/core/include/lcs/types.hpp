#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcs {

// Points and tangent vectors live in charts of dimension <= 8.
constexpr int kMaxDim = 8;
// C(8,4): largest number of strictly increasing multi-indices.
constexpr int kMaxCoeffs = 70;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using CVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxCoeffs, 1>;
using CJac = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxCoeffs, kMaxDim>;

// Unbounded vectors for generating-function fibres.
using DVec = Eigen::VectorXd;
using DMat = Eigen::MatrixXd;

struct Box {
  std::vector<double> lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& x, double margin = 0.0) const;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure (non-convergence, singular systems, exits); the CLI maps it to exit 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

inline Vec make_vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

}  // namespace lcs
