// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_RECSYS_DENSE_H_
#define BIASLENS_RECSYS_DENSE_H_

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "biaslens/recsys.h"
#include "biaslens/rng.h"

namespace biaslens::recsys {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

ParamBlock to_block(std::string name, const Mat& m);
ParamBlock to_block(std::string name, const Vec& v);
// Looks up `name` and copies it into `out`, which must already have the
// expected shape.
void from_block(const std::vector<ParamBlock>& blocks, std::string_view name, Mat& out);
void from_block(const std::vector<ParamBlock>& blocks, std::string_view name, Vec& out);

Mat gaussian_matrix(std::size_t rows, std::size_t cols, double stddev, SeededRng& rng);

inline double sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

// log(1 + exp(x)) without overflow.
inline double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// Adam over a fixed list of tensors, updated in lockstep with a gradient
// list of identical shapes.
class Adam {
 public:
  Adam() = default;
  explicit Adam(const std::vector<Mat>& params, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8);

  void step(std::vector<Mat>& params, const std::vector<Mat>& grads, double lr);
  // Lazy variant for embedding tables: a tensor with a non-empty entry in
  // `rows` only updates (and only advances moments for) those rows.
  void step_rows(std::vector<Mat>& params, const std::vector<Mat>& grads, double lr,
                 const std::vector<std::vector<Index>>& rows);

 private:
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long t_ = 0;
  std::vector<Mat> m_;
  std::vector<Mat> v_;
};

}  // namespace biaslens::recsys

#endif  // BIASLENS_RECSYS_DENSE_H_
