// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/recsys/dense.h"

#include <algorithm>

#include "biaslens/error.h"

namespace biaslens::recsys {

ParamBlock to_block(std::string name, const Mat& m) {
  ParamBlock b{std::move(name), static_cast<std::size_t>(m.rows()),
               static_cast<std::size_t>(m.cols()), {}};
  b.data.assign(m.data(), m.data() + m.size());
  return b;
}

ParamBlock to_block(std::string name, const Vec& v) {
  ParamBlock b{std::move(name), static_cast<std::size_t>(v.size()), 1, {}};
  b.data.assign(v.data(), v.data() + v.size());
  return b;
}

namespace {

const ParamBlock& find_block(const std::vector<ParamBlock>& blocks, std::string_view name,
                             std::size_t rows, std::size_t cols) {
  auto it = std::find_if(blocks.begin(), blocks.end(),
                         [&](const ParamBlock& b) { return b.name == name; });
  if (it == blocks.end()) {
    throw Error(ErrorCode::kFormatError, "missing parameter block '" + std::string(name) + "'");
  }
  if (it->rows != rows || it->cols != cols || it->data.size() != rows * cols) {
    throw Error(ErrorCode::kFormatError, "parameter block '" + std::string(name) +
                                             "' has shape " + std::to_string(it->rows) + "x" +
                                             std::to_string(it->cols) + ", expected " +
                                             std::to_string(rows) + "x" + std::to_string(cols));
  }
  return *it;
}

}  // namespace

void from_block(const std::vector<ParamBlock>& blocks, std::string_view name, Mat& out) {
  const auto& b = find_block(blocks, name, out.rows(), out.cols());
  std::copy(b.data.begin(), b.data.end(), out.data());
}

void from_block(const std::vector<ParamBlock>& blocks, std::string_view name, Vec& out) {
  const auto& b = find_block(blocks, name, out.size(), 1);
  std::copy(b.data.begin(), b.data.end(), out.data());
}

Mat gaussian_matrix(std::size_t rows, std::size_t cols, double stddev, SeededRng& rng) {
  Mat m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = rng.normal(0.0, stddev);
  return m;
}

Adam::Adam(const std::vector<Mat>& params, double beta1, double beta2, double eps)
    : beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (const Mat& p : params) {
    m_.push_back(Mat::Zero(p.rows(), p.cols()));
    v_.push_back(Mat::Zero(p.rows(), p.cols()));
  }
}

void Adam::step(std::vector<Mat>& params, const std::vector<Mat>& grads, double lr) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    m_[k] = beta1_ * m_[k] + (1.0 - beta1_) * grads[k];
    v_[k] = beta2_ * v_[k] + (1.0 - beta2_) * grads[k].cwiseProduct(grads[k]);
    params[k].array() -=
        lr * (m_[k].array() / c1) / ((v_[k].array() / c2).sqrt() + eps_);
  }
}

void Adam::step_rows(std::vector<Mat>& params, const std::vector<Mat>& grads, double lr,
                     const std::vector<std::vector<Index>>& rows) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (rows[k].empty()) {
      m_[k] = beta1_ * m_[k] + (1.0 - beta1_) * grads[k];
      v_[k] = beta2_ * v_[k] + (1.0 - beta2_) * grads[k].cwiseProduct(grads[k]);
      params[k].array() -= lr * (m_[k].array() / c1) / ((v_[k].array() / c2).sqrt() + eps_);
      continue;
    }
    for (Index r : rows[k]) {
      auto g = grads[k].row(r).array();
      m_[k].row(r) = beta1_ * m_[k].row(r).array() + (1.0 - beta1_) * g;
      v_[k].row(r) = beta2_ * v_[k].row(r).array() + (1.0 - beta2_) * g * g;
      params[k].row(r).array() -=
          lr * (m_[k].row(r).array() / c1) / ((v_[k].row(r).array() / c2).sqrt() + eps_);
    }
  }
}

}  // namespace biaslens::recsys
