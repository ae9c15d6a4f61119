// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/recsys/wmf.h"

#include "biaslens/error.h"

namespace biaslens::recsys {

WmfModel::WmfModel(std::size_t n_users, std::size_t n_items, std::size_t factors)
    : user_factors(Mat::Zero(n_users, factors)), item_factors(Mat::Zero(n_items, factors)) {}

void WmfModel::init(double stddev, SeededRng& rng) {
  user_factors = gaussian_matrix(user_factors.rows(), user_factors.cols(), stddev, rng);
  item_factors = gaussian_matrix(item_factors.rows(), item_factors.cols(), stddev, rng);
}

double WmfModel::score(Index user, Index item) const {
  return user_factors.row(user).dot(item_factors.row(item));
}

std::vector<ParamBlock> WmfModel::parameters() const {
  return {to_block("user_factors", user_factors), to_block("item_factors", item_factors)};
}

void WmfModel::load_parameters(const std::vector<ParamBlock>& blocks) {
  from_block(blocks, "user_factors", user_factors);
  from_block(blocks, "item_factors", item_factors);
}

namespace {

// Solves every row of `target` given the fixed `other` factors:
//   (O^T O + O_r^T (C_r - I) O_r + reg I) x_r = O_r^T C_r 1
template <class CellsFn>
void als_half_sweep(Mat& target, const Mat& other, std::size_t n_rows, double alpha, double reg,
                    CellsFn cells) {
  const Eigen::Index k = target.cols();
  Mat gram = other.transpose() * other;
  gram.diagonal().array() += reg;
  Mat a(k, k);
  Vec b(k);
  for (Index r = 0; r < n_rows; ++r) {
    a = gram;
    b.setZero();
    for (const Cell& c : cells(r)) {
      const double conf = 1.0 + alpha * c.rating;
      auto y = other.row(c.index);
      a.noalias() += (conf - 1.0) * y.transpose() * y;
      b.noalias() += conf * y.transpose();
    }
    Eigen::LLT<Mat> llt(a);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::kSingularSystem,
                  "ALS normal matrix is not positive definite; use reg > 0");
    }
    target.row(r) = llt.solve(b).transpose();
  }
}

}  // namespace

double wmf_als_sweep(WmfModel& model, const InteractionMatrix& train, double alpha, double reg) {
  als_half_sweep(model.user_factors, model.item_factors, train.n_users(), alpha, reg,
                 [&](Index u) { return train.row(u); });
  als_half_sweep(model.item_factors, model.user_factors, train.n_items(), alpha, reg,
                 [&](Index i) { return train.col(i); });
  return wmf_objective(model, train, alpha, reg);
}

double wmf_objective(const WmfModel& model, const InteractionMatrix& train, double alpha,
                     double reg) {
  const Mat xtx = model.user_factors.transpose() * model.user_factors;
  const Mat yty = model.item_factors.transpose() * model.item_factors;
  double obj = xtx.cwiseProduct(yty).sum();
  for (Index u = 0; u < train.n_users(); ++u) {
    for (const Cell& c : train.row(u)) {
      const double s = model.score(u, c.index);
      const double conf = 1.0 + alpha * c.rating;
      obj += conf * (1.0 - s) * (1.0 - s) - s * s;
    }
  }
  obj += reg * (model.user_factors.squaredNorm() + model.item_factors.squaredNorm());
  return obj;
}

}  // namespace biaslens::recsys
