// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/recsys/neumf.h"

#include <algorithm>

#include "biaslens/error.h"

namespace biaslens::recsys {

NeuMfModel::NeuMfModel(std::size_t n_users, std::size_t n_items) {
  params.resize(kNumTensors);
  params[kGmfUser] = Mat::Zero(n_users, kGmfDim);
  params[kGmfItem] = Mat::Zero(n_items, kGmfDim);
  params[kMlpUser] = Mat::Zero(n_users, kMlpEmbed);
  params[kMlpItem] = Mat::Zero(n_items, kMlpEmbed);
  params[kW1] = Mat::Zero(kHidden1, 2 * kMlpEmbed);
  params[kB1] = Mat::Zero(kHidden1, 1);
  params[kW2] = Mat::Zero(kHidden2, kHidden1);
  params[kB2] = Mat::Zero(kHidden2, 1);
  params[kHead] = Mat::Zero(1, kGmfDim + kHidden2);
  params[kHeadBias] = Mat::Zero(1, 1);
}

// Embeddings ~ N(0, stddev); dense layers use Glorot-scaled normals.
void NeuMfModel::init(double stddev, SeededRng& rng) {
  for (int t : {kGmfUser, kGmfItem, kMlpUser, kMlpItem}) {
    params[t] = gaussian_matrix(params[t].rows(), params[t].cols(), stddev, rng);
  }
  for (int t : {kW1, kW2, kHead}) {
    const double s = std::sqrt(2.0 / static_cast<double>(params[t].rows() + params[t].cols()));
    params[t] = gaussian_matrix(params[t].rows(), params[t].cols(), s, rng);
  }
  for (int t : {kB1, kB2, kHeadBias}) params[t].setZero();
}

const char* NeuMfModel::tensor_name(int t) {
  static const char* const kNames[] = {"gmf_user", "gmf_item", "mlp_user", "mlp_item",
                                       "w1",       "b1",       "w2",       "b2",
                                       "head",     "head_bias"};
  return kNames[t];
}

namespace {

struct Forward {
  Vec gmf;
  Vec z0;
  Vec h1;
  Vec h2;
  Vec joint;
  double logit = 0.0;
};

void forward(const NeuMfModel& m, Index u, Index i, Forward& f) {
  const auto& p = m.params;
  f.gmf = p[NeuMfModel::kGmfUser].row(u).cwiseProduct(p[NeuMfModel::kGmfItem].row(i)).transpose();
  f.z0.resize(2 * NeuMfModel::kMlpEmbed);
  f.z0 << p[NeuMfModel::kMlpUser].row(u).transpose(), p[NeuMfModel::kMlpItem].row(i).transpose();
  f.h1 = (p[NeuMfModel::kW1] * f.z0 + p[NeuMfModel::kB1]).cwiseMax(0.0);
  f.h2 = (p[NeuMfModel::kW2] * f.h1 + p[NeuMfModel::kB2]).cwiseMax(0.0);
  f.joint.resize(NeuMfModel::kGmfDim + NeuMfModel::kHidden2);
  f.joint << f.gmf, f.h2;
  f.logit = (p[NeuMfModel::kHead] * f.joint)(0, 0) + p[NeuMfModel::kHeadBias](0, 0);
}

double pair_loss(double logit, double label) { return softplus(logit) - label * logit; }

// Adds the batch-mean gradient into `g` (assumed zero on entry) and returns
// the mean loss.
double accumulate(const NeuMfModel& m, std::span<const LabeledPair> batch, std::vector<Mat>& g) {
  using M = NeuMfModel;
  const auto& p = m.params;
  const double scale = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  Forward f;
  Vec d_joint, d_h2, d_h1, d_z0;
  for (const LabeledPair& x : batch) {
    forward(m, x.user, x.item, f);
    loss += pair_loss(f.logit, x.label);
    const double d_logit = scale * (sigmoid(f.logit) - x.label);

    g[M::kHead].row(0) += d_logit * f.joint.transpose();
    g[M::kHeadBias](0, 0) += d_logit;
    d_joint = d_logit * p[M::kHead].row(0).transpose();

    d_h2 = d_joint.tail(M::kHidden2).cwiseProduct((f.h2.array() > 0.0).cast<double>().matrix());
    g[M::kW2].noalias() += d_h2 * f.h1.transpose();
    g[M::kB2] += d_h2;
    d_h1 = (p[M::kW2].transpose() * d_h2)
               .cwiseProduct((f.h1.array() > 0.0).cast<double>().matrix());
    g[M::kW1].noalias() += d_h1 * f.z0.transpose();
    g[M::kB1] += d_h1;
    d_z0 = p[M::kW1].transpose() * d_h1;
    g[M::kMlpUser].row(x.user) += d_z0.head(M::kMlpEmbed).transpose();
    g[M::kMlpItem].row(x.item) += d_z0.tail(M::kMlpEmbed).transpose();

    const auto d_gmf = d_joint.head(M::kGmfDim);
    g[M::kGmfUser].row(x.user) += d_gmf.transpose().cwiseProduct(p[M::kGmfItem].row(x.item));
    g[M::kGmfItem].row(x.item) += d_gmf.transpose().cwiseProduct(p[M::kGmfUser].row(x.user));
  }
  return loss * scale;
}

void zeroed_like(const std::vector<Mat>& params, std::vector<Mat>& g) {
  g.resize(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    g[k] = Mat::Zero(params[k].rows(), params[k].cols());
  }
}

}  // namespace

double NeuMfModel::logit(Index user, Index item) const {
  Forward f;
  forward(*this, user, item, f);
  return f.logit;
}

double NeuMfModel::score(Index user, Index item) const { return sigmoid(logit(user, item)); }

std::vector<ParamBlock> NeuMfModel::parameters() const {
  std::vector<ParamBlock> out;
  for (int t = 0; t < kNumTensors; ++t) out.push_back(to_block(tensor_name(t), params[t]));
  return out;
}

void NeuMfModel::load_parameters(const std::vector<ParamBlock>& blocks) {
  for (int t = 0; t < kNumTensors; ++t) from_block(blocks, tensor_name(t), params[t]);
}

double neumf_loss(const NeuMfModel& model, std::span<const LabeledPair> batch) {
  double loss = 0.0;
  for (const LabeledPair& x : batch) loss += pair_loss(model.logit(x.user, x.item), x.label);
  return loss / static_cast<double>(batch.size());
}

double neumf_gradients(const NeuMfModel& model, std::span<const LabeledPair> batch,
                       std::vector<Mat>& grads) {
  zeroed_like(model.params, grads);
  return accumulate(model, batch, grads);
}

double neumf_forward_backward(NeuMfModel& model, Adam& optimizer,
                              std::span<const LabeledPair> batch, double lr,
                              std::vector<Mat>& workspace) {
  using M = NeuMfModel;
  if (workspace.size() != model.params.size()) zeroed_like(model.params, workspace);
  const double loss = accumulate(model, batch, workspace);
  if (!std::isfinite(loss)) {
    throw Error(ErrorCode::kDivergenceDetected, "NeuMF loss became non-finite; lower the lr");
  }

  std::vector<Index> users, items;
  for (const LabeledPair& x : batch) {
    users.push_back(x.user);
    items.push_back(x.item);
  }
  for (auto* v : {&users, &items}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  std::vector<std::vector<Index>> rows(M::kNumTensors);
  rows[M::kGmfUser] = rows[M::kMlpUser] = users;
  rows[M::kGmfItem] = rows[M::kMlpItem] = items;
  optimizer.step_rows(model.params, workspace, lr, rows);

  for (int t : {M::kGmfUser, M::kGmfItem, M::kMlpUser, M::kMlpItem}) {
    for (Index r : rows[t]) workspace[t].row(r).setZero();
  }
  for (int t : {M::kW1, M::kB1, M::kW2, M::kB2, M::kHead, M::kHeadBias}) workspace[t].setZero();
  return loss;
}

}  // namespace biaslens::recsys
