// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/recsys/vaecf.h"

#include "biaslens/error.h"

namespace biaslens::recsys {

VaeCfModel::VaeCfModel(std::shared_ptr<const InteractionMatrix> train_matrix)
    : train(std::move(train_matrix)) {
  const auto n = static_cast<Eigen::Index>(train->n_items());
  params.resize(kNumTensors);
  params[kEncW] = Mat::Zero(kHidden, n);
  params[kEncB] = Mat::Zero(kHidden, 1);
  params[kMuW] = Mat::Zero(kLatent, kHidden);
  params[kMuB] = Mat::Zero(kLatent, 1);
  params[kLogVarW] = Mat::Zero(kLatent, kHidden);
  params[kLogVarB] = Mat::Zero(kLatent, 1);
  params[kDecW1] = Mat::Zero(kHidden, kLatent);
  params[kDecB1] = Mat::Zero(kHidden, 1);
  params[kDecW2] = Mat::Zero(n, kHidden);
  params[kDecB2] = Mat::Zero(n, 1);
}

void VaeCfModel::init(SeededRng& rng) {
  for (int t : {kEncW, kMuW, kLogVarW, kDecW1, kDecW2}) {
    const double s = std::sqrt(2.0 / static_cast<double>(params[t].rows() + params[t].cols()));
    params[t] = gaussian_matrix(params[t].rows(), params[t].cols(), s, rng);
  }
  for (int t : {kEncB, kMuB, kLogVarB, kDecB1, kDecB2}) params[t].setZero();
}

const char* VaeCfModel::tensor_name(int t) {
  static const char* const kNames[] = {"enc_w",    "enc_b",    "mu_w",  "mu_b",  "logvar_w",
                                       "logvar_b", "dec_w1",   "dec_b1", "dec_w2", "dec_b2"};
  return kNames[t];
}

namespace {

using M = VaeCfModel;

// Encoder pre-activation for a binarized, L2-normalized row. Only the
// columns of rated items contribute.
Vec encode(const VaeCfModel& m, Index user) {
  const auto row = m.train->row(user);
  const double norm = 1.0 / std::sqrt(static_cast<double>(row.size()));
  Vec a = m.params[M::kEncB].col(0);
  for (const Cell& c : row) a += norm * m.params[M::kEncW].col(c.index);
  return a.array().tanh().matrix();
}

void decode(const VaeCfModel& m, const Vec& z, Vec& hidden, Vec& logits) {
  hidden = (m.params[M::kDecW1] * z + m.params[M::kDecB1]).array().tanh().matrix();
  logits = m.params[M::kDecW2] * hidden + m.params[M::kDecB2];
}

double log_sum_exp(const Vec& v) {
  const double mx = v.maxCoeff();
  return mx + std::log((v.array() - mx).exp().sum());
}

VaeTerms run(const VaeCfModel& m, std::span<const Index> users, const Mat& noise, double beta,
             std::vector<Mat>* g) {
  const auto& p = m.params;
  const double scale = 1.0 / static_cast<double>(users.size());
  VaeTerms terms;
  Vec d, logits, d_logits, d_a2, d_z, d_mu, d_lv, d_a1;
  for (std::size_t b = 0; b < users.size(); ++b) {
    const Index u = users[b];
    const auto row = m.train->row(u);
    const Vec h = encode(m, u);
    const Vec mu = p[M::kMuW] * h + p[M::kMuB];
    const Vec lv = p[M::kLogVarW] * h + p[M::kLogVarB];
    const Vec sd = (0.5 * lv.array()).exp().matrix();
    const Vec eps = noise.row(b).transpose();
    const Vec z = mu + sd.cwiseProduct(eps);
    decode(m, z, d, logits);

    const double lse = log_sum_exp(logits);
    double ll = 0.0;
    for (const Cell& c : row) ll += logits[c.index] - lse;
    const double kl = 0.5 * (lv.array().exp() + mu.array().square() - 1.0 - lv.array()).sum();
    terms.log_likelihood += ll;
    terms.kl += kl;
    if (g == nullptr) continue;

    auto& gr = *g;
    const double n_pos = static_cast<double>(row.size());
    d_logits = (scale * n_pos) * (logits.array() - lse).exp().matrix();
    for (const Cell& c : row) d_logits[c.index] -= scale;
    gr[M::kDecW2].noalias() += d_logits * d.transpose();
    gr[M::kDecB2] += d_logits;
    d_a2 = (p[M::kDecW2].transpose() * d_logits).cwiseProduct((1.0 - d.array().square()).matrix());
    gr[M::kDecW1].noalias() += d_a2 * z.transpose();
    gr[M::kDecB1] += d_a2;
    d_z = p[M::kDecW1].transpose() * d_a2;
    d_mu = d_z + (scale * beta) * mu;
    d_lv = (d_z.array() * eps.array() * 0.5 * sd.array() +
            scale * beta * 0.5 * (lv.array().exp() - 1.0))
               .matrix();
    gr[M::kMuW].noalias() += d_mu * h.transpose();
    gr[M::kMuB] += d_mu;
    gr[M::kLogVarW].noalias() += d_lv * h.transpose();
    gr[M::kLogVarB] += d_lv;
    d_a1 = (p[M::kMuW].transpose() * d_mu + p[M::kLogVarW].transpose() * d_lv)
               .cwiseProduct((1.0 - h.array().square()).matrix());
    const double norm = 1.0 / std::sqrt(n_pos);
    for (const Cell& c : row) gr[M::kEncW].col(c.index) += norm * d_a1;
    gr[M::kEncB] += d_a1;
  }
  terms.loss = -(terms.log_likelihood - beta * terms.kl) * scale;
  return terms;
}

}  // namespace

void VaeCfModel::logits(Index user, Vec& out) const {
  const Vec h = encode(*this, user);
  const Vec mu = params[kMuW] * h + params[kMuB];
  Vec hidden;
  decode(*this, mu, hidden, out);
}

double VaeCfModel::score(Index user, Index item) const {
  Vec out;
  logits(user, out);
  return out[item];
}

void VaeCfModel::score_user(Index user, std::span<double> out) const {
  Vec l;
  logits(user, l);
  std::copy(l.data(), l.data() + l.size(), out.begin());
}

std::vector<ParamBlock> VaeCfModel::parameters() const {
  std::vector<ParamBlock> out;
  for (int t = 0; t < kNumTensors; ++t) out.push_back(to_block(tensor_name(t), params[t]));
  return out;
}

void VaeCfModel::load_parameters(const std::vector<ParamBlock>& blocks) {
  for (int t = 0; t < kNumTensors; ++t) from_block(blocks, tensor_name(t), params[t]);
}

VaeTerms vaecf_terms(const VaeCfModel& model, std::span<const Index> users, const Mat& noise,
                     double beta) {
  return run(model, users, noise, beta, nullptr);
}

VaeTerms vaecf_gradients(const VaeCfModel& model, std::span<const Index> users, const Mat& noise,
                         double beta, std::vector<Mat>& grads) {
  grads.resize(model.params.size());
  for (std::size_t k = 0; k < grads.size(); ++k) {
    grads[k] = Mat::Zero(model.params[k].rows(), model.params[k].cols());
  }
  return run(model, users, noise, beta, &grads);
}

VaeTerms vaecf_elbo_step(VaeCfModel& model, Adam& optimizer, std::span<const Index> users,
                         SeededRng& rng, double lr, double beta) {
  const Mat noise = gaussian_matrix(users.size(), VaeCfModel::kLatent, 1.0, rng);
  std::vector<Mat> grads;
  const VaeTerms terms = vaecf_gradients(model, users, noise, beta, grads);
  if (!std::isfinite(terms.loss)) {
    throw Error(ErrorCode::kDivergenceDetected, "VAECF loss became non-finite; lower the lr");
  }
  optimizer.step(model.params, grads, lr);
  return terms;
}

}  // namespace biaslens::recsys
