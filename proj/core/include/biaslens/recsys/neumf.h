// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_RECSYS_NEUMF_H_
#define BIASLENS_RECSYS_NEUMF_H_

#include "biaslens/recsys/dense.h"

namespace biaslens::recsys {

// GMF branch (8-dim embeddings, elementwise product) and MLP branch
// (16-dim user and item embeddings, 32 -> 16 -> 8 with ReLU) joined into a
// 16-dim head with one sigmoid output.
class NeuMfModel : public Model {
 public:
  static constexpr int kGmfDim = 8;
  static constexpr int kMlpEmbed = 16;
  static constexpr int kHidden1 = 16;
  static constexpr int kHidden2 = 8;

  enum Tensor {
    kGmfUser,
    kGmfItem,
    kMlpUser,
    kMlpItem,
    kW1,
    kB1,
    kW2,
    kB2,
    kHead,
    kHeadBias,
    kNumTensors,
  };

  NeuMfModel(std::size_t n_users, std::size_t n_items);

  void init(double stddev, SeededRng& rng);

  double logit(Index user, Index item) const;
  // Predicted probability.
  double score(Index user, Index item) const override;
  std::vector<ParamBlock> parameters() const override;
  void load_parameters(const std::vector<ParamBlock>& blocks) override;

  static const char* tensor_name(int t);

  // Biases are stored as column vectors (n x 1).
  std::vector<Mat> params;
};

struct LabeledPair {
  Index user;
  Index item;
  double label;  // 1 positive, 0 negative
};

// Mean binary cross-entropy over the batch.
double neumf_loss(const NeuMfModel& model, std::span<const LabeledPair> batch);

// Mean loss and its gradient for every tensor (same shapes as params).
double neumf_gradients(const NeuMfModel& model, std::span<const LabeledPair> batch,
                       std::vector<Mat>& grads);

// Gradient computation followed by one lazy Adam step (embedding rows not in
// the batch are left untouched). `workspace` holds zeroed gradient buffers
// between calls and may start empty. Throws Error(kDivergenceDetected) on a
// non-finite loss.
double neumf_forward_backward(NeuMfModel& model, Adam& optimizer,
                              std::span<const LabeledPair> batch, double lr,
                              std::vector<Mat>& workspace);

}  // namespace biaslens::recsys

#endif  // BIASLENS_RECSYS_NEUMF_H_
