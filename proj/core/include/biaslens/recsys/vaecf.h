// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_RECSYS_VAECF_H_
#define BIASLENS_RECSYS_VAECF_H_

#include "biaslens/recsys/dense.h"

namespace biaslens::recsys {

// Variational autoencoder over binarized user rows. Encoder: L2-normalized
// input -> 64 tanh -> diagonal Gaussian (32). Decoder: 32 -> 64 tanh ->
// multinomial logits over items.
class VaeCfModel : public Model {
 public:
  static constexpr int kHidden = 64;
  static constexpr int kLatent = 32;

  enum Tensor {
    kEncW,
    kEncB,
    kMuW,
    kMuB,
    kLogVarW,
    kLogVarB,
    kDecW1,
    kDecB1,
    kDecW2,
    kDecB2,
    kNumTensors,
  };

  VaeCfModel(std::shared_ptr<const InteractionMatrix> train);

  // Glorot-scaled normal weights, zero biases.
  void init(SeededRng& rng);

  // Decoder logits at the posterior mean.
  void logits(Index user, Vec& out) const;
  double score(Index user, Index item) const override;
  void score_user(Index user, std::span<double> out) const override;
  std::vector<ParamBlock> parameters() const override;
  void load_parameters(const std::vector<ParamBlock>& blocks) override;

  static const char* tensor_name(int t);

  std::shared_ptr<const InteractionMatrix> train;
  std::vector<Mat> params;
};

struct VaeTerms {
  double log_likelihood = 0.0;  // sum over users of sum_i x_ui log softmax_i
  double kl = 0.0;              // summed over users
  // Mean per-user loss: -(log_likelihood - beta * kl) / |batch|.
  double loss = 0.0;
};

// `noise` is |users| x kLatent standard-normal draws used for the
// reparameterized sample.
VaeTerms vaecf_terms(const VaeCfModel& model, std::span<const Index> users, const Mat& noise,
                     double beta);

VaeTerms vaecf_gradients(const VaeCfModel& model, std::span<const Index> users, const Mat& noise,
                         double beta, std::vector<Mat>& grads);

// Draws noise from `rng`, computes gradients and applies one Adam step.
// Throws Error(kDivergenceDetected).
VaeTerms vaecf_elbo_step(VaeCfModel& model, Adam& optimizer, std::span<const Index> users,
                         SeededRng& rng, double lr, double beta);

}  // namespace biaslens::recsys

#endif  // BIASLENS_RECSYS_VAECF_H_
