// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_RECSYS_H_
#define BIASLENS_RECSYS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "biaslens/matrix.h"

namespace biaslens::recsys {

enum class Kind {
  kUserKnn,
  kMf,
  kPmf,
  kNmf,
  kWmf,
  kPf,
  kBpr,
  kNeuMf,
  kVaeCf,
  kMostPop,
  kRandom,
};

std::string_view kind_name(Kind kind);
// Case-insensitive; accepts the display names ("UserKNN", "MostPop", ...).
std::optional<Kind> parse_kind(std::string_view name);
const std::vector<Kind>& all_kinds();

using Hyperparams = std::map<std::string, double, std::less<>>;

// Algorithm kind plus fully resolved hyperparameters. Overrides are merged
// into the per-kind defaults; unknown keys throw Error(kInvalidHyperparam).
class AlgorithmSpec {
 public:
  explicit AlgorithmSpec(Kind kind, const Hyperparams& overrides = {}, std::uint64_t seed = 0);

  static Hyperparams defaults(Kind kind);

  Kind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  const Hyperparams& hyperparams() const { return params_; }
  double get(std::string_view key) const;
  int get_int(std::string_view key) const;

 private:
  Kind kind_;
  std::uint64_t seed_;
  Hyperparams params_;
};

// Named dense parameter block, row-major.
struct ParamBlock {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;
};

// Learned state of one algorithm. Implementations live under recsys/.
class Model {
 public:
  virtual ~Model() = default;

  virtual double score(Index user, Index item) const = 0;
  // Fills out[i] = score(user, i) for every item; must agree bit-for-bit
  // with score().
  virtual void score_user(Index user, std::span<double> out) const;

  virtual std::vector<ParamBlock> parameters() const = 0;
  // Throws Error(kFormatError) on missing blocks or shape mismatch.
  virtual void load_parameters(const std::vector<ParamBlock>& blocks) = 0;
};

class FittedModel {
 public:
  FittedModel(AlgorithmSpec spec, std::shared_ptr<const InteractionMatrix> train,
              std::shared_ptr<const Model> model, std::vector<double> loss_trace);

  Kind kind() const { return spec_.kind(); }
  const AlgorithmSpec& spec() const { return spec_; }
  const InteractionMatrix& train() const { return *train_; }
  std::shared_ptr<const InteractionMatrix> train_ptr() const { return train_; }
  std::size_t n_users() const { return train_->n_users(); }
  std::size_t n_items() const { return train_->n_items(); }
  // One value per epoch for iterative kinds (PF records the negative ELBO).
  const std::vector<double>& loss_trace() const { return loss_trace_; }
  const Model& model() const { return *model_; }

  template <class T>
  const T* as() const {
    return dynamic_cast<const T*>(model_.get());
  }

  // Throw Error(kUnknownUser) / Error(kUnknownItem).
  double score(Index user, Index item) const;
  double score(std::string_view user_id, std::string_view item_id) const;
  void score_user(Index user, std::span<double> out) const;

 private:
  AlgorithmSpec spec_;
  std::shared_ptr<const InteractionMatrix> train_;
  std::shared_ptr<const Model> model_;
  std::vector<double> loss_trace_;
};

// Deterministic for a given (spec, train). Throws Error(kDivergenceDetected)
// when an iterative method produces a non-finite loss.
FittedModel fit(const AlgorithmSpec& spec, std::shared_ptr<const InteractionMatrix> train);

struct Recommendation {
  Index item;
  double score;

  friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

// Orders by score descending, then item index ascending.
inline bool ranks_before(const Recommendation& a, const Recommendation& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.item < b.item;
}

std::vector<Recommendation> recommend_top_k(const FittedModel& model, Index user,
                                            std::size_t k = 10, bool exclude_seen = true);

// Versioned container: 8-byte magic, u32 version, u64 header length, JSON
// header (kind, hyperparams, seed, shapes), then every block as
// little-endian float64 in header order.
std::string serialize_model(const FittedModel& model);
FittedModel deserialize_model(std::string_view bytes, std::shared_ptr<const InteractionMatrix> train);
void save_model(const FittedModel& model, const std::filesystem::path& path);
FittedModel load_model(const std::filesystem::path& path,
                       std::shared_ptr<const InteractionMatrix> train);

}  // namespace biaslens::recsys

#endif  // BIASLENS_RECSYS_H_
