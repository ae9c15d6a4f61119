// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>

#include "json.hpp"

#include "biaslens/error.h"
#include "biaslens/io.h"
#include "biaslens/recsys.h"
#include "biaslens/recsys/baselines.h"
#include "biaslens/recsys/bpr.h"
#include "biaslens/recsys/factor.h"
#include "biaslens/recsys/knn.h"
#include "biaslens/recsys/neumf.h"
#include "biaslens/recsys/nmf.h"
#include "biaslens/recsys/pf.h"
#include "biaslens/recsys/vaecf.h"
#include "biaslens/recsys/wmf.h"

namespace biaslens::recsys {

namespace {

struct KindInfo {
  Kind kind;
  std::string_view name;
};

constexpr KindInfo kKinds[] = {
    {Kind::kUserKnn, "UserKNN"}, {Kind::kMf, "MF"},           {Kind::kPmf, "PMF"},
    {Kind::kNmf, "NMF"},         {Kind::kWmf, "WMF"},         {Kind::kPf, "PF"},
    {Kind::kBpr, "BPR"},         {Kind::kNeuMf, "NeuMF"},     {Kind::kVaeCf, "VAECF"},
    {Kind::kMostPop, "MostPop"}, {Kind::kRandom, "Random"},
};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

// Keys whose values must be whole numbers, with their minimum.
const std::map<std::string_view, double> kIntegerKeys = {
    {"k", 1},      {"min_corated", 1}, {"factors", 1},   {"epochs", 0},
    {"batch_size", 1}, {"negatives", 1}, {"similarity", 0},
};

void validate(Kind kind, const Hyperparams& p) {
  for (const auto& [key, value] : p) {
    const auto bad = [&](const std::string& why) {
      throw Error(ErrorCode::kInvalidHyperparam, std::string(kind_name(kind)) + "." + key + "=" +
                                                     io::format_double(value) + ": " + why);
    };
    if (!std::isfinite(value)) bad("must be finite");
    if (auto it = kIntegerKeys.find(key); it != kIntegerKeys.end()) {
      if (value != std::floor(value)) bad("must be an integer");
      if (value < it->second) bad("must be >= " + io::format_double(it->second));
    }
    if (key == "similarity" && value > 1) bad("must be 0 (cosine) or 1 (pearson)");
    if ((key == "lr" || key == "init_std") && value <= 0) bad("must be > 0");
    if ((key == "reg" || key == "alpha" || key == "beta") && value < 0) bad("must be >= 0");
    if (kind == Kind::kPf && key != "factors" && key != "epochs" && value <= 0) {
      bad("must be > 0");
    }
  }
}

std::string stream(Kind kind, std::string_view purpose) {
  return std::string(kind_name(kind)) + "/" + std::string(purpose);
}

void check_finite(double loss, Kind kind) {
  if (!std::isfinite(loss)) {
    throw Error(ErrorCode::kDivergenceDetected,
                std::string(kind_name(kind)) + " loss became non-finite");
  }
}

PfPriors pf_priors(const AlgorithmSpec& s) {
  return {s.get("a"), s.get("a_prime"), s.get("b_prime"),
          s.get("c"), s.get("c_prime"), s.get("d_prime")};
}

// Builds an untrained model of the right shape for `spec` on `train`.
std::shared_ptr<Model> make_model(const AlgorithmSpec& s,
                                  const std::shared_ptr<const InteractionMatrix>& train) {
  const std::size_t nu = train->n_users();
  const std::size_t ni = train->n_items();
  switch (s.kind()) {
    case Kind::kUserKnn:
      return std::make_shared<UserKnnModel>(train, s.get_int("k"));
    case Kind::kMf:
      return std::make_shared<FactorModel>(nu, ni, s.get_int("factors"), true);
    case Kind::kPmf:
      return std::make_shared<FactorModel>(nu, ni, s.get_int("factors"), false);
    case Kind::kNmf:
      return std::make_shared<NmfModel>(nu, ni, s.get_int("factors"));
    case Kind::kWmf:
      return std::make_shared<WmfModel>(nu, ni, s.get_int("factors"));
    case Kind::kPf:
      return std::make_shared<PfModel>(nu, ni, s.get_int("factors"), pf_priors(s));
    case Kind::kBpr:
      return std::make_shared<BprModel>(nu, ni, s.get_int("factors"));
    case Kind::kNeuMf:
      return std::make_shared<NeuMfModel>(nu, ni);
    case Kind::kVaeCf:
      return std::make_shared<VaeCfModel>(train);
    case Kind::kMostPop:
      return std::make_shared<MostPopModel>(ni);
    case Kind::kRandom:
      return std::make_shared<RandomModel>(s.seed());
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown algorithm kind");
}

std::vector<LabeledPair> neumf_epoch_pairs(const InteractionMatrix& train, int negatives,
                                           SeededRng& rng) {
  std::vector<LabeledPair> pairs;
  pairs.reserve(train.n_ratings() * (1 + negatives));
  for (Index u = 0; u < train.n_users(); ++u) {
    const auto row = train.row(u);
    const bool full = row.size() >= train.n_items();
    for (const Cell& c : row) {
      pairs.push_back({u, c.index, 1.0});
      if (full) continue;
      for (int n = 0; n < negatives; ++n) {
        Index j;
        do {
          j = static_cast<Index>(rng.uniform_index(train.n_items()));
        } while (train.rating(u, j).has_value());
        pairs.push_back({u, j, 0.0});
      }
    }
  }
  rng.shuffle(pairs);
  return pairs;
}

}  // namespace

std::string_view kind_name(Kind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k.name;
  }
  return "?";
}

std::optional<Kind> parse_kind(std::string_view name) {
  for (const auto& k : kKinds) {
    if (iequals(k.name, name)) return k.kind;
  }
  return std::nullopt;
}

const std::vector<Kind>& all_kinds() {
  static const std::vector<Kind> kinds = [] {
    std::vector<Kind> v;
    for (const auto& k : kKinds) v.push_back(k.kind);
    return v;
  }();
  return kinds;
}

Hyperparams AlgorithmSpec::defaults(Kind kind) {
  switch (kind) {
    case Kind::kUserKnn:
      return {{"k", 50}, {"similarity", 0}, {"min_corated", 2}};
    case Kind::kMf:
    case Kind::kPmf:
    case Kind::kBpr:
      return {{"factors", 10}, {"epochs", 100}, {"lr", 0.005}, {"reg", 0.02}, {"init_std", 0.01}};
    case Kind::kNmf:
      return {{"factors", 10}, {"epochs", 100}};
    case Kind::kWmf:
      return {{"factors", 10}, {"epochs", 100}, {"alpha", 1.0}, {"reg", 0.02}, {"init_std", 0.01}};
    case Kind::kPf: {
      const PfPriors p;
      return {{"factors", 10}, {"epochs", 100}, {"a", p.a}, {"a_prime", p.a_prime},
              {"b_prime", p.b_prime}, {"c", p.c}, {"c_prime", p.c_prime}, {"d_prime", p.d_prime}};
    }
    case Kind::kNeuMf:
      return {{"epochs", 100}, {"lr", 0.001}, {"batch_size", 256}, {"negatives", 4},
              {"init_std", 0.01}};
    case Kind::kVaeCf:
      return {{"epochs", 100}, {"lr", 0.001}, {"batch_size", 100}, {"beta", 0.2}};
    case Kind::kMostPop:
    case Kind::kRandom:
      return {};
  }
  return {};
}

AlgorithmSpec::AlgorithmSpec(Kind kind, const Hyperparams& overrides, std::uint64_t seed)
    : kind_(kind), seed_(seed), params_(defaults(kind)) {
  for (const auto& [key, value] : overrides) {
    auto it = params_.find(key);
    if (it == params_.end()) {
      throw Error(ErrorCode::kInvalidHyperparam,
                  "unknown hyperparameter '" + key + "' for " + std::string(kind_name(kind)));
    }
    it->second = value;
  }
  validate(kind, params_);
}

double AlgorithmSpec::get(std::string_view key) const {
  auto it = params_.find(key);
  if (it == params_.end()) {
    throw Error(ErrorCode::kInvalidHyperparam, "no hyperparameter '" + std::string(key) + "' for " +
                                                   std::string(kind_name(kind_)));
  }
  return it->second;
}

int AlgorithmSpec::get_int(std::string_view key) const { return static_cast<int>(get(key)); }

void Model::score_user(Index user, std::span<double> out) const {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = score(user, static_cast<Index>(i));
}

FittedModel::FittedModel(AlgorithmSpec spec, std::shared_ptr<const InteractionMatrix> train,
                         std::shared_ptr<const Model> model, std::vector<double> loss_trace)
    : spec_(std::move(spec)),
      train_(std::move(train)),
      model_(std::move(model)),
      loss_trace_(std::move(loss_trace)) {}

double FittedModel::score(Index user, Index item) const {
  if (user >= n_users()) {
    throw Error(ErrorCode::kUnknownUser, "user index " + std::to_string(user) + " out of range");
  }
  if (item >= n_items()) {
    throw Error(ErrorCode::kUnknownItem, "item index " + std::to_string(item) + " out of range");
  }
  return model_->score(user, item);
}

double FittedModel::score(std::string_view user_id, std::string_view item_id) const {
  const auto u = train_->users().find(user_id);
  if (!u) throw Error(ErrorCode::kUnknownUser, "unknown user '" + std::string(user_id) + "'");
  const auto i = train_->items().find(item_id);
  if (!i) throw Error(ErrorCode::kUnknownItem, "unknown item '" + std::string(item_id) + "'");
  return model_->score(*u, *i);
}

void FittedModel::score_user(Index user, std::span<double> out) const {
  if (user >= n_users()) {
    throw Error(ErrorCode::kUnknownUser, "user index " + std::to_string(user) + " out of range");
  }
  if (out.size() != n_items()) {
    throw Error(ErrorCode::kInvalidArgument, "score buffer must hold one value per item");
  }
  model_->score_user(user, out);
}

FittedModel fit(const AlgorithmSpec& spec, std::shared_ptr<const InteractionMatrix> train) {
  if (!train || train->n_ratings() == 0) {
    throw Error(ErrorCode::kEmptyInput, "cannot fit on an empty matrix");
  }
  const Kind kind = spec.kind();
  const std::uint64_t seed = spec.seed();
  std::shared_ptr<Model> model = make_model(spec, train);
  std::vector<double> trace;
  const int epochs = spec.hyperparams().contains("epochs") ? spec.get_int("epochs") : 0;

  switch (kind) {
    case Kind::kUserKnn:
      static_cast<UserKnnModel&>(*model).fit(
          spec.get_int("similarity") == 0 ? Similarity::kCosine : Similarity::kPearson,
          spec.get_int("min_corated"));
      break;
    case Kind::kMf:
    case Kind::kPmf: {
      auto& m = static_cast<FactorModel&>(*model);
      SeededRng init(seed, stream(kind, "init"));
      SeededRng order(seed, stream(kind, "shuffle"));
      m.init(spec.get("init_std"), train->mean_rating(), init);
      for (int e = 0; e < epochs; ++e) {
        trace.push_back(sgd_epoch(m, *train, order, spec.get("lr"), spec.get("reg")));
      }
      break;
    }
    case Kind::kNmf: {
      auto& m = static_cast<NmfModel&>(*model);
      SeededRng init(seed, stream(kind, "init"));
      m.init(init);
      for (int e = 0; e < epochs; ++e) {
        trace.push_back(nmf_epoch(m, *train));
        check_finite(trace.back(), kind);
      }
      break;
    }
    case Kind::kWmf: {
      auto& m = static_cast<WmfModel&>(*model);
      SeededRng init(seed, stream(kind, "init"));
      m.init(spec.get("init_std"), init);
      for (int e = 0; e < epochs; ++e) {
        trace.push_back(wmf_als_sweep(m, *train, spec.get("alpha"), spec.get("reg")));
        check_finite(trace.back(), kind);
      }
      break;
    }
    case Kind::kPf: {
      auto& m = static_cast<PfModel&>(*model);
      SeededRng init(seed, stream(kind, "init"));
      m.init(init);
      for (int e = 0; e < epochs; ++e) {
        trace.push_back(-pf_cavi_step(m, *train));
        check_finite(trace.back(), kind);
      }
      break;
    }
    case Kind::kBpr: {
      auto& m = static_cast<BprModel&>(*model);
      SeededRng init(seed, stream(kind, "init"));
      SeededRng sampler(seed, stream(kind, "sample"));
      m.init(spec.get("init_std"), init);
      for (int e = 0; e < epochs; ++e) {
        BprStepStats stats;
        for (std::size_t s = 0; s < train->n_ratings(); ++s) {
          bpr_step(m, *train, sampler, spec.get("lr"), spec.get("reg"), stats);
        }
        const double loss = stats.updates ? stats.loss_sum / stats.updates : 0.0;
        check_finite(loss, kind);
        trace.push_back(loss);
      }
      break;
    }
    case Kind::kNeuMf: {
      auto& m = static_cast<NeuMfModel&>(*model);
      SeededRng init(seed, stream(kind, "init"));
      SeededRng sampler(seed, stream(kind, "sample"));
      m.init(spec.get("init_std"), init);
      Adam adam(m.params);
      std::vector<Mat> workspace;
      const std::size_t batch = spec.get_int("batch_size");
      for (int e = 0; e < epochs; ++e) {
        const auto pairs = neumf_epoch_pairs(*train, spec.get_int("negatives"), sampler);
        double total = 0.0;
        for (std::size_t b = 0; b < pairs.size(); b += batch) {
          const auto chunk = std::span(pairs).subspan(b, std::min(batch, pairs.size() - b));
          total += neumf_forward_backward(m, adam, chunk, spec.get("lr"), workspace) *
                   static_cast<double>(chunk.size());
        }
        trace.push_back(total / static_cast<double>(pairs.size()));
      }
      break;
    }
    case Kind::kVaeCf: {
      auto& m = static_cast<VaeCfModel&>(*model);
      SeededRng init(seed, stream(kind, "init"));
      SeededRng order(seed, stream(kind, "shuffle"));
      SeededRng noise(seed, stream(kind, "noise"));
      m.init(init);
      Adam adam(m.params);
      std::vector<Index> users(train->n_users());
      for (Index u = 0; u < users.size(); ++u) users[u] = u;
      const std::size_t batch = spec.get_int("batch_size");
      for (int e = 0; e < epochs; ++e) {
        order.shuffle(users);
        double total = 0.0;
        for (std::size_t b = 0; b < users.size(); b += batch) {
          const auto chunk = std::span(users).subspan(b, std::min(batch, users.size() - b));
          total += vaecf_elbo_step(m, adam, chunk, noise, spec.get("lr"), spec.get("beta")).loss *
                   static_cast<double>(chunk.size());
        }
        trace.push_back(total / static_cast<double>(users.size()));
      }
      break;
    }
    case Kind::kMostPop:
      model = std::make_shared<MostPopModel>(*train);
      break;
    case Kind::kRandom:
      break;
  }
  return FittedModel(spec, std::move(train), std::move(model), std::move(trace));
}

std::vector<Recommendation> recommend_top_k(const FittedModel& model, Index user, std::size_t k,
                                            bool exclude_seen) {
  if (user >= model.n_users()) {
    throw Error(ErrorCode::kUnknownUser, "user index " + std::to_string(user) + " out of range");
  }
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  std::vector<double> scores(model.n_items());
  model.score_user(user, scores);

  std::vector<Recommendation> pool;
  pool.reserve(scores.size());
  const auto seen = model.train().row(user);
  auto next_seen = seen.begin();
  for (Index i = 0; i < scores.size(); ++i) {
    if (exclude_seen && next_seen != seen.end() && next_seen->index == i) {
      ++next_seen;
      continue;
    }
    pool.push_back({i, scores[i]});
  }
  const std::size_t n = std::min(k, pool.size());
  std::partial_sort(pool.begin(), pool.begin() + n, pool.end(), ranks_before);
  pool.resize(n);
  return pool;
}

// ---- persistence ----------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'B', 'I', 'A', 'S', 'L', 'E', 'N', 'S'};
constexpr std::uint32_t kFormatVersion = 1;

template <class T>
void put_le(std::string& out, T value) {
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    out.push_back(static_cast<char>((value >> (8 * b)) & 0xFF));
  }
}

template <class T>
T get_le(std::string_view in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) {
    throw Error(ErrorCode::kFormatError, "model file truncated");
  }
  T value = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    value |= static_cast<T>(static_cast<unsigned char>(in[pos + b])) << (8 * b);
  }
  pos += sizeof(T);
  return value;
}

}  // namespace

std::string serialize_model(const FittedModel& fm) {
  const auto blocks = fm.model().parameters();
  nlohmann::json header;
  header["kind"] = kind_name(fm.kind());
  header["seed"] = fm.spec().seed();
  header["hyperparams"] = nlohmann::json::object();
  for (const auto& [k, v] : fm.spec().hyperparams()) header["hyperparams"][k] = v;
  header["n_users"] = fm.n_users();
  header["n_items"] = fm.n_items();
  header["loss_trace"] = fm.loss_trace();
  header["blocks"] = nlohmann::json::array();
  for (const auto& b : blocks) {
    header["blocks"].push_back({{"name", b.name}, {"rows", b.rows}, {"cols", b.cols}});
  }
  const std::string text = header.dump();

  std::string out(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(out, kFormatVersion);
  put_le<std::uint64_t>(out, text.size());
  out += text;
  for (const auto& b : blocks) {
    for (double d : b.data) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(d));
  }
  return out;
}

FittedModel deserialize_model(std::string_view bytes,
                              std::shared_ptr<const InteractionMatrix> train) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorCode::kFormatError, "not a model file (bad magic)");
  }
  std::size_t pos = sizeof(kMagic);
  const auto version = get_le<std::uint32_t>(bytes, pos);
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kFormatError, "unsupported model format version " +
                                             std::to_string(version));
  }
  const auto header_len = get_le<std::uint64_t>(bytes, pos);
  if (header_len > bytes.size() - pos) throw Error(ErrorCode::kFormatError, "header truncated");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(pos, header_len));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("bad model header: ") + e.what());
  }
  pos += header_len;

  try {
    const auto kind = parse_kind(header.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorCode::kFormatError, "unknown kind in model header");
    if (header.at("n_users").get<std::size_t>() != train->n_users() ||
        header.at("n_items").get<std::size_t>() != train->n_items()) {
      throw Error(ErrorCode::kFormatError, "model was trained on a matrix of different shape");
    }
    Hyperparams hp;
    for (const auto& [k, v] : header.at("hyperparams").items()) hp[k] = v.get<double>();
    AlgorithmSpec spec(*kind, hp, header.at("seed").get<std::uint64_t>());

    std::vector<ParamBlock> blocks;
    for (const auto& jb : header.at("blocks")) {
      ParamBlock b{jb.at("name").get<std::string>(), jb.at("rows").get<std::size_t>(),
                   jb.at("cols").get<std::size_t>(), {}};
      b.data.resize(b.rows * b.cols);
      for (double& d : b.data) d = std::bit_cast<double>(get_le<std::uint64_t>(bytes, pos));
      blocks.push_back(std::move(b));
    }
    if (pos != bytes.size()) throw Error(ErrorCode::kFormatError, "trailing bytes in model file");

    auto model = make_model(spec, train);
    model->load_parameters(blocks);
    return FittedModel(spec, std::move(train), std::move(model),
                       header.at("loss_trace").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("bad model header: ") + e.what());
  }
}

void save_model(const FittedModel& model, const std::filesystem::path& path) {
  io::write_file(path, serialize_model(model));
}

FittedModel load_model(const std::filesystem::path& path,
                       std::shared_ptr<const InteractionMatrix> train) {
  return deserialize_model(io::read_file(path), std::move(train));
}

}  // namespace biaslens::recsys
