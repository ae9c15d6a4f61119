// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_MATRIX_H_
#define BIASLENS_MATRIX_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "biaslens/types.h"

namespace biaslens {

using Index = std::uint32_t;

// One stored rating seen from either orientation: `index` is the column in a
// row view and the row in a column view.
struct Cell {
  Index index;
  std::int32_t rating;

  friend bool operator==(const Cell&, const Cell&) = default;
};

// Bijection between external string ids and dense indices, assigned in
// first-appearance order.
class IdIndex {
 public:
  Index get_or_add(const std::string& id);
  std::optional<Index> find(std::string_view id) const;
  const std::string& id(Index idx) const { return ids_[idx]; }
  const std::vector<std::string>& ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Index> lookup_;
};

// Immutable user x item rating matrix stored in both CSR (rows) and CSC
// (cols) form. Row and column lists are sorted by index. Every row and every
// column holds at least one rating.
class InteractionMatrix {
 public:
  // Throws Error(kEmptyInput) or Error(kDuplicatePair).
  static InteractionMatrix build(std::span<const Interaction> interactions);

  std::size_t n_users() const { return users_.size(); }
  std::size_t n_items() const { return items_.size(); }
  std::size_t n_ratings() const { return row_cells_.size(); }

  std::span<const Cell> row(Index user) const {
    return {row_cells_.data() + row_ptr_[user], row_ptr_[user + 1] - row_ptr_[user]};
  }
  std::span<const Cell> col(Index item) const {
    return {col_cells_.data() + col_ptr_[item], col_ptr_[item + 1] - col_ptr_[item]};
  }

  // Rating stored at (user, item), or nullopt. Binary search over the row.
  std::optional<int> rating(Index user, Index item) const;

  const IdIndex& users() const { return users_; }
  const IdIndex& items() const { return items_; }
  const std::string& user_id(Index u) const { return users_.id(u); }
  const std::string& item_id(Index i) const { return items_.id(i); }

  // All stored triples enumerated row-major / column-major.
  std::vector<Interaction> row_triples() const;
  std::vector<Interaction> col_triples() const;

  double mean_rating() const;

 private:
  IdIndex users_;
  IdIndex items_;
  std::vector<std::size_t> row_ptr_;
  std::vector<Cell> row_cells_;
  std::vector<std::size_t> col_ptr_;
  std::vector<Cell> col_cells_;
};

// Number of ratings per item column; sums to n_ratings().
std::vector<std::uint32_t> matrix_popularity(const InteractionMatrix& m);

}  // namespace biaslens

#endif  // BIASLENS_MATRIX_H_
