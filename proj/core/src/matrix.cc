// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/matrix.h"

#include <algorithm>
#include <numeric>
#include <tuple>
#include <unordered_set>

#include "biaslens/error.h"

namespace biaslens {

Index IdIndex::get_or_add(const std::string& id) {
  auto [it, inserted] = lookup_.try_emplace(id, static_cast<Index>(ids_.size()));
  if (inserted) ids_.push_back(id);
  return it->second;
}

std::optional<Index> IdIndex::find(std::string_view id) const {
  auto it = lookup_.find(std::string(id));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

namespace {

struct Triple {
  Index row;
  Index col;
  std::int32_t rating;
};

void fill_orientation(std::size_t n, std::vector<Triple>& triples, bool by_row,
                      std::vector<std::size_t>& ptr, std::vector<Cell>& cells) {
  std::sort(triples.begin(), triples.end(), [by_row](const Triple& a, const Triple& b) {
    return by_row ? std::tie(a.row, a.col) < std::tie(b.row, b.col)
                  : std::tie(a.col, a.row) < std::tie(b.col, b.row);
  });
  ptr.assign(n + 1, 0);
  cells.clear();
  cells.reserve(triples.size());
  for (const Triple& t : triples) {
    ++ptr[(by_row ? t.row : t.col) + 1];
    cells.push_back(Cell{by_row ? t.col : t.row, t.rating});
  }
  std::partial_sum(ptr.begin(), ptr.end(), ptr.begin());
}

}  // namespace

InteractionMatrix InteractionMatrix::build(std::span<const Interaction> interactions) {
  if (interactions.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no interactions to build a matrix from");
  }
  InteractionMatrix m;
  std::vector<Triple> triples;
  triples.reserve(interactions.size());
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(interactions.size() * 2);
  for (const Interaction& x : interactions) {
    Index u = m.users_.get_or_add(x.user_id);
    Index i = m.items_.get_or_add(x.item_id);
    if (!seen.insert((static_cast<std::uint64_t>(u) << 32) | i).second) {
      throw Error(ErrorCode::kDuplicatePair,
                  "duplicate (user, item) pair (" + x.user_id + ", " + x.item_id + ")");
    }
    triples.push_back(Triple{u, i, x.rating});
  }
  fill_orientation(m.users_.size(), triples, true, m.row_ptr_, m.row_cells_);
  fill_orientation(m.items_.size(), triples, false, m.col_ptr_, m.col_cells_);
  return m;
}

std::optional<int> InteractionMatrix::rating(Index user, Index item) const {
  auto r = row(user);
  auto it = std::lower_bound(r.begin(), r.end(), item,
                             [](const Cell& c, Index v) { return c.index < v; });
  if (it == r.end() || it->index != item) return std::nullopt;
  return it->rating;
}

std::vector<Interaction> InteractionMatrix::row_triples() const {
  std::vector<Interaction> out;
  out.reserve(n_ratings());
  for (Index u = 0; u < n_users(); ++u) {
    for (const Cell& c : row(u)) out.push_back({user_id(u), item_id(c.index), c.rating});
  }
  return out;
}

std::vector<Interaction> InteractionMatrix::col_triples() const {
  std::vector<Interaction> out;
  out.reserve(n_ratings());
  for (Index i = 0; i < n_items(); ++i) {
    for (const Cell& c : col(i)) out.push_back({user_id(c.index), item_id(i), c.rating});
  }
  return out;
}

double InteractionMatrix::mean_rating() const {
  double sum = 0.0;
  for (const Cell& c : row_cells_) sum += c.rating;
  return row_cells_.empty() ? 0.0 : sum / static_cast<double>(row_cells_.size());
}

std::vector<std::uint32_t> matrix_popularity(const InteractionMatrix& m) {
  std::vector<std::uint32_t> pop(m.n_items());
  for (Index i = 0; i < m.n_items(); ++i) pop[i] = static_cast<std::uint32_t>(m.col(i).size());
  return pop;
}

}  // namespace biaslens
