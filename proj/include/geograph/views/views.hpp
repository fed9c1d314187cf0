// Copyright 2026 The geograph Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "geograph/tensor/sparse.hpp"

namespace geograph::views {

using tensor::Index;
using tensor::SparseMatrix;

struct Tokens {
  std::vector<std::string> terms;
  /// Handles from `@name` tokens, without the `@`.
  std::vector<std::string> mentions;
};

/// Lowercases, splits on whitespace and pulls out `@` mentions. Trailing
/// punctuation is trimmed from mention handles only.
Tokens tokenize(std::string_view text);

struct TextViewOptions {
  /// Terms in fewer documents are dropped.
  std::size_t min_df = 2;
  /// Terms in more than this fraction of documents are dropped.
  double max_df_ratio = 0.5;
};

/// Smoothed inverse document frequency: ln((1 + n) / (1 + df)) + 1.
double smoothed_idf(std::size_t df, std::size_t num_docs);

/// Term -> column mapping fitted on every user (transductive).
class Vocabulary {
 public:
  static Vocabulary fit(std::span<const std::vector<std::string>> docs,
                        const TextViewOptions& options = {});

  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t num_docs() const noexcept { return num_docs_; }
  const std::string& term(Index col) const { return terms_.at(static_cast<std::size_t>(col)); }
  std::size_t document_frequency(Index col) const { return df_.at(static_cast<std::size_t>(col)); }
  double idf(Index col) const { return smoothed_idf(document_frequency(col), num_docs_); }
  std::optional<Index> index_of(std::string_view term) const;

 private:
  std::vector<std::string> terms_;
  std::vector<std::size_t> df_;
  std::unordered_map<std::string, Index> index_;
  std::size_t num_docs_ = 0;
};

/// Binary tf times idf, each non-empty row scaled to unit l2 norm.
SparseMatrix build_text_view(std::span<const std::vector<std::string>> docs,
                             const Vocabulary& vocab);

/// `user` mentioned `handle`.
struct MentionPair {
  std::string user;
  std::string handle;
};

struct GraphStats {
  std::size_t edges = 0;
  std::size_t dropped_pairs = 0;
  std::size_t skipped_handles = 0;
};

/// Collapsed undirected mention graph over `user_ids` (row order).
///
/// u and v are joined when one mentions the other or both mention a common
/// handle. Handles are matched to ids case-insensitively. Handles mentioned by
/// more than `max_comention_degree` distinct users do not contribute
/// co-mention edges. Pairs whose mentioning user is unknown are dropped.
SparseMatrix build_mention_graph(std::span<const MentionPair> mentions,
                                 std::span<const std::string> user_ids,
                                 std::size_t max_comention_degree = 1000,
                                 GraphStats* stats = nullptr);

struct NormalizeStats {
  /// Rows left all-zero because their degree with self-loops was zero.
  std::size_t zero_degree_rows = 0;
};

/// D^{-1/2} (A + lambda I) D^{-1/2} with D the row sums of A + lambda I.
SparseMatrix normalize_adjacency(const SparseMatrix& a, double lambda,
                                 NormalizeStats* stats = nullptr);

struct ViewOptions {
  TextViewOptions text;
  double lambda = 1.0;
  std::size_t max_comention_degree = 1000;
  /// Also treat `@handle` tokens in user text as mention pairs.
  bool mentions_from_text = true;
};

/// Both views of one user population, rows in user order.
struct ViewMatrices {
  SparseMatrix text;
  SparseMatrix adjacency;
  SparseMatrix normalized;
  double lambda = 1.0;
  Vocabulary vocabulary;
  GraphStats graph_stats;
  NormalizeStats normalize_stats;

  Index num_users() const noexcept { return text.rows(); }
};

ViewMatrices build_views(std::span<const std::string> user_ids,
                         std::span<const std::string> texts, std::span<const MentionPair> mentions,
                         const ViewOptions& options = {});

/// One-line summary: vocabulary size, edges, isolated users.
std::string describe(const ViewMatrices& views);

}  // namespace geograph::views
