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

#include "geograph/views/views.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <utility>

#include "geograph/errors.hpp"

namespace geograph::views {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

bool is_handle_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

Tokens tokenize(std::string_view text) {
  Tokens out;
  const std::string lower = lowercase(text);
  std::size_t i = 0;
  while (i < lower.size()) {
    while (i < lower.size() && std::isspace(static_cast<unsigned char>(lower[i]))) {
      ++i;
    }
    std::size_t j = i;
    while (j < lower.size() && !std::isspace(static_cast<unsigned char>(lower[j]))) {
      ++j;
    }
    if (j > i) {
      std::string_view tok(lower.data() + i, j - i);
      if (tok.size() > 1 && tok.front() == '@') {
        std::string_view handle = tok.substr(1);
        while (!handle.empty() && !is_handle_char(handle.back())) {
          handle.remove_suffix(1);
        }
        if (!handle.empty()) {
          out.mentions.emplace_back(handle);
        }
      } else {
        out.terms.emplace_back(tok);
      }
    }
    i = j;
  }
  return out;
}

double smoothed_idf(std::size_t df, std::size_t num_docs) {
  return std::log((1.0 + static_cast<double>(num_docs)) / (1.0 + static_cast<double>(df))) + 1.0;
}

Vocabulary Vocabulary::fit(std::span<const std::vector<std::string>> docs,
                           const TextViewOptions& options) {
  if (options.max_df_ratio <= 0.0 || options.max_df_ratio > 1.0) {
    throw ArgumentError("Vocabulary: max_df_ratio must be in (0, 1]");
  }
  std::map<std::string, std::size_t> df;
  for (const auto& doc : docs) {
    std::vector<std::string> unique(doc.begin(), doc.end());
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    for (auto& t : unique) {
      ++df[std::move(t)];
    }
  }
  Vocabulary v;
  v.num_docs_ = docs.size();
  const double max_df = options.max_df_ratio * static_cast<double>(docs.size());
  for (auto& [term, count] : df) {
    if (count < options.min_df || static_cast<double>(count) > max_df) {
      continue;
    }
    v.index_.emplace(term, static_cast<Index>(v.terms_.size()));
    v.terms_.push_back(term);
    v.df_.push_back(count);
  }
  return v;
}

std::optional<Index> Vocabulary::index_of(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

SparseMatrix build_text_view(std::span<const std::vector<std::string>> docs,
                             const Vocabulary& vocab) {
  std::vector<SparseMatrix::Triplet> triplets;
  for (std::size_t r = 0; r < docs.size(); ++r) {
    std::vector<Index> cols;
    for (const auto& t : docs[r]) {
      if (auto c = vocab.index_of(t)) {
        cols.push_back(*c);
      }
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    double norm2 = 0.0;
    for (const Index c : cols) {
      const double w = vocab.idf(c);
      norm2 += w * w;
    }
    const double inv = norm2 > 0.0 ? 1.0 / std::sqrt(norm2) : 0.0;
    for (const Index c : cols) {
      triplets.push_back({static_cast<Index>(r), c, vocab.idf(c) * inv});
    }
  }
  return SparseMatrix::from_triplets(static_cast<Index>(docs.size()),
                                     static_cast<Index>(vocab.size()), std::move(triplets));
}

SparseMatrix build_mention_graph(std::span<const MentionPair> mentions,
                                 std::span<const std::string> user_ids,
                                 std::size_t max_comention_degree, GraphStats* stats) {
  constexpr Index kAmbiguous = -1;
  std::unordered_map<std::string, Index> lookup;
  for (std::size_t i = 0; i < user_ids.size(); ++i) {
    auto [it, inserted] = lookup.emplace(lowercase(user_ids[i]), static_cast<Index>(i));
    if (!inserted) {
      it->second = kAmbiguous;
    }
  }
  auto find = [&](std::string_view id) -> std::optional<Index> {
    const auto it = lookup.find(lowercase(id));
    if (it == lookup.end() || it->second == kAmbiguous) {
      return std::nullopt;
    }
    return it->second;
  };

  GraphStats local;
  std::vector<std::pair<Index, Index>> edges;
  std::map<std::string, std::vector<Index>> mentioners;
  for (const auto& m : mentions) {
    const auto u = find(m.user);
    if (!u) {
      ++local.dropped_pairs;
      continue;
    }
    const std::string handle = lowercase(m.handle);
    if (const auto v = find(handle); v && *v != *u) {
      edges.emplace_back(std::min(*u, *v), std::max(*u, *v));
    }
    mentioners[handle].push_back(*u);
  }
  for (auto& [handle, users] : mentioners) {
    std::sort(users.begin(), users.end());
    users.erase(std::unique(users.begin(), users.end()), users.end());
    if (users.size() > max_comention_degree) {
      ++local.skipped_handles;
      continue;
    }
    for (std::size_t a = 0; a < users.size(); ++a) {
      for (std::size_t b = a + 1; b < users.size(); ++b) {
        edges.emplace_back(users[a], users[b]);
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  local.edges = edges.size();

  std::vector<SparseMatrix::Triplet> triplets;
  triplets.reserve(edges.size() * 2);
  for (const auto& [u, v] : edges) {
    triplets.push_back({u, v, 1.0});
    triplets.push_back({v, u, 1.0});
  }
  if (stats != nullptr) {
    *stats = local;
  }
  const auto n = static_cast<Index>(user_ids.size());
  return SparseMatrix::from_triplets(n, n, std::move(triplets));
}

SparseMatrix normalize_adjacency(const SparseMatrix& a, double lambda, NormalizeStats* stats) {
  if (a.rows() != a.cols()) {
    throw DimensionError("normalize_adjacency: adjacency must be square");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ArgumentError("normalize_adjacency: lambda must be finite and non-negative");
  }
  const Index n = a.rows();
  std::vector<double> degree(static_cast<std::size_t>(n), lambda);
  for (Index r = 0; r < n; ++r) {
    for (const double v : a.row_values(r)) {
      if (v < 0.0) {
        throw ArgumentError("normalize_adjacency: negative edge weight");
      }
    }
    for (const Index c : a.row_cols(r)) {
      if (c == r) {
        throw ArgumentError("normalize_adjacency: adjacency has a non-zero diagonal");
      }
    }
    for (const double v : a.row_values(r)) {
      degree[static_cast<std::size_t>(r)] += v;
    }
  }

  NormalizeStats local;
  std::vector<SparseMatrix::Triplet> triplets;
  triplets.reserve(a.nnz() + static_cast<std::size_t>(n));
  for (Index r = 0; r < n; ++r) {
    const double dr = degree[static_cast<std::size_t>(r)];
    if (dr <= 0.0) {
      ++local.zero_degree_rows;
      continue;
    }
    if (lambda > 0.0) {
      triplets.push_back({r, r, lambda / dr});
    }
    const auto cols = a.row_cols(r);
    const auto vals = a.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const double dc = degree[static_cast<std::size_t>(cols[k])];
      // Commutative product keeps (r, c) and (c, r) bit-identical.
      triplets.push_back({r, cols[k], vals[k] / std::sqrt(dr * dc)});
    }
  }
  if (stats != nullptr) {
    *stats = local;
  }
  return SparseMatrix::from_triplets(n, n, std::move(triplets));
}

ViewMatrices build_views(std::span<const std::string> user_ids, std::span<const std::string> texts,
                         std::span<const MentionPair> mentions, const ViewOptions& options) {
  if (user_ids.size() != texts.size()) {
    throw DimensionError("build_views: " + std::to_string(user_ids.size()) + " ids but " +
                         std::to_string(texts.size()) + " texts");
  }
  std::vector<std::vector<std::string>> docs;
  docs.reserve(texts.size());
  std::vector<MentionPair> all_mentions(mentions.begin(), mentions.end());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    Tokens tok = tokenize(texts[i]);
    if (options.mentions_from_text) {
      for (auto& h : tok.mentions) {
        all_mentions.push_back({user_ids[i], std::move(h)});
      }
    }
    docs.push_back(std::move(tok.terms));
  }

  ViewMatrices v;
  v.lambda = options.lambda;
  v.vocabulary = Vocabulary::fit(docs, options.text);
  v.text = build_text_view(docs, v.vocabulary);
  v.adjacency =
      build_mention_graph(all_mentions, user_ids, options.max_comention_degree, &v.graph_stats);
  v.normalized = normalize_adjacency(v.adjacency, options.lambda, &v.normalize_stats);
  return v;
}

std::string describe(const ViewMatrices& views) {
  std::size_t isolated = 0;
  for (Index r = 0; r < views.adjacency.rows(); ++r) {
    if (views.adjacency.row_cols(r).empty()) {
      ++isolated;
    }
  }
  return "users=" + std::to_string(views.num_users()) +
         " vocab=" + std::to_string(views.vocabulary.size()) +
         " edges=" + std::to_string(views.graph_stats.edges) +
         " isolated=" + std::to_string(isolated) +
         " skipped_handles=" + std::to_string(views.graph_stats.skipped_handles);
}

}  // namespace geograph::views
