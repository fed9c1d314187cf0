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

#include "geograph/harness/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "geograph/errors.hpp"

namespace geograph::harness {

void SyntheticConfig::validate() const {
  if (n_regions < 2) {
    throw ArgumentError("synthetic: need at least 2 regions");
  }
  if (n_users < static_cast<std::size_t>(n_regions)) {
    throw ArgumentError("synthetic: fewer users than regions");
  }
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(p_in) || !prob(p_out) || !prob(region_word_weight)) {
    throw ArgumentError("synthetic: probabilities must lie in [0, 1]");
  }
  if (!(p_in > p_out)) {
    throw ArgumentError("synthetic: p_in must exceed p_out");
  }
  if (vocab_size < 2 * static_cast<std::size_t>(n_regions)) {
    throw ArgumentError("synthetic: vocabulary too small for the region count");
  }
  if (!(train_fraction > 0.0) || dev_fraction < 0.0 || train_fraction + dev_fraction > 1.0) {
    throw ArgumentError("synthetic: invalid split fractions");
  }
  if (!(jitter_deg >= 0.0) || !(region_spacing_deg > 0.0)) {
    throw ArgumentError("synthetic: invalid geometry");
  }
}

DatasetBundle generate_synthetic(const SyntheticConfig& config, SyntheticTruth* truth) {
  config.validate();
  std::mt19937_64 rng(config.seed);

  const int grid = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(config.n_regions))));
  const double lat0 = 36.0 - 0.5 * config.region_spacing_deg * (grid - 1);
  const double lon0 = -98.0 - 0.5 * config.region_spacing_deg * (grid - 1);
  std::vector<geo::GeoPoint> centers;
  for (int r = 0; r < config.n_regions; ++r) {
    const geo::GeoPoint c{lat0 + config.region_spacing_deg * (r / grid),
                          lon0 + config.region_spacing_deg * (r % grid)};
    if (!c.valid()) {
      throw ArgumentError("synthetic: region grid leaves the valid coordinate range");
    }
    centers.push_back(c);
  }

  // Shared words occupy the first half of the vocabulary; the rest is split
  // into one block per region.
  const std::size_t shared = config.vocab_size / 2;
  const std::size_t block = (config.vocab_size - shared) / static_cast<std::size_t>(config.n_regions);

  DatasetBundle bundle;
  bundle.provenance = Provenance::kSynthetic;
  std::vector<int> region(config.n_users);
  std::normal_distribution<double> jitter(0.0, config.jitter_deg);
  std::bernoulli_distribution regional(config.region_word_weight);
  std::uniform_int_distribution<std::size_t> shared_word(0, shared - 1);
  std::uniform_int_distribution<std::size_t> block_word(0, block - 1);
  // Unpartitioned vocab: regional words come from a per-region window of the
  // full vocabulary, so they also occur as background words elsewhere.
  std::uniform_int_distribution<std::size_t> any_word(0, config.vocab_size - 1);

  for (std::size_t u = 0; u < config.n_users; ++u) {
    const int r = static_cast<int>(u % static_cast<std::size_t>(config.n_regions));
    region[u] = r;
    User user;
    user.id = "u" + std::to_string(u);
    geo::GeoPoint p{centers[r].lat + jitter(rng), centers[r].lon + jitter(rng)};
    p.lat = std::clamp(p.lat, -90.0, 90.0);
    p.lon = std::clamp(p.lon, -180.0, 180.0);
    user.location = p;
    for (std::size_t w = 0; w < config.words_per_user; ++w) {
      std::size_t term = 0;
      if (regional(rng)) {
        if (config.partition_vocab) {
          term = shared + static_cast<std::size_t>(r) * block + block_word(rng);
        } else {
          term = (static_cast<std::size_t>(r) * block + block_word(rng)) % config.vocab_size;
        }
      } else {
        term = config.partition_vocab ? shared_word(rng) : any_word(rng);
      }
      if (w > 0) {
        user.text += ' ';
      }
      user.text += "w" + std::to_string(term);
    }
    bundle.users.push_back(std::move(user));
  }

  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t u = 0; u < config.n_users; ++u) {
    for (std::size_t v = u + 1; v < config.n_users; ++v) {
      const double p = region[u] == region[v] ? config.p_in : config.p_out;
      if (unit(rng) < p) {
        if (coin(rng)) {
          bundle.mentions.push_back({bundle.users[u].id, bundle.users[v].id});
        } else {
          bundle.mentions.push_back({bundle.users[v].id, bundle.users[u].id});
        }
      }
    }
  }

  std::vector<std::size_t> order(config.n_users);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train = static_cast<std::size_t>(
      std::llround(config.train_fraction * static_cast<double>(config.n_users)));
  const auto n_dev = static_cast<std::size_t>(
      std::llround(config.dev_fraction * static_cast<double>(config.n_users)));
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto& user = bundle.users[order[k]];
    user.split = k < n_train ? Split::kTrain : (k < n_train + n_dev ? Split::kDev : Split::kTest);
  }

  if (truth != nullptr) {
    truth->region = std::move(region);
    truth->centers = std::move(centers);
  }
  return bundle;
}

}  // namespace geograph::harness
