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
#include <cstdint>
#include <vector>

#include "geograph/harness/dataset.hpp"

namespace geograph::harness {

/// Desk-scale stand-in for a geotagged corpus with regional language and
/// location-homophilous mentions.
struct SyntheticConfig {
  std::size_t n_users = 1000;
  int n_regions = 4;
  std::size_t vocab_size = 1000;
  /// Within-region and cross-region mention probabilities per user pair.
  double p_in = 0.02;
  double p_out = 0.001;
  std::size_t words_per_user = 20;
  /// Probability that a word is drawn from the user's regional vocabulary.
  double region_word_weight = 0.3;
  /// When set, region vocabularies are disjoint blocks; otherwise every word
  /// comes from one shared pool with region-dependent frequencies.
  bool partition_vocab = true;
  double jitter_deg = 0.5;
  /// Spacing between neighbouring region centres on the grid, in degrees.
  double region_spacing_deg = 8.0;
  double train_fraction = 0.6;
  double dev_fraction = 0.2;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SyntheticTruth {
  /// Region of every user, in user order.
  std::vector<int> region;
  std::vector<geo::GeoPoint> centers;
};

/// Regions sit on a lat/lon grid; each user is placed at its region centre
/// plus Gaussian jitter, writes a mix of regional and shared words, and
/// mentions same-region users with probability p_in and others with p_out.
DatasetBundle generate_synthetic(const SyntheticConfig& config, SyntheticTruth* truth = nullptr);

}  // namespace geograph::harness
