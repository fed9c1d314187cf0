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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "geograph/tensor/dense.hpp"
#include "geograph/tensor/params.hpp"

namespace geograph::models {

/// Flat named-tensor archive with a free-form text header.
///
/// Layout (all integers little-endian):
///   8 bytes   magic "GEOGRAPH"
///   u32       format version (1)
///   u32 + n   header length and UTF-8 bytes (JSON config)
///   u32       tensor count
///   per tensor: u32 name length, name bytes, u64 rows, u64 cols,
///               rows * cols IEEE-754 doubles, row-major
struct Checkpoint {
  std::string header;
  std::vector<std::pair<std::string, tensor::DenseMatrix>> tensors;

  void add_params(const std::string& prefix, const tensor::ParamSet& params);
  /// Copies every tensor named `prefix + param name` into `params`.
  void load_params(const std::string& prefix, tensor::ParamSet& params) const;
  const tensor::DenseMatrix& tensor(const std::string& name) const;
  bool contains(const std::string& name) const;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(const Checkpoint& ckpt, std::ostream& out);
/// Throws ParseError on truncated or malformed input.
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace geograph::models
