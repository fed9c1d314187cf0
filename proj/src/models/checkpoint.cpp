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

#include "geograph/models/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "geograph/errors.hpp"

namespace geograph::models {

namespace {

constexpr char kMagic[8] = {'G', 'E', 'O', 'G', 'R', 'A', 'P', 'H'};

template <typename T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xFF);
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& in, const char* what) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw ParseError("checkpoint", 0, std::string("truncated while reading ") + what);
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(bytes[i]) << (8 * i);
  }
  return value;
}

void put_string(std::ostream& out, const std::string& s) {
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in, const char* what) {
  const auto n = get_le<std::uint32_t>(in, what);
  std::string s(n, '\0');
  if (n > 0 && !in.read(s.data(), n)) {
    throw ParseError("checkpoint", 0, std::string("truncated while reading ") + what);
  }
  return s;
}

}  // namespace

void Checkpoint::add_params(const std::string& prefix, const tensor::ParamSet& params) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    tensors.emplace_back(prefix + params.name(i), params.value(i));
  }
}

void Checkpoint::load_params(const std::string& prefix, tensor::ParamSet& params) const {
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& src = tensor(prefix + params.name(i));
    tensor::require_same_shape(params.value(i), src, "checkpoint parameter");
    params.value(i) = src;
  }
}

const tensor::DenseMatrix& Checkpoint::tensor(const std::string& name) const {
  for (const auto& [n, m] : tensors) {
    if (n == name) {
      return m;
    }
  }
  throw ArgumentError("checkpoint: no tensor named '" + name + "'");
}

bool Checkpoint::contains(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.first == name) {
      return true;
    }
  }
  return false;
}

void write_checkpoint(const Checkpoint& ckpt, std::ostream& out) {
  out.write(kMagic, sizeof kMagic);
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_string(out, ckpt.header);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const auto& [name, m] : ckpt.tensors) {
    put_string(out, name);
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
    for (tensor::Index i = 0; i < m.size(); ++i) {
      put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(m.data()[i]));
    }
  }
  if (!out) {
    throw IoError("checkpoint: write failed");
  }
}

Checkpoint read_checkpoint(std::istream& in) {
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw ParseError("checkpoint", 0, "bad magic");
  }
  const auto version = get_le<std::uint32_t>(in, "version");
  if (version != kCheckpointVersion) {
    throw ParseError("checkpoint", 0, "unsupported version " + std::to_string(version));
  }
  Checkpoint ckpt;
  ckpt.header = get_string(in, "header");
  const auto count = get_le<std::uint32_t>(in, "tensor count");
  for (std::uint32_t t = 0; t < count; ++t) {
    std::string name = get_string(in, "tensor name");
    const auto rows = get_le<std::uint64_t>(in, "rows");
    const auto cols = get_le<std::uint64_t>(in, "cols");
    if (rows > (1ULL << 32) || cols > (1ULL << 32)) {
      throw ParseError("checkpoint", 0, "implausible shape for '" + name + "'");
    }
    tensor::DenseMatrix m(static_cast<tensor::Index>(rows), static_cast<tensor::Index>(cols));
    for (tensor::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = std::bit_cast<double>(get_le<std::uint64_t>(in, "tensor data"));
    }
    ckpt.tensors.emplace_back(std::move(name), std::move(m));
  }
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  write_checkpoint(ckpt, out);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "'");
  }
  return read_checkpoint(in);
}

}  // namespace geograph::models
