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

#include "geograph/harness/dataset.hpp"

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "geograph/errors.hpp"

namespace geograph::harness {

using nlohmann::json;

std::string_view to_string(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kDev:
      return "dev";
    case Split::kTest:
      return "test";
  }
  return "train";
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kGeotext:
      return "geotext";
    case Provenance::kTwitterUs:
      return "twitter-us";
    case Provenance::kTwitterWorld:
      return "twitter-world";
    case Provenance::kSynthetic:
      return "synthetic";
    case Provenance::kCustom:
      return "custom";
  }
  return "custom";
}

Split parse_split(std::string_view s) {
  if (s == "train") return Split::kTrain;
  if (s == "dev") return Split::kDev;
  if (s == "test") return Split::kTest;
  throw ArgumentError("unknown split '" + std::string(s) + "'");
}

Provenance parse_provenance(std::string_view s) {
  for (auto p : {Provenance::kGeotext, Provenance::kTwitterUs, Provenance::kTwitterWorld,
                 Provenance::kSynthetic, Provenance::kCustom}) {
    if (to_string(p) == s) {
      return p;
    }
  }
  throw ArgumentError("unknown provenance '" + std::string(s) + "'");
}

std::vector<Index> DatasetBundle::users_in(Split split) const {
  std::vector<Index> out;
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (users[i].split == split) {
      out.push_back(static_cast<Index>(i));
    }
  }
  return out;
}

std::vector<std::string> DatasetBundle::ids() const {
  std::vector<std::string> out;
  out.reserve(users.size());
  for (const auto& u : users) {
    out.push_back(u.id);
  }
  return out;
}

std::vector<std::string> DatasetBundle::texts() const {
  std::vector<std::string> out;
  out.reserve(users.size());
  for (const auto& u : users) {
    out.push_back(u.text);
  }
  return out;
}

void DatasetBundle::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& u : users) {
    if (!seen.insert(u.id).second) {
      throw ArgumentError("duplicate user id '" + u.id + "'");
    }
    if (u.split == Split::kTrain && !u.location) {
      throw ArgumentError("training user '" + u.id + "' has no coordinates");
    }
    if (u.location && !u.location->valid()) {
      throw ArgumentError("user '" + u.id + "' has invalid coordinates");
    }
  }
}

std::vector<User> parse_users(std::istream& in, const std::string& source) {
  std::vector<User> users;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source, lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
      throw ParseError(source, lineno, "expected a JSON object");
    }
    auto require = [&](const char* key) -> const json& {
      const auto it = j.find(key);
      if (it == j.end() || it->is_null()) {
        throw ParseError(source, lineno, std::string("missing field '") + key + "'");
      }
      return *it;
    };
    User u;
    const json& id = require("id");
    if (id.is_string()) {
      u.id = id.get<std::string>();
    } else if (id.is_number_integer()) {
      u.id = std::to_string(id.get<long long>());
    } else {
      throw ParseError(source, lineno, "field 'id' must be a string or integer");
    }
    if (u.id.empty()) {
      throw ParseError(source, lineno, "empty id");
    }
    const json& split = require("split");
    if (!split.is_string()) {
      throw ParseError(source, lineno, "field 'split' must be a string");
    }
    try {
      u.split = parse_split(split.get<std::string>());
    } catch (const ArgumentError& e) {
      throw ParseError(source, lineno, e.what());
    }
    if (const auto t = j.find("text"); t != j.end() && !t->is_null()) {
      if (!t->is_string()) {
        throw ParseError(source, lineno, "field 'text' must be a string");
      }
      u.text = t->get<std::string>();
    }
    const auto lat = j.find("lat");
    const auto lon = j.find("lon");
    const bool has_lat = lat != j.end() && !lat->is_null();
    const bool has_lon = lon != j.end() && !lon->is_null();
    if (has_lat != has_lon) {
      throw ParseError(source, lineno, "lat and lon must be given together");
    }
    if (has_lat) {
      if (!lat->is_number() || !lon->is_number()) {
        throw ParseError(source, lineno, "lat/lon must be numbers");
      }
      geo::GeoPoint p{lat->get<double>(), lon->get<double>()};
      if (!p.valid()) {
        throw ParseError(source, lineno, "coordinates out of range");
      }
      u.location = p;
    } else if (u.split == Split::kTrain) {
      throw ParseError(source, lineno, "training user without coordinates");
    }
    if (!seen.insert(u.id).second) {
      throw ParseError(source, lineno, "duplicate id '" + u.id + "'");
    }
    users.push_back(std::move(u));
  }
  return users;
}

std::vector<views::MentionPair> parse_mentions(std::istream& in, const std::string& source) {
  std::vector<views::MentionPair> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(source, lineno, "expected exactly two tab-separated columns");
    }
    views::MentionPair p{line.substr(0, tab), line.substr(tab + 1)};
    if (p.user.empty() || p.handle.empty()) {
      throw ParseError(source, lineno, "empty column");
    }
    out.push_back(std::move(p));
  }
  return out;
}

DatasetBundle load_dataset(const std::string& users_path, const std::string& edges_path,
                           Provenance provenance) {
  std::ifstream users(users_path);
  if (!users) {
    throw IoError("cannot open users file '" + users_path + "'");
  }
  std::ifstream edges(edges_path);
  if (!edges) {
    throw IoError("cannot open edges file '" + edges_path + "'");
  }
  DatasetBundle b;
  b.users = parse_users(users, users_path);
  b.mentions = parse_mentions(edges, edges_path);
  b.provenance = provenance;
  b.validate();
  return b;
}

void write_users(const DatasetBundle& bundle, std::ostream& out) {
  for (const auto& u : bundle.users) {
    json j;
    j["id"] = u.id;
    if (u.location) {
      j["lat"] = u.location->lat;
      j["lon"] = u.location->lon;
    }
    j["text"] = u.text;
    j["split"] = std::string(to_string(u.split));
    out << j.dump() << '\n';
  }
}

void write_mentions(const DatasetBundle& bundle, std::ostream& out) {
  for (const auto& m : bundle.mentions) {
    out << m.user << '\t' << m.handle << '\n';
  }
}

void save_dataset(const DatasetBundle& bundle, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto base = std::filesystem::path(dir);
  std::ofstream users(base / "users.jsonl", std::ios::trunc);
  std::ofstream edges(base / "edges.tsv", std::ios::trunc);
  if (!users || !edges) {
    throw IoError("cannot write dataset files into '" + dir + "'");
  }
  write_users(bundle, users);
  write_mentions(bundle, edges);
}

views::ViewMatrices build_views(const DatasetBundle& bundle, const views::ViewOptions& options) {
  const auto ids = bundle.ids();
  const auto texts = bundle.texts();
  return views::build_views(ids, texts, bundle.mentions, options);
}

}  // namespace geograph::harness
