// Copyright 2026 The statflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "statflow/graph.hpp"
#include "statflow/semantics.hpp"

namespace statflow {

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr unsigned kDefaultWidth = 16;
inline constexpr std::uint64_t kDefaultMaxTicks = 1'000'000;

// Run configuration: token streams for graph inputs and the number of tokens
// each graph output is expected to deliver.
struct Manifest {
  unsigned width = kDefaultWidth;
  std::uint64_t max_ticks = kDefaultMaxTicks;
  std::map<std::string, std::vector<std::int64_t>> inputs;
  std::map<std::string, std::uint64_t> results;
};

// {"width":16,"max_ticks":100000,"inputs":{"dadoa":[10]},"results":{"fibo":1}}
inline Manifest parse_manifest(std::string_view source) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ManifestError(std::string("malformed manifest: ") + e.what());
  }
  if (!doc.is_object()) throw ManifestError("manifest must be a JSON object");

  Manifest m;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    if (key == "width") {
      if (!v.is_number_integer()) throw ManifestError("width must be an integer");
      const auto w = v.get<std::int64_t>();
      if (w < 1 || w > static_cast<std::int64_t>(Width::kMax)) {
        throw ManifestError("width out of range 1..32: " + std::to_string(w));
      }
      m.width = static_cast<unsigned>(w);
    } else if (key == "max_ticks") {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
        throw ManifestError("max_ticks must be a positive integer");
      }
      m.max_ticks = v.get<std::uint64_t>();
    } else if (key == "inputs") {
      if (!v.is_object()) throw ManifestError("inputs must be an object");
      for (auto in = v.begin(); in != v.end(); ++in) {
        if (!in.value().is_array()) {
          throw ManifestError("input '" + in.key() + "' must be an array");
        }
        auto& stream = m.inputs[in.key()];
        for (const auto& tok : in.value()) {
          if (!tok.is_number_integer()) {
            throw ManifestError("input '" + in.key() + "' holds a non-integer token");
          }
          stream.push_back(tok.get<std::int64_t>());
        }
      }
    } else if (key == "results") {
      if (!v.is_object()) throw ManifestError("results must be an object");
      for (auto r = v.begin(); r != v.end(); ++r) {
        if (!r.value().is_number_integer() || r.value().get<std::int64_t>() < 0) {
          throw ManifestError("result count for '" + r.key() +
                              "' must be a non-negative integer");
        }
        m.results[r.key()] = r.value().get<std::uint64_t>();
      }
    } else {
      throw ManifestError("unknown manifest key '" + key + "'");
    }
  }
  return m;
}

inline std::string manifest_to_json(const Manifest& m) {
  nlohmann::ordered_json doc;
  doc["width"] = m.width;
  doc["max_ticks"] = m.max_ticks;
  doc["inputs"] = nlohmann::ordered_json::object();
  for (const auto& [label, toks] : m.inputs) doc["inputs"][label] = toks;
  doc["results"] = nlohmann::ordered_json::object();
  for (const auto& [label, n] : m.results) doc["results"][label] = n;
  return doc.dump();
}

// A graph together with everything the engine needs to run it.
struct BoundProgram {
  DataflowGraph graph;
  Width width;
  std::uint64_t max_ticks = kDefaultMaxTicks;
  std::vector<std::vector<Word>> input_streams;  // parallel to graph.inputs()
  std::vector<std::uint64_t> expected;           // parallel to graph.outputs()
};

// Every graph input gets its (possibly empty) stream and every output its
// expected count (0: collect until the run stops). Token values may be given
// signed or unsigned and are wrapped to the bus width.
inline BoundProgram bind_manifest(DataflowGraph graph, const Manifest& m) {
  for (const auto& [label, _] : m.inputs) {
    if (!graph.is_input(label)) {
      throw ManifestError("unknown input label '" + label + "'");
    }
  }
  for (const auto& [label, _] : m.results) {
    if (!graph.is_output(label)) {
      throw ManifestError("unknown result label '" + label + "'");
    }
  }
  if (m.max_ticks < 1) throw ManifestError("max_ticks must be at least 1");
  if (m.width < 1 || m.width > Width::kMax) {
    throw ManifestError("width out of range 1..32: " + std::to_string(m.width));
  }

  BoundProgram p;
  p.width = Width(m.width);
  p.max_ticks = m.max_ticks;
  for (const auto& label : graph.inputs()) {
    std::vector<Word> stream;
    if (auto it = m.inputs.find(label); it != m.inputs.end()) {
      for (std::int64_t v : it->second) {
        if (v < p.width.min_signed() || v > p.width.max_unsigned()) {
          throw ManifestError("token " + std::to_string(v) + " on '" + label +
                              "' does not fit in " + std::to_string(m.width) +
                              " bits");
        }
        stream.push_back(p.width.wrap(v));
      }
    }
    p.input_streams.push_back(std::move(stream));
  }
  for (const auto& label : graph.outputs()) {
    auto it = m.results.find(label);
    p.expected.push_back(it == m.results.end() ? 0 : it->second);
  }
  p.graph = std::move(graph);
  return p;
}

}  // namespace statflow
