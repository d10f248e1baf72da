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

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "statflow/operator_kind.hpp"

namespace statflow {

// Arc labels follow [A-Za-z_][A-Za-z0-9_]*.
inline bool is_valid_label(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s.front())) return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [&](char c) { return alpha(c) || digit(c); });
}

struct PortId {
  std::size_t node = 0;
  Slot slot = Slot::A;

  friend bool operator==(const PortId&, const PortId&) = default;
};

// One operator instance. `ports` holds one arc label per port, inputs first,
// in the order given by input_slots()/output_slots(). An empty label marks an
// unconnected port.
struct Node {
  OperatorKind kind = OperatorKind::Copy;
  std::string name;
  std::vector<std::string> ports;

  std::string_view label_at(Slot s) const {
    auto idx = slot_index(kind, s);
    if (!idx) return {};
    std::size_t pos = is_input_slot(s) ? *idx : input_slots(kind).size() + *idx;
    return pos < ports.size() ? std::string_view(ports[pos]) : std::string_view{};
  }
};

// An arc as seen after validation: one producer (or the environment when
// the label is a graph input) and one consumer (or the environment when the
// label is a graph output).
struct Arc {
  std::string label;
  std::optional<PortId> producer;  // nullopt: external input
  std::optional<PortId> consumer;  // nullopt: external output
};

// The dataflow-graph IR. Connectivity is stored node-centrically so that
// malformed graphs (double producers, dangling ports) remain representable
// and can be diagnosed by validate_graph().
class DataflowGraph {
 public:
  DataflowGraph() = default;

  std::size_t add_node(OperatorKind kind, std::string name,
                       std::vector<std::string> labels) {
    nodes_.push_back(Node{kind, std::move(name), std::move(labels)});
    return nodes_.size() - 1;
  }

  void add_input(std::string label) { inputs_.push_back(std::move(label)); }
  void add_output(std::string label) { outputs_.push_back(std::move(label)); }

  const std::vector<Node>& nodes() const { return nodes_; }
  std::vector<Node>& mutable_nodes() { return nodes_; }
  const std::vector<std::string>& inputs() const { return inputs_; }
  const std::vector<std::string>& outputs() const { return outputs_; }
  std::vector<std::string>& mutable_inputs() { return inputs_; }
  std::vector<std::string>& mutable_outputs() { return outputs_; }

  // Arcs in first-use order: node ports in statement order, then any
  // declared input/output labels not yet seen. When a label has several
  // producers or consumers, the first one wins here; validate_graph() is
  // the place that reports the violation.
  std::vector<Arc> arcs() const {
    std::vector<Arc> out;
    std::unordered_map<std::string, std::size_t> index;
    auto slot_for = [&](std::string_view label) -> Arc& {
      auto [it, fresh] = index.try_emplace(std::string(label), out.size());
      if (fresh) out.push_back(Arc{std::string(label), std::nullopt, std::nullopt});
      return out[it->second];
    };
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
      const Node& node = nodes_[n];
      const auto ins = input_slots(node.kind);
      const auto outs = output_slots(node.kind);
      for (std::size_t p = 0; p < node.ports.size(); ++p) {
        if (node.ports[p].empty()) continue;
        Arc& arc = slot_for(node.ports[p]);
        if (p < ins.size()) {
          if (!arc.consumer) arc.consumer = PortId{n, ins[p]};
        } else if (p - ins.size() < outs.size()) {
          if (!arc.producer) arc.producer = PortId{n, outs[p - ins.size()]};
        }
      }
    }
    for (const auto& l : inputs_) slot_for(l);
    for (const auto& l : outputs_) slot_for(l);
    return out;
  }

  std::optional<std::size_t> find_node(std::string_view name) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].name == name) return i;
    }
    return std::nullopt;
  }

  bool is_input(std::string_view label) const {
    return std::find(inputs_.begin(), inputs_.end(), label) != inputs_.end();
  }
  bool is_output(std::string_view label) const {
    return std::find(outputs_.begin(), outputs_.end(), label) != outputs_.end();
  }

 private:
  std::vector<Node> nodes_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
};

}  // namespace statflow
