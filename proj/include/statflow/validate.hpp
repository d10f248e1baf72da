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

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "statflow/graph.hpp"

namespace statflow {

enum class Rule {
  WrongArity,
  UnconnectedPort,
  InvalidLabel,
  DuplicateNodeName,
  DuplicateDeclaration,
  InputAndOutput,
  MultipleProducers,
  NoProducer,
  MultipleConsumers,
  NoConsumer,
};

constexpr std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::WrongArity: return "wrong arity";
    case Rule::UnconnectedPort: return "unconnected port";
    case Rule::InvalidLabel: return "invalid label";
    case Rule::DuplicateNodeName: return "duplicate node name";
    case Rule::DuplicateDeclaration: return "duplicate declaration";
    case Rule::InputAndOutput: return "both input and output";
    case Rule::MultipleProducers: return "multiple producers";
    case Rule::NoProducer: return "no producer";
    case Rule::MultipleConsumers: return "multiple consumers";
    case Rule::NoConsumer: return "no consumer";
  }
  return "?";
}

struct Diagnostic {
  Rule rule;
  std::string subject;  // node name or arc label
  std::string message;
};

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
  bool has(Rule r) const {
    for (const auto& d : diagnostics) {
      if (d.rule == r) return true;
    }
    return false;
  }
};

inline ValidationReport validate_graph(const DataflowGraph& g) {
  ValidationReport report;
  auto diag = [&](Rule r, std::string subject, std::string detail) {
    std::string msg = std::string(rule_name(r)) + ": " + subject;
    if (!detail.empty()) msg += " (" + detail + ")";
    report.diagnostics.push_back(Diagnostic{r, std::move(subject), std::move(msg)});
  };

  struct Usage {
    std::size_t producers = 0;
    std::size_t consumers = 0;
    bool declared_input = false;
    bool declared_output = false;
  };
  // Ordered by first appearance so diagnostics come out deterministically.
  std::vector<std::string> order;
  std::unordered_map<std::string, Usage> usage;
  auto use = [&](const std::string& label) -> Usage& {
    auto [it, fresh] = usage.try_emplace(label);
    if (fresh) order.push_back(label);
    return it->second;
  };

  std::unordered_set<std::string> names;
  for (const Node& node : g.nodes()) {
    if (!names.insert(node.name).second) {
      diag(Rule::DuplicateNodeName, node.name, "");
    }
    const auto ins = input_slots(node.kind);
    const auto outs = output_slots(node.kind);
    if (node.ports.size() != ins.size() + outs.size()) {
      diag(Rule::WrongArity, node.name,
           std::string(mnemonic(node.kind)) + " takes " +
               std::to_string(ins.size() + outs.size()) + " ports, got " +
               std::to_string(node.ports.size()));
    }
    const std::size_t expected = ins.size() + outs.size();
    for (std::size_t p = 0; p < expected; ++p) {
      const Slot slot = p < ins.size() ? ins[p] : outs[p - ins.size()];
      if (p >= node.ports.size() || node.ports[p].empty()) {
        diag(Rule::UnconnectedPort, node.name,
             "port " + std::string(slot_name(slot)));
        continue;
      }
      const std::string& label = node.ports[p];
      if (!is_valid_label(label)) {
        diag(Rule::InvalidLabel, label, "on " + node.name);
      }
      Usage& u = use(label);
      if (p < ins.size()) {
        ++u.consumers;
      } else {
        ++u.producers;
      }
    }
  }

  std::unordered_set<std::string> seen_inputs;
  for (const auto& l : g.inputs()) {
    if (!seen_inputs.insert(l).second) {
      diag(Rule::DuplicateDeclaration, l, "input declared twice");
      continue;
    }
    if (!is_valid_label(l)) diag(Rule::InvalidLabel, l, "graph input");
    Usage& u = use(l);
    u.declared_input = true;
    ++u.producers;
  }
  std::unordered_set<std::string> seen_outputs;
  for (const auto& l : g.outputs()) {
    if (!seen_outputs.insert(l).second) {
      diag(Rule::DuplicateDeclaration, l, "output declared twice");
      continue;
    }
    if (!is_valid_label(l)) diag(Rule::InvalidLabel, l, "graph output");
    Usage& u = use(l);
    u.declared_output = true;
    ++u.consumers;
  }

  for (const auto& label : order) {
    const Usage& u = usage.at(label);
    if (u.declared_input && u.declared_output) {
      diag(Rule::InputAndOutput, label, "");
    }
    if (u.producers > 1) {
      diag(Rule::MultipleProducers, label,
           std::to_string(u.producers) + " senders");
    } else if (u.producers == 0) {
      diag(Rule::NoProducer, label, "");
    }
    if (u.consumers > 1) {
      diag(Rule::MultipleConsumers, label,
           std::to_string(u.consumers) + " receivers");
    } else if (u.consumers == 0) {
      diag(Rule::NoConsumer, label, "");
    }
  }
  return report;
}

struct GraphStats {
  std::size_t node_count = 0;
  std::size_t arc_count = 0;
  std::map<OperatorKind, std::size_t> histogram;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

  std::size_t internal_arc_count() const {
    return arc_count - inputs.size() - outputs.size();
  }
  std::size_t count(OperatorKind k) const {
    auto it = histogram.find(k);
    return it == histogram.end() ? 0 : it->second;
  }
};

inline GraphStats graph_stats(const DataflowGraph& g) {
  GraphStats s;
  s.node_count = g.nodes().size();
  s.arc_count = g.arcs().size();
  for (const auto& n : g.nodes()) ++s.histogram[n.kind];
  s.inputs = g.inputs();
  s.outputs = g.outputs();
  return s;
}

}  // namespace statflow
