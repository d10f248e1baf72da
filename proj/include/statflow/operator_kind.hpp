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

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace statflow {

// Node types of the static dataflow machine. The relational kinds (IfGt..IfDf)
// are deciders: they emit a 0/1 token that steers a Branch or DMerge.
enum class OperatorKind {
  Copy,
  Add,
  Sub,
  Mul,
  Div,
  And,
  Or,
  Not,
  IfGt,
  IfGe,
  IfLt,
  IfLe,
  IfEq,
  IfDf,
  DMerge,
  NDMerge,
  Branch,
};

inline constexpr std::array kAllOperatorKinds = {
    OperatorKind::Copy,   OperatorKind::Add,    OperatorKind::Sub,
    OperatorKind::Mul,    OperatorKind::Div,    OperatorKind::And,
    OperatorKind::Or,     OperatorKind::Not,    OperatorKind::IfGt,
    OperatorKind::IfGe,   OperatorKind::IfLt,   OperatorKind::IfLe,
    OperatorKind::IfEq,   OperatorKind::IfDf,   OperatorKind::DMerge,
    OperatorKind::NDMerge, OperatorKind::Branch,
};

// Port roles. a/b/ctl are inputs; z/t/f/z1/z2 are outputs.
enum class Slot { A, B, Ctl, Z, T, F, Z1, Z2 };

// Upper bounds over all kinds, used to size per-node register files.
inline constexpr std::size_t kMaxInputs = 3;
inline constexpr std::size_t kMaxOutputs = 2;

namespace detail {
inline constexpr std::array<Slot, 1> kInA{Slot::A};
inline constexpr std::array<Slot, 2> kInAB{Slot::A, Slot::B};
inline constexpr std::array<Slot, 3> kInABCtl{Slot::A, Slot::B, Slot::Ctl};
inline constexpr std::array<Slot, 2> kInACtl{Slot::A, Slot::Ctl};
inline constexpr std::array<Slot, 1> kOutZ{Slot::Z};
inline constexpr std::array<Slot, 2> kOutZ1Z2{Slot::Z1, Slot::Z2};
inline constexpr std::array<Slot, 2> kOutTF{Slot::T, Slot::F};
}  // namespace detail

constexpr bool is_decider(OperatorKind k) {
  switch (k) {
    case OperatorKind::IfGt:
    case OperatorKind::IfGe:
    case OperatorKind::IfLt:
    case OperatorKind::IfLe:
    case OperatorKind::IfEq:
    case OperatorKind::IfDf:
      return true;
    default:
      return false;
  }
}

// Two-input, one-output value operators (arithmetic, logic, deciders).
constexpr bool is_binary_primitive(OperatorKind k) {
  switch (k) {
    case OperatorKind::Add:
    case OperatorKind::Sub:
    case OperatorKind::Mul:
    case OperatorKind::Div:
    case OperatorKind::And:
    case OperatorKind::Or:
      return true;
    default:
      return is_decider(k);
  }
}

// Input slots in statement argument order.
constexpr std::span<const Slot> input_slots(OperatorKind k) {
  switch (k) {
    case OperatorKind::Copy:
    case OperatorKind::Not:
      return detail::kInA;
    case OperatorKind::DMerge:
      return detail::kInABCtl;
    case OperatorKind::Branch:
      return detail::kInACtl;
    default:
      return detail::kInAB;
  }
}

// Output slots in statement argument order.
constexpr std::span<const Slot> output_slots(OperatorKind k) {
  switch (k) {
    case OperatorKind::Copy:
      return detail::kOutZ1Z2;
    case OperatorKind::Branch:
      return detail::kOutTF;
    default:
      return detail::kOutZ;
  }
}

constexpr std::size_t port_count(OperatorKind k) {
  return input_slots(k).size() + output_slots(k).size();
}

constexpr bool is_input_slot(Slot s) {
  return s == Slot::A || s == Slot::B || s == Slot::Ctl;
}

// Position of `s` among the kind's inputs (or outputs); nullopt when the slot
// is not legal for the kind.
constexpr std::optional<std::size_t> slot_index(OperatorKind k, Slot s) {
  const auto slots = is_input_slot(s) ? input_slots(k) : output_slots(k);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] == s) return i;
  }
  return std::nullopt;
}

constexpr std::string_view slot_name(Slot s) {
  switch (s) {
    case Slot::A: return "a";
    case Slot::B: return "b";
    case Slot::Ctl: return "ctl";
    case Slot::Z: return "z";
    case Slot::T: return "t";
    case Slot::F: return "f";
    case Slot::Z1: return "z1";
    case Slot::Z2: return "z2";
  }
  return "?";
}

// Assembler mnemonic. Relational kinds use the decider spelling.
constexpr std::string_view mnemonic(OperatorKind k) {
  switch (k) {
    case OperatorKind::Copy: return "copy";
    case OperatorKind::Add: return "add";
    case OperatorKind::Sub: return "sub";
    case OperatorKind::Mul: return "mul";
    case OperatorKind::Div: return "div";
    case OperatorKind::And: return "and";
    case OperatorKind::Or: return "or";
    case OperatorKind::Not: return "not";
    case OperatorKind::IfGt: return "gtdecider";
    case OperatorKind::IfGe: return "gedecider";
    case OperatorKind::IfLt: return "ltdecider";
    case OperatorKind::IfLe: return "ledecider";
    case OperatorKind::IfEq: return "eqdecider";
    case OperatorKind::IfDf: return "dfdecider";
    case OperatorKind::DMerge: return "dmerge";
    case OperatorKind::NDMerge: return "ndmerge";
    case OperatorKind::Branch: return "branch";
  }
  return "?";
}

constexpr std::optional<OperatorKind> kind_from_mnemonic(std::string_view m) {
  for (auto k : kAllOperatorKinds) {
    if (mnemonic(k) == m) return k;
  }
  return std::nullopt;
}

// The three hardware operator architectures every kind is mapped onto.
enum class ComponentShape { TwoInOneOut, ThreeInOneOut, TwoInTwoOut };

constexpr ComponentShape component_shape(OperatorKind k) {
  switch (k) {
    case OperatorKind::DMerge:
      return ComponentShape::ThreeInOneOut;
    case OperatorKind::Branch:
    case OperatorKind::Copy:
      return ComponentShape::TwoInTwoOut;
    default:
      return ComponentShape::TwoInOneOut;
  }
}

}  // namespace statflow
