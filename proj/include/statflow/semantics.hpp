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

// Value-level behaviour of every operator kind. Everything here is pure; the
// engine calls into it from the execute state of each operator FSM.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "statflow/operator_kind.hpp"

namespace statflow {

// Raw bus contents. Only the low `Width::bits` bits are ever set.
using Word = std::uint32_t;

// Data-bus width in bits, 1..32.
class Width {
 public:
  static constexpr unsigned kMax = 32;

  constexpr Width() = default;
  constexpr explicit Width(unsigned bits) : bits_(bits) {
    if (bits == 0 || bits > kMax) {
      throw std::out_of_range("bus width must be in 1..32, got " +
                              std::to_string(bits));
    }
  }

  constexpr unsigned bits() const { return bits_; }
  constexpr Word mask() const {
    return bits_ == 32 ? ~Word{0} : (Word{1} << bits_) - 1;
  }
  constexpr Word wrap(std::int64_t v) const {
    return static_cast<Word>(static_cast<std::uint64_t>(v)) & mask();
  }
  constexpr std::int64_t to_signed(Word w) const {
    w &= mask();
    const std::uint64_t sign = std::uint64_t{1} << (bits_ - 1);
    return (w & sign) ? static_cast<std::int64_t>(w) - static_cast<std::int64_t>(sign << 1)
                      : static_cast<std::int64_t>(w);
  }
  constexpr std::int64_t min_signed() const {
    return -(std::int64_t{1} << (bits_ - 1));
  }
  constexpr std::int64_t max_signed() const {
    return (std::int64_t{1} << (bits_ - 1)) - 1;
  }
  constexpr std::int64_t max_unsigned() const {
    return static_cast<std::int64_t>(mask());
  }

  friend constexpr bool operator==(Width, Width) = default;

 private:
  unsigned bits_ = 16;
};

// Control tokens are true when nonzero. Deciders only ever produce 0 or 1,
// but a data value may steer a Branch/DMerge directly.
constexpr bool is_true(Word w) { return w != 0; }

struct PrimitiveResult {
  Word value = 0;
  bool div_by_zero = false;
};

// Two-input primitives: Add/Sub/Mul wrap modulo 2^width, Div truncates toward
// zero on the signed reading (x/0 yields 0 and flags it), And/Or are bitwise,
// deciders compare signed and return 0/1 (IfDf is "not equal").
constexpr PrimitiveResult eval_primitive(OperatorKind kind, Word a, Word b,
                                         Width w) {
  const std::int64_t sa = w.to_signed(a);
  const std::int64_t sb = w.to_signed(b);
  switch (kind) {
    case OperatorKind::Add:
      return {w.wrap(std::int64_t{a} + std::int64_t{b})};
    case OperatorKind::Sub:
      return {w.wrap(std::int64_t{a} - std::int64_t{b})};
    case OperatorKind::Mul:
      return {static_cast<Word>((std::uint64_t{a} * std::uint64_t{b}) & w.mask())};
    case OperatorKind::Div:
      if (sb == 0) return {0, true};
      return {w.wrap(sa / sb)};
    case OperatorKind::And:
      return {(a & b) & w.mask()};
    case OperatorKind::Or:
      return {(a | b) & w.mask()};
    case OperatorKind::IfGt:
      return {Word{sa > sb}};
    case OperatorKind::IfGe:
      return {Word{sa >= sb}};
    case OperatorKind::IfLt:
      return {Word{sa < sb}};
    case OperatorKind::IfLe:
      return {Word{sa <= sb}};
    case OperatorKind::IfEq:
      return {Word{(a & w.mask()) == (b & w.mask())}};
    case OperatorKind::IfDf:
      return {Word{(a & w.mask()) != (b & w.mask())}};
    default:
      throw std::invalid_argument("eval_primitive: not a two-input primitive: " +
                                  std::string(mnemonic(kind)));
  }
}

constexpr Word eval_not(Word a, Width w) { return ~a & w.mask(); }

constexpr std::pair<Word, Word> eval_copy(Word a) { return {a, a}; }

// Controlled merge: ctl true forwards a, false forwards b.
constexpr Word eval_dmerge(Word a, Word b, Word ctl) {
  return is_true(ctl) ? a : b;
}

struct Arrival {
  Word value = 0;
  std::uint64_t tick = 0;
};

struct Routed {
  Slot port = Slot::Z;
  Word value = 0;
};

// Uncontrolled merge: the earlier arrival wins; a simultaneous arrival goes
// to port a. At least one input must be present.
constexpr Routed eval_ndmerge(std::optional<Arrival> a,
                              std::optional<Arrival> b) {
  if (!a && !b) throw std::invalid_argument("eval_ndmerge: no input latched");
  if (a && (!b || a->tick <= b->tick)) return {Slot::A, a->value};
  return {Slot::B, b->value};
}

// Routes `a` to t when ctl is true, otherwise to f.
constexpr Routed eval_branch(Word a, Word ctl) {
  return {is_true(ctl) ? Slot::T : Slot::F, a};
}

}  // namespace statflow
