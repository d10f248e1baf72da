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

// The six benchmark programs, each with a manifest template, a scalar
// reference oracle and a harness that checks simulator output against it.
//
// Conventions shared by every program:
//  * A vector of length k is k tokens streamed on one input port.
//  * The machine has no constant operator, so a constant needed once per
//    loop iteration is supplied as a stream of repeated tokens.
//  * Loops are counted: a counter compares i+1 with the length and the
//    resulting 0/1 token steers the branches that either recirculate the
//    loop-carried values or release the result.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "statflow/dfasm.hpp"
#include "statflow/engine.hpp"
#include "statflow/manifest.hpp"
#include "statflow/semantics.hpp"

namespace statflow::bench {

inline constexpr std::size_t kMaxVectorLength = 16;
inline constexpr std::size_t kBubbleStages = 16;

// ---------------------------------------------------------------------------
// Programs

// The Fibonacci graph; statements carry `N.` numbers.
inline constexpr std::string_view kFibonacciSource = R"(1.ndmerge s7,dadob,s1;
2.dmerge s2,dadoc,s1,s3;
3.ndmerge dadod,s11,s2;
4.gtdecider dadoa,s4,s5;
5.copy s3,s4,s9;
6.copy s5,s6,s8;
7.branch s9,s8,s10,pf;
8.copy s6,s7,s12;
9.add s10,dadoe,s11;
10.ndmerge s17,dadof,s13;
11.ndmerge dadog,s25,s14;
12.ndmerge dadoi,s22,s23;
13.ndmerge dadoj,s19,s21;
14.copy s18,s19,s20;
15.dmerge s23,dadoh,s12,s24;
16.dmerge s20,s21,s26,s22;
17.copy s24,s25,s26;
18.add s13,s14,s15;
19.copy s15,s16,s18;
20.copy s16,s17,fibo;
)";

inline constexpr std::string_view kVectorSumSource = R"(-- vector_sum: sum of a stream of len tokens on x
-- loop counter, one turn per element
ndmerge i0,inext,i;
add i,one,ip1;
copy ip1,ipa,ipb;
ltdecider ipa,len,more;
copy more,more_i,more_s;
branch ipb,more_i,inext,count;
-- accumulator
ndmerge acc0,accback,acc;
add acc,x,s;
branch s,more_s,accback,sum;
)";

inline constexpr std::string_view kDotProdSource = R"(-- dot_prod: sum of x[i]*y[i] over two streams of len tokens
-- loop counter, one turn per element
ndmerge i0,inext,i;
add i,one,ip1;
copy ip1,ipa,ipb;
ltdecider ipa,len,more;
copy more,more_i,more_s;
branch ipb,more_i,inext,count;
-- multiply-accumulate
mul x,y,p;
ndmerge acc0,accback,acc;
add acc,p,s;
branch s,more_s,accback,dot;
)";

inline constexpr std::string_view kMaxVectorSource = R"(-- max_vector: largest of a stream of len tokens on x
-- loop counter, one turn per element
ndmerge i0,inext,i;
add i,one,ip1;
copy ip1,ipa,ipb;
ltdecider ipa,len,more;
copy more,more_i,more_m;
branch ipb,more_i,inext,count;
-- running maximum, seeded with the most negative word
ndmerge m0,mback,m;
copy m,m_cmp,m_sel;
copy x,x_cmp,x_sel;
gtdecider x_cmp,m_cmp,bigger;
dmerge x_sel,m_sel,bigger,mnext;
branch mnext,more_m,mback,max;
)";

inline constexpr std::string_view kPopCountSource = R"(-- pop_count: number of set bits in a word
-- a one-hot mask walks 1, 2, 4, ... until doubling wraps it to zero; the
-- word and the zero constants arrive once per bit position
ndmerge mask0,maskback,mask;
copy mask,mask_and,mask_t;
copy mask_t,mask_l,mask_r;
and word,mask_and,bits;
dfdecider bits,zero,bit;
add mask_l,mask_r,mask2;
copy mask2,mask2_c,mask2_d;
dfdecider mask2_c,zero2,more;
copy more,more_m,more_c;
branch mask2_d,more_m,maskback,maskdone;
-- counter
ndmerge cnt0,cntback,cnt;
add cnt,bit,cnt1;
branch cnt1,more_c,cntback,popcount;
)";

// Bubble sort as a pipeline of streamed bubble passes. Each pass keeps a
// carry (seeded with the most negative word): for every incoming x it emits
// min(carry, x) and keeps max(carry, x). The input is padded with one
// most-positive word per pass, which pushes the real data out of every
// carry; each pass therefore prepends one seed and swallows one pad. A final
// filter drops the seeds.
inline std::string bubble_sort_source(std::size_t stages = kBubbleStages) {
  std::ostringstream os;
  os << "-- bubble_sort: " << stages << " streamed bubble passes over x\n";
  for (std::size_t s = 1; s <= stages; ++s) {
    const std::string in = s == 1 ? "x" : "v" + std::to_string(s - 1);
    const std::string c = "c" + std::to_string(s);
    const std::string x = "x" + std::to_string(s);
    const std::string g = "g" + std::to_string(s);
    os << "-- pass " << s << "\n";
    os << "ndmerge seed" << s << "," << c << "_back," << c << ";\n";
    os << "copy " << c << "," << c << "_cmp," << c << "_t;\n";
    os << "copy " << c << "_t," << c << "_lo," << c << "_hi;\n";
    os << "copy " << in << "," << x << "_cmp," << x << "_t;\n";
    os << "copy " << x << "_t," << x << "_lo," << x << "_hi;\n";
    os << "gtdecider " << x << "_cmp," << c << "_cmp," << g << ";\n";
    os << "copy " << g << "," << g << "_lo," << g << "_hi;\n";
    os << "dmerge " << c << "_lo," << x << "_lo," << g << "_lo,v" << s << ";\n";
    os << "dmerge " << x << "_hi," << c << "_hi," << g << "_hi," << c << "_back;\n";
  }
  os << "-- drop the seeds\n";
  os << "copy v" << stages << ",out_cmp,out_t;\n";
  os << "gtdecider out_cmp,floor,keep;\n";
  os << "branch out_t,keep,sorted,pad;\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Inputs, oracles, manifests

// Scalar benchmarks use `n`; vector benchmarks use `x` (and `y`).
struct BenchInput {
  std::int64_t n = 0;
  std::vector<std::int64_t> x;
  std::vector<std::int64_t> y;

  friend bool operator==(const BenchInput&, const BenchInput&) = default;
};

namespace oracle {

// Reference loop, bound inclusive:
//   first <- 0; second <- 1; tmp <- 0
//   for i = 0 to n: tmp <- first + second; first <- second; second <- tmp
inline Word fibonacci(std::int64_t n, Width w) {
  Word first = 0, second = 1, tmp = 0;
  for (std::int64_t i = 0; i <= n; ++i) {
    tmp = w.wrap(std::int64_t{first} + std::int64_t{second});
    first = second;
    second = tmp;
  }
  return tmp;
}

inline Word max_vector(const std::vector<std::int64_t>& x, Width w) {
  return w.wrap(*std::max_element(x.begin(), x.end()));
}

inline Word vector_sum(const std::vector<std::int64_t>& x, Width w) {
  std::int64_t acc = 0;
  for (auto v : x) acc = w.to_signed(w.wrap(acc + v));
  return w.wrap(acc);
}

inline Word dot_prod(const std::vector<std::int64_t>& x,
                     const std::vector<std::int64_t>& y, Width w) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc = w.to_signed(w.wrap(acc + x[i] * y[i]));
  }
  return w.wrap(acc);
}

inline std::vector<Word> bubble_sort(std::vector<std::int64_t> x, Width w) {
  for (std::size_t pass = 0; pass + 1 < x.size(); ++pass) {
    for (std::size_t i = 0; i + 1 < x.size() - pass; ++i) {
      if (x[i] > x[i + 1]) std::swap(x[i], x[i + 1]);
    }
  }
  std::vector<Word> out;
  for (auto v : x) out.push_back(w.wrap(v));
  return out;
}

inline Word pop_count(std::int64_t n, Width w) {
  return static_cast<Word>(std::popcount(w.wrap(n)));
}

}  // namespace oracle

struct Benchmark {
  std::string_view name;
  bool vector_input;
  std::string (*source)();
  Manifest (*manifest)(const BenchInput&, Width);
  std::vector<Word> (*oracle)(const BenchInput&, Width);
  // Result port and how many of its tokens form the result (from the end).
  std::string_view result_port;
  std::size_t (*result_count)(const BenchInput&);
  BenchInput example;
};

namespace detail {

inline std::vector<std::int64_t> repeat(std::int64_t v, std::size_t n) {
  return std::vector<std::int64_t>(n, v);
}

inline void check_vector(const std::vector<std::int64_t>& x, Width w,
                         std::string_view what) {
  if (x.empty() || x.size() > kMaxVectorLength) {
    throw std::invalid_argument(std::string(what) + " length must be 1..16");
  }
  for (auto v : x) {
    if (v < w.min_signed() || v > w.max_signed()) {
      throw std::invalid_argument(std::string(what) + " value " + std::to_string(v) +
                                  " does not fit the signed bus width");
    }
  }
}

// Counted-loop plumbing shared by the vector programs.
inline void counted_loop(Manifest& m, std::size_t k) {
  m.inputs["i0"] = {0};
  m.inputs["one"] = repeat(1, k);
  m.inputs["len"] = repeat(static_cast<std::int64_t>(k), k);
}

inline Manifest fibonacci_manifest(const BenchInput& in, Width w) {
  if (in.n < 0 || in.n > w.max_signed() - 1) {
    throw std::invalid_argument("fibonacci: n must be in 0.." +
                                std::to_string(w.max_signed() - 1));
  }
  const auto n = static_cast<std::size_t>(in.n);
  Manifest m;
  m.width = w.bits();
  // dadoa: loop bound, read by the decider on every turn (n+1 tests).
  m.inputs["dadoa"] = repeat(in.n, n + 1);
  // dadob/dadoc: first control token selects the initial index from dadoc;
  // dmerge_2 reads dadoc on every turn.
  m.inputs["dadob"] = {0};
  m.inputs["dadoc"] = repeat(0, n + 1);
  m.inputs["dadod"] = {0};
  // dadoe: index increment, once per taken turn.
  m.inputs["dadoe"] = repeat(1, n);
  // dadof/dadog: first and second; dadoh: read by dmerge_15 on every turn.
  m.inputs["dadof"] = {0};
  m.inputs["dadog"] = {1};
  m.inputs["dadoh"] = repeat(0, n + 1);
  m.inputs["dadoi"] = {1};
  m.inputs["dadoj"] = {0};
  m.results["fibo"] = n + 2;
  m.results["pf"] = 1;
  return m;
}

inline Manifest vector_sum_manifest(const BenchInput& in, Width w) {
  check_vector(in.x, w, "vector_sum: x");
  Manifest m;
  m.width = w.bits();
  counted_loop(m, in.x.size());
  m.inputs["acc0"] = {0};
  m.inputs["x"] = in.x;
  m.results["sum"] = 1;
  return m;
}

inline Manifest dot_prod_manifest(const BenchInput& in, Width w) {
  check_vector(in.x, w, "dot_prod: x");
  check_vector(in.y, w, "dot_prod: y");
  if (in.x.size() != in.y.size()) {
    throw std::invalid_argument("dot_prod: x and y differ in length");
  }
  Manifest m;
  m.width = w.bits();
  counted_loop(m, in.x.size());
  m.inputs["acc0"] = {0};
  m.inputs["x"] = in.x;
  m.inputs["y"] = in.y;
  m.results["dot"] = 1;
  return m;
}

inline Manifest max_vector_manifest(const BenchInput& in, Width w) {
  check_vector(in.x, w, "max_vector: x");
  Manifest m;
  m.width = w.bits();
  counted_loop(m, in.x.size());
  m.inputs["m0"] = {w.min_signed()};
  m.inputs["x"] = in.x;
  m.results["max"] = 1;
  return m;
}

inline Manifest pop_count_manifest(const BenchInput& in, Width w) {
  if (in.n < w.min_signed() || in.n > w.max_unsigned()) {
    throw std::invalid_argument("pop_count: word does not fit the bus width");
  }
  Manifest m;
  m.width = w.bits();
  m.inputs["mask0"] = {1};
  m.inputs["word"] = repeat(in.n, w.bits());
  m.inputs["zero"] = repeat(0, w.bits());
  m.inputs["zero2"] = repeat(0, w.bits());
  m.inputs["cnt0"] = {0};
  m.results["popcount"] = 1;
  return m;
}

inline Manifest bubble_sort_manifest(const BenchInput& in, Width w) {
  check_vector(in.x, w, "bubble_sort: x");
  for (auto v : in.x) {
    if (v == w.min_signed()) {
      throw std::invalid_argument("bubble_sort: the most negative word is reserved");
    }
  }
  const std::size_t k = in.x.size();
  Manifest m;
  m.width = w.bits();
  auto x = in.x;
  x.insert(x.end(), kBubbleStages, w.max_signed());
  m.inputs["x"] = x;
  for (std::size_t s = 1; s <= kBubbleStages; ++s) {
    m.inputs["seed" + std::to_string(s)] = {w.min_signed()};
  }
  m.inputs["floor"] = repeat(w.min_signed(), k + kBubbleStages);
  m.results["sorted"] = k;
  return m;
}

inline std::size_t one_result(const BenchInput&) { return 1; }

}  // namespace detail

inline const std::vector<Benchmark>& registry() {
  static const std::vector<Benchmark> kAll = {
      {"fibonacci", false, [] { return std::string(kFibonacciSource); },
       detail::fibonacci_manifest,
       [](const BenchInput& in, Width w) {
         return std::vector<Word>{oracle::fibonacci(in.n, w)};
       },
       "fibo", detail::one_result, BenchInput{10, {}, {}}},
      {"max_vector", true, [] { return std::string(kMaxVectorSource); },
       detail::max_vector_manifest,
       [](const BenchInput& in, Width w) {
         return std::vector<Word>{oracle::max_vector(in.x, w)};
       },
       "max", detail::one_result, BenchInput{0, {3, 1, 2}, {}}},
      {"dot_prod", true, [] { return std::string(kDotProdSource); },
       detail::dot_prod_manifest,
       [](const BenchInput& in, Width w) {
         return std::vector<Word>{oracle::dot_prod(in.x, in.y, w)};
       },
       "dot", detail::one_result, BenchInput{0, {1, 2, 3}, {4, 5, 6}}},
      {"vector_sum", true, [] { return std::string(kVectorSumSource); },
       detail::vector_sum_manifest,
       [](const BenchInput& in, Width w) {
         return std::vector<Word>{oracle::vector_sum(in.x, w)};
       },
       "sum", detail::one_result, BenchInput{0, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {}}},
      {"bubble_sort", true, [] { return bubble_sort_source(); },
       detail::bubble_sort_manifest,
       [](const BenchInput& in, Width w) { return oracle::bubble_sort(in.x, w); },
       "sorted", [](const BenchInput& in) { return in.x.size(); },
       BenchInput{0, {5, 1, 4, 2}, {}}},
      {"pop_count", false, [] { return std::string(kPopCountSource); },
       detail::pop_count_manifest,
       [](const BenchInput& in, Width w) {
         return std::vector<Word>{oracle::pop_count(in.n, w)};
       },
       "popcount", detail::one_result, BenchInput{0x00FF, {}, {}}},
  };
  return kAll;
}

inline const Benchmark* find(std::string_view name) {
  for (const auto& b : registry()) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

inline const Benchmark& get(std::string_view name) {
  if (const Benchmark* b = find(name)) return *b;
  throw std::invalid_argument("unknown benchmark '" + std::string(name) + "'");
}

inline std::vector<Word> oracle_values(std::string_view name, const BenchInput& in,
                                       Width w = Width{16}) {
  const Benchmark& b = get(name);
  b.manifest(in, w);  // rejects inadmissible inputs
  return b.oracle(in, w);
}

// Random admissible input: vectors of length 1..16 with values in
// [-100, 100]; fibonacci n in [0, 100]; pop_count words in [-100, 100].
// Draws use plain modulo on mt19937_64 so sequences are identical across
// standard libraries.
inline BenchInput random_input(std::string_view name, std::mt19937_64& rng) {
  auto draw = [&](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  const Benchmark& b = get(name);
  BenchInput in;
  if (name == "fibonacci") {
    in.n = draw(0, 100);
  } else if (!b.vector_input) {
    in.n = draw(-100, 100);
  } else {
    const auto k = static_cast<std::size_t>(draw(1, kMaxVectorLength));
    for (std::size_t i = 0; i < k; ++i) in.x.push_back(draw(-100, 100));
    if (name == "dot_prod") {
      for (std::size_t i = 0; i < k; ++i) in.y.push_back(draw(-100, 100));
    }
  }
  return in;
}

// ---------------------------------------------------------------------------
// Harness

struct BenchReport {
  std::string name;
  BenchInput input;
  std::vector<Word> outputs;
  std::vector<Word> oracle;
  bool match = false;
  Termination terminated = Termination::Deadlock;
  std::uint64_t ticks = 0;
  std::uint64_t fires = 0;
  std::map<std::string, std::uint64_t> fire_counts;
};

struct BenchOptions {
  Width width{16};
  std::uint64_t max_ticks = kDefaultMaxTicks;
  bool record_trace = false;
};

struct BenchRun {
  BenchReport report;
  SimResult sim;
  std::string trace_jsonl;  // empty unless traced
};

inline BenchRun run_benchmark_full(std::string_view name, const BenchInput& in,
                                   const BenchOptions& opts = {}) {
  const Benchmark& b = get(name);
  Manifest m = b.manifest(in, opts.width);
  m.max_ticks = opts.max_ticks;
  const Program program(bind_manifest(parse_program(b.source()), m));
  RunOutcome outcome = run(program, RunOptions{opts.record_trace});

  BenchRun r;
  BenchReport& rep = r.report;
  rep.name = std::string(b.name);
  rep.input = in;
  rep.oracle = b.oracle(in, opts.width);
  rep.terminated = outcome.result.terminated;
  rep.ticks = outcome.result.ticks_elapsed;
  rep.fire_counts = outcome.result.fire_counts;
  for (const auto& [_, c] : rep.fire_counts) rep.fires += c;
  const auto& port = outcome.result.outputs.at(std::string(b.result_port));
  const std::size_t want = b.result_count(in);
  if (outcome.result.terminated == Termination::Completed && port.size() >= want) {
    rep.outputs.assign(port.end() - static_cast<std::ptrdiff_t>(want), port.end());
  } else {
    rep.outputs = port;
  }
  rep.match = rep.terminated == Termination::Completed && rep.outputs == rep.oracle;
  if (opts.record_trace) {
    std::ostringstream os;
    write_trace_jsonl(os, program, outcome.trace);
    r.trace_jsonl = os.str();
  }
  r.sim = std::move(outcome.result);
  return r;
}

inline BenchReport run_benchmark(std::string_view name, const BenchInput& in,
                                 const BenchOptions& opts = {}) {
  return run_benchmark_full(name, in, opts).report;
}

inline nlohmann::ordered_json to_json(const BenchInput& in, bool vector_input) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  if (!vector_input) {
    j["n"] = in.n;
  } else {
    j["x"] = in.x;
    if (!in.y.empty()) j["y"] = in.y;
  }
  return j;
}

inline nlohmann::ordered_json to_json(const BenchReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["input"] = to_json(r.input, get(r.name).vector_input);
  j["outputs"] = r.outputs;
  j["oracle"] = r.oracle;
  j["match"] = r.match;
  j["terminated"] = termination_name(r.terminated);
  j["ticks"] = r.ticks;
  j["fires"] = r.fires;
  j["fire_counts"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.fire_counts) j["fire_counts"][k] = v;
  return j;
}

}  // namespace statflow::bench
