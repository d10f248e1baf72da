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

// statflow: assemble, validate, simulate, benchmark and emit dataflow graphs.
//
// Exit codes: 0 success (run completed, graph valid, all benchmarks match),
// 1 usage/parse/validation error, 2 deadlock, 3 budget exhausted,
// 4 benchmark mismatch. Machine-readable output goes to stdout, diagnostics
// and tables to stderr.

#include <cstdint>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "statflow/statflow.hpp"

namespace {

using namespace statflow;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitDeadlock = 2;
constexpr int kExitBudget = 3;
constexpr int kExitMismatch = 4;

// Thrown for anything that should end the process with exit code 1 after a
// one-line diagnostic.
struct Failure {
  std::string message;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{"cannot open '" + path + "'"};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{"cannot write '" + path + "'"};
  out << text;
}

DataflowGraph load_program(const std::string& path) {
  const std::string source = slurp(path);
  try {
    return parse_program(source);
  } catch (const ParseError& e) {
    throw Failure{path + ": " + e.what()};
  }
}

// Prints every diagnostic; true when the graph is valid.
bool report_diagnostics(const std::string& path, const DataflowGraph& g) {
  const ValidationReport rep = validate_graph(g);
  for (const Diagnostic& d : rep.diagnostics) {
    std::cerr << path << ": error: " << d.message << "\n";
  }
  return rep.ok();
}

int exit_code_for(Termination t) {
  switch (t) {
    case Termination::Completed: return kExitOk;
    case Termination::Deadlock: return kExitDeadlock;
    case Termination::BudgetExhausted: return kExitBudget;
  }
  return kExitError;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateArgs {
  std::string program;
};

int cmd_validate(const ValidateArgs& a) {
  const DataflowGraph g = load_program(a.program);
  const bool ok = report_diagnostics(a.program, g);
  const GraphStats st = graph_stats(g);
  nlohmann::ordered_json j;
  j["valid"] = ok;
  j["nodes"] = st.node_count;
  j["arcs"] = st.arc_count;
  j["internal_arcs"] = st.internal_arc_count();
  j["histogram"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : st.histogram) j["histogram"][std::string(mnemonic(k))] = v;
  j["inputs"] = st.inputs;
  j["outputs"] = st.outputs;
  std::cout << j.dump(2) << "\n";
  return ok ? kExitOk : kExitError;
}

// ---------------------------------------------------------------------------
// print

struct PrintArgs {
  std::string program;
  bool numbered = false;
};

int cmd_print(const PrintArgs& a) {
  std::cout << print_program(load_program(a.program), a.numbered);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// run / trace

struct RunArgs {
  std::string program;
  std::string manifest;
  std::optional<unsigned> width;
  std::optional<std::uint64_t> max_ticks;
  std::string trace_file;  // run: optional JSONL side file; trace: output
};

Program load_bound(const RunArgs& a) {
  DataflowGraph g = load_program(a.program);
  if (!report_diagnostics(a.program, g)) throw Failure{a.program + ": invalid graph"};
  Manifest m;
  try {
    m = parse_manifest(slurp(a.manifest));
    if (a.width) m.width = *a.width;
    if (a.max_ticks) m.max_ticks = *a.max_ticks;
    return Program(bind_manifest(std::move(g), m));
  } catch (const ManifestError& e) {
    throw Failure{a.manifest + ": " + e.what()};
  }
}

int cmd_run(const RunArgs& a) {
  const Program p = load_bound(a);
  const RunOutcome out = run(p, RunOptions{!a.trace_file.empty()});
  if (!a.trace_file.empty()) {
    std::ofstream os(a.trace_file, std::ios::binary);
    if (!os) throw Failure{"cannot write '" + a.trace_file + "'"};
    write_trace_jsonl(os, p, out.trace);
  }
  if (out.result.div_by_zero) std::cerr << "warning: division by zero\n";
  if (out.result.terminated != Termination::Completed) {
    std::cerr << "simulation ended: " << termination_name(out.result.terminated)
              << " after " << out.result.ticks_elapsed << " ticks\n";
  }
  std::cout << to_json(out.result).dump(2) << "\n";
  return exit_code_for(out.result.terminated);
}

int cmd_trace(const RunArgs& a) {
  const Program p = load_bound(a);
  const RunOutcome out = run(p, RunOptions{true});
  if (a.trace_file.empty()) {
    write_trace_jsonl(std::cout, p, out.trace);
  } else {
    std::ofstream os(a.trace_file, std::ios::binary);
    if (!os) throw Failure{"cannot write '" + a.trace_file + "'"};
    write_trace_jsonl(os, p, out.trace);
  }
  std::cerr << termination_name(out.result.terminated) << " after "
            << out.result.ticks_elapsed << " ticks, " << out.trace.size() << " events\n";
  return exit_code_for(out.result.terminated);
}

// ---------------------------------------------------------------------------
// emit

struct EmitArgs {
  std::string program;
  unsigned width = kDefaultWidth;
  std::string entity = "dataflow_top";
  std::string out;
};

int cmd_emit(const EmitArgs& a) {
  const DataflowGraph g = load_program(a.program);
  if (!report_diagnostics(a.program, g)) throw Failure{a.program + ": invalid graph"};
  EmitOptions opts;
  opts.width = Width(a.width);
  opts.entity = a.entity;
  std::string vhdl;
  try {
    vhdl = emit_netlist(g, opts);
  } catch (const std::invalid_argument& e) {
    throw Failure{e.what()};
  }
  if (a.out.empty()) {
    std::cout << vhdl;
  } else {
    spill(a.out, vhdl);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string name;
  std::optional<std::int64_t> n;
  std::vector<std::int64_t> x;
  std::vector<std::int64_t> y;
  std::optional<std::uint64_t> seed;
  unsigned width = kDefaultWidth;
  std::uint64_t max_ticks = kDefaultMaxTicks;
  std::string trace_file;
};

std::string words(const std::vector<Word>& v, std::size_t limit = 6) {
  std::string s;
  for (std::size_t i = 0; i < v.size() && i < limit; ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  if (v.size() > limit) s += ",...";
  return s;
}

std::string describe(const bench::Benchmark& b, const bench::BenchInput& in) {
  if (!b.vector_input) return "n=" + std::to_string(in.n);
  std::string s = "x=[";
  for (std::size_t i = 0; i < in.x.size() && i < 4; ++i) {
    if (i) s += ",";
    s += std::to_string(in.x[i]);
  }
  if (in.x.size() > 4) s += ",..";
  s += "]";
  if (!in.y.empty()) s += " y";
  s += " #" + std::to_string(in.x.size());
  return s.size() > 25 ? s.substr(0, 22) + "..." : s;
}

void print_table(const std::vector<bench::BenchReport>& reports) {
  std::ostream& os = std::cerr;
  os << std::left << std::setw(12) << "benchmark" << std::setw(26) << "input"
     << std::setw(18) << "result" << std::setw(18) << "oracle" << std::setw(7) << "match"
     << std::right << std::setw(9) << "ticks" << std::setw(9) << "fires" << "  status\n";
  for (const auto& r : reports) {
    const auto& b = bench::get(r.name);
    os << std::left << std::setw(12) << r.name << std::setw(26) << describe(b, r.input)
       << std::setw(18) << words(r.outputs) << std::setw(18) << words(r.oracle)
       << std::setw(7) << (r.match ? "yes" : "NO") << std::right << std::setw(9) << r.ticks
       << std::setw(9) << r.fires << "  " << termination_name(r.terminated) << "\n";
  }
}

int cmd_bench(const BenchArgs& a) {
  std::vector<const bench::Benchmark*> chosen;
  if (a.name == "all") {
    for (const auto& b : bench::registry()) chosen.push_back(&b);
    if (a.n || !a.x.empty() || !a.y.empty()) {
      throw Failure{"--n/--x/--y need a single benchmark name"};
    }
    if (!a.trace_file.empty()) throw Failure{"--trace needs a single benchmark name"};
  } else {
    const bench::Benchmark* b = bench::find(a.name);
    if (!b) {
      std::string known;
      for (const auto& r : bench::registry()) known += " " + std::string(r.name);
      throw Failure{"unknown benchmark '" + a.name + "' (known:" + known + ", all)"};
    }
    chosen.push_back(b);
  }

  bench::BenchOptions opts;
  opts.width = Width(a.width);
  opts.max_ticks = a.max_ticks;
  opts.record_trace = !a.trace_file.empty();

  // Inputs are drawn up front, in registry order, so a seed reproduces the
  // same inputs regardless of how the runs are scheduled.
  std::optional<std::mt19937_64> rng;
  if (a.seed) rng.emplace(*a.seed);
  std::vector<bench::BenchInput> inputs;
  for (const auto* b : chosen) {
    bench::BenchInput in = rng ? bench::random_input(b->name, *rng) : b->example;
    if (a.n) in.n = *a.n;
    if (!a.x.empty()) in.x = a.x;
    if (!a.y.empty()) in.y = a.y;
    inputs.push_back(std::move(in));
  }

  std::vector<std::future<bench::BenchRun>> jobs;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      return bench::run_benchmark_full(chosen[i]->name, inputs[i], opts);
    }));
  }
  std::vector<bench::BenchReport> reports;
  bool all_match = true;
  std::string first_error;
  for (auto& job : jobs) {
    try {
      bench::BenchRun r = job.get();
      if (!a.trace_file.empty()) spill(a.trace_file, r.trace_jsonl);
      all_match = all_match && r.report.match;
      reports.push_back(std::move(r.report));
    } catch (const std::exception& e) {
      if (first_error.empty()) first_error = e.what();
    }
  }
  if (!first_error.empty()) throw Failure{first_error};

  print_table(reports);
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : reports) j.push_back(bench::to_json(r));
  std::cout << j.dump(2) << "\n";
  return all_match ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"statflow: static dataflow graph toolchain"};
  app.require_subcommand(1);

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "check well-formedness and print graph statistics");
  validate->add_option("program", va.program, "dfasm source")->required();

  PrintArgs pa;
  auto* print = app.add_subcommand("print", "print the program in canonical form");
  print->add_option("program", pa.program, "dfasm source")->required();
  print->add_flag("--numbered", pa.numbered, "prefix statements with line numbers");

  RunArgs ra;
  auto* runc = app.add_subcommand("run", "simulate a program and print the result as JSON");
  auto* tracec = app.add_subcommand("trace", "simulate a program and print the JSONL trace");
  for (auto* sc : {runc, tracec}) {
    sc->add_option("program", ra.program, "dfasm source")->required();
    sc->add_option("manifest", ra.manifest, "JSON run manifest")->required();
    sc->add_option("--width", ra.width, "override the manifest bus width")
        ->check(CLI::Range(1u, Width::kMax));
    sc->add_option("--max-ticks", ra.max_ticks, "override the manifest tick budget")
        ->check(CLI::PositiveNumber);
  }
  runc->add_option("--trace", ra.trace_file, "also write the JSONL trace to FILE");
  tracec->add_option("--out", ra.trace_file, "write the trace to FILE instead of stdout");

  EmitArgs ea;
  auto* emit = app.add_subcommand("emit", "emit a structural VHDL netlist");
  emit->add_option("program", ea.program, "dfasm source")->required();
  emit->add_option("--width", ea.width, "bus width")->check(CLI::Range(1u, Width::kMax));
  emit->add_option("--entity", ea.entity, "top-level entity name");
  emit->add_option("--out", ea.out, "write to FILE instead of stdout");

  BenchArgs ba;
  auto* benchc = app.add_subcommand("bench", "run benchmarks against their reference results");
  benchc->add_option("name", ba.name, "benchmark name or 'all'")->required();
  benchc->add_option("--n", ba.n, "scalar input (fibonacci, pop_count)");
  benchc->add_option("--x", ba.x, "vector input, comma separated")->delimiter(',');
  benchc->add_option("--y", ba.y, "second vector (dot_prod), comma separated")->delimiter(',');
  benchc->add_option("--seed", ba.seed, "draw a random admissible input from SEED");
  benchc->add_option("--width", ba.width, "bus width")->check(CLI::Range(1u, Width::kMax));
  benchc->add_option("--max-ticks", ba.max_ticks, "tick budget")->check(CLI::PositiveNumber);
  benchc->add_option("--trace", ba.trace_file, "write the JSONL trace to FILE");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*validate) return cmd_validate(va);
    if (*print) return cmd_print(pa);
    if (*runc) return cmd_run(ra);
    if (*tracec) return cmd_trace(ra);
    if (*emit) return cmd_emit(ea);
    if (*benchc) return cmd_bench(ba);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
