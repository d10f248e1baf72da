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

// Structural VHDL for a dataflow graph. The output is one file: a fixed
// library of three operator entities (2-in/1-out, 3-in/1-out, 2-in/2-out)
// running the S0..S3 handshake controller, followed by a top-level entity
// that declares one data/str/ack bundle per arc and instantiates one
// operator per node. The text format is original to this tool; it is meant
// to be read and diffed, and is not run through a VHDL compiler here.

#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "statflow/graph.hpp"
#include "statflow/operator_kind.hpp"
#include "statflow/semantics.hpp"
#include "statflow/validate.hpp"

namespace statflow {

struct EmitOptions {
  Width width{16};
  std::string entity = "dataflow_top";
};

namespace detail {

inline constexpr std::string_view kVhdlOperatorLibrary = R"vhdl(-- ---------------------------------------------------------------------------
-- Operator library. Each operator runs the same controller:
--   S0 reset, S1 latch inputs (status bit + ack per input),
--   S2 execute, S3 drive outputs until every consumer has taken them.
-- a_ack = '1' means the input latch is occupied; a producer only strobes
-- while the consumer's ack is '0'.
-- ---------------------------------------------------------------------------
library ieee;
use ieee.std_logic_1164.all;
use ieee.numeric_std.all;

package df_ops_pkg is
  function df_eval (op : string; a, b : std_logic_vector) return std_logic_vector;
end package df_ops_pkg;

package body df_ops_pkg is
  function df_eval (op : string; a, b : std_logic_vector) return std_logic_vector is
    constant W    : natural := a'length;
    variable sa   : signed(W - 1 downto 0) := signed(a);
    variable sb   : signed(W - 1 downto 0) := signed(b);
    variable prod : signed(2 * W - 1 downto 0);
    variable r    : std_logic_vector(W - 1 downto 0) := (others => '0');
  begin
    if op = "add" then
      r := std_logic_vector(sa + sb);
    elsif op = "sub" then
      r := std_logic_vector(sa - sb);
    elsif op = "mul" then
      prod := sa * sb;
      r := std_logic_vector(prod(W - 1 downto 0));
    elsif op = "div" then
      if sb /= 0 then
        r := std_logic_vector(sa / sb);
      end if;
    elsif op = "and" then
      r := a and b;
    elsif op = "or" then
      r := a or b;
    elsif op = "not" then
      r := not a;
    elsif op = "gtdecider" then
      if sa > sb then r(0) := '1'; end if;
    elsif op = "gedecider" then
      if sa >= sb then r(0) := '1'; end if;
    elsif op = "ltdecider" then
      if sa < sb then r(0) := '1'; end if;
    elsif op = "ledecider" then
      if sa <= sb then r(0) := '1'; end if;
    elsif op = "eqdecider" then
      if sa = sb then r(0) := '1'; end if;
    elsif op = "dfdecider" then
      if sa /= sb then r(0) := '1'; end if;
    end if;
    return r;
  end function df_eval;
end package body df_ops_pkg;

-- Two inputs, one output: arithmetic, logic, deciders, ndmerge.
-- "not" ignores input b.
library ieee;
use ieee.std_logic_1164.all;
use work.df_ops_pkg.all;

entity df_op_2x1 is
  generic (
    OP    : string   := "add";
    WIDTH : positive := 16
  );
  port (
    clk    : in  std_logic;
    rst    : in  std_logic;
    a_data : in  std_logic_vector(WIDTH - 1 downto 0);
    a_str  : in  std_logic;
    a_ack  : out std_logic;
    b_data : in  std_logic_vector(WIDTH - 1 downto 0);
    b_str  : in  std_logic;
    b_ack  : out std_logic;
    z_data : out std_logic_vector(WIDTH - 1 downto 0);
    z_str  : out std_logic;
    z_ack  : in  std_logic
  );
end entity df_op_2x1;

architecture behavioral of df_op_2x1 is
  type state_t is (S0, S1, S2, S3);
  signal state        : state_t := S0;
  signal dadoa, dadob : std_logic_vector(WIDTH - 1 downto 0);
  signal dadoz        : std_logic_vector(WIDTH - 1 downto 0);
  signal bita, bitb   : std_logic := '0';
  signal bitz         : std_logic := '0';
  signal a_first      : std_logic := '1';
begin
  a_ack  <= bita;
  b_ack  <= bitb;
  z_data <= dadoz;
  z_str  <= bitz;

  process (clk)
    variable va, vb : std_logic;
  begin
    if rising_edge(clk) then
      if rst = '1' then
        state <= S0;
      else
        case state is
          when S0 =>
            bita <= '0';
            bitb <= '0';
            bitz <= '0';
            state <= S1;
          when S1 =>
            va := bita;
            vb := bitb;
            if bita = '0' and a_str = '1' then
              dadoa <= a_data;
              va := '1';
              a_first <= not bitb;
            end if;
            if OP /= "not" and bitb = '0' and b_str = '1' then
              dadob <= b_data;
              vb := '1';
              if va = '0' then a_first <= '0'; end if;
            end if;
            bita <= va;
            bitb <= vb;
            if OP = "ndmerge" then
              if va = '1' or vb = '1' then state <= S2; end if;
            elsif OP = "not" then
              if va = '1' then state <= S2; end if;
            elsif va = '1' and vb = '1' then
              state <= S2;
            end if;
          when S2 =>
            if OP = "ndmerge" then
              if bita = '1' and (bitb = '0' or a_first = '1') then
                dadoz <= dadoa;
                bita <= '0';
              else
                dadoz <= dadob;
                bitb <= '0';
              end if;
            else
              dadoz <= df_eval(OP, dadoa, dadob);
              bita <= '0';
              if OP /= "not" then bitb <= '0'; end if;
            end if;
            state <= S3;
          when S3 =>
            if bitz = '0' and z_ack = '0' then
              bitz <= '1';
            elsif bitz = '1' and z_ack = '1' then
              bitz <= '0';
              state <= S1;
            end if;
        end case;
      end if;
    end if;
  end process;
end architecture behavioral;

-- Three inputs, one output: dmerge. Waits for a, b and ctl; forwards a when
-- ctl is nonzero, otherwise b.
library ieee;
use ieee.std_logic_1164.all;

entity df_op_3x1 is
  generic (
    OP    : string   := "dmerge";
    WIDTH : positive := 16
  );
  port (
    clk      : in  std_logic;
    rst      : in  std_logic;
    a_data   : in  std_logic_vector(WIDTH - 1 downto 0);
    a_str    : in  std_logic;
    a_ack    : out std_logic;
    b_data   : in  std_logic_vector(WIDTH - 1 downto 0);
    b_str    : in  std_logic;
    b_ack    : out std_logic;
    ctl_data : in  std_logic_vector(WIDTH - 1 downto 0);
    ctl_str  : in  std_logic;
    ctl_ack  : out std_logic;
    z_data   : out std_logic_vector(WIDTH - 1 downto 0);
    z_str    : out std_logic;
    z_ack    : in  std_logic
  );
end entity df_op_3x1;

architecture behavioral of df_op_3x1 is
  type state_t is (S0, S1, S2, S3);
  signal state              : state_t := S0;
  signal dadoa, dadob, dadoc : std_logic_vector(WIDTH - 1 downto 0);
  signal dadoz              : std_logic_vector(WIDTH - 1 downto 0);
  signal bita, bitb, bitc   : std_logic := '0';
  signal bitz               : std_logic := '0';
  constant ZERO             : std_logic_vector(WIDTH - 1 downto 0) := (others => '0');
begin
  a_ack   <= bita;
  b_ack   <= bitb;
  ctl_ack <= bitc;
  z_data  <= dadoz;
  z_str   <= bitz;

  process (clk)
    variable va, vb, vc : std_logic;
  begin
    if rising_edge(clk) then
      if rst = '1' then
        state <= S0;
      else
        case state is
          when S0 =>
            bita <= '0';
            bitb <= '0';
            bitc <= '0';
            bitz <= '0';
            state <= S1;
          when S1 =>
            va := bita;
            vb := bitb;
            vc := bitc;
            if bita = '0' and a_str = '1' then dadoa <= a_data; va := '1'; end if;
            if bitb = '0' and b_str = '1' then dadob <= b_data; vb := '1'; end if;
            if bitc = '0' and ctl_str = '1' then dadoc <= ctl_data; vc := '1'; end if;
            bita <= va;
            bitb <= vb;
            bitc <= vc;
            if va = '1' and vb = '1' and vc = '1' then state <= S2; end if;
          when S2 =>
            if dadoc /= ZERO then
              dadoz <= dadoa;
            else
              dadoz <= dadob;
            end if;
            bita <= '0';
            bitb <= '0';
            bitc <= '0';
            state <= S3;
          when S3 =>
            if bitz = '0' and z_ack = '0' then
              bitz <= '1';
            elsif bitz = '1' and z_ack = '1' then
              bitz <= '0';
              state <= S1;
            end if;
        end case;
      end if;
    end if;
  end process;
end architecture behavioral;

-- Two inputs, two outputs: branch (a routed to t when ctl is nonzero,
-- else to f) and copy (a to both t and f; ctl unused).
library ieee;
use ieee.std_logic_1164.all;

entity df_op_2x2 is
  generic (
    OP    : string   := "branch";
    WIDTH : positive := 16
  );
  port (
    clk      : in  std_logic;
    rst      : in  std_logic;
    a_data   : in  std_logic_vector(WIDTH - 1 downto 0);
    a_str    : in  std_logic;
    a_ack    : out std_logic;
    ctl_data : in  std_logic_vector(WIDTH - 1 downto 0);
    ctl_str  : in  std_logic;
    ctl_ack  : out std_logic;
    t_data   : out std_logic_vector(WIDTH - 1 downto 0);
    t_str    : out std_logic;
    t_ack    : in  std_logic;
    f_data   : out std_logic_vector(WIDTH - 1 downto 0);
    f_str    : out std_logic;
    f_ack    : in  std_logic
  );
end entity df_op_2x2;

architecture behavioral of df_op_2x2 is
  type state_t is (S0, S1, S2, S3);
  signal state          : state_t := S0;
  signal dadoa, dadoc   : std_logic_vector(WIDTH - 1 downto 0);
  signal dadoz          : std_logic_vector(WIDTH - 1 downto 0);
  signal bita, bitc     : std_logic := '0';
  signal pend_t, pend_f : std_logic := '0';
  signal drv_t, drv_f   : std_logic := '0';
  constant ZERO         : std_logic_vector(WIDTH - 1 downto 0) := (others => '0');
begin
  a_ack   <= bita;
  ctl_ack <= bitc;
  t_data  <= dadoz;
  f_data  <= dadoz;
  t_str   <= drv_t;
  f_str   <= drv_f;

  process (clk)
    variable va, vc : std_logic;
  begin
    if rising_edge(clk) then
      if rst = '1' then
        state <= S0;
      else
        case state is
          when S0 =>
            bita <= '0';
            bitc <= '0';
            pend_t <= '0';
            pend_f <= '0';
            drv_t <= '0';
            drv_f <= '0';
            state <= S1;
          when S1 =>
            va := bita;
            vc := bitc;
            if bita = '0' and a_str = '1' then dadoa <= a_data; va := '1'; end if;
            if OP /= "copy" and bitc = '0' and ctl_str = '1' then
              dadoc <= ctl_data;
              vc := '1';
            end if;
            bita <= va;
            bitc <= vc;
            if va = '1' and (vc = '1' or OP = "copy") then state <= S2; end if;
          when S2 =>
            dadoz <= dadoa;
            if OP = "copy" then
              pend_t <= '1';
              pend_f <= '1';
            elsif dadoc /= ZERO then
              pend_t <= '1';
            else
              pend_f <= '1';
            end if;
            bita <= '0';
            bitc <= '0';
            state <= S3;
          when S3 =>
            if pend_t = '1' and drv_t = '0' and t_ack = '0' then drv_t <= '1'; end if;
            if drv_t = '1' and t_ack = '1' then drv_t <= '0'; pend_t <= '0'; end if;
            if pend_f = '1' and drv_f = '0' and f_ack = '0' then drv_f <= '1'; end if;
            if drv_f = '1' and f_ack = '1' then drv_f <= '0'; pend_f <= '0'; end if;
            if pend_t = '0' and pend_f = '0' then state <= S1; end if;
        end case;
      end if;
    end if;
  end process;
end architecture behavioral;
)vhdl";

inline bool is_plain_vhdl_base(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front()))) return false;
  if (s.back() == '_') return false;
  return s.find("__") == std::string_view::npos;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Maps arc labels to VHDL signal base names. Labels that are not plain VHDL
// identifiers, or that collide case-insensitively, become extended
// identifiers.
class VhdlNames {
 public:
  explicit VhdlNames(const std::vector<Arc>& arcs) {
    std::unordered_map<std::string, int> folded;
    for (const auto& a : arcs) ++folded[lower(a.label)];
    for (const auto& a : arcs) {
      plain_[a.label] = is_plain_vhdl_base(a.label) && folded[lower(a.label)] == 1;
    }
  }

  std::string signal(const std::string& label, std::string_view suffix) const {
    if (plain_.at(label)) return label + "_" + std::string(suffix);
    std::string escaped;
    for (char c : label) {
      escaped += c;
      if (c == '\\') escaped += '\\';
    }
    return "\\" + escaped + "_" + std::string(suffix) + "\\";
  }

 private:
  std::unordered_map<std::string, bool> plain_;
};

inline std::string vector_type(Width w) {
  return "std_logic_vector(" + std::to_string(w.bits() - 1) + " downto 0)";
}

}  // namespace detail

// Deterministic: nodes in statement order, signals in first-use order.
inline std::string emit_netlist(const DataflowGraph& g, const EmitOptions& opts = {}) {
  if (auto report = validate_graph(g); !report.ok()) {
    throw std::invalid_argument("cannot emit an invalid graph: " +
                                report.diagnostics.front().message);
  }
  const std::vector<Arc> arcs = g.arcs();
  const detail::VhdlNames names(arcs);
  const std::string vec = detail::vector_type(opts.width);
  const std::string width = std::to_string(opts.width.bits());

  std::string out;
  auto line = [&](std::string_view s) {
    out += s;
    out += '\n';
  };

  line("-- Generated by statflow. Structural netlist for a static dataflow graph.");
  line("-- operators: " + std::to_string(g.nodes().size()) +
       ", arcs: " + std::to_string(arcs.size()) +
       ", inputs: " + std::to_string(g.inputs().size()) +
       ", outputs: " + std::to_string(g.outputs().size()));
  line("");
  out += detail::kVhdlOperatorLibrary;
  line("");

  // Top level.
  line("-- ---------------------------------------------------------------------------");
  line("-- Graph");
  line("-- ---------------------------------------------------------------------------");
  line("library ieee;");
  line("use ieee.std_logic_1164.all;");
  line("");
  line("entity " + opts.entity + " is");
  line("  port (");
  std::vector<std::string> ports;
  ports.push_back("clk : in std_logic");
  ports.push_back("rst : in std_logic");
  for (const auto& l : g.inputs()) {
    ports.push_back(names.signal(l, "data") + " : in " + vec);
    ports.push_back(names.signal(l, "str") + " : in std_logic");
    ports.push_back(names.signal(l, "ack") + " : out std_logic");
  }
  for (const auto& l : g.outputs()) {
    ports.push_back(names.signal(l, "data") + " : out " + vec);
    ports.push_back(names.signal(l, "str") + " : out std_logic");
    ports.push_back(names.signal(l, "ack") + " : in std_logic");
  }
  for (std::size_t i = 0; i < ports.size(); ++i) {
    line("    " + ports[i] + (i + 1 < ports.size() ? ";" : ""));
  }
  line("  );");
  line("end entity " + opts.entity + ";");
  line("");
  line("architecture structural of " + opts.entity + " is");

  bool needs_tie = false;
  for (const auto& n : g.nodes()) {
    if (n.kind == OperatorKind::Copy || n.kind == OperatorKind::Not) needs_tie = true;
  }
  for (const auto& a : arcs) {
    if (!a.producer || !a.consumer) continue;
    line("  signal " + names.signal(a.label, "data") + " : " + vec + ";");
    line("  signal " + names.signal(a.label, "str") + " : std_logic;");
    line("  signal " + names.signal(a.label, "ack") + " : std_logic;");
  }
  if (needs_tie) {
    line("  signal tie_lo_bus : " + vec + " := (others => '0');");
    line("  signal tie_lo_bit : std_logic := '0';");
  }
  line("begin");

  for (const auto& n : g.nodes()) {
    std::string entity;
    switch (component_shape(n.kind)) {
      case ComponentShape::TwoInOneOut: entity = "df_op_2x1"; break;
      case ComponentShape::ThreeInOneOut: entity = "df_op_3x1"; break;
      case ComponentShape::TwoInTwoOut: entity = "df_op_2x2"; break;
    }
    line("");
    line("  " + n.name + " : entity work." + entity);
    line("    generic map (OP => \"" + std::string(mnemonic(n.kind)) +
         "\", WIDTH => " + width + ")");
    line("    port map (");
    std::vector<std::string> maps;
    maps.push_back("clk => clk, rst => rst");
    auto bundle = [&](std::string_view port, const std::string& label) {
      maps.push_back(std::string(port) + "_data => " + names.signal(label, "data") + ", " +
                     std::string(port) + "_str => " + names.signal(label, "str") + ", " +
                     std::string(port) + "_ack => " + names.signal(label, "ack"));
    };
    auto tie = [&](std::string_view port) {
      maps.push_back(std::string(port) + "_data => tie_lo_bus, " + std::string(port) +
                     "_str => tie_lo_bit, " + std::string(port) + "_ack => open");
    };
    const auto ins = input_slots(n.kind);
    const auto outs = output_slots(n.kind);
    switch (n.kind) {
      case OperatorKind::Copy:
        bundle("a", n.ports[0]);
        tie("ctl");
        bundle("t", n.ports[1]);
        bundle("f", n.ports[2]);
        break;
      case OperatorKind::Not:
        bundle("a", n.ports[0]);
        tie("b");
        bundle("z", n.ports[1]);
        break;
      default:
        for (std::size_t i = 0; i < ins.size(); ++i) bundle(slot_name(ins[i]), n.ports[i]);
        for (std::size_t o = 0; o < outs.size(); ++o) {
          bundle(slot_name(outs[o]), n.ports[ins.size() + o]);
        }
        break;
    }
    for (std::size_t i = 0; i < maps.size(); ++i) {
      line("      " + maps[i] + (i + 1 < maps.size() ? "," : ""));
    }
    line("    );");
  }
  line("");
  line("end architecture structural;");
  return out;
}

}  // namespace statflow
