#ifndef GMX_MACHINE_HPP_
#define GMX_MACHINE_HPP_

#include <string>
#include <vector>

#include "gmx/graphing.hpp"

namespace gmx {

struct SramCommand {
  enum class Kind { Skip, Const, Copy, Binop, ReadRef, WriteRef, Cond };
  int label = 1;
  Kind kind = Kind::Skip;
  long i = 0, j = 0, k = 0;
  Int c;
  char op = '+';  // one of + - * / (binop)
  int l0 = 1, l1 = 1;  // cond targets
};

struct SramProgram {
  std::vector<SramCommand> commands;
  /// Halting label |M|+1.
  int halt_label() const { return static_cast<int>(commands.size()) + 1; }
  void validate() const;
};

struct PramProgram {
  std::vector<SramProgram> processors;
  void validate() const;
};

/// One command per line, "l: ..." forms:
///   l: skip
///   l: X1 := 2
///   l: X1 := X2
///   l: X1 := X2 + X3        (ops + - * /)
///   l: X1 := #X2
///   l: #X1 := X2
///   l: if X1 = 0 goto l' else l''
SramProgram parse_sram(const std::string& text);
std::string print_sram(const SramProgram& m);

/// SRAM blocks separated by a line "---".
PramProgram parse_pram(const std::string& text);
std::string print_pram(const PramProgram& p);

/// Machine configuration shared by the interpreters: block 0 is shared
/// memory, block q is processor q's private registers (block 1 for a solo
/// SRAM); labels are per processor. A processor whose label exceeds its
/// program has halted and stalls.
struct MachineConfig {
  Memory mem;
  std::vector<int> labels;

  bool operator==(const MachineConfig&) const = default;
};

/// One step of a solo SRAM (private block 1). Halted configurations are
/// returned unchanged.
MachineConfig sram_step(const SramProgram& m, const MachineConfig& cfg);

/// Lockstep step of all processors: every read sees the pre-step shared
/// memory; among same-cell shared writes the smallest processor index wins.
MachineConfig pram_step(const PramProgram& p, const MachineConfig& cfg);

bool machine_halted(const PramProgram& p, const MachineConfig& cfg);

GraphingRep compile_sram(const SramProgram& m);
GraphingRep compile_pram(const PramProgram& p);

/// Initial configuration for input (x1..xd): shared cells 0..d hold
/// (d, x1, ..., xd), private blocks zero, all labels 1.
MachineConfig initial_config(const PramProgram& p, const std::vector<Int>& x);
ConfigPoint initial_point(const GraphingRep& g, const std::vector<Int>& x);

struct AcceptResult {
  bool accepted = false;
  bool timeout = false;
  std::size_t steps = 0;
};

/// Iterates the graphing from the padded input; accepted iff the trace
/// reaches the distinguished top state within the budget.
AcceptResult accepts(const GraphingRep& g, const std::vector<Int>& x,
                     int budget);

}  // namespace gmx

#endif  // GMX_MACHINE_HPP_
