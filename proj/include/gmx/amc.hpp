#ifndef GMX_AMC_HPP_
#define GMX_AMC_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gmx/config.hpp"
#include "gmx/rat.hpp"

namespace gmx {

/// A word over generator symbols; the empty word is the unit.
using Word = std::vector<std::string>;

std::string word_to_string(const Word& w);

struct MonoidPresentation {
  std::vector<std::string> generators;
  std::vector<std::pair<Word, Word>> relations;

  bool has_generator(const std::string& g) const;
  void validate() const;
};

/// Pairs of generators (left summand x right summand) that do NOT commute in
/// a conflicted sum.
struct ConflictRelation {
  std::set<std::pair<std::string, std::string>> pairs;
};

enum class GenKind {
  Identity,
  Const,     // dst := constant
  Copy,      // dst := src1
  Add,       // dst := src1 + src2
  Sub,       // dst := src1 - src2
  Mul,       // dst := src1 * src2
  EucliDiv,  // dst := src1 div src2 (total, 0 when src2 = 0)
  RealDiv,   // dst := src1 / src2   (undefined when src2 = 0)
  Sqrt,      // dst := sqrt(src1)    (undefined when src1 < 0)
  AddC,      // dst := constant + src1
  SubC,      // dst := constant - src1
  MulC,      // dst := constant * src1
  DivC,      // dst := constant / src1 (undefined when src1 = 0)
  ReadRef,   // dst := shared[src1]
  WriteRef,  // shared[dst-pointer src1] := src2
  Tuple      // simultaneous application of parts against one snapshot
};

struct GeneratorAction {
  std::string symbol;
  GenKind kind = GenKind::Identity;
  Coord dst;
  Coord src1;
  Coord src2;
  Rat constant;
  int shared_block = 0;  // target block of ref indirection
  bool central = true;   // false iff the action can write the shared block
  std::vector<GeneratorAction> parts;  // Tuple only
};

/// One write produced by an action: (cell, new value).
using Effect = std::pair<Coord, Rat>;

/// The writes the action performs when every read comes from `snapshot`.
/// nullopt = point outside the action's domain. Tuple parts all read the
/// snapshot; among shared-cell writes to one cell the earliest part wins.
std::optional<std::vector<Effect>> action_effects(const GeneratorAction& a,
                                                  const Memory& snapshot);

/// Parses an SRAM generator symbol: const(i,c), copy(i,j), add(i,j,k),
/// sub(i,j,k), mul(i,j,k), euclidiv(i,j,k), readref(i,j), writeref(i,j)
/// (alias copyref). Registers X_i live in `private_block`; indirection
/// targets block 0.
GeneratorAction sram_action(const std::string& symbol, int private_block = 1);

/// Parses an ACT generator symbol over one real block: const(i,c), copy(i,j),
/// add/sub/mul/div(i,j,k), addc/subc/mulc/divc(i,c,k), sqrt(i,k),
/// realdiv alias of div.
GeneratorAction act_action(const std::string& symbol, int block = 0);

/// Simultaneous tuple of actions; symbol "(s1|s2|...)".
GeneratorAction tuple_action(std::vector<GeneratorAction> parts);

struct Amc {
  MonoidPresentation presentation;
  std::map<std::string, GeneratorAction> actions;
  SpaceSignature space;

  void validate() const;
};

/// Free-presentation SRAM AMC with the listed generators, space = (shared
/// integer block, private integer block).
Amc sram_amc(const std::vector<std::string>& symbols);

/// Free-presentation ACT AMC over a single real block.
Amc act_amc(const std::vector<std::string>& symbols);

MonoidPresentation conflicted_sum(const MonoidPresentation& left,
                                  const MonoidPresentation& right,
                                  const ConflictRelation& conflict);

/// CREW of two AMCs sharing block 0: conflicted sum over the non-central
/// generator pairs; private blocks are laid out left-then-right after the
/// shared block; generators get tags "1." and "2.".
Amc crew(const Amc& left, const Amc& right);

/// p-fold CREW with flat processor tags "1." .. "p.". Processor q's private
/// blocks b >= 1 land at (q-1)*(m-1)+b where m is the summand's block count.
Amc crew_power(const Amc& amc, int p);

std::optional<Memory> apply_generator(const Amc& amc, const std::string& g,
                                      const Memory& m);

/// Left-to-right fold of apply_generator; undefined propagates.
std::optional<Memory> word_apply(const Amc& amc, const Word& w,
                                 const Memory& m);

/// Canonical form under the relation shapes conflicted_sum emits: unit
/// eliminations ([g] = []) and commutations ([a,b] = [b,a]). Adjacent
/// commuting pairs are bubble-sorted into lexicographic symbol order.
/// Throws on any other relation shape.
Word normalize_word(const MonoidPresentation& pres, Word w);

}  // namespace gmx

#endif  // GMX_AMC_HPP_
