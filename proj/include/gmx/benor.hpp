#ifndef GMX_BENOR_HPP_
#define GMX_BENOR_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gmx/graphing.hpp"

namespace gmx {

/// Ternary decision tree: internal nodes test a polynomial against 0 and
/// branch on the sign; leaves answer yes/no.
struct AdtNode {
  bool leaf = false;
  bool yes = false;          // leaf answer
  MultiPoly poly;            // internal test, variables x1..xn as 0..n-1
  int lt = -1, eq = -1, gt = -1;
};

struct AlgDecisionTree {
  int n = 1;                 // input arity
  std::vector<AdtNode> nodes;  // node 0 is the root, children follow parents
  int order = 2;             // declared degree bound d

  int height() const;
  void validate() const;
};

/// S-expression form:
///   (test POLY LT-SUBTREE EQ-SUBTREE GT-SUBTREE) | yes | no
/// with POLY one of: number, x<i>, (+ p q ...), (- p q), (* p q ...),
/// (^ p k).
AlgDecisionTree parse_adt(const std::string& text, int n, int order = 2);

/// Binary computation tree: straight-line operations feeding sign tests.
struct ActNode {
  enum class Kind { Let, Branch, Leaf };
  struct Operand {
    bool is_const = false;
    Rat c;
    long reg = 0;  // coordinate index: x_i at i, v_K at n+K
  };
  Kind kind = Kind::Leaf;
  std::string op;            // + - * / sqrt (Let)
  long target = 0;           // computed register (Let)
  Operand a, b;
  int child = -1;            // Let
  Rel rel = Rel::Gt;         // Branch test, one of > = >=
  long test_reg = 0;
  int yes_child = -1, no_child = -1;
  bool yes = false;          // Leaf
};

struct AlgComputationTree {
  int n = 1;
  std::vector<ActNode> nodes;  // node 0 is the root

  int height() const;
  void validate() const;
};

/// S-expression form:
///   (let v<K> (OP A B) BODY)        OP in + - * /
///   (let v<K> (sqrt A) BODY)
///   (branch (REL A) YES NO)         REL in > = >=
///   yes | no
/// where A, B are x<i>, v<K>, or rational literals.
AlgComputationTree parse_act(const std::string& text, int n);

/// Graphing over a trivial monoid: one state per internal node plus T / F,
/// three sign-partitioned edges per test, identity realisers.
GraphingRep interpret_adt(const AlgDecisionTree& t);

/// Graphing over the ACT AMC: one state per vertex plus T / F; division
/// edges guard the divisor, square roots the radicand.
GraphingRep interpret_act(const AlgComputationTree& t);

/// Real mate of a treeing whose division edges carry a single euclidiv
/// generator: every such edge becomes a guarded guess of the remainder in a
/// fresh real block followed by a subtraction and an exact division.
struct RealMate {
  GraphingRep graphing;
  std::vector<std::size_t> division_edges;  // edge ids in the source treeing
  int y_block = 0;                          // block of the fresh variables
};

RealMate real_mate(const GraphingRep& t);

/// Runs the source treeing from `start` and seeds the mate's fresh variables
/// with the euclidean remainders observed at each division edge.
Memory seed_witnesses(const GraphingRep& t, const RealMate& m,
                      const ConfigPoint& start, int budget);

struct PolyConstraint {
  MultiPoly poly;
  Rel rel = Rel::Eq;  // "poly rel 0"
  std::string provenance;  // edge id and path position
  std::optional<std::size_t> defines;  // var introduced by this equation
};

struct PolySystem {
  std::vector<std::string> var_names;       // "b:i@v" history vars, "z<t>"
  std::vector<std::size_t> input_vars;      // free input variables
  std::vector<PolyConstraint> constraints;

  int max_degree() const;
  std::size_t equation_count() const;  // Rel::Eq constraints
};

/// Ben-Or extraction along an edge path: history-versioned variables, one
/// polynomialized equation per generator, sign guards from edge sources,
/// fresh z with z*x - 1 = 0 for every disequality guard.
PolySystem extract_polysystem(const GraphingRep& g,
                              const std::vector<std::size_t>& edge_path,
                              const std::vector<Coord>& inputs);

/// d(2d-1)^{n+h-1}; requires d >= 2.
Int benor_bound(int d, int n, int h);
/// 2^h * benor_bound(d, n, h).
Int steele_yao_bound(int h, int d, int n);
/// 2^{h0+1} * 3^{2kD+n+1} with 2^{h0} passed as the exact count.
Int graphing_benor_bound(const Int& h0_count, int k, int D, int n);

/// Max over edges of the normalized realiser length.
int algebraic_degree(const GraphingRep& g);

/// Exact connected-component count of the solution set of a system whose
/// only free variable is the single input; defined variables must unwind to
/// rational functions of it. Throws on anything else.
int count_components_1d(const PolySystem& system);

struct GridBox {
  std::vector<std::pair<Rat, Rat>> bounds;  // per input axis
};

/// Flood-fill component count over a sampled grid; a lower-bound estimate.
int count_components_grid(const PolySystem& system, const GridBox& box,
                          int resolution);

}  // namespace gmx

#endif  // GMX_BENOR_HPP_
