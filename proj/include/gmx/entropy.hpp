#ifndef GMX_ENTROPY_HPP_
#define GMX_ENTROPY_HPP_

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "gmx/graphing.hpp"

namespace gmx {

struct StateDigraph {
  std::vector<State> nodes;
  std::set<std::pair<State, State>> arcs;
};

StateDigraph state_digraph(const GraphingRep& g);

/// All state sequences of length k realizable by consecutive arcs
/// (syntactic admissibility).
std::vector<std::vector<State>> admissible_sequences(const GraphingRep& g,
                                                     int k);

/// |Adm_k| without materializing the sequences.
Int admissible_count(const GraphingRep& g, int k);

enum class AdmMode { Syntactic, Semantic };

/// Emptiness oracle knobs for semantic admissibility, cells, and co-trees.
struct OracleConfig {
  unsigned samples = 10000;
  long box = 10;
  std::uint32_t seed = 0xB10B;
};

/// H^k = (1/k) log2(count); count is |Adm_k| (syntactic) or the number of
/// nonempty cells (semantic, "unknown means nonempty").
double state_cover_Hk(const GraphingRep& g, int k,
                      AdmMode mode = AdmMode::Syntactic,
                      const OracleConfig& cfg = {});

struct H0Estimate {
  double value = 0.0;  // min over k <= kmax of log2(count_k)/k
  int k = 1;           // the k attaining it
  Int count;           // |Adm_k| at that k
};

H0Estimate h0_estimate(const GraphingRep& g, int kmax);

/// A nonempty class of the k-fold decomposition: the points whose k-state
/// trajectory follows `path`. Edge paths list the ways the state sequence is
/// realized by edges.
struct Cell {
  std::vector<State> path;
  std::vector<std::vector<std::size_t>> edge_paths;
};

std::vector<Cell> cell_decomposition(const GraphingRep& g, int k,
                                     const OracleConfig& cfg = {});

/// Co-tree node: points at the head of `edges` (forward order) whose run
/// traverses exactly those edges and ends at the top state. `path` lists the
/// traversed states deepest-first, excluding the root.
struct CoTreeNode {
  std::vector<State> path;
  std::vector<std::size_t> edges;
  std::size_t parent = 0;
  Word label;  // realiser of the deepest edge
};

struct CoTree {
  State top;
  std::vector<CoTreeNode> nodes;  // nodes[0] is the root (empty path)

  std::size_t depth_count(std::size_t depth) const;
};

CoTree entropic_cotree(const GraphingRep& g, int k, const State& top,
                       const OracleConfig& cfg = {});

/// Forest node N_e^m: co-tree nodes of depth m whose deepest edge is e.
struct ForestNode {
  std::size_t depth = 0;
  std::optional<std::size_t> edge;  // nullopt for the root group
  std::vector<std::size_t> members;  // co-tree node indices
};

struct Forest {
  std::vector<ForestNode> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> arcs;  // child -> parent
};

Forest computational_forest(const GraphingRep& g, int k, const State& top,
                            const OracleConfig& cfg = {});
Forest forest_from_cotree(const CoTree& t);

}  // namespace gmx

#endif  // GMX_ENTROPY_HPP_
