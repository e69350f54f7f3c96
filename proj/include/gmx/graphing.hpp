#ifndef GMX_GRAPHING_HPP_
#define GMX_GRAPHING_HPP_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gmx/amc.hpp"
#include "gmx/region.hpp"

namespace gmx {

struct Edge {
  Region source;
  State src_state;
  Word realiser;
  State dst_state;
};

struct GraphingRep {
  std::shared_ptr<const Amc> amc;
  std::vector<State> states;
  std::vector<Edge> edges;
  std::optional<State> top;
  std::optional<State> bottom;

  bool has_state(const State& s) const;
  std::size_t state_index(const State& s) const;
  void validate() const;
};

/// No state has two outgoing edges with provably overlapping sources.
/// Overlaps that cannot be refuted count against determinism.
bool is_deterministic(const GraphingRep& g);

/// Every edge moves to a strictly later state in the `states` order.
bool is_treeing(const GraphingRep& g);

/// F refines G: F's edges split into groups, one per G edge, with equal
/// realisers and state transitions, whose sources partition the G edge's
/// source. True only when proven.
bool refines(const GraphingRep& f, const GraphingRep& g);

struct StepResult {
  bool halted = false;
  ConfigPoint point;
  std::optional<std::size_t> edge;  // index of the edge taken
};

/// One application of the induced partial map. Requires a deterministic
/// graphing; a matching edge whose realiser is undefined at the point is an
/// error, not a halt.
StepResult step(const GraphingRep& g, const ConfigPoint& p);

/// Trace of at most k+1 points, stopping early when no edge applies.
std::vector<ConfigPoint> iterate(const GraphingRep& g, const ConfigPoint& p,
                                 int k);

}  // namespace gmx

#endif  // GMX_GRAPHING_HPP_
