#include "gmx/graphing.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace gmx {

bool GraphingRep::has_state(const State& s) const {
  return std::find(states.begin(), states.end(), s) != states.end();
}

std::size_t GraphingRep::state_index(const State& s) const {
  auto it = std::find(states.begin(), states.end(), s);
  if (it == states.end()) throw std::invalid_argument("unknown state: " + s);
  return static_cast<std::size_t>(it - states.begin());
}

void GraphingRep::validate() const {
  for (const auto& e : edges) {
    if (!has_state(e.src_state) || !has_state(e.dst_state))
      throw std::invalid_argument("edge references unknown state");
    if (amc)
      for (const auto& g : e.realiser)
        if (!amc->actions.count(g))
          throw std::invalid_argument("realiser uses unknown generator: " + g);
  }
  if (top && !has_state(*top)) throw std::invalid_argument("unknown top state");
  if (bottom && !has_state(*bottom))
    throw std::invalid_argument("unknown bottom state");
}

bool is_deterministic(const GraphingRep& g) {
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    for (std::size_t j = i + 1; j < g.edges.size(); ++j) {
      if (g.edges[i].src_state != g.edges[j].src_state) continue;
      if (!g.edges[i].source.intersect(g.edges[j].source).is_empty())
        return false;
    }
  return true;
}

bool is_treeing(const GraphingRep& g) {
  for (const auto& e : g.edges)
    if (g.state_index(e.dst_state) <= g.state_index(e.src_state)) return false;
  return true;
}

namespace {

using EdgeSig = std::tuple<State, Word, State>;

EdgeSig signature(const Edge& e) {
  return {e.src_state, e.realiser, e.dst_state};
}

/// Assigns each F edge in `fs` to one of the G edges in `gs` so that every
/// group partitions its G edge's source. Group sizes here are tiny.
bool assign_groups(const std::vector<const Edge*>& fs,
                   const std::vector<const Edge*>& gs, std::size_t pos,
                   std::vector<std::vector<const Edge*>>& groups) {
  if (pos == fs.size()) {
    for (std::size_t gi = 0; gi < gs.size(); ++gi) {
      std::vector<Region> sources;
      for (const Edge* f : groups[gi]) sources.push_back(f->source);
      if (partition_covers(sources, gs[gi]->source) != Tri::True) return false;
    }
    return true;
  }
  for (std::size_t gi = 0; gi < gs.size(); ++gi) {
    groups[gi].push_back(fs[pos]);
    if (assign_groups(fs, gs, pos + 1, groups)) return true;
    groups[gi].pop_back();
  }
  return false;
}

}  // namespace

bool refines(const GraphingRep& f, const GraphingRep& g) {
  if (f.states != g.states) return false;
  std::map<EdgeSig, std::vector<const Edge*>> f_by_sig, g_by_sig;
  for (const auto& e : f.edges) f_by_sig[signature(e)].push_back(&e);
  for (const auto& e : g.edges) g_by_sig[signature(e)].push_back(&e);
  for (const auto& [sig, fs] : f_by_sig)
    if (!g_by_sig.count(sig)) return false;
  for (const auto& [sig, gs] : g_by_sig) {
    auto it = f_by_sig.find(sig);
    std::vector<const Edge*> fs =
        it == f_by_sig.end() ? std::vector<const Edge*>{} : it->second;
    if (fs.size() < gs.size()) return false;
    if (fs.size() > 16) return false;  // search budget
    std::vector<std::vector<const Edge*>> groups(gs.size());
    if (!assign_groups(fs, gs, 0, groups)) return false;
  }
  return true;
}

StepResult step(const GraphingRep& g, const ConfigPoint& p) {
  std::optional<std::size_t> match;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (e.src_state != p.state || !e.source.contains(p.mem)) continue;
    if (match)
      throw std::runtime_error("nondeterministic match at state " + p.state);
    match = i;
  }
  StepResult r;
  if (!match) {
    r.halted = true;
    r.point = p;
    return r;
  }
  const Edge& e = g.edges[*match];
  if (!g.amc) throw std::runtime_error("graphing has no ambient amc");
  auto mem = word_apply(*g.amc, e.realiser, p.mem);
  if (!mem)
    throw std::runtime_error("realiser undefined at matched edge " +
                             std::to_string(*match) + " (" +
                             word_to_string(e.realiser) + ")");
  r.point = {std::move(*mem), e.dst_state};
  r.edge = match;
  return r;
}

std::vector<ConfigPoint> iterate(const GraphingRep& g, const ConfigPoint& p,
                                 int k) {
  std::vector<ConfigPoint> trace{p};
  for (int i = 0; i < k; ++i) {
    StepResult r = step(g, trace.back());
    if (r.halted) break;
    trace.push_back(std::move(r.point));
  }
  return trace;
}

}  // namespace gmx
