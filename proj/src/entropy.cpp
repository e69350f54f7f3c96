#include "gmx/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>

namespace gmx {

StateDigraph state_digraph(const GraphingRep& g) {
  StateDigraph d;
  d.nodes = g.states;
  for (const auto& e : g.edges) d.arcs.insert({e.src_state, e.dst_state});
  return d;
}

std::vector<std::vector<State>> admissible_sequences(const GraphingRep& g,
                                                     int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  StateDigraph d = state_digraph(g);
  std::vector<std::vector<State>> cur;
  for (const auto& s : d.nodes) cur.push_back({s});
  for (int len = 1; len < k; ++len) {
    std::vector<std::vector<State>> next;
    for (const auto& seq : cur)
      for (const auto& s : d.nodes)
        if (d.arcs.count({seq.back(), s})) {
          next.push_back(seq);
          next.back().push_back(s);
        }
    cur = std::move(next);
  }
  return cur;
}

Int admissible_count(const GraphingRep& g, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  StateDigraph d = state_digraph(g);
  std::map<State, Int> counts;
  for (const auto& s : d.nodes) counts[s] = 1;
  for (int len = 1; len < k; ++len) {
    std::map<State, Int> next;
    for (const auto& s : d.nodes) next[s] = 0;
    for (const auto& [from, to] : d.arcs) next[from] += counts[to];
    counts = std::move(next);
  }
  Int total = 0;
  for (const auto& [s, c] : counts) total += c;
  return total;
}

namespace {

/// Symbolic execution of polynomial realisers: coordinate values as
/// polynomials in the initial coordinates.
struct SymState {
  std::vector<Coord> vars;  // polynomial variable index -> initial coord
  std::map<Coord, MultiPoly> vals;

  std::size_t var_index(const Coord& c) {
    auto it = std::find(vars.begin(), vars.end(), c);
    if (it != vars.end()) return static_cast<std::size_t>(it - vars.begin());
    vars.push_back(c);
    return vars.size() - 1;
  }

  MultiPoly value(const Coord& c) {
    auto it = vals.find(c);
    if (it != vals.end()) return it->second;
    return MultiPoly::variable(var_index(c));
  }

  bool apply(const GeneratorAction& a) {
    switch (a.kind) {
      case GenKind::Identity:
        return true;
      case GenKind::Const:
        vals[a.dst] = MultiPoly::constant(a.constant);
        return true;
      case GenKind::Copy:
        vals[a.dst] = value(a.src1);
        return true;
      case GenKind::Add:
        vals[a.dst] = value(a.src1) + value(a.src2);
        return true;
      case GenKind::Sub:
        vals[a.dst] = value(a.src1) - value(a.src2);
        return true;
      case GenKind::Mul:
        vals[a.dst] = value(a.src1) * value(a.src2);
        return true;
      case GenKind::AddC:
        vals[a.dst] = MultiPoly::constant(a.constant) + value(a.src1);
        return true;
      case GenKind::SubC:
        vals[a.dst] = MultiPoly::constant(a.constant) - value(a.src1);
        return true;
      case GenKind::MulC:
        vals[a.dst] = value(a.src1).scale(a.constant);
        return true;
      case GenKind::Tuple: {
        // snapshot semantics: evaluate all parts first
        std::vector<std::pair<Coord, MultiPoly>> writes;
        SymState snap = *this;
        for (const auto& part : a.parts) {
          SymState probe = snap;
          if (!probe.apply(part)) return false;
          for (const auto& [c, v] : probe.vals)
            if (!snap.vals.count(c) || !(snap.vals.at(c) == v))
              writes.emplace_back(c, v);
          vars = probe.vars;
          snap.vars = probe.vars;
        }
        std::set<Coord> seen;
        for (auto& [c, v] : writes)
          if (seen.insert(c).second) vals[c] = std::move(v);
        return true;
      }
      default:
        return false;  // division, roots, indirection: not polynomial
    }
  }

  MultiPoly remap(const MultiPoly& p, const std::vector<Coord>& atom_vars) {
    MultiPoly out;
    for (const auto& [mono, coeff] : p.terms()) {
      MultiPoly term = MultiPoly::constant(coeff);
      for (std::size_t j = 0; j < mono.size(); ++j) {
        if (j >= atom_vars.size() && mono[j] > 0) return MultiPoly();
        MultiPoly base = value(atom_vars[j]);
        for (unsigned e = 0; e < mono[j]; ++e) term = term * base;
      }
      out = out + term;
    }
    return out;
  }

  /// Region on the current coordinates, rewritten over the initial ones.
  std::optional<Region> pull_region(const Region& r) {
    Region out = Region::whole();
    auto add_poly = [&](const MultiPoly& p, std::uint8_t mask) {
      auto rel = signmask::to_rel(mask);
      if (!rel) return mask == signmask::kAll;
      out = out.intersect(Region::poly_sign(vars, p, *rel));
      return true;
    };
    for (const auto& [c, mask] : r.coord_masks())
      if (!add_poly(value(c), mask)) return std::nullopt;
    for (const auto& a : r.cmp_atoms())
      if (!add_poly(value(a.a) - value(a.b),
                    a.equal ? signmask::kZero
                            : (signmask::kNeg | signmask::kPos)))
        return std::nullopt;
    for (const auto& a : r.poly_atoms())
      if (!add_poly(remap(a.poly, a.vars), a.mask)) return std::nullopt;
    return out;
  }
};

Tri edge_path_emptiness_symbolic(const GraphingRep& g,
                                 const std::vector<std::size_t>& path) {
  SymState sym;
  Region acc = Region::whole();
  for (std::size_t id : path) {
    const Edge& e = g.edges[id];
    auto pulled = sym.pull_region(e.source);
    if (!pulled) return Tri::Unknown;
    acc = acc.intersect(*pulled);
    for (const auto& gen : e.realiser)
      if (!sym.apply(g.amc->actions.at(gen))) return Tri::Unknown;
  }
  Tri empty = acc.emptiness();
  if (empty == Tri::True) return Tri::True;
  if (empty == Tri::False) return Tri::False;
  return Tri::Unknown;
}

std::vector<Coord> relevant_coords(const GraphingRep& g) {
  std::vector<Coord> out;
  auto add = [&](const Coord& c) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  };
  std::function<void(const GeneratorAction&)> scan =
      [&](const GeneratorAction& a) {
        if (a.kind == GenKind::Tuple) {
          for (const auto& p : a.parts) scan(p);
          return;
        }
        if (a.kind != GenKind::Identity) add(a.dst);
        add(a.src1);
        add(a.src2);
      };
  for (const auto& e : g.edges) {
    for (const auto& [c, m] : e.source.coord_masks()) add(c);
    for (const auto& a : e.source.cmp_atoms()) {
      add(a.a);
      add(a.b);
    }
    for (const auto& a : e.source.poly_atoms())
      for (const auto& c : a.vars) add(c);
    for (const auto& gen : e.realiser) scan(g.amc->actions.at(gen));
  }
  return out;
}

/// Forward sampling: the set of edge sequences (all prefixes) realized by
/// random trajectories of at most `depth` edges.
std::set<std::vector<std::size_t>> sampled_edge_paths(
    const GraphingRep& g, int depth, const OracleConfig& cfg) {
  std::set<std::vector<std::size_t>> hits;
  if (!g.amc) return hits;
  std::vector<Coord> coords = relevant_coords(g);
  std::mt19937 rng(cfg.seed);
  std::uniform_int_distribution<long> num(-cfg.box, cfg.box);
  std::uniform_int_distribution<long> den(1, 6);
  for (unsigned s = 0; s < cfg.samples; ++s) {
    Memory m;
    for (const auto& c : coords) {
      bool integral =
          c.block >= 0 &&
          static_cast<std::size_t>(c.block) < g.amc->space.blocks.size() &&
          g.amc->space.blocks[static_cast<std::size_t>(c.block)] ==
              BlockKind::Integer;
      m.set(c, integral ? Rat(num(rng)) : make_rat(num(rng), den(rng)));
    }
    for (const auto& start : g.states) {
      ConfigPoint pt{m, start};
      std::vector<std::size_t> path;
      for (int i = 0; i < depth; ++i) {
        StepResult r;
        try {
          r = step(g, pt);
        } catch (const std::exception&) {
          break;
        }
        if (r.halted) break;
        path.push_back(*r.edge);
        hits.insert(path);
        pt = std::move(r.point);
      }
    }
  }
  return hits;
}

std::vector<std::vector<std::size_t>> enumerate_edge_paths(
    const GraphingRep& g, int edges) {
  std::vector<std::vector<std::size_t>> cur{{}};
  for (int len = 0; len < edges; ++len) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& path : cur)
      for (std::size_t id = 0; id < g.edges.size(); ++id) {
        if (!path.empty() &&
            g.edges[path.back()].dst_state != g.edges[id].src_state)
          continue;
        next.push_back(path);
        next.back().push_back(id);
      }
    cur = std::move(next);
  }
  return cur;
}

std::vector<State> path_states(const GraphingRep& g,
                               const std::vector<std::size_t>& edge_path) {
  std::vector<State> out;
  for (std::size_t id : edge_path) out.push_back(g.edges[id].src_state);
  if (!edge_path.empty()) out.push_back(g.edges[edge_path.back()].dst_state);
  return out;
}

}  // namespace

std::vector<Cell> cell_decomposition(const GraphingRep& g, int k,
                                     const OracleConfig& cfg) {
  std::vector<Cell> cells;
  if (k <= 0) {
    cells.push_back(Cell{});
    return cells;
  }
  if (k == 1) {
    for (const auto& s : g.states) cells.push_back(Cell{{s}, {}});
    return cells;
  }
  auto paths = enumerate_edge_paths(g, k - 1);
  std::map<std::vector<State>, std::vector<std::vector<std::size_t>>> kept;
  std::optional<std::set<std::vector<std::size_t>>> hits;
  for (const auto& path : paths) {
    Tri t = edge_path_emptiness_symbolic(g, path);
    if (t == Tri::Unknown) {
      // sampling can confirm nonemptiness but never refute it; a miss keeps
      // the cell anyway (unknown means nonempty)
      if (!hits) hits = sampled_edge_paths(g, k - 1, cfg);
      if (hits->count(path)) t = Tri::False;
    }
    if (t == Tri::True) continue;
    kept[path_states(g, path)].push_back(path);
  }
  for (auto& [states, edge_paths] : kept)
    cells.push_back(Cell{states, std::move(edge_paths)});
  return cells;
}

double state_cover_Hk(const GraphingRep& g, int k, AdmMode mode,
                      const OracleConfig& cfg) {
  Int count;
  if (mode == AdmMode::Syntactic) {
    count = admissible_count(g, k);
  } else {
    count = static_cast<long>(cell_decomposition(g, k, cfg).size());
  }
  if (count <= 0) return 0.0;
  return std::log2(count.get_d()) / k;
}

H0Estimate h0_estimate(const GraphingRep& g, int kmax) {
  if (kmax < 2) throw std::invalid_argument("kmax must be >= 2");
  H0Estimate best;
  bool first = true;
  for (int k = 1; k <= kmax; ++k) {
    Int c = admissible_count(g, k);
    double v = c > 0 ? std::log2(c.get_d()) / k : 0.0;
    if (first || v < best.value) {
      best = {v, k, c};
      first = false;
    }
  }
  return best;
}

std::size_t CoTree::depth_count(std::size_t depth) const {
  std::size_t n = 0;
  for (const auto& node : nodes)
    if (node.edges.size() == depth) ++n;
  return n;
}

CoTree entropic_cotree(const GraphingRep& g, int k, const State& top,
                       const OracleConfig& cfg) {
  if (!g.has_state(top)) throw std::invalid_argument("unknown top state");
  CoTree t;
  t.top = top;
  t.nodes.push_back(CoTreeNode{});
  std::optional<std::set<std::vector<std::size_t>>> hits;  // lazy sampling
  std::vector<std::size_t> frontier{0};
  for (int depth = 1; depth <= k; ++depth) {
    std::vector<std::size_t> next;
    for (std::size_t ni : frontier) {
      State head = t.nodes[ni].path.empty() ? top : t.nodes[ni].path.front();
      for (std::size_t id = 0; id < g.edges.size(); ++id) {
        if (g.edges[id].dst_state != head) continue;
        std::vector<std::size_t> edges{id};
        edges.insert(edges.end(), t.nodes[ni].edges.begin(),
                     t.nodes[ni].edges.end());
        Tri empty = edge_path_emptiness_symbolic(g, edges);
        if (empty == Tri::True) continue;
        if (empty == Tri::Unknown) {
          if (!hits) hits = sampled_edge_paths(g, k, cfg);
          // sampling can only confirm, never refute: keep regardless
        }
        CoTreeNode node;
        node.path.push_back(g.edges[id].src_state);
        node.path.insert(node.path.end(), t.nodes[ni].path.begin(),
                         t.nodes[ni].path.end());
        node.edges = std::move(edges);
        node.parent = ni;
        node.label = g.edges[id].realiser;
        t.nodes.push_back(std::move(node));
        next.push_back(t.nodes.size() - 1);
      }
    }
    frontier = std::move(next);
  }
  return t;
}

Forest forest_from_cotree(const CoTree& t) {
  Forest f;
  std::map<std::pair<std::size_t, std::optional<std::size_t>>, std::size_t>
      index;
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const CoTreeNode& n = t.nodes[i];
    std::optional<std::size_t> lead;
    if (!n.edges.empty()) lead = n.edges.front();
    auto key = std::make_pair(n.edges.size(), lead);
    auto it = index.find(key);
    if (it == index.end()) {
      index[key] = f.nodes.size();
      f.nodes.push_back(ForestNode{n.edges.size(), lead, {i}});
    } else {
      f.nodes[it->second].members.push_back(i);
    }
  }
  for (std::size_t i = 1; i < t.nodes.size(); ++i) {
    const CoTreeNode& n = t.nodes[i];
    const CoTreeNode& p = t.nodes[n.parent];
    std::optional<std::size_t> lead, plead;
    if (!n.edges.empty()) lead = n.edges.front();
    if (!p.edges.empty()) plead = p.edges.front();
    std::size_t from = index.at({n.edges.size(), lead});
    std::size_t to = index.at({p.edges.size(), plead});
    auto arc = std::make_pair(from, to);
    if (std::find(f.arcs.begin(), f.arcs.end(), arc) == f.arcs.end())
      f.arcs.push_back(arc);
  }
  return f;
}

Forest computational_forest(const GraphingRep& g, int k, const State& top,
                            const OracleConfig& cfg) {
  return forest_from_cotree(entropic_cotree(g, k, top, cfg));
}

}  // namespace gmx
