#include "doctest.h"
#include "gmx/entropy.hpp"
#include "gmx/machine.hpp"

#include <cmath>
#include <random>

using namespace gmx;

namespace {

// a->b, b->c, c->b, c->d over a trivial-realiser amc
GraphingRep four_state_example() {
  GraphingRep g;
  g.amc = std::make_shared<Amc>(act_amc({}));
  g.states = {"a", "b", "c", "d"};
  Coord x{0, 1};
  g.edges.push_back({Region::whole(), "a", {}, "b"});
  g.edges.push_back({Region::whole(), "b", {}, "c"});
  g.edges.push_back({Region::sign_of(x, Rel::Ge), "c", {}, "b"});
  g.edges.push_back({Region::sign_of(x, Rel::Lt), "c", {}, "d"});
  return g;
}

// root test p(x) = x with three distinct leaf states
GraphingRep sign_split_tree() {
  GraphingRep g;
  g.amc = std::make_shared<Amc>(act_amc({}));
  g.states = {"p", "neg", "zero", "pos"};
  Coord x{0, 1};
  g.edges.push_back({Region::sign_of(x, Rel::Lt), "p", {}, "neg"});
  g.edges.push_back({Region::sign_of(x, Rel::Eq), "p", {}, "zero"});
  g.edges.push_back({Region::sign_of(x, Rel::Gt), "p", {}, "pos"});
  return g;
}

}  // namespace

TEST_CASE("admissible sequences") {
  GraphingRep g = four_state_example();
  auto adm2 = admissible_sequences(g, 2);
  CHECK(adm2.size() == 4);
  CHECK(admissible_count(g, 2) == Int(4));

  auto adm4 = admissible_sequences(g, 4);
  auto has = [&](std::vector<State> s) {
    return std::find(adm4.begin(), adm4.end(), s) != adm4.end();
  };
  CHECK(has({"a", "b", "c", "d"}));
  CHECK(has({"a", "b", "c", "b"}));
  CHECK_FALSE(has({"a", "b", "a", "b"}));
  CHECK(admissible_count(g, 4) == Int(adm4.size()));

  GraphingRep empty;
  empty.states = {"a", "b"};
  CHECK(admissible_sequences(empty, 2).empty());
  CHECK(admissible_count(empty, 2) == 0);
}

TEST_CASE("state cover entropy") {
  GraphingRep g = four_state_example();
  CHECK(state_cover_Hk(g, 2) == doctest::Approx(1.0));

  // |Adm_k| = 2^{k H^k} exactly in log space
  for (int k = 1; k <= 8; ++k) {
    Int c = admissible_count(g, k);
    double hk = state_cover_Hk(g, k);
    CHECK(std::abs(k * hk - std::log2(c.get_d())) < 1e-12);
  }

  // single state with a self loop
  GraphingRep loop;
  loop.amc = g.amc;
  loop.states = {"s"};
  loop.edges.push_back({Region::whole(), "s", {}, "s"});
  for (int k = 1; k <= 5; ++k) CHECK(state_cover_Hk(loop, k) == 0.0);

  // subadditivity of the unnormalized counts: c_{k+l} <= c_k * c_l
  for (int k = 1; k <= 4; ++k)
    for (int l = 1; l <= 4; ++l)
      CHECK(admissible_count(g, k + l) <=
            admissible_count(g, k) * admissible_count(g, l));
}

TEST_CASE("h0 estimates") {
  GraphingRep g = four_state_example();
  H0Estimate prev = h0_estimate(g, 2);
  for (int kmax = 3; kmax <= 12; ++kmax) {
    H0Estimate cur = h0_estimate(g, kmax);
    CHECK(cur.value <= prev.value + 1e-12);
    prev = cur;
  }

  // treeing: each state has at most one antecedent, estimate goes to 0
  GraphingRep tree = sign_split_tree();
  CHECK(h0_estimate(tree, 8).value < 0.3);

  GraphingRep empty;
  empty.states = {"s"};
  CHECK(h0_estimate(empty, 4).value == 0.0);
}

TEST_CASE("cell decomposition") {
  GraphingRep tree = sign_split_tree();
  auto cells = cell_decomposition(tree, 2);
  CHECK(cells.size() == 3);
  for (const auto& c : cells) {
    CHECK(c.path.size() == 2);
    REQUIRE(c.edge_paths.size() == 1);
    CHECK(c.edge_paths[0].size() == 1);
  }

  CHECK(cell_decomposition(tree, 0).size() == 1);

  // semantic count is bounded by the syntactic one
  GraphingRep g = four_state_example();
  for (int k = 1; k <= 5; ++k) {
    Int adm = admissible_count(g, k);
    CHECK(Int(static_cast<long>(cell_decomposition(g, k).size())) <= adm);
  }

  // contradictory composed guards are pruned exactly: x >= 0 then, after
  // negation, again x >= 0 is impossible
  GraphingRep h;
  h.amc = std::make_shared<Amc>(act_amc({"subc(1,0,1)"}));  // x1 := -x1
  h.states = {"a", "b", "c"};
  Coord x{0, 1};
  h.edges.push_back({Region::sign_of(x, Rel::Gt), "a", {"subc(1,0,1)"}, "b"});
  h.edges.push_back({Region::sign_of(x, Rel::Gt), "b", {}, "c"});
  CHECK(admissible_count(h, 3) == 1);
  CHECK(cell_decomposition(h, 3).empty());

  // cells are pairwise disjoint on sampled trajectories
  std::mt19937 rng(0xB10B);
  std::uniform_int_distribution<long> v(-5, 5);
  auto cells4 = cell_decomposition(g, 3);
  for (int trial = 0; trial < 50; ++trial) {
    Memory m;
    m.set({0, 1}, make_rat(v(rng), 2));
    ConfigPoint pt{m, "a"};
    auto trace = iterate(g, pt, 2);
    if (trace.size() < 3) continue;
    std::vector<State> followed;
    for (const auto& p : trace) followed.push_back(p.state);
    int matches = 0;
    for (const auto& c : cells4)
      if (c.path == followed) ++matches;
    CHECK(matches == 1);
  }
}

TEST_CASE("entropic co-tree") {
  GraphingRep tree = sign_split_tree();
  CoTree t0 = entropic_cotree(tree, 0, "pos");
  CHECK(t0.nodes.size() == 1);

  CoTree t1 = entropic_cotree(tree, 1, "pos");
  CHECK(t1.depth_count(0) == 1);
  CHECK(t1.depth_count(1) == 1);  // only the x>0 edge feeds "pos"
  CHECK(t1.nodes[1].path == std::vector<State>{"p"});

  // node count at depth m matches the cell decomposition restricted to
  // paths ending at top
  GraphingRep g = four_state_example();
  for (int k = 1; k <= 4; ++k) {
    CoTree t = entropic_cotree(g, k, "b");
    auto cells = cell_decomposition(g, k + 1);
    std::size_t ending = 0;
    for (const auto& c : cells)
      if (c.path.back() == "b") ending += c.edge_paths.size();
    CHECK(t.depth_count(static_cast<std::size_t>(k)) == ending);
  }
}

TEST_CASE("computational forest") {
  GraphingRep tree = sign_split_tree();
  Forest f = computational_forest(tree, 2, "pos");
  // root plus the single depth-1 group
  REQUIRE(f.nodes.size() == 2);
  CHECK(f.nodes[0].depth == 0);
  CHECK(f.nodes[1].depth == 1);
  CHECK(f.arcs.size() == 1);

  // arcs connect consecutive depths only
  GraphingRep g = four_state_example();
  Forest fg = computational_forest(g, 4, "b");
  for (const auto& [from, to] : fg.arcs)
    CHECK(fg.nodes[from].depth == fg.nodes[to].depth + 1);

  // grouping: two co-tree nodes with the same depth and deepest edge merge
  CoTree t = entropic_cotree(g, 3, "b");
  Forest ff = forest_from_cotree(t);
  std::size_t members = 0;
  for (const auto& n : ff.nodes) members += n.members.size();
  CHECK(members == t.nodes.size());
  for (const auto& n : ff.nodes)
    if (n.members.size() > 1)
      for (std::size_t m : n.members)
        CHECK(t.nodes[m].edges.front() == *n.edge);
}
