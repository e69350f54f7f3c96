#include "doctest.h"
#include "gmx/graphing.hpp"

using namespace gmx;

namespace {

GraphingRep skip_chain() {
  GraphingRep g;
  g.amc = std::make_shared<Amc>(sram_amc({"const(1,2)", "add(2,1,1)"}));
  g.states = {"1", "2", "3"};
  g.edges.push_back({Region::whole(), "1", {"const(1,2)"}, "2"});
  g.edges.push_back({Region::whole(), "2", {"add(2,1,1)"}, "3"});
  return g;
}

}  // namespace

TEST_CASE("determinism checks") {
  GraphingRep g = skip_chain();
  CHECK(is_deterministic(g));

  g.edges.push_back({Region::whole(), "1", {}, "3"});
  CHECK_FALSE(is_deterministic(g));
  g.edges.pop_back();

  // conditional split is deterministic
  Coord x1{1, 1};
  g.edges.push_back({Region::sign_of(x1, Rel::Eq), "3", {}, "1"});
  g.edges.push_back({Region::sign_of(x1, Rel::Ne), "3", {}, "2"});
  CHECK(is_deterministic(g));

  GraphingRep empty;
  CHECK(is_deterministic(empty));
}

TEST_CASE("step and iterate") {
  GraphingRep g = skip_chain();
  ConfigPoint p{Memory{}, "1"};
  StepResult r = step(g, p);
  REQUIRE_FALSE(r.halted);
  CHECK(r.point.state == "2");
  CHECK(r.point.mem.get({1, 1}) == Rat(2));

  auto trace = iterate(g, p, 10);
  REQUIRE(trace.size() == 3);
  CHECK(trace.back().state == "3");
  CHECK(trace.back().mem.get({1, 2}) == Rat(4));

  CHECK(iterate(g, p, 0).size() == 1);

  // no matching edge: a halt, not an error
  StepResult halted = step(g, trace.back());
  CHECK(halted.halted);

  // undefined realiser under a matching edge is an error
  GraphingRep bad;
  bad.amc = std::make_shared<Amc>(act_amc({"div(2,1,1)"}));
  bad.states = {"s", "t"};
  bad.edges.push_back({Region::whole(), "s", {"div(2,1,1)"}, "t"});
  CHECK_THROWS(step(bad, ConfigPoint{Memory{}, "s"}));
}

TEST_CASE("treeing property bounds iteration") {
  GraphingRep g = skip_chain();
  CHECK(is_treeing(g));
  auto trace = iterate(g, ConfigPoint{Memory{}, "1"}, 100);
  CHECK(trace.size() <= g.states.size());

  g.edges.push_back({Region::whole(), "3", {}, "1"});
  CHECK_FALSE(is_treeing(g));
}

TEST_CASE("refinement") {
  Coord x1{1, 1};
  GraphingRep g = skip_chain();
  CHECK(refines(g, g));

  // split the Whole source of edge 0 into x1 >= 0 / x1 < 0
  GraphingRep f = g;
  Edge e0 = f.edges[0];
  f.edges.erase(f.edges.begin());
  Edge lo = e0, hi = e0;
  hi.source = Region::sign_of(x1, Rel::Ge);
  lo.source = Region::sign_of(x1, Rel::Lt);
  f.edges.push_back(hi);
  f.edges.push_back(lo);
  CHECK(refines(f, g));
  CHECK_FALSE(refines(g, f));

  // overlapping split is not a partition
  GraphingRep bad = f;
  bad.edges.back().source = Region::sign_of(x1, Rel::Le);
  CHECK_FALSE(refines(bad, g));

  // realiser mismatch
  GraphingRep wrong = g;
  wrong.edges[0].realiser = {"add(2,1,1)"};
  CHECK_FALSE(refines(wrong, g));

  // step agrees with the refined graphing wherever both are defined
  for (long v : {-3L, 0L, 5L}) {
    Memory m;
    m.set(x1, Rat(v));
    ConfigPoint p{m, "1"};
    StepResult a = step(f, p);
    StepResult b = step(g, p);
    CHECK(a.halted == b.halted);
    CHECK(a.point == b.point);
  }

  // refinement preserves determinism here
  CHECK(is_deterministic(f));
}
