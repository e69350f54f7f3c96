#include "doctest.h"
#include "gmx/benor.hpp"

#include <random>

using namespace gmx;

namespace {

PolySystem one_var_system(std::vector<std::pair<MultiPoly, Rel>> constraints) {
  PolySystem s;
  s.var_names = {"x"};
  s.input_vars = {0};
  for (auto& [p, rel] : constraints)
    s.constraints.push_back({std::move(p), rel, "", std::nullopt});
  return s;
}

MultiPoly X(std::size_t i = 0) { return MultiPoly::variable(i); }
MultiPoly C(long v) { return MultiPoly::constant(Rat(v)); }

}  // namespace

TEST_CASE("adt parsing") {
  AlgDecisionTree t = parse_adt("(test x1 no yes yes)", 1);
  CHECK(t.nodes.size() == 4);
  CHECK(t.height() == 1);
  CHECK_FALSE(t.nodes[0].leaf);
  CHECK(t.nodes[t.nodes[0].lt].leaf);
  CHECK_FALSE(t.nodes[t.nodes[0].lt].yes);

  AlgDecisionTree t2 = parse_adt(
      "(test (- (^ x1 2) 2) yes (test x1 no yes no) no)", 1);
  CHECK(t2.height() == 2);
  CHECK(t2.nodes[0].poly == X() * X() - C(2));

  CHECK_THROWS(parse_adt("(test x1 no yes)", 1));
  CHECK_THROWS(parse_adt("(test x2 no yes no)", 1));
  CHECK_THROWS(parse_adt("maybe", 1));
  CHECK_THROWS(parse_adt("(test (^ x1 3) yes no no)", 1, 2));
}

TEST_CASE("adt interpretation") {
  AlgDecisionTree t = parse_adt("(test x1 no yes yes)", 1);
  GraphingRep g = interpret_adt(t);
  CHECK(g.states == std::vector<State>{"n0", "F", "T"});
  CHECK(g.edges.size() == 3);
  CHECK(is_deterministic(g));
  CHECK(is_treeing(g));
  CHECK(algebraic_degree(g) == 0);

  auto run = [&](const Rat& x) {
    Memory m;
    m.set({0, 1}, x);
    return iterate(g, {m, "n0"}, 5).back().state;
  };
  CHECK(run(Rat(-3)) == "F");
  CHECK(run(Rat(0)) == "T");
  CHECK(run(make_rat(7, 2)) == "T");
}

TEST_CASE("adt decided set components") {
  // accepted iff x^2 - 1 < 0: one interval
  GraphingRep g = interpret_adt(parse_adt("(test (- (* x1 x1) 1) yes no no)", 1));
  PolySystem s = extract_polysystem(g, {0}, {{0, 1}});
  CHECK(count_components_1d(s) == 1);

  // accepted iff x(x-1)(x+1) > 0: two intervals
  GraphingRep h = interpret_adt(
      parse_adt("(test (* x1 (* (- x1 1) (+ x1 1))) no no yes)", 1, 3));
  PolySystem s2 = extract_polysystem(h, {2}, {{0, 1}});
  CHECK(count_components_1d(s2) == 2);
}

TEST_CASE("act parsing") {
  const char* src =
      "(let v1 (- x1 x2)"
      " (let v2 (- x1 x3)"
      "  (let v3 (- x2 x3)"
      "   (let v4 (* v1 v2)"
      "    (let v5 (* v4 v3)"
      "     (branch (= v5) no yes))))))";
  AlgComputationTree t = parse_act(src, 3);
  CHECK(t.nodes.size() == 8);
  CHECK(t.height() == 6);
  CHECK(t.nodes[0].kind == ActNode::Kind::Let);
  CHECK(t.nodes[0].target == 4);

  CHECK_THROWS(parse_act("(let v1 (+ v2 x1) yes)", 1));   // v2 not computed
  CHECK_THROWS(parse_act("(branch (> 3) yes no)", 1));    // constant test
  CHECK_THROWS(parse_act("(let v1 (% x1 x1) yes)", 1));
}

TEST_CASE("act interpretation") {
  // element distinctness: accepted iff (x1-x2)(x1-x3)(x2-x3) != 0
  const char* src =
      "(let v1 (- x1 x2)"
      " (let v2 (- x1 x3)"
      "  (let v3 (- x2 x3)"
      "   (let v4 (* v1 v2)"
      "    (let v5 (* v4 v3)"
      "     (branch (= v5) no yes))))))";
  GraphingRep g = interpret_act(parse_act(src, 3));
  CHECK(is_deterministic(g));
  CHECK(is_treeing(g));
  CHECK(algebraic_degree(g) == 1);

  auto run = [&](long a, long b, long c) {
    Memory m;
    m.set({0, 1}, Rat(a));
    m.set({0, 2}, Rat(b));
    m.set({0, 3}, Rat(c));
    return iterate(g, {m, "4"}, 10).back();
  };
  ConfigPoint done = run(1, 2, 3);
  CHECK(done.state == "T");
  CHECK(done.mem.get({0, 8}) == Rat(-2));  // f5 = (-1)(-2)(-1)
  CHECK(run(1, 2, 1).state == "F");
}

TEST_CASE("act guarded operations") {
  GraphingRep g =
      interpret_act(parse_act("(let v1 (/ x1 x2) (branch (> v1) yes no))", 2));
  bool found = false;
  for (const auto& e : g.edges)
    if (!e.realiser.empty() && e.realiser[0].rfind("div(", 0) == 0) {
      found = true;
      CHECK(e.source == Region::sign_of({0, 2}, Rel::Ne));
    }
  CHECK(found);

  GraphingRep h =
      interpret_act(parse_act("(let v1 (sqrt x1) (branch (>= v1) yes no))", 1));
  found = false;
  for (const auto& e : h.edges)
    if (!e.realiser.empty() && e.realiser[0].rfind("sqrt(", 0) == 0) {
      found = true;
      CHECK(e.source == Region::sign_of({0, 1}, Rel::Ge));
    }
  CHECK(found);

  // constant folding on the right operand
  GraphingRep k =
      interpret_act(parse_act("(let v1 (/ x1 2) (branch (> v1) yes no))", 1));
  Memory m;
  m.set({0, 1}, Rat(5));
  auto trace = iterate(k, {m, "2"}, 5);
  CHECK(trace.back().state == "T");
  CHECK(trace.back().mem.get({0, 2}) == make_rat(5, 2));
}

TEST_CASE("bound formulas") {
  CHECK(benor_bound(2, 1, 1) == 6);
  CHECK(benor_bound(2, 2, 1) == 18);
  CHECK(benor_bound(3, 1, 0) == 3);
  CHECK_THROWS(benor_bound(1, 1, 1));

  CHECK(steele_yao_bound(1, 2, 1) == 12);
  CHECK(steele_yao_bound(0, 2, 1) == 2);
  CHECK(steele_yao_bound(2, 2, 2) == 216);

  CHECK(graphing_benor_bound(1, 1, 1, 1) == 162);
  CHECK(graphing_benor_bound(1, 2, 1, 1) == 1458);
  CHECK(graphing_benor_bound(4, 1, 1, 1) == 648);
  CHECK_THROWS(graphing_benor_bound(1, 0, 1, 1));
}

TEST_CASE("polysystem extraction") {
  auto amc = std::make_shared<Amc>(act_amc({"mul(5,1,2)", "div(3,1,2)"}));

  GraphingRep g;
  g.amc = amc;
  g.states = {"a", "b", "c"};
  g.edges.push_back({Region::whole(), "a", {"mul(5,1,2)"}, "b"});
  g.edges.push_back({Region::sign_of({0, 5}, Rel::Eq), "b", {}, "c"});

  PolySystem s = extract_polysystem(g, {0, 1}, {{0, 1}, {0, 2}});
  CHECK(s.input_vars.size() == 2);
  CHECK(s.var_names.size() == 3);  // two inputs plus the mul result
  CHECK(s.equation_count() == 2);
  CHECK(s.max_degree() == 2);
  REQUIRE(s.constraints.size() == 2);
  CHECK(s.constraints[0].defines == 2);
  CHECK(s.constraints[0].poly == X(2) - X(0) * X(1));
  CHECK(s.constraints[0].provenance.find("edge 0") != std::string::npos);
  CHECK(s.constraints[1].poly == X(2));
  CHECK_FALSE(s.constraints[1].defines.has_value());

  // division: the guard becomes a fresh z with z*x2 - 1 = 0
  GraphingRep h;
  h.amc = amc;
  h.states = {"a", "b"};
  h.edges.push_back(
      {Region::sign_of({0, 2}, Rel::Ne), "a", {"div(3,1,2)"}, "b"});
  PolySystem sd = extract_polysystem(h, {0}, {{0, 1}, {0, 2}});
  CHECK(sd.equation_count() == 2);
  CHECK(sd.max_degree() == 2);
  CHECK(sd.var_names.size() == 4);
  CHECK(sd.constraints[0].poly == X(2) * X(1) - C(1));
  CHECK(sd.constraints[0].defines == 2);
  CHECK(sd.constraints[1].poly == X(3) * X(1) - X(0));

  // empty path
  PolySystem se = extract_polysystem(g, {}, {{0, 1}});
  CHECK(se.constraints.empty());
  CHECK(se.var_names.size() == 1);
}

TEST_CASE("polysystem extraction sqrt") {
  auto amc = std::make_shared<Amc>(act_amc({"sqrt(2,1)"}));
  GraphingRep g;
  g.amc = amc;
  g.states = {"a", "b"};
  g.edges.push_back({Region::sign_of({0, 1}, Rel::Ge), "a", {"sqrt(2,1)"}, "b"});
  PolySystem s = extract_polysystem(g, {0}, {{0, 1}});
  REQUIRE(s.constraints.size() == 3);
  CHECK(s.constraints[0].rel == Rel::Ge);   // radicand guard
  CHECK(s.constraints[1].poly == X(1) * X(1) - X(0));
  CHECK(s.constraints[2].rel == Rel::Ge);   // root branch choice
  CHECK(s.max_degree() == 2);
}

namespace {

GraphingRep one_division_treeing() {
  GraphingRep t;
  t.amc = std::make_shared<Amc>(sram_amc({"euclidiv(1,1,2)"}));
  t.states = {"1", "2"};
  t.top = "2";
  t.edges.push_back({Region::whole(), "1", {"euclidiv(1,1,2)"}, "2"});
  return t;
}

}  // namespace

TEST_CASE("real mate construction") {
  GraphingRep t = one_division_treeing();
  RealMate m = real_mate(t);
  CHECK(m.division_edges == std::vector<std::size_t>{0});
  CHECK(m.y_block == 2);
  CHECK(m.graphing.states.size() == 8);
  CHECK(m.graphing.edges.size() == 4);
  CHECK(is_treeing(m.graphing));
  CHECK(is_deterministic(m.graphing));
  for (auto kind : m.graphing.amc->space.blocks) CHECK(kind == BlockKind::Real);

  // non-treeings are rejected
  GraphingRep loop = t;
  loop.edges.push_back({Region::whole(), "2", {}, "1"});
  CHECK_THROWS(real_mate(loop));

  // a division buried in a longer word is rejected
  GraphingRep w = one_division_treeing();
  w.edges[0].realiser = {"euclidiv(1,1,2)", "euclidiv(1,1,2)"};
  CHECK_THROWS(real_mate(w));
}

TEST_CASE("real mate agreement") {
  GraphingRep t = one_division_treeing();
  RealMate m = real_mate(t);

  auto start = [](long a, long b) {
    Memory mem;
    mem.set({1, 1}, Rat(a));
    mem.set({1, 2}, Rat(b));
    return ConfigPoint{mem, "1"};
  };

  // 7 div 2: witness remainder 1, (7 - 1)/2 = 3
  ConfigPoint p = start(7, 2);
  Memory seeded = seed_witnesses(t, m, p, 10);
  CHECK(seeded.get({2, 2}) == Rat(1));
  auto trace = iterate(m.graphing, {seeded, "1|1"}, 10);
  CHECK(trace.back().state == "2|1");
  CHECK(trace.back().mem.get({1, 1}) == Rat(3));

  // zero divisor: the remainder guess cannot pass the y < x_k guard
  ConfigPoint z = start(7, 0);
  Memory zs = seed_witnesses(t, m, z, 10);
  CHECK(iterate(m.graphing, {zs, "1|1"}, 10).back().state != "2|1");

  // negative divisor: remainder is nonnegative, so the y < x_k guard fails
  ConfigPoint n = start(7, -2);
  Memory ns = seed_witnesses(t, m, n, 10);
  CHECK(iterate(m.graphing, {ns, "1|1"}, 10).back().state != "2|1");

  std::mt19937 rng(0xB10B);
  std::uniform_int_distribution<long> av(-50, 50);
  std::uniform_int_distribution<long> bv(1, 9);
  for (int i = 0; i < 100; ++i) {
    long a = av(rng);
    long b = bv(rng);
    ConfigPoint q = start(a, b);
    Rat expect = Rat(euclidean_div(Int(a), Int(b)));
    Memory ws = seed_witnesses(t, m, q, 10);
    auto tr = iterate(m.graphing, {ws, "1|1"}, 10);
    REQUIRE(tr.back().state == "2|1");
    CHECK(tr.back().mem.get({1, 1}) == expect);
  }
}

TEST_CASE("real mate two divisions") {
  // x1 := x1 div x2; then x3 := x1 div x4
  GraphingRep t;
  t.amc = std::make_shared<Amc>(
      sram_amc({"euclidiv(1,1,2)", "euclidiv(3,1,4)"}));
  t.states = {"1", "2", "3"};
  t.edges.push_back({Region::whole(), "1", {"euclidiv(1,1,2)"}, "2"});
  t.edges.push_back({Region::whole(), "2", {"euclidiv(3,1,4)"}, "3"});
  RealMate m = real_mate(t);
  CHECK(m.division_edges.size() == 2);

  Memory mem;
  mem.set({1, 1}, Rat(29));
  mem.set({1, 2}, Rat(3));
  mem.set({1, 4}, Rat(4));
  Memory ws = seed_witnesses(t, m, {mem, "1"}, 10);
  CHECK(ws.get({2, 2}) == Rat(2));  // 29 - 3*9
  CHECK(ws.get({2, 4}) == Rat(1));  // 9 - 4*2
  auto tr = iterate(m.graphing, {ws, "1|1"}, 20);
  CHECK(tr.back().state == "3|1");
  CHECK(tr.back().mem.get({1, 1}) == Rat(9));
  CHECK(tr.back().mem.get({1, 3}) == Rat(2));
}

TEST_CASE("one dimensional component oracle") {
  CHECK(count_components_1d(one_var_system(
            {{X() * (X() - C(1)) * (X() - C(2)), Rel::Gt}})) == 2);
  CHECK(count_components_1d(one_var_system({{X() * X(), Rel::Le}})) == 1);
  CHECK(count_components_1d(one_var_system({{X() * X() + C(1), Rel::Eq}})) == 0);

  // second bit of x on (0,8): four odd-floor intervals
  MultiPoly prod = C(1);
  for (long i = 1; i <= 8; ++i) prod = prod * (X() - C(i));
  CHECK(count_components_1d(one_var_system(
            {{prod, Rel::Lt}, {X(), Rel::Gt}, {X() - C(8), Rel::Lt}})) == 4);

  // defined variable unwinds: v = x^2, v - 2 > 0
  PolySystem s;
  s.var_names = {"x", "v"};
  s.input_vars = {0};
  s.constraints.push_back({X(1) - X(0) * X(0), Rel::Eq, "", 1});
  s.constraints.push_back({X(1) - C(2), Rel::Gt, "", std::nullopt});
  CHECK(count_components_1d(s) == 2);

  // division define: v*x = 1 then v > 0 means x > 0
  PolySystem d;
  d.var_names = {"x", "v"};
  d.input_vars = {0};
  d.constraints.push_back({X(1) * X(0) - C(1), Rel::Eq, "", 1});
  d.constraints.push_back({X(1), Rel::Gt, "", std::nullopt});
  CHECK(count_components_1d(d) == 1);

  PolySystem two;
  two.var_names = {"x", "y"};
  two.input_vars = {0, 1};
  CHECK_THROWS(count_components_1d(two));
}

TEST_CASE("grid component estimate") {
  GridBox box;
  box.bounds = {{Rat(-2), Rat(2)}, {Rat(-2), Rat(2)}};

  PolySystem disk;
  disk.var_names = {"x", "y"};
  disk.input_vars = {0, 1};
  disk.constraints.push_back(
      {X(0) * X(0) + X(1) * X(1) - C(1), Rel::Lt, "", std::nullopt});
  CHECK(count_components_grid(disk, box, 50) == 1);

  PolySystem slabs = disk;
  slabs.constraints = {{X(0) * X(0) - C(1), Rel::Gt, "", std::nullopt}};
  CHECK(count_components_grid(slabs, box, 50) == 2);

  PolySystem empty_set = disk;
  empty_set.constraints = {
      {X(0) * X(0) + X(1) * X(1) + C(1), Rel::Lt, "", std::nullopt}};
  CHECK(count_components_grid(empty_set, box, 20) == 0);

  PolySystem whole = disk;
  whole.constraints.clear();
  CHECK(count_components_grid(whole, box, 20) == 1);

  // defined variable: v = x*y, v > 1 picks the two hyperbola lobes
  PolySystem hyp;
  hyp.var_names = {"x", "y", "v"};
  hyp.input_vars = {0, 1};
  hyp.constraints.push_back({X(2) - X(0) * X(1), Rel::Eq, "", 2});
  hyp.constraints.push_back({X(2) - C(1), Rel::Gt, "", std::nullopt});
  GridBox big;
  big.bounds = {{Rat(-3), Rat(3)}, {Rat(-3), Rat(3)}};
  CHECK(count_components_grid(hyp, big, 60) == 2);
}

TEST_CASE("extraction size invariants") {
  // ACT run: vars <= n + path length + one per disequality guard
  const char* src =
      "(let v1 (* x1 x1)"
      " (let v2 (- v1 2)"
      "  (let v3 (/ x1 v2)"
      "   (branch (> v3) yes no))))";
  GraphingRep g = interpret_act(parse_act(src, 1));
  // follow the accepting run at x1 = 2: v2 = 2, v3 = 1 > 0
  Memory m;
  m.set({0, 1}, Rat(2));
  ConfigPoint p{m, "2"};
  std::vector<std::size_t> path;
  for (int i = 0; i < 10; ++i) {
    StepResult r = step(g, p);
    if (r.halted) break;
    path.push_back(*r.edge);
    p = std::move(r.point);
  }
  CHECK(p.state == "T");
  PolySystem s = extract_polysystem(g, path, {{0, 1}});
  CHECK(s.max_degree() <= 2);
  std::size_t guards = 0;
  for (const auto& c : s.constraints)
    if (!c.provenance.empty() && c.defines &&
        s.var_names[*c.defines][0] == 'z')
      ++guards;
  CHECK(s.var_names.size() <= 1 + path.size() + guards);
  CHECK(count_components_1d(s) == 2);  // x > sqrt(2) and -sqrt(2) < x < 0
}
