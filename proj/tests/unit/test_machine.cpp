#include "doctest.h"
#include "gmx/machine.hpp"

#include <random>
#include <sstream>

using namespace gmx;

TEST_CASE("parsing round-trips") {
  std::string text =
      "1: X1 := 2\n"
      "2: X2 := X1 * X1\n"
      "3: if X1 = 0 goto 5 else 4\n"
      "4: X1 := #X2\n"
      "5: #X1 := X2\n"
      "6: X3 := X1 - X2\n"
      "7: skip\n";
  SramProgram m = parse_sram(text);
  CHECK(m.commands.size() == 7);
  CHECK(m.commands[2].kind == SramCommand::Kind::Cond);
  CHECK(m.commands[3].kind == SramCommand::Kind::ReadRef);
  CHECK(print_sram(m) == text);
  CHECK(print_sram(parse_sram(print_sram(m))) == print_sram(m));

  CHECK_THROWS(parse_sram("1: X1 := ??\n"));
  CHECK_THROWS(parse_sram("2: skip\n"));                 // labels not from 1
  CHECK_THROWS(parse_sram("1: if X1 = 0 goto 9 else 2")); // target out of range

  PramProgram p = parse_pram("1: skip\n---\n1: X1 := 3\n");
  CHECK(p.processors.size() == 2);
  CHECK(print_pram(parse_pram(print_pram(p))) == print_pram(p));
}

TEST_CASE("sram_step semantics") {
  SramProgram m = parse_sram(
      "1: X1 := 5\n"
      "2: X2 := 9\n"
      "3: #X1 := X2\n"
      "4: X3 := #X2\n"
      "5: if X3 = 0 goto 1 else 6\n");
  MachineConfig cfg;
  cfg.mem.ensure_blocks(2);
  cfg.labels = {1};
  cfg = sram_step(m, cfg);
  cfg = sram_step(m, cfg);
  CHECK(cfg.mem.get({1, 1}) == Rat(5));
  CHECK(cfg.mem.get({1, 2}) == Rat(9));
  cfg = sram_step(m, cfg);  // writeref: shared[5] := 9
  CHECK(cfg.mem.get({0, 5}) == Rat(9));
  cfg = sram_step(m, cfg);  // readref: X3 := shared[9] = 0
  CHECK(cfg.mem.get({1, 3}) == Rat(0));
  CHECK(cfg.labels[0] == 5);
  cfg = sram_step(m, cfg);  // cond: X3 = 0, jump to 1
  CHECK(cfg.labels[0] == 1);

  // halted configs stall
  cfg.labels = {6};
  MachineConfig same = sram_step(m, cfg);
  CHECK(same == cfg);
}

TEST_CASE("euclidean division in the interpreter") {
  SramProgram m = parse_sram("1: X3 := X1 / X2\n");
  MachineConfig cfg;
  cfg.mem.ensure_blocks(2);
  cfg.labels = {1};
  cfg.mem.set({1, 1}, Rat(7));
  cfg.mem.set({1, 2}, Rat(2));
  CHECK(sram_step(m, cfg).mem.get({1, 3}) == Rat(3));
  cfg.mem.set({1, 2}, Rat(0));
  CHECK(sram_step(m, cfg).mem.get({1, 3}) == Rat(0));
}

TEST_CASE("pram_step write conflicts") {
  // both processors write shared cell 0 in their first step
  PramProgram p = parse_pram(
      "1: X1 := 0\n"
      "2: X2 := 5\n"
      "3: #X1 := X2\n"
      "---\n"
      "1: X1 := 0\n"
      "2: X2 := 7\n"
      "3: #X1 := X2\n");
  MachineConfig cfg = initial_config(p, {});
  cfg = pram_step(p, pram_step(p, pram_step(p, cfg)));
  CHECK(cfg.mem.get({0, 0}) == Rat(5));  // smallest index wins

  // distinct cells: both land
  PramProgram q = parse_pram(
      "1: X1 := 1\n2: #X1 := X1\n---\n1: X1 := 2\n2: #X1 := X1\n");
  MachineConfig c2 = initial_config(q, {});
  c2 = pram_step(q, pram_step(q, c2));
  CHECK(c2.mem.get({0, 1}) == Rat(1));
  CHECK(c2.mem.get({0, 2}) == Rat(2));

  // concurrent reads see the pre-step value
  PramProgram r = parse_pram(
      "1: X1 := #X2\n2: #X3 := X1\n---\n1: X1 := #X2\n");
  MachineConfig c3 = initial_config(r, {});
  c3.mem.set({0, 0}, Rat(42));
  c3.mem.set({1, 2}, Rat(0));
  c3.mem.set({2, 2}, Rat(0));
  c3 = pram_step(r, c3);
  CHECK(c3.mem.get({1, 1}) == Rat(42));
  CHECK(c3.mem.get({2, 1}) == Rat(42));

  // a step without shared writes leaves the shared block unchanged
  PramProgram s = parse_pram("1: X1 := 3\n---\n1: X2 := X1 + X1\n");
  MachineConfig c4 = initial_config(s, {9});
  MachineConfig c5 = pram_step(s, c4);
  CHECK(c5.mem.block(0) == c4.mem.block(0));
}

TEST_CASE("pram_step with one processor equals sram_step") {
  SramProgram m = parse_sram(
      "1: X1 := 4\n2: X2 := X1 * X1\n3: #X1 := X2\n4: X3 := #X1\n");
  PramProgram p{{m}};
  MachineConfig cfg = initial_config(p, {});
  for (int i = 0; i < 5; ++i) {
    CHECK(pram_step(p, cfg) == sram_step(m, cfg));
    cfg = sram_step(m, cfg);
  }
  CHECK(machine_halted(p, cfg));
}

TEST_CASE("compile_sram structure") {
  SramProgram m = parse_sram(
      "1: X1 := 2\n2: if X1 = 0 goto 1 else 3\n3: X2 := X1 / X1\n");
  GraphingRep g = compile_sram(m);
  CHECK(g.states.size() == 4);  // labels 1..3 plus halt
  CHECK(g.edges.size() == 4);   // two lines + cond pair
  CHECK(is_deterministic(g));
  CHECK(g.top == State("4"));
  // division edge is total: source Whole
  for (const auto& e : g.edges)
    if (!e.realiser.empty() && e.realiser[0].rfind("euclidiv", 0) == 0)
      CHECK(e.source.is_whole());
}

namespace {

SramProgram random_program(std::mt19937& rng, int lines) {
  std::uniform_int_distribution<int> kind(0, 6);
  std::uniform_int_distribution<long> reg(1, 4);
  std::uniform_int_distribution<long> cval(-9, 9);
  std::ostringstream os;
  for (int l = 1; l <= lines; ++l) {
    os << l << ": ";
    switch (kind(rng)) {
      case 0: os << "skip"; break;
      case 1: os << "X" << reg(rng) << " := " << cval(rng); break;
      case 2: os << "X" << reg(rng) << " := X" << reg(rng); break;
      case 3: {
        const char ops[] = {'+', '-', '*', '/'};
        os << "X" << reg(rng) << " := X" << reg(rng) << " "
           << ops[kind(rng) % 4] << " X" << reg(rng);
        break;
      }
      case 4: {
        // forward jumps only, so runs terminate
        std::uniform_int_distribution<int> target(l + 1, lines + 1);
        os << "if X" << reg(rng) << " = 0 goto " << target(rng) << " else "
           << target(rng);
        break;
      }
      case 5: os << "#X" << reg(rng) << " := X" << reg(rng); break;
      default: os << "X" << reg(rng) << " := #X" << reg(rng); break;
    }
    os << "\n";
  }
  return parse_sram(os.str());
}

}  // namespace

TEST_CASE("interpreter agrees with the compiled graphing") {
  std::mt19937 rng(0xB10B);
  std::uniform_int_distribution<int> lines(1, 10);
  std::uniform_int_distribution<long> input(0, 9);
  for (int trial = 0; trial < 20; ++trial) {
    SramProgram m = random_program(rng, lines(rng));
    GraphingRep g = compile_sram(m);
    PramProgram p{{m}};
    for (int run = 0; run < 10; ++run) {
      std::vector<Int> x{Int(input(rng)), Int(input(rng))};
      MachineConfig cfg = initial_config(p, x);
      ConfigPoint pt = initial_point(g, x);
      for (int s = 0; s < 40; ++s) {
        if (machine_halted(p, cfg)) break;
        cfg = pram_step(p, cfg);
        StepResult sr = step(g, pt);
        REQUIRE_FALSE(sr.halted);
        pt = sr.point;
        CHECK(pt.mem == cfg.mem);
        CHECK(pt.state == std::to_string(cfg.labels[0]));
      }
    }
  }
}

TEST_CASE("compile_pram") {
  SUBCASE("p=1 matches compile_sram up to renaming") {
    SramProgram m = parse_sram("1: X1 := 2\n2: if X1 = 0 goto 1 else 3\n");
    GraphingRep s = compile_sram(m);
    GraphingRep p = compile_pram(PramProgram{{m}});
    CHECK(p.states == s.states);
    CHECK(p.edges.size() == s.edges.size());
    CHECK(is_deterministic(p));
  }

  SUBCASE("disjoint private programs commute") {
    PramProgram p = parse_pram("1: X1 := 2\n---\n1: X2 := 3\n");
    GraphingRep g = compile_pram(p);
    for (const auto& e : g.edges) {
      if (e.realiser.size() != 2) continue;
      Word rev{e.realiser[1], e.realiser[0]};
      CHECK(normalize_word(g.amc->presentation, rev) ==
            normalize_word(g.amc->presentation, e.realiser));
    }
  }

  SUBCASE("conflicting shared writes split deterministically") {
    PramProgram p = parse_pram("1: #X1 := X2\n---\n1: #X1 := X2\n");
    GraphingRep g = compile_pram(p);
    CHECK(is_deterministic(g));
    std::mt19937 rng(0xB10B);
    std::uniform_int_distribution<long> v(0, 3);
    for (int trial = 0; trial < 100; ++trial) {
      MachineConfig cfg = initial_config(p, {});
      ConfigPoint pt = initial_point(g, {});
      for (int q = 1; q <= 2; ++q)
        for (long r = 1; r <= 2; ++r) {
          Rat val(v(rng));
          cfg.mem.set({q, r}, val);
          pt.mem.set({q, r}, val);
        }
      MachineConfig after = pram_step(p, cfg);
      StepResult sr = step(g, pt);
      REQUIRE_FALSE(sr.halted);
      CHECK(sr.point.mem == after.mem);
    }
  }

  SUBCASE("full cross-check on a mixed two-processor program") {
    PramProgram p = parse_pram(
        "1: X1 := #X2\n"
        "2: X1 := X1 + X1\n"
        "3: #X2 := X1\n"
        "---\n"
        "1: X1 := 1\n"
        "2: #X1 := X1\n"
        "3: X2 := #X1\n");
    GraphingRep g = compile_pram(p);
    CHECK(is_deterministic(g));
    std::mt19937 rng(0xB10B);
    std::uniform_int_distribution<long> v(0, 4);
    for (int trial = 0; trial < 100; ++trial) {
      MachineConfig cfg = initial_config(p, {Int(v(rng)), Int(v(rng))});
      ConfigPoint pt{cfg.mem, g.states.front()};
      pt.mem.ensure_blocks(3);
      while (!machine_halted(p, cfg)) {
        cfg = pram_step(p, cfg);
        StepResult sr = step(g, pt);
        REQUIRE_FALSE(sr.halted);
        pt = sr.point;
        CHECK(pt.mem == cfg.mem);
      }
      CHECK(pt.state == *g.top);
    }
  }
}

TEST_CASE("accepts") {
  // reaches the halt state iff input x1 is zero, spins otherwise
  SramProgram m = parse_sram(
      "1: X1 := 1\n"
      "2: X1 := #X1\n"
      "3: if X1 = 0 goto 5 else 4\n"
      "4: if X1 = 0 goto 4 else 4\n");
  GraphingRep g = compile_sram(m);
  CHECK(accepts(g, {Int(0)}, 10).accepted);
  AcceptResult r = accepts(g, {Int(3)}, 10);
  CHECK_FALSE(r.accepted);
  CHECK(r.timeout);
}
