#include "doctest.h"
#include "gmx/poly.hpp"

#include <random>

using namespace gmx;

namespace {

UniPoly from_longs(std::initializer_list<long> cs) {
  std::vector<Rat> v;
  for (long c : cs) v.emplace_back(c);
  return UniPoly(std::move(v));
}

}  // namespace

TEST_CASE("univariate arithmetic and evaluation") {
  UniPoly p = from_longs({-2, 0, 1});  // x^2 - 2
  CHECK(p.degree() == 2);
  CHECK(p.eval(Rat(2)) == Rat(2));
  CHECK(p.sign_at(Rat(1)) == -1);
  CHECK(p.sign_at(Rat(2)) == 1);
  UniPoly q = p * p - p;
  CHECK(q.eval(Rat(3)) == Rat(7 * 7 - 7));
}

TEST_CASE("derivatives") {
  UniPoly x4 = UniPoly::monomial(Rat(1), 4);
  CHECK(x4.derivative(2) == from_longs({0, 0, 12}));   // 12x^2
  CHECK(x4.derivative(3) == from_longs({0, 24}));      // 24x
  CHECK(UniPoly::constant(Rat(5)).derivative().is_zero());
}

TEST_CASE("root isolation via sturm") {
  UniPoly p = from_longs({-2, 0, 1});  // x^2 - 2
  auto roots = isolate_roots(p, {{Rat(0), Rat(2)}});
  REQUIRE(roots.size() == 1);
  // interval brackets sqrt(2)
  auto iv = refine_root(p, roots[0], make_rat(1, 1000));
  CHECK(iv.lo * iv.lo <= Rat(2));
  CHECK(iv.hi * iv.hi >= Rat(2));

  UniPoly no_real = from_longs({1, 0, 1});  // x^2 + 1
  CHECK(isolate_roots(no_real).empty());

  // x(x-1)(x-2)
  UniPoly cubic = UniPoly::variable() * from_longs({-1, 1}) * from_longs({-2, 1});
  auto r3 = isolate_roots(cubic, {{Rat(-1), Rat(3)}});
  CHECK(r3.size() == 3);

  CHECK_THROWS(isolate_roots(UniPoly()));
}

TEST_CASE("root isolation: each interval holds exactly one root") {
  std::mt19937 rng(0xB10B);
  std::uniform_int_distribution<long> d(-5, 5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Rat> cs;
    for (int i = 0; i < 6; ++i) cs.emplace_back(d(rng));
    UniPoly p(std::move(cs));
    if (p.is_zero() || p.degree() < 1) continue;
    UniPoly sf = p.squarefree_part();
    auto seq = sturm_sequence(p);
    auto roots = isolate_roots(p);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (roots[i].is_point()) {
        CHECK(p.sign_at(roots[i].lo) == 0);
      } else {
        CHECK(sturm_count(seq, roots[i].lo, roots[i].hi) == 1);
      }
      if (i > 0) CHECK(roots[i - 1].hi <= roots[i].lo);
    }
    // total count matches Sturm over the full bound
    Rat b = root_bound(sf);
    int total = sturm_count(seq, -b, b) + (sf.sign_at(-b) == 0 ? 1 : 0);
    CHECK(static_cast<int>(roots.size()) == total);
  }
}

TEST_CASE("interval component counting") {
  UniPoly cubic = UniPoly::variable() * from_longs({-1, 1}) * from_longs({-2, 1});
  CHECK(count_interval_components({{cubic, Rel::Gt}}) == 2);
  UniPoly x2 = UniPoly::monomial(Rat(1), 2);
  CHECK(count_interval_components({{x2, Rel::Le}}) == 1);  // the point 0
  CHECK(count_interval_components({{x2, Rel::Lt}}) == 0);
  CHECK(count_interval_components({{x2, Rel::Ne}}) == 2);
  // conjunction across two polynomials with interleaved roots
  UniPoly a = from_longs({-1, 0, 1});            // x^2-1, roots -1, 1
  UniPoly b = from_longs({0, 1});                // x
  CHECK(count_interval_components({{a, Rel::Lt}, {b, Rel::Gt}}) == 1);  // (0,1)
  CHECK(count_interval_components({{a, Rel::Gt}, {b, Rel::Gt}}) == 1);  // (1,inf)
  // empty constraint list: whole domain, one component
  CHECK(count_interval_components({}, {{Rat(0), Rat(1)}}) == 1);
}

TEST_CASE("multivariate polynomials") {
  MultiPoly x = MultiPoly::variable(0);
  MultiPoly y = MultiPoly::variable(1);
  MultiPoly p = x * y - MultiPoly::constant(Rat(1));
  CHECK(p.sign_at({Rat(1), Rat(1)}) == 0);
  CHECK(p.sign_at({Rat(2), Rat(1)}) == 1);
  CHECK(p.total_degree() == 2);

  MultiPoly sphere = x * x + y * y;
  CHECK(sphere.partial_derivative(0) == x.scale(Rat(2)));

  MultiPoly sub = p.substitute(1, x);  // x^2 - 1
  auto uni = sub.as_univariate(0);
  REQUIRE(uni.has_value());
  CHECK(uni->degree() == 2);
  CHECK(uni->eval(Rat(3)) == Rat(8));

  CHECK(p.as_univariate(0) == std::nullopt);
  CHECK(sub.sole_variable() == std::size_t{0});
}
