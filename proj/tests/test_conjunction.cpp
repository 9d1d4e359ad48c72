#include <random>

#include "cslcg/conjunction.hpp"
#include "cslcg/error.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace cslcg;
using namespace cslcg::testing;

namespace {

ArenaPtr fig2() { return std::make_shared<const Arena>(load_model("fig2.lcg").arena); }
ArenaPtr fig3_sr() { return std::make_shared<const Arena>(coalition_arena(load_model("fig3.lcg").arena, {0, 1})); }

Conjunction conj(const ArenaPtr& a, const std::string& text) {
  auto f = parse_objective(a->alphabet, text);
  REQUIRE(f.single());
  return f.disjuncts[0];
}

RegularSet solve(const ArenaPtr& a, int p, const std::string& text) { return solve_conjunction(a, p, conj(a, text)).winning; }

}  // namespace

TEST_CASE("objective syntax") {
  auto a = fig2();
  auto f = parse_objective(a->alphabet, R"(AS F "l2.M*" & NZ G "L.M{0,3}")");
  REQUIRE(f.single());
  REQUIRE(f.disjuncts[0].atoms.size() == 2);
  CHECK(f.disjuncts[0].atoms[0].quantifier == Quantifier::AS);
  CHECK(f.disjuncts[0].atoms[1].path == PathKind::Always);
  CHECK(to_string(f) == R"(AS F "l2.M*" & NZ G "L.M{0,3}")");
  auto g = parse_objective(a->alphabet, "AS G 'L.M{0,2}' && AS F 'l2.M*' || NZ GF !\"l0.M*\"");
  CHECK(g.disjuncts.size() == 2);
  CHECK(to_string(parse_objective(a->alphabet, to_string(g))) == to_string(g));
  CHECK(g.disjuncts[1].atoms[0].target == complement(from_regex(a->alphabet, "l0.M*", SetKind::States)));

  for (const char* bad : {"XS F \"l0\"", "AS H \"l0\"", "AS F l0", "AS F \"l0", "AS F \"l9.M*\"", "AS F \"l0\" junk"}) {
    INFO(bad);
    CHECK_THROWS_AS(parse_objective(a->alphabet, bad), SyntaxError);
  }
  try {
    parse_objective(a->alphabet, "AS F \"l0.(a\"");
    FAIL("expected error");
  } catch (const SyntaxError& e) {
    CHECK(e.position() >= 6);
  }
}

TEST_CASE("negation into disjunctive normal form") {
  auto a = fig2();
  auto f = parse_objective(a->alphabet, R"(AS F "l2.M*" & AS G "L.M{0,3}")");
  auto n = negate(f);
  REQUIRE(n.disjuncts.size() == 2);
  CHECK(to_string(n) == R"(NZ G !"l2.M*" || NZ F !"L.M{0,3}")");
  auto nn = negate(n);
  // ¬(A ∨ B) = ¬A ∧ ¬B: one disjunct with both atoms restored
  REQUIRE(nn.disjuncts.size() == 1);
  CHECK(to_string(nn) == to_string(f));
  auto two = parse_objective(a->alphabet, R"(NZ F "l0" & NZ F "l1" || NZ G "l2.M*")");
  CHECK(negate(two).disjuncts.size() == 2);
  CHECK_THROWS_AS(negate(parse_objective(a->alphabet, R"(AS GF "l0.M*")")), FragmentError);
}

TEST_CASE("fragment checks") {
  auto a = fig2();
  CHECK_THROWS_AS(solve_conjunction(a, 0, conj(a, R"(AS GF "l0.M*" & AS F "l1.M*")")), FragmentError);
  CHECK_THROWS_AS(solve_conjunction(a, 0, conj(a, R"(NZ GF "l0.M*")")), FragmentError);
  CHECK_NOTHROW(solve_conjunction(a, 0, conj(a, R"(AS GF "l0.M*")")));
  auto one = std::make_shared<const Arena>(coalition_arena(*a, {0, 1}));
  CHECK(is_one_and_half(*one, 0));
  CHECK_NOTHROW(solve_conjunction(one, 0, conj(one, R"(AS GF "l0.M*" & AS F "l1.M*")")));
  CHECK_THROWS_AS(solve_formula(a, 0, parse_objective(a->alphabet, R"(AS F "l0" || AS F "l1")")), FragmentError);
}

TEST_CASE("singleton conjunctions match the zero-sum solvers") {
  auto a = fig2();
  auto v = GameView::of(a);
  for (const char* re : {"l2.M*", "L.M*aM*", "L.aaa|l2.M*", "l0.M{0,2}"}) {
    RegularSet r = from_regex(a->alphabet, re, SetKind::States);
    std::string q = std::string("\"") + re + "\"";
    for (int p = 0; p < 2; ++p) {
      INFO(re << " player " << p);
      CHECK(solve(a, p, "AS G " + q) == as_safe(v, p, r).winning);
      CHECK(solve(a, p, "AS F " + q) == as_reach(v, p, r).winning);
      CHECK(solve(a, p, "NZ F " + q) == nz_reach(v, p, r).winning);
      CHECK(solve(a, p, "NZ G " + q) == nz_safe(v, p, r).winning);
      CHECK(solve(a, p, "AS GF " + q) == as_buchi(v, p, r).winning);
    }
  }
}

TEST_CASE("sender and receiver keep the channel short and reach lF") {
  auto a = fig3_sr();
  auto r = solve_conjunction(a, 0, conj(a, R"(AS G "L.M{0,2}" & AS F "lF.M*")"));
  CHECK_FALSE(r.inconsistent);
  CHECK(initial_in(*a, r.winning));
  CHECK(initial_in(*a, solve(a, 0, R"(AS G "L.M{0,1}" & AS F "lF.M*")")));
  // the attacker alone cannot force a long channel against the coalition
  CHECK_FALSE(initial_in(*a, solve(a, 1, R"(NZ F "L.M{3,}")")));
}

TEST_CASE("conjunction laws") {
  std::vector<std::pair<ArenaPtr, std::vector<std::string>>> cases = {
      {fig2(), {R"(AS F "L.aaa|l2.M*")", R"(AS G "L.M{0,3}")", R"(NZ F "l2.c")", R"(NZ G "l0.M*|l1.M*")", R"(AS F "l0.M*b")"}},
      {fig3_sr(), {R"(AS G "L.M{0,2}")", R"(AS F "lF.M*")", R"(NZ F "la.M*")", R"(NZ G "L.M{0,1}")"}},
  };
  for (const auto& [a, atoms] : cases)
    for (int p = 0; p < 2; ++p)
      for (std::size_t x = 0; x < atoms.size(); ++x)
        for (std::size_t y = x + 1; y < atoms.size(); ++y) {
          INFO(atoms[x] << " & " << atoms[y] << " player " << p);
          RegularSet both = solve(a, p, atoms[x] + " & " + atoms[y]);
          CHECK(subset_of(both, solve(a, p, atoms[x])));
          CHECK(subset_of(both, solve(a, p, atoms[y])));
          CHECK(both == solve(a, p, atoms[y] + " & " + atoms[x]));
          CHECK(both == solve(a, p, atoms[x] + " & " + atoms[y] + " & " + atoms[x]));
        }
}

TEST_CASE("contradictions are detected before solving") {
  auto a = fig2();
  auto r = solve_conjunction(a, 0, conj(a, R"(AS F "l2.M*" & NZ G !"l2.M*")"));
  CHECK(r.inconsistent);
  CHECK(r.winning.is_empty());
  CHECK(syntactically_inconsistent(conj(a, R"(AS G "L.M{0,2}" & NZ F "L.M{3,}")")));
  CHECK(syntactically_inconsistent(conj(a, R"(AS G "l0.M*" & AS F "l1.M*")")));
  CHECK_FALSE(syntactically_inconsistent(conj(a, R"(AS G "L.M{0,2}" & NZ F "L.M{2,}")")));
}

TEST_CASE("positive safety next to almost-sure reachability") {
  auto a = fig2();
  // staying in l0·b* with positive probability while a is eventually sent
  // needs the a-send to happen from a b*-state: never within L·(b|c)*
  RegularSet r = solve(a, 0, R"(AS F "L.M*aM*" & NZ G "L.(b|c)*")");
  CHECK(r.is_empty());
  // reaching l2 with positive probability while staying short
  RegularSet s = solve(a, 1, R"(NZ F "l2.M*" & NZ G "L.M{0,3}")");
  CHECK(initial_in(*a, s));
  // the positive-safety branch must reach its goal inside the safe set
  RegularSet t = solve(a, 1, R"(AS F "l1.M*" & NZ G "l0.M*|l1.M*")");
  CHECK(initial_in(*a, t));
  CHECK(subset_of(t, solve(a, 1, R"(AS F "l1.M*")")));
}

TEST_CASE("generalized Büchi degeneralization") {
  auto a = fig2();
  auto al = a->alphabet;
  RegularSet r1 = from_regex(al, "l0.M*", SetKind::States);
  RegularSet r2 = from_regex(al, "l1.M*", SetKind::States);
  auto [one, t1] = buchi_degeneralize(a, {r1});
  CHECK(one->monitor().trivial());
  CHECK(t1 == r1);
  auto [same, ts] = buchi_degeneralize(a, {r1, r1});
  auto direct = as_buchi(GameView::of(a), 1, r1).winning;
  CHECK(same->project(as_buchi(GameView(same), 1, ts).winning) == direct);
  auto [two, t12] = buchi_degeneralize(a, {r1, r2});
  CHECK(two->monitor().num_states == 4);
  RegularSet both = two->project(as_buchi(GameView(two), 1, t12).winning);
  CHECK(subset_of(both, direct));
  CHECK(subset_of(both, as_buchi(GameView::of(a), 1, r2).winning));
  auto one_half = std::make_shared<const Arena>(coalition_arena(*a, {0, 1}));
  RegularSet gen = solve(one_half, 0, R"(AS GF "l0.M*" & AS GF "l1.M*")");
  CHECK(initial_in(*a, gen));
  CHECK_FALSE(initial_in(*a, solve(one_half, 0, R"(AS GF "l0.M*" & AS GF "l2.M*")")));
}

TEST_CASE("disjunctions of positive objectives") {
  auto a = fig2();
  auto f = parse_objective(a->alphabet, R"(NZ F "l2.c" || NZ G "l0.M*")");
  auto r = solve_formula(a, 1, f);
  CHECK(r.winning == unite(solve(a, 1, R"(NZ F "l2.c")"), solve(a, 1, R"(NZ G "l0.M*")")));
}
