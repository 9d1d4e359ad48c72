#include "cslcg/arena.hpp"
#include "cslcg/error.hpp"
#include "cslcg/model.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace cslcg;
using namespace cslcg::testing;

TEST_CASE("bundled models parse and validate") {
  auto f2 = load_model("fig2.lcg");
  CHECK(f2.arena.num_agents() == 2);
  CHECK(f2.arena.alphabet->num_locations() == 3);
  auto r2 = validate(f2.arena);
  CHECK(r2.ok());
  CHECK_FALSE(r2.notes.empty());
  auto f3 = load_model("fig3.lcg");
  CHECK(f3.arena.num_agents() == 3);
  CHECK(validate(f3.arena).ok());
  CHECK(f3.goals.size() == 3);
}

TEST_CASE("validation reports violations") {
  auto base = load_model("fig2.lcg");
  SUBCASE("row sum") {
    Arena a = base.arena;
    a.table[0][0][0].probability = Rational(9, 10);
    auto r = validate(a);
    CHECK_FALSE(r.ok());
    CHECK(r.violations.front().find("sums to 9/10") != std::string::npos);
  }
  SUBCASE("duplicate action") {
    Arena a = base.arena;
    a.actions[1][2] = "a";
    a.reset_table();
    for (auto& per : a.table)
      for (auto& row : per) row = {Outcome{1, 0, ChannelOp::nop()}};
    auto r = validate(a);
    CHECK_FALSE(r.ok());
  }
  SUBCASE("missing row") {
    Arena a = base.arena;
    a.table[2][1].clear();
    CHECK_FALSE(validate(a).ok());
  }
  SUBCASE("empty allowed set") {
    auto m = parse_model_text(
        "agents p q\nlocations l\nmessages a\nactions p x\nactions q y\nrow l (*,*) -> (l, pop a)\n");
    auto r = validate(m.arena);
    CHECK_FALSE(r.ok());
  }
  SUBCASE("ambiguous ownership") {
    auto m = parse_model_text(
        "agents p q\nlocations l\nmessages a b\nactions p x y\nactions q u v\n"
        "row l (x,u) -> (l, pop a)\nrow l (*,*) -> (l, nop)\n");
    CHECK_FALSE(validate(m.arena).ok());
  }
}

TEST_CASE("model syntax errors carry positions") {
  CHECK_THROWS_AS(parse_model_text("agents p\nlocations l\nmessages a\nactions p x\nrow l (z) -> (l, nop)\n"), SyntaxError);
  CHECK_THROWS_AS(parse_model_text("agents p\nlocations l\nmessages a\nactions p x\nrow l (x) -> (l, push z)\n"), SyntaxError);
  CHECK_THROWS_AS(parse_model_text("agents p\nlocations l\nmessages a\nactions p x\nbogus\n"), SyntaxError);
  try {
    parse_model_text("agents p\nlocations l\nmessages a\nactions p x\nrow l (x) -> 1/0: (l, nop)\n");
    FAIL("expected error");
  } catch (const SyntaxError& e) {
    CHECK(e.position() > 0);
  }
}

TEST_CASE("model round trip") {
  for (const char* f : {"fig2.lcg", "fig3.lcg"}) {
    auto m = load_model(f);
    auto printed = print_model(m);
    auto again = parse_model_text(printed);
    CHECK(print_model(again) == printed);
    CHECK(again.arena.table.size() == m.arena.table.size());
  }
}

TEST_CASE("allowed actions on the bundled games") {
  auto f2 = load_model("fig2.lcg").arena;
  // l1 with empty channel: attacker b pops c and is disallowed
  CHECK(allowed_actions(f2, State{1, {}}, 0) == std::vector<int>{0, 1});
  CHECK(allowed_actions(f2, State{1, {}}, 1) == std::vector<int>{0, 2});
  CHECK(allowed_actions(f2, State{1, {0, 2}}, 1) == std::vector<int>{0, 1, 2});
  CHECK(allowed_actions(f2, State{0, {1}}, 1) == std::vector<int>{0, 1, 2});
  auto al = f2.alphabet;
  CHECK(allowed_region(f2, 1, 1) == from_regex(al, "l0.M*|l1.M*c|l2.M*", SetKind::States));
  CHECK(allowed_region(f2, 0, 0) == RegularSet::universe(al, SetKind::States));

  auto f3 = load_model("fig3.lcg").arena;
  int la = *f3.alphabet->find_location("la");
  auto r = allowed_actions(f3, State{la, {}}, 1);
  CHECK(std::find(r.begin(), r.end(), 2) == r.end());
  r = allowed_actions(f3, State{la, {1, 0}}, 1);
  CHECK(std::find(r.begin(), r.end(), 2) != r.end());
}

TEST_CASE("allowed_region agrees with enumeration") {
  for (const char* f : {"fig2.lcg", "fig3.lcg"}) {
    auto a = load_model(f).arena;
    for (int i = 0; i < a.num_agents(); ++i) {
      std::vector<RegularSet> regions;
      for (int act = 0; act < a.num_actions(i); ++act) regions.push_back(allowed_region(a, i, act));
      for (const auto& s : all_states(*a.alphabet, 3)) {
        auto acts = allowed_actions(a, s, i);
        for (int act = 0; act < a.num_actions(i); ++act) {
          bool in = std::find(acts.begin(), acts.end(), act) != acts.end();
          CHECK(regions[static_cast<std::size_t>(act)].accepts(state_symbols(*a.alphabet, s)) == in);
        }
      }
    }
  }
}

TEST_CASE("coalition arenas") {
  auto f3 = load_model("fig3.lcg").arena;
  auto sr = coalition_arena(f3, {0, 1});
  CHECK(sr.num_actions(0) == 12);
  CHECK(sr.num_actions(1) == 3);
  CHECK(validate(sr).ok());
  auto all = coalition_arena(f3, {0, 1, 2});
  CHECK(all.num_actions(1) == 1);
  CHECK(all.actions[1][0] == "_");
  auto f2 = load_model("fig2.lcg").arena;
  auto single = coalition_arena(f2, {1});
  CHECK(single.actions[0] == f2.actions[1]);
  CHECK(single.actions[1] == f2.actions[0]);
  CHECK_THROWS_AS(coalition_arena(f2, {}), ModelError);
  // one-step distributions are preserved
  for (const auto& s : all_states(*f3.alphabet, 2))
    for (int c = 0; c < sr.num_actions(0); ++c)
      for (int r = 0; r < sr.num_actions(1); ++r) {
        auto prof = coalition_profile(f3, {0, 1}, c, r);
        const auto& x = sr.row(s.location, sr.encode({c, r}));
        const auto& y = f3.row(s.location, f3.encode(prof));
        REQUIRE(x.size() == y.size());
        for (std::size_t k = 0; k < x.size(); ++k) {
          CHECK(x[k].probability == y[k].probability);
          CHECK(x[k].location == y[k].location);
          CHECK(x[k].op == y[k].op);
        }
      }
}

TEST_CASE("loss probabilities") {
  LossModel half{Rational(1, 2)};
  CHECK(loss_probability(half, {0, 0}, {0}) == Rational(1, 2));
  CHECK(loss_probability(half, {0, 1}, {1, 0}) == Rational(0));
  CHECK(loss_probability(half, {0, 1, 2}, {0, 1, 2}) == Rational(1, 8));
  CHECK(loss_probability(half, {0, 1}, {}) == Rational(1, 4));
  for (Rational lam : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
    LossModel m{lam};
    for (int n = 0; n <= 8; ++n)
      for (int k = 0; k <= n; ++k) {
        Rational binom = 1;
        for (int t = 0; t < k; ++t) binom = binom * (n - t) / (t + 1);
        Rational expect = binom;
        for (int t = 0; t < n - k; ++t) expect *= lam;
        for (int t = 0; t < k; ++t) expect *= 1 - lam;
        CHECK(loss_probability(m, std::vector<int>(static_cast<std::size_t>(n), 0), std::vector<int>(static_cast<std::size_t>(k), 0)) == expect);
      }
  }
}

TEST_CASE("monitors") {
  auto f2 = load_model("fig2.lcg");
  auto arena = std::make_shared<const Arena>(f2.arena);
  auto al = arena->alphabet;
  auto t1 = from_regex(al, "l1.M*", SetKind::States);
  auto t2 = from_regex(al, "l2.M*", SetKind::States);
  auto [lifted, targets] = make_absorbing(arena, {t1, t2});
  CHECK(lifted->num_locations() == 12);
  CHECK(targets.size() == 2);
  CHECK(lifted->entry(State{1, {}}).location == lifted->lift_location(1, 1));
  CHECK(lifted->entry(State{0, {}}).location == lifted->lift_location(0, 0));
  // projection of a lift is the original set
  auto some = from_regex(al, "l0.a*|l2.c", SetKind::States);
  CHECK(lifted->project(lifted->lift(some)) == some);
  auto counter = Monitor::buchi_counter({t1, t2});
  CHECK(counter.num_states == 4);
  CHECK(counter.step(0, 0b01) == 2);   // c0 -> c1
  CHECK(counter.step(2, 0b10) == 1);   // c1 -> c0 with flag
  CHECK(counter.step(1, 0b00) == 0);
  auto prod = Monitor::product(Monitor::absorbing({t1}), counter);
  CHECK(prod.num_states == 8);
  CHECK(prod.num_targets() == 3);
  CHECK(Monitor::product(Monitor::none(), counter).num_states == 4);
  CHECK_THROWS_AS(make_absorbing(arena, {}), ModelError);
}
