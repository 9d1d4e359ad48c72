#include <cmath>

#include "cslcg/conjunction.hpp"
#include "cslcg/error.hpp"
#include "cslcg/strategy.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace cslcg;
using namespace cslcg::testing;

namespace {

constexpr int kA = 0, kB = 1, kC = 2;     // messages of fig2
constexpr int kL0 = 0, kL1 = 1, kL2 = 2;  // locations of fig2
constexpr int kSender = 0, kAttacker = 1;

struct Fig2 {
  ArenaPtr arena;
  GameView view;
  Fig2() : arena(std::make_shared<const Arena>(load_model("fig2.lcg").arena)), view(GameView::of(arena)) {}
  RegularSet set(const std::string& re) const { return from_regex(arena->alphabet, re, SetKind::States); }
};

ActionWeights r(std::initializer_list<Rational> xs) { return ActionWeights(xs); }

Rational sum(const ActionWeights& w) {
  Rational s(0);
  for (const auto& x : w) s += x;
  return s;
}

void check_legal_everywhere(const PFMStrategy& s, int max_len = 3) {
  CHECK(s.violations().empty());
  for (const auto& st : all_states(*s.arena()->alphabet, max_len)) {
    auto allowed = allowed_actions(*s.arena(), st, s.player());
    if (allowed.empty()) continue;
    ActionWeights w;
    REQUIRE_NOTHROW(w = s.query(st));
    CHECK(sum(w) == Rational(1));
    for (std::size_t a = 0; a < w.size(); ++a)
      if (w[a] != Rational(0)) CHECK(std::find(allowed.begin(), allowed.end(), static_cast<int>(a)) != allowed.end());
  }
}

}  // namespace

TEST_CASE("default cell is uniform over allowed actions") {
  Fig2 f;
  PFMStrategy s(f.arena, kAttacker);
  CHECK(s.query(State{kL0, {}}) == r({Rational(1, 3), Rational(1, 3), Rational(1, 3)}));
  for (const auto& st : all_states(*f.arena->alphabet, 2)) {
    auto allowed = allowed_actions(*f.arena, st, kAttacker);
    auto w = s.query(st);
    for (int a : allowed) CHECK(w[static_cast<std::size_t>(a)] == Rational(1, static_cast<int>(allowed.size())));
  }
  CHECK_FALSE(s.cell_of(State{kL0, {}}));
}

TEST_CASE("cells are first-match and validated") {
  Fig2 f;
  PFMStrategy s(f.arena, kAttacker);
  s.add_cell(f.set("l0.M*"), r({0, 0, 1}), "wait");
  s.add_cell(f.set("L.M*"), r({Rational(1, 2), 0, Rational(1, 2)}), "rest");
  CHECK(*s.cell_of(State{kL0, {kA}}) == 0);
  CHECK(*s.cell_of(State{kL2, {}}) == 1);
  CHECK(s.query(State{kL0, {kB}}) == r({0, 0, 1}));
  CHECK_THROWS_AS(s.add_cell(f.set("l0.M*"), r({Rational(1, 2), 0, 0})), ModelError);
  CHECK_THROWS_AS(s.add_cell(f.set("l0.M*"), r({-1, 1, 1})), ModelError);
  CHECK_THROWS_AS(s.add_cell(f.set("l0.M*"), r({1, 0})), ModelError);
  CHECK_THROWS_AS(s.add_cell(from_regex(f.arena->alphabet, "M*", SetKind::Channels), r({1, 0, 0})), MismatchError);
  // b at l1 needs a trailing c
  PFMStrategy bad(f.arena, kAttacker);
  bad.add_cell(f.set("l1.M*"), r({0, 1, 0}));
  CHECK_FALSE(bad.violations().empty());
  CHECK_THROWS_AS(bad.query(State{kL1, {kA}}), Error);
  CHECK(bad.query(State{kL1, {kC}}) == r({0, 1, 0}));
}

TEST_CASE("counting weights") {
  CHECK(counting_weight(0) == doctest::Approx(0.5));
  CHECK(counting_weight(1) == doctest::Approx(std::pow(2.0, -0.5)));
  double prod = 1;
  for (int k = 0; k <= 30; ++k) prod *= counting_weight(k);
  CHECK(std::abs(prod - 0.25) < 1e-6);
  for (int k = 0; k < 60; ++k) CHECK(counting_weight(k) <= counting_weight(k + 1));
  for (int k = 0; k < 40; ++k) CHECK(counting_weight(k) < 1.0);
  CHECK_THROWS_AS(counting_weight(-1), Error);
}

TEST_CASE("positive reachability strategy for the attacker") {
  Fig2 f;
  auto region = nz_reach(f.view, kAttacker, f.set("l2.c"));
  REQUIRE(initial_in(*f.arena, region.winning));
  auto s = synth_nz_reach(region);
  // scramble at l0 by matching the sender uniformly, pop the c at l1
  CHECK(s.query(State{kL0, {}}) == r({Rational(1, 2), Rational(1, 2), 0}));
  CHECK(s.query(State{kL0, {kA, kB}}) == r({Rational(1, 2), Rational(1, 2), 0}));
  CHECK(s.query(State{kL1, {kC, kC}}) == r({0, 1, 0}));
  check_legal_everywhere(s);
  for (const auto& c : s.cells()) CHECK(subset_of(c.guard, region.winning));

  auto d = synth_nz_reach(region, true);
  check_legal_everywhere(d);
  CHECK(d.query(State{kL1, {kC}}) == r({1, 0, 0}));
  for (const auto& st : all_states(*f.arena->alphabet, 3)) {
    if (!holds(region.winning, st)) continue;
    // determinisation only narrows the support
    auto a = s.query(st), b = d.query(st);
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a[k] == Rational(0)) CHECK(b[k] == Rational(0));
  }
}

TEST_CASE("almost-sure strategy plays uniformly on Stay sets") {
  Fig2 f;
  auto region = as_reach(f.view, kSender, f.set("L.aaa|l2.M*"));
  REQUIRE(initial_in(*f.arena, region.winning));
  auto s = synth_as_reach(region);
  check_legal_everywhere(s);
  CHECK(s.query(State{kL0, {}}) == r({Rational(1, 2), Rational(1, 2)}));
  CHECK_THROWS_AS(synth_as_reach(as_safe(f.view, kSender, f.set("L.M*"))), Error);
  CHECK_THROWS_AS(synth_as_reach(nz_reach(f.view, kSender, f.set("l2.M*"))), Error);
  CHECK_THROWS_AS(synth_nz_reach(region), Error);
}

TEST_CASE("spoiler for the sender's a-objective") {
  Fig2 f;
  auto region = as_reach(f.view, kSender, f.set("L.M*aM*"));
  REQUIRE_FALSE(initial_in(*f.arena, region.winning));
  auto sp = synth_spoiler(region);
  CHECK(sp.urgent.player() == kAttacker);
  // hide at l0 while the channel has no a
  std::vector<State> h{State{kL0, {}}, State{kL0, {kB}}, State{kL0, {kB, kB}}};
  auto p = sp.query(h);
  const double p2 = counting_weight(2);
  CHECK(p[2] == doctest::Approx(p2));
  CHECK(p[0] == doctest::Approx((1 - p2) / 2));
  CHECK(p[1] == doctest::Approx((1 - p2) / 2));
  auto first = sp.query({State{kL0, {}}});
  CHECK(first[2] == doctest::Approx(0.5));
  // confine: pop the c at l1 towards l2, anything at l2
  CHECK(sp.urgent.query(State{kL1, {kB, kC}}) == r({0, 1, 0}));
  check_legal_everywhere(sp.urgent);
  check_legal_everywhere(sp.fallback);
  bool hide = false;
  for (const auto& c : sp.urgent.cells()) hide = hide || c.label.find("hide") != std::string::npos;
  CHECK(hide);

  CHECK_THROWS_AS(synth_spoiler(as_reach(f.view, kSender, f.set("L.M*"))), Error);
}

TEST_CASE("PFM strategies are positional, counting strategies are not") {
  Fig2 f;
  auto s = synth_nz_reach(nz_reach(f.view, kAttacker, f.set("l2.c")));
  auto sp = synth_spoiler(as_reach(f.view, kSender, f.set("L.M*aM*")));
  std::mt19937_64 rng(5);
  auto states = all_states(*f.arena->alphabet, 3);
  for (int t = 0; t < 200; ++t) {
    std::vector<State> h;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k < n; ++k) h.push_back(states[rng() % states.size()]);
    CHECK(s.query(h) == s.query(h.back()));
    auto a = probabilities(Strategy{s}, h);
    auto b = probabilities(Strategy{s}, {h.back()});
    CHECK(a == b);
  }
  std::vector<State> one{State{kL0, {}}}, two{State{kL0, {}}, State{kL0, {}}};
  CHECK(sp.query(one) != sp.query(two));
}

TEST_CASE("serialisation round trip") {
  Fig2 f;
  auto s = synth_nz_reach(nz_reach(f.view, kAttacker, f.set("l2.c")));
  auto sp = synth_spoiler(as_reach(f.view, kSender, f.set("L.M*aM*")));
  for (const Strategy& x : {Strategy{s}, Strategy{sp}}) {
    auto text = serialize(x);
    auto y = parse_strategy(f.arena, text);
    CHECK(serialize(y) == text);
    CHECK(strategy_player(y) == strategy_player(x));
    for (const auto& st : all_states(*f.arena->alphabet, 3)) {
      if (allowed_actions(*f.arena, st, kAttacker).empty()) continue;
      std::vector<State> h{st, st};
      CHECK(probabilities(x, h) == probabilities(y, h));
    }
    auto dot = strategy_to_dot(x, "s");
    CHECK(dot.rfind("digraph", 0) == 0);
  }
  auto hand = parse_strategy(f.arena, R"({"player":"attacker","strategy":{"cells":[{"guard":"l0.M*","weights":{"w":1}}]}})");
  CHECK(std::get<PFMStrategy>(hand).query(State{kL0, {kA}}) == r({0, 0, 1}));
  CHECK_THROWS_AS(parse_strategy(f.arena, "{"), SyntaxError);
  CHECK_THROWS_AS(parse_strategy(f.arena, R"({"player":"nobody","strategy":{"cells":[]}})"), SyntaxError);
  CHECK_THROWS_AS(parse_strategy(f.arena, R"({"player":"attacker","strategy":{"cells":[{"guard":"l0.M*","weights":{"z":1}}]}})"), SyntaxError);
  CHECK_THROWS_AS(parse_strategy(f.arena, R"({"player":"attacker","kind":"mixed","strategy":{}})"), SyntaxError);
}

TEST_CASE("uniform strategy on random arenas") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    auto a = std::make_shared<const Arena>(random_arena(rng));
    for (int p = 0; p < 2; ++p) check_legal_everywhere(uniform_strategy(a, p), 2);
  }
}
