#include <cmath>
#include <algorithm>
#include <filesystem>
#include <map>

#include "cslcg/error.hpp"
#include "cslcg/sim.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace cslcg;
using namespace cslcg::testing;

namespace {

ArenaPtr arena_of(const std::string& file) { return std::make_shared<const Arena>(load_model(file).arena); }

Objective objective(const ArenaPtr& a, const std::string& text) { return parse_objective(a->alphabet, text).disjuncts.at(0).atoms.at(0); }

SimConfig config(Rational lambda, int horizon, int episodes, std::uint64_t seed) {
  SimConfig c;
  c.loss.lambda = lambda;
  c.horizon = horizon;
  c.episodes = episodes;
  c.seed = seed;
  return c;
}

// Cooperative profile for S and R in the man-in-the-middle game: below two
// messages send and request the same letter, else S idles; R dequeues a
// matching message and resets otherwise.
PFMStrategy sender_receiver(const ArenaPtr& coalition) {
  auto act = [&](const std::string& name) { return *coalition->action_index(0, name); };
  auto set = [&](const std::string& re) { return from_regex(coalition->alphabet, re, SetKind::States); };
  auto one = [&](const std::string& name) {
    ActionWeights w(static_cast<std::size_t>(coalition->num_actions(0)), Rational(0));
    w[static_cast<std::size_t>(act(name))] = 1;
    return w;
  };
  PFMStrategy s(coalition, 0);
  ActionWeights send(static_cast<std::size_t>(coalition->num_actions(0)), Rational(0));
  send[static_cast<std::size_t>(act("a,a"))] = Rational(1, 2);
  send[static_cast<std::size_t>(act("b,b"))] = Rational(1, 2);
  s.add_cell(set("l0.M{0,1}"), send, "send");
  s.add_cell(set("l0.M*"), one("-,a"), "idle");
  s.add_cell(set("la.M*a|lb.M*b"), one("-,dequeue"), "dequeue");
  s.add_cell(set("(la|lb).M*"), one("-,reset"), "reset");
  return s;
}

std::vector<std::string> bounded_models() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(CSLCG_MODELS_DIR))
    if (e.path().filename().string().rfind("bounded_", 0) == 0) out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("identical seeds reproduce identical traces") {
  auto a = arena_of("fig2.lcg");
  auto p = StrategyProfile::uniform(a);
  auto cfg = config(Rational(1, 2), 50, 40, 42);
  cfg.keep_traces = true;
  auto r1 = simulate(p, cfg), r2 = simulate(p, cfg);
  CHECK(r1.digest == r2.digest);
  REQUIRE(r1.traces.size() == 40);
  for (std::size_t k = 0; k < r1.traces.size(); ++k) CHECK(format_episode(*a, r1.traces[k]) == format_episode(*a, r2.traces[k]));
  cfg.jobs = 3;
  auto r3 = simulate(p, cfg);
  CHECK(r3.digest == r1.digest);
  cfg.seed = 43;
  CHECK(simulate(p, cfg).digest != r1.digest);
  // an episode only depends on (seed, index)
  auto rng = episode_rng(42, 7);
  auto e = simulate_episode(p, config(Rational(1, 2), 50, 1, 42), rng);
  CHECK(format_episode(*a, e) == format_episode(*a, r1.traces[7]));
}

TEST_CASE("horizon zero gives the initial state") {
  auto a = arena_of("fig2.lcg");
  auto cfg = config(Rational(1, 2), 0, 1, 42);
  cfg.keep_traces = true;
  auto r = simulate(StrategyProfile::uniform(a), cfg);
  REQUIRE(r.traces.size() == 1);
  CHECK(r.traces[0].states.size() == 1);
  CHECK(r.traces[0].steps.empty());
  CHECK(format_episode(*a, r.traces[0]) == "0 l0\n");
  CHECK_THROWS_AS(simulate(StrategyProfile::uniform(a), config(Rational(1, 2), -1, 1, 0)), Error);
  CHECK_THROWS_AS(simulate(StrategyProfile::uniform(a), config(Rational(1, 2), 5, 0, 0)), Error);
}

TEST_CASE("loss sampling") {
  const std::vector<int> aab{0, 0, 1};
  LossModel loss{Rational(1, 3)};
  std::map<std::vector<int>, int> seen;
  const int n = 100000;
  std::mt19937_64 rng(3);
  for (int k = 0; k < n; ++k) ++seen[sample_loss(loss, aab, rng)];
  // every distinct subword w2 of aab appears with the summed embedding probability
  for (const auto& w2 : all_channels(2, 3)) {
    if (!subword(w2, aab)) {
      CHECK(seen.count(w2) == 0);
      continue;
    }
    const double p = boost::rational_cast<double>(loss_probability(loss, aab, w2));
    const double f = static_cast<double>(seen[w2]) / n, se = std::sqrt(p * (1 - p) / n);
    INFO(w2.size());
    CHECK(std::abs(f - p) <= 3 * se + 1e-12);
  }
  // surviving fraction of a long channel
  const std::vector<int> long_channel(200, 0);
  double total = 0;
  for (int k = 0; k < 2000; ++k) total += static_cast<double>(sample_loss(loss, long_channel, rng).size());
  CHECK(total / 2000 == doctest::Approx(200.0 * 2 / 3).epsilon(0.01));
}

TEST_CASE("nop arena keeps the empty channel") {
  auto a = arena_of("fig3.lcg");
  auto coalition = std::make_shared<const Arena>(coalition_arena(*a, {0}));
  PFMStrategy idle(coalition, 0);
  idle.add_cell(from_regex(coalition->alphabet, "L.M*", SetKind::States), ActionWeights{0, 0, 1});
  StrategyProfile p = StrategyProfile::uniform(coalition);
  p.set(idle);
  auto r = simulate(p, config(Rational(1, 10), 100, 200, 1), {objective(coalition, "AS G \"l0\"")});
  CHECK(r.stats[0].satisfied == 200);
  CHECK(r.stats[0].std_error() == 0);
}

TEST_CASE("sender-receiver profile on the man-in-the-middle game") {
  auto a = arena_of("fig3.lcg");
  auto coalition = std::make_shared<const Arena>(coalition_arena(*a, {0, 1}));
  StrategyProfile p = StrategyProfile::uniform(coalition);
  p.set(sender_receiver(coalition));
  auto cfg = config(Rational(1, 10), 200, 10000, 2024);
  cfg.jobs = 4;
  auto r = simulate(p, cfg, {objective(coalition, "AS G \"L.M{0,2}\""), objective(coalition, "AS F \"lF.M*\"")});
  CHECK(r.stats[0].satisfied == r.stats[0].episodes);
  CHECK(r.stats[1].frequency() >= 0.95);
}

TEST_CASE("random opponents stay legal") {
  auto a = arena_of("fig2.lcg");
  for (std::uint64_t k = 0; k < 20; ++k) {
    auto rng = episode_rng(1000, k);
    auto s = random_pfm(a, 1, rng);
    CHECK(s.violations().empty());
    for (const auto& c : s.cells()) {
      Rational sum(0);
      for (const auto& w : c.weights) sum += w;
      CHECK(sum == Rational(1));
    }
    StrategyProfile p = StrategyProfile::uniform(a);
    p.set(s);
    CHECK_NOTHROW(simulate(p, config(Rational(1, 2), 100, 20, k)));
  }
  // a strategy playing a disallowed action is caught online
  PFMStrategy bad(a, 1);
  bad.add_cell(from_regex(a->alphabet, "L.M*", SetKind::States), ActionWeights{0, 1, 0});
  StrategyProfile p = StrategyProfile::uniform(a);
  p.set(bad);
  CHECK_THROWS_AS(simulate(p, config(Rational(1, 2), 20, 5, 0)), Error);
}

TEST_CASE("positive reachability witness against random opponents") {
  auto a = arena_of("fig2.lcg");
  auto target = from_regex(a->alphabet, "l2.c", SetKind::States);
  auto attacker = synth_nz_reach(nz_reach(GameView::of(a), 1, target));
  auto watch = objective(a, "NZ F \"l2.c\"");
  for (std::uint64_t k = 0; k < 20; ++k) {
    auto rng = episode_rng(77, k);
    StrategyProfile p = StrategyProfile::uniform(a);
    p.set(random_pfm(a, 0, rng));
    p.set(attacker);
    auto cfg = config(Rational(1, 2), 200, 10000, 100 + k);
    cfg.jobs = 4;
    CHECK(simulate(p, cfg, {watch}).stats[0].satisfied > 0);
  }
}

TEST_CASE("trace objectives") {
  auto a = arena_of("fig2.lcg");
  Episode e;
  e.states = {State{0, {}}, State{0, {0}}, State{1, {2}}, State{2, {}}};
  CHECK(trace_satisfies(e, objective(a, "AS F \"l2.M*\"")));
  CHECK_FALSE(trace_satisfies(e, objective(a, "AS F \"l1.a\"")));
  CHECK(trace_satisfies(e, objective(a, "NZ G \"L.M{0,1}\"")));
  CHECK_FALSE(trace_satisfies(e, objective(a, "AS G \"l0.M*\"")));
  CHECK(trace_satisfies(e, objective(a, "AS GF \"l2.M*\"")));
  CHECK_FALSE(trace_satisfies(e, objective(a, "AS GF \"l0.M*\"")));
}

TEST_CASE("small-controller oracle agrees with the solver on bounded games") {
  const auto files = bounded_models();
  int instances = 0;
  for (const auto& file : files) {
    auto m = load_model(file);
    auto a = std::make_shared<const Arena>(m.arena);
    for (const auto& [name, text] : m.properties) {
      INFO(file << " " << name);
      auto phi = parse_objective(a->alphabet, text).disjuncts.at(0);
      const bool solver = initial_in(*a, solve_conjunction(a, 0, phi).winning);
      CHECK(oracle_small_controller(a, phi, 2, 3).exists == solver);
      if (solver) CHECK(oracle_small_controller(a, phi, 1, 3).exists);
      ++instances;
    }
  }
  CHECK(instances >= 10);
}

TEST_CASE("small-controller oracle limits") {
  auto fig3 = arena_of("fig3.lcg");
  auto phi = parse_objective(fig3->alphabet, "AS F \"lF.M*\"").disjuncts[0];
  CHECK_THROWS_AS(oracle_small_controller(fig3, phi, 1, 2), FragmentError);
  // pushing forever at l0 overflows any bound
  auto solo = arena_of("solo.lcg");
  auto two = std::make_shared<const Arena>(coalition_arena(*solo, {0}));
  CHECK_THROWS_AS(oracle_small_controller(two, parse_objective(solo->alphabet, "AS F \"t.M*\"").disjuncts[0], 1, 3), Error);
  auto coin = arena_of("bounded_coin.lcg");
  CHECK_THROWS_AS(oracle_small_controller(coin, parse_objective(coin->alphabet, "AS F \"g.M*\"").disjuncts[0], 0, 3), Error);
}
