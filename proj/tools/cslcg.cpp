// Command-line front end. Every command prints one JSON report on stdout
// (also written to --out) and exits 0 for yes/success, 1 for no, 2 on error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cslcg/core.hpp"
#include "cslcg/error.hpp"
#include "cslcg/oracle.hpp"
#include "cslcg/sim.hpp"
#include "cslcg/strategy.hpp"
#include "json.hpp"

using namespace cslcg;
using json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string model, player, objective, gamma, profile, coalition, target, out, dot_dir, strategy_out, lambda;
  int horizon = 100, episodes = 1, jobs = 1, memory = 2, bound = 3, max_len = 3;
  std::uint64_t seed = 0;
  bool timings = false;
};

class Clock {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Loaded {
  ModelFile model;
  GameSpec game;
};

Loaded load(const Options& o, bool core = false) {
  if (o.model.empty()) throw Error("--model is required");
  ModelFile m = parse_model(o.model);
  GameSpec g = GameSpec::from_model(m, core);
  return {std::move(m), std::move(g)};
}

std::vector<int> agents_of(const Arena& a, const std::string& list) {
  std::vector<int> out;
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    auto i = a.agent_index(name);
    if (!i) throw Error("unknown agent '" + name + "'");
    out.push_back(*i);
  }
  if (out.empty()) throw Error("no agent given");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// The two-player arena in which `players` act as one side.
std::pair<ArenaPtr, int> side_of(const ArenaPtr& arena, const std::string& players) {
  if (players.empty()) throw Error("--player is required");
  auto members = agents_of(*arena, players);
  if (arena->num_agents() == 2 && members.size() == 1) return {arena, members[0]};
  return {std::make_shared<const Arena>(coalition_arena(*arena, members)), 0};
}

std::string render(const Arena& a, const State& s) {
  std::vector<Symbol> w{a.alphabet->location(s.location)};
  for (int m : s.channel) w.push_back(a.alphabet->message(m));
  return a.alphabet->render(w);
}

json set_json(const RegularSet& s) { return json{{"empty", s.is_empty()}, {"sample", describe_guard(s, 2, 8)}}; }

Rational loss_rate(const Options& o, const ModelFile& m) {
  if (!o.lambda.empty()) return parse_rational(o.lambda);
  return m.lambda.value_or(Rational(1, 2));
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

void write_dot(const Options& o, const std::string& name, const std::string& dot, json& files) {
  if (o.dot_dir.empty()) return;
  std::filesystem::create_directories(o.dot_dir);
  const auto path = (std::filesystem::path(o.dot_dir) / (name + ".dot")).string();
  write_file(path, dot);
  files.push_back(path);
}

// ---------------------------------------------------------------------------
// solve / synthesize

struct Solved {
  json report;
  std::optional<Strategy> strategy;
  bool answer = false;
};

Solved solve_objective(const Options& o, const Loaded& l) {
  Clock clock;
  auto [arena, player] = side_of(l.game.arena, o.player);
  if (o.objective.empty()) throw Error("--objective is required");
  Formula phi = l.game.property(o.objective);
  ConjunctionRegion region = solve_formula(arena, player, phi);
  Solved s;
  s.answer = initial_in(*arena, region.winning);
  s.report = json{{"player", arena->agents[static_cast<std::size_t>(player)]},
                  {"objective", to_string(phi)},
                  {"answer", s.answer ? "yes" : "no"},
                  {"winning", set_json(region.winning)}};
  if (region.inconsistent) s.report["inconsistent"] = true;

  // strategies for single F / GF atoms
  if (phi.single() && phi.disjuncts[0].atoms.size() == 1) {
    const Objective& atom = phi.disjuncts[0].atoms[0];
    GameView view = GameView::of(arena);
    if (atom.quantifier == Quantifier::NZ && atom.path == PathKind::Eventually) {
      if (s.answer) s.strategy = synth_nz_reach(nz_reach(view, player, atom.target));
    } else if (atom.quantifier == Quantifier::AS && atom.path != PathKind::Always) {
      Region r = atom.path == PathKind::Eventually ? as_reach(view, player, atom.target) : as_buchi(view, player, atom.target);
      if (s.answer) s.strategy = synth_as_reach(r);
      else s.strategy = synth_spoiler(r);
    }
  }
  if (s.strategy) {
    const bool spoiler = !s.answer;
    json j = json::parse(serialize(*s.strategy));
    s.report[spoiler ? "spoiler" : "strategy"] = j;
  } else {
    s.report["strategy"] = nullptr;
  }
  json files = json::array();
  write_dot(o, "winning", to_dot(region.winning, "winning"), files);
  if (s.strategy) write_dot(o, s.answer ? "strategy" : "spoiler", strategy_to_dot(*s.strategy, s.answer ? "strategy" : "spoiler"), files);
  if (!files.empty()) s.report["dot_files"] = files;
  if (o.timings) s.report["seconds"] = clock.seconds();
  return s;
}

int cmd_solve(const Options& o, json& out) {
  auto l = load(o);
  auto s = solve_objective(o, l);
  out = std::move(s.report);
  return s.answer ? 0 : 1;
}

int cmd_synthesize(const Options& o, json& out) {
  auto l = load(o);
  auto s = solve_objective(o, l);
  out = std::move(s.report);
  if (!s.strategy) throw FragmentError("synthesis covers single NZ F, AS F and AS GF objectives");
  if (!o.strategy_out.empty()) {
    write_file(o.strategy_out, serialize(*s.strategy));
    out["strategy_file"] = o.strategy_out;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// e-core / a-core

json query_json(const QueryReport& q, bool timings) {
  json j{{"formula", q.formula}, {"inconsistent", q.inconsistent}, {"initial_winning", q.initial_winning}};
  if (timings) j["seconds"] = q.seconds;
  return j;
}

json verdict_json(const GameSpec& g, const CoreVerdict& v, bool timings) {
  json j{{"problem", v.problem}, {"gamma", v.gamma}, {"answer", v.answer ? "yes" : "no"}};
  j["witness"] = v.witness ? json(g.agent_set(*v.witness)) : json(nullptr);
  json cands = json::array();
  for (const auto& c : v.candidates) {
    json s2 = json::array();
    for (const auto& q : c.step2.disjuncts) s2.push_back(query_json(q, timings));
    json cj{{"W", g.agent_set(c.winners)}, {"step2", json{{"passes", c.step2.passes}, {"disjuncts", s2}}}};
    if (c.step3) {
      json cs = json::array();
      for (const auto& cr : c.step3->coalitions) {
        json ds = json::array();
        for (const auto& q : cr.disjuncts) ds.push_back(query_json(q, timings));
        cs.push_back(json{{"C", g.agent_set(cr.coalition)}, {"wins", cr.wins}, {"disjuncts", ds}});
      }
      cj["step3"] = json{{"no_deviation", c.step3->no_deviation}, {"coalitions", cs}};
    } else {
      cj["step3"] = nullptr;
    }
    cj["passes"] = c.passes();
    cands.push_back(cj);
  }
  j["candidates"] = cands;
  if (!v.parts.empty()) {
    json parts = json::array();
    for (const auto& p : v.parts) parts.push_back(verdict_json(g, p, timings));
    j["parts"] = parts;
  }
  if (timings) j["seconds"] = v.seconds;
  return j;
}

int cmd_core(const Options& o, json& out, bool existential) {
  auto l = load(o, true);
  if (o.gamma.empty()) throw Error("--gamma is required");
  CoreOptions opt{std::max(1, o.jobs)};
  Formula gamma = l.game.property(o.gamma);
  CoreVerdict v = existential ? e_core(l.game, gamma, opt) : a_core(l.game, gamma, opt);
  out = verdict_json(l.game, v, o.timings);
  return v.answer ? 0 : 1;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const Options& o, json& out) {
  auto l = load(o);
  ArenaPtr arena = l.game.arena;
  if (!o.coalition.empty()) arena = std::make_shared<const Arena>(coalition_arena(*arena, agents_of(*arena, o.coalition)));
  StrategyProfile profile = StrategyProfile::uniform(arena);
  if (!o.profile.empty()) {
    std::ifstream f(o.profile);
    if (!f) throw Error("cannot read " + o.profile);
    std::stringstream ss;
    ss << f.rdbuf();
    json p;
    try {
      p = json::parse(ss.str());
    } catch (const json::parse_error& e) {
      throw SyntaxError(std::string("profile: ") + e.what(), e.byte);
    }
    const json& list = p.contains("strategies") ? p.at("strategies") : p;
    if (!list.is_array()) throw SyntaxError("profile: expected a list of strategies", 0);
    for (const auto& s : list)
      if (!s.is_null()) profile.set(parse_strategy(arena, s.dump()));
  }
  std::vector<Objective> watch;
  if (!o.objective.empty())
    for (const auto& d : l.game.property(o.objective).disjuncts)
      for (const auto& a : d.atoms) watch.push_back(a);
  SimConfig cfg;
  cfg.loss.lambda = loss_rate(o, l.model);
  cfg.horizon = o.horizon;
  cfg.episodes = o.episodes;
  cfg.seed = o.seed;
  cfg.jobs = std::max(1, o.jobs);
  cfg.keep_traces = o.episodes <= 10;
  Clock clock;
  SimResult r = simulate(profile, cfg, watch);
  std::ostringstream digest;
  digest << std::hex << std::setw(16) << std::setfill('0') << r.digest;
  out = json{{"agents", arena->agents},
             {"lambda", format_rational(cfg.loss.lambda)},
             {"horizon", cfg.horizon},
             {"episodes", cfg.episodes},
             {"seed", cfg.seed},
             {"digest", digest.str()}};
  json stats = json::array();
  for (const auto& s : r.stats)
    stats.push_back(json{{"objective", s.objective}, {"satisfied", s.satisfied}, {"frequency", s.frequency()}, {"std_error", s.std_error()}});
  out["stats"] = stats;
  if (cfg.keep_traces) {
    json traces = json::array();
    for (const auto& e : r.traces) {
      json states = json::array(), joints = json::array();
      for (const auto& s : e.states) states.push_back(render(*arena, s));
      for (const auto& s : e.steps) joints.push_back(arena->joint_name(s.joint));
      traces.push_back(json{{"states", states}, {"actions", joints}});
    }
    out["traces"] = traces;
  }
  if (o.timings) out["seconds"] = clock.seconds();
  return 0;
}

// ---------------------------------------------------------------------------
// oracle

int cmd_oracle_pre(const Options& o, json& out) {
  auto l = load(o);
  auto [arena, player] = side_of(l.game.arena, o.player);
  if (o.target.empty()) throw Error("--target is required");
  RegularSet b = from_regex(arena->alphabet, o.target, SetKind::States);
  RegularSet symbolic = pre(GameView::of(arena), player, b);
  int checked = 0;
  json mismatches = json::array();
  std::vector<std::vector<int>> channels{{}};
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (static_cast<int>(channels[i].size()) == o.max_len) continue;
    for (int m = 0; m < arena->alphabet->num_messages(); ++m) {
      auto w = channels[i];
      w.push_back(m);
      channels.push_back(w);
    }
  }
  for (int loc = 0; loc < arena->alphabet->num_locations(); ++loc)
    for (const auto& c : channels) {
      State s{loc, c};
      std::vector<Symbol> w{arena->alphabet->location(loc)};
      for (int m : c) w.push_back(arena->alphabet->message(m));
      const bool sym = symbolic.accepts(w), ora = oracle_pre(*arena, player, b, s);
      ++checked;
      if (sym != ora && mismatches.size() < 20) mismatches.push_back(json{{"state", render(*arena, s)}, {"pre", sym}, {"oracle", ora}});
    }
  out = json{{"player", arena->agents[static_cast<std::size_t>(player)]}, {"target", o.target}, {"max_len", o.max_len}, {"states", checked},
             {"agree", mismatches.empty()}, {"mismatches", mismatches}, {"pre", set_json(symbolic)}};
  return mismatches.empty() ? 0 : 1;
}

int cmd_oracle_small(const Options& o, json& out) {
  auto l = load(o);
  ArenaPtr arena = l.game.arena;
  int player = 0;
  if (!o.player.empty()) std::tie(arena, player) = side_of(arena, o.player);
  if (player != 0) throw FragmentError("the small-controller oracle plays for agent 0");
  if (o.objective.empty()) throw Error("--objective is required");
  Formula phi = l.game.property(o.objective);
  if (!phi.single()) throw FragmentError("the small-controller oracle takes a conjunction");
  auto r = oracle_small_controller(arena, phi.disjuncts[0], o.memory, o.bound);
  const bool solver = initial_in(*arena, solve_conjunction(arena, 0, phi.disjuncts[0]).winning);
  out = json{{"objective", to_string(phi)}, {"memory", o.memory},          {"channel_bound", o.bound},
             {"answer", r.exists ? "yes" : "no"}, {"controllers", r.controllers}, {"reachable_states", r.reachable_states},
             {"solver", solver ? "yes" : "no"}, {"agree", solver == r.exists}};
  return r.exists ? 0 : 1;
}

// ---------------------------------------------------------------------------
// export-dot

int cmd_export_dot(const Options& o, json& out) {
  if (o.dot_dir.empty()) throw Error("--dot-dir is required");
  auto l = load(o);
  json files = json::array();
  write_dot(o, "arena", arena_to_dot(*l.game.arena), files);
  out = json{{"dot_files", files}};
  if (!o.objective.empty()) {
    auto s = solve_objective(o, l);
    out["answer"] = s.report["answer"];
    for (const auto& f : s.report.value("dot_files", json::array())) out["dot_files"].push_back(f);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic verifier for concurrent stochastic lossy channel games"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* c) {
    c->add_option("--model", o.model, "model file")->required();
    c->add_option("--out", o.out, "also write the report here");
    c->add_option("--jobs", o.jobs, "parallel solver queries or simulation chunks");
    c->add_flag("--timings", o.timings, "add wall-clock seconds to the report");
  };
  auto solve = app.add_subcommand("solve", "zero-sum verdict for one player or coalition");
  auto synth = app.add_subcommand("synthesize", "winning strategy or spoiler for a single objective");
  for (auto* c : {solve, synth}) {
    common(c);
    c->add_option("--player", o.player, "agent, or comma-separated coalition")->required();
    c->add_option("--objective,objective", o.objective, "property name or objective text")->required();
    c->add_option("--dot-dir", o.dot_dir, "write region and strategy DOT files");
  }
  synth->add_option("--strategy-out", o.strategy_out, "strategy file");
  auto ecore = app.add_subcommand("e-core", "does some core profile satisfy gamma");
  auto acore = app.add_subcommand("a-core", "do all core profiles satisfy gamma");
  for (auto* c : {ecore, acore}) {
    common(c);
    c->add_option("--gamma,gamma", o.gamma, "property name or objective text")->required();
  }
  auto sim = app.add_subcommand("simulate", "Monte Carlo runs of a strategy profile");
  common(sim);
  sim->add_option("--profile", o.profile, "JSON list of strategies (missing agents play uniformly)");
  sim->add_option("--coalition", o.coalition, "simulate on the coalition arena of these agents");
  sim->add_option("--objective", o.objective, "objectives to count");
  sim->add_option("--lambda", o.lambda, "loss rate, e.g. 1/10 (default: model, else 1/2)");
  sim->add_option("--horizon", o.horizon, "steps per episode")->check(CLI::NonNegativeNumber);
  sim->add_option("--episodes", o.episodes, "episodes")->check(CLI::PositiveNumber);
  sim->add_option("--seed", o.seed, "64-bit seed");
  auto oracle = app.add_subcommand("oracle", "explicit-state cross-checks");
  oracle->require_subcommand(1);
  auto opre = oracle->add_subcommand("pre", "compare pre with one-step enumeration");
  common(opre);
  opre->add_option("--player", o.player, "agent")->required();
  opre->add_option("--target", o.target, "state set regex")->required();
  opre->add_option("--max-len", o.max_len, "longest channel checked")->check(CLI::NonNegativeNumber);
  auto osmall = oracle->add_subcommand("small-controller", "search small deterministic controllers of a bounded 1.5-player game");
  common(osmall);
  osmall->add_option("--player", o.player, "agent");
  osmall->add_option("--objective,objective", o.objective, "conjunction")->required();
  osmall->add_option("--memory", o.memory, "memory states")->check(CLI::PositiveNumber);
  osmall->add_option("--bound", o.bound, "channel bound")->check(CLI::NonNegativeNumber);
  auto dot = app.add_subcommand("export-dot", "DOT files for the arena and, with an objective, its region");
  common(dot);
  dot->add_option("--dot-dir", o.dot_dir, "output directory")->required();
  dot->add_option("--player", o.player, "agent");
  dot->add_option("--objective", o.objective, "property name or objective text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  json report;
  int code = 2;
  try {
    std::string command;
    if (*solve) command = "solve", code = cmd_solve(o, report);
    else if (*synth) command = "synthesize", code = cmd_synthesize(o, report);
    else if (*ecore) command = "e-core", code = cmd_core(o, report, true);
    else if (*acore) command = "a-core", code = cmd_core(o, report, false);
    else if (*sim) command = "simulate", code = cmd_simulate(o, report);
    else if (*opre) command = "oracle pre", code = cmd_oracle_pre(o, report);
    else if (*osmall) command = "oracle small-controller", code = cmd_oracle_small(o, report);
    else if (*dot) command = "export-dot", code = cmd_export_dot(o, report);
    json head{{"command", command}, {"model", o.model}};
    head.update(report);
    report = std::move(head);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    report = json{{"error", e.what()}};
    code = 2;
  }
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!o.out.empty()) {
    try {
      write_file(o.out, text);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return code;
}
