#include "cslcg/strategy.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "cslcg/error.hpp"
#include "cslcg/model.hpp"
#include "json.hpp"

namespace cslcg {

namespace {

using nlohmann::json;

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

std::vector<Symbol> symbols_of(const Alphabet& al, const State& s) {
  std::vector<Symbol> w{al.location(s.location)};
  for (int m : s.channel) w.push_back(al.message(m));
  return w;
}

ActionWeights uniform_over(int n, const std::vector<int>& support) {
  ActionWeights w(idx(n), Rational(0));
  for (int a : support) w[idx(a)] = Rational(1, static_cast<std::int64_t>(support.size()));
  return w;
}

ActionWeights point_mass(int n, int a) { return uniform_over(n, {a}); }

// Splits `universe` by membership in each feature; empty parts are dropped.
struct Part {
  RegularSet set;
  std::vector<char> in;
};

std::vector<Part> partition(const RegularSet& universe, const std::vector<RegularSet>& features) {
  std::vector<Part> parts;
  if (!universe.is_empty()) parts.push_back({universe, {}});
  for (const auto& f : features) {
    std::vector<Part> next;
    for (auto& p : parts) {
      RegularSet in = intersect(p.set, f), out = subtract(p.set, f);
      if (!in.is_empty()) {
        next.push_back({in, p.in});
        next.back().in.push_back(1);
      }
      if (!out.is_empty()) {
        next.push_back({out, p.in});
        next.back().in.push_back(0);
      }
    }
    parts = std::move(next);
  }
  return parts;
}

// Merges parts with identical weights into one cell each, in first-seen order.
class CellBuilder {
 public:
  void add(const RegularSet& guard, const ActionWeights& w, const std::string& label) {
    for (auto& c : cells_)
      if (c.weights == w && c.label == label) {
        c.guard = unite(c.guard, guard);
        return;
      }
    cells_.push_back({guard, w, label});
  }
  void flush(PFMStrategy& s) {
    for (auto& c : cells_) s.add_cell(std::move(c.guard), std::move(c.weights), std::move(c.label));
    cells_.clear();
  }

 private:
  std::vector<StrategyCell> cells_;
};

void require_plain(const Region& r, const char* algorithm, const char* who) {
  if (r.dual) throw Error(std::string(who) + ": expected a primal region, got a dual one");
  if (r.trace.algorithm != algorithm) throw Error(std::string(who) + ": expected a " + algorithm + " trace");
  if (r.trace.views.empty()) throw Error(std::string(who) + ": trace has no views");
  if (!r.trace.views[0].arena().monitor().trivial()) throw Error(std::string(who) + ": strategies over lifted arenas are not supported");
}

// The view with the same restrictions but nothing frozen.
GameView unfrozen(const GameView& v) {
  GameView out(v.arena_ptr());
  for (int p = 0; p < 2; ++p)
    if (v.restriction(p)) out = out.restricted(p, *v.restriction(p));
  return out;
}

// assemble(x -> f(x)) over the locations of the view.
template <class Fn>
RegularSet per_location(const GameView& v, Fn f) {
  std::vector<RegularSet> per;
  for (int x = 0; x < v.num_locations(); ++x) per.push_back(f(x));
  return assemble(v.alphabet(), per);
}

std::string format_weights(const PFMStrategy& s, const ActionWeights& w) {
  std::string out;
  for (std::size_t a = 0; a < w.size(); ++a) {
    if (w[a] == Rational(0)) continue;
    if (!out.empty()) out += ", ";
    out += s.arena()->action_name(s.player(), static_cast<int>(a)) + ":" + format_rational(w[a]);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Representations

PFMStrategy::PFMStrategy(ArenaPtr arena, int player) : arena_(std::move(arena)), player_(player) {
  if (!arena_) throw ModelError("strategy needs an arena");
  if (player < 0 || player >= arena_->num_agents()) throw ModelError("strategy player out of range");
}

void PFMStrategy::add_cell(RegularSet guard, ActionWeights weights, std::string label) {
  if (guard.kind() != SetKind::States || !guard.alphabet()->same_as(*arena_->alphabet)) throw MismatchError("cell guard must be a state set over the arena alphabet");
  if (static_cast<int>(weights.size()) != arena_->num_actions(player_)) throw ModelError("cell needs one weight per action");
  Rational sum(0);
  for (const auto& w : weights) {
    if (w < Rational(0)) throw ModelError("negative action weight");
    sum += w;
  }
  if (sum != Rational(1)) throw ModelError("action weights must sum to 1");
  cells_.push_back({std::move(guard), std::move(weights), std::move(label)});
}

std::optional<std::size_t> PFMStrategy::cell_of(const State& s) const {
  auto w = symbols_of(*arena_->alphabet, s);
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (cells_[i].guard.accepts(w)) return i;
  return std::nullopt;
}

ActionWeights PFMStrategy::query(const State& s) const {
  auto allowed = allowed_actions(*arena_, s, player_);
  auto c = cell_of(s);
  if (!c) {
    if (allowed.empty()) throw Error("no action allowed at " + arena_->alphabet->render(symbols_of(*arena_->alphabet, s)));
    return uniform_over(arena_->num_actions(player_), allowed);
  }
  const ActionWeights& w = cells_[*c].weights;
  for (std::size_t a = 0; a < w.size(); ++a)
    if (w[a] > Rational(0) && std::find(allowed.begin(), allowed.end(), static_cast<int>(a)) == allowed.end())
      throw Error("strategy plays " + arena_->action_name(player_, static_cast<int>(a)) + ", which is not allowed at " +
                  arena_->alphabet->render(symbols_of(*arena_->alphabet, s)));
  return w;
}

ActionWeights PFMStrategy::query(const std::vector<State>& history) const {
  if (history.empty()) throw Error("query needs a non-empty history");
  return query(history.back());
}

std::vector<std::string> PFMStrategy::violations() const {
  std::vector<std::string> out;
  RegularSet seen = RegularSet::empty(arena_->alphabet, SetKind::States);
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    RegularSet live = subtract(cells_[i].guard, seen);
    seen = unite(seen, cells_[i].guard);
    for (std::size_t a = 0; a < cells_[i].weights.size(); ++a) {
      if (cells_[i].weights[a] == Rational(0)) continue;
      RegularSet bad = subtract(live, allowed_region(*arena_, player_, static_cast<int>(a)));
      if (!bad.is_empty())
        out.push_back("cell " + std::to_string(i) + " plays " + arena_->action_name(player_, static_cast<int>(a)) + " outside its allowed region, e.g. " +
                      describe_guard(bad, 3, 1));
    }
  }
  return out;
}

double counting_weight(int k) {
  if (k < 0) throw Error("counting index must be non-negative");
  return std::exp2(-std::ldexp(1.0, -k));
}

std::vector<double> CountingStrategy::query(const std::vector<State>& history) const {
  if (history.empty()) throw Error("query needs a non-empty history");
  const double p = counting_weight(static_cast<int>(history.size()) - 1);
  ActionWeights u = urgent.query(history.back()), v = fallback.query(history.back());
  std::vector<double> out(u.size());
  for (std::size_t a = 0; a < u.size(); ++a) out[a] = p * boost::rational_cast<double>(u[a]) + (1 - p) * boost::rational_cast<double>(v[a]);
  return out;
}

std::vector<double> probabilities(const Strategy& s, const std::vector<State>& history) {
  if (auto* p = std::get_if<PFMStrategy>(&s)) {
    std::vector<double> out;
    for (const auto& w : p->query(history)) out.push_back(boost::rational_cast<double>(w));
    return out;
  }
  return std::get<CountingStrategy>(s).query(history);
}

int strategy_player(const Strategy& s) {
  return std::visit([](const auto& x) {
    if constexpr (std::is_same_v<std::decay_t<decltype(x)>, PFMStrategy>)
      return x.player();
    else
      return x.urgent.player();
  }, s);
}

const ArenaPtr& strategy_arena(const Strategy& s) {
  if (auto* p = std::get_if<PFMStrategy>(&s)) return p->arena();
  return std::get<CountingStrategy>(s).urgent.arena();
}

PFMStrategy uniform_strategy(const ArenaPtr& arena, int player) { return PFMStrategy(arena, player); }

// ---------------------------------------------------------------------------
// Synthesis

PFMStrategy synth_nz_reach(const Region& region, bool determinize) {
  require_plain(region, "nz_reach", "synth_nz_reach");
  const GameView& v = region.trace.views[0];
  const MonitoredArena& a = v.arena();
  const int i = region.player, o = 1 - i;
  const int n = v.num_actions(i);
  PFMStrategy s(a.base_ptr(), i);
  auto us = region.trace.series("U");
  for (std::size_t k = 1; k < us.size(); ++k) {
    RegularSet slice = subtract(us[k], us[k - 1]);
    PostCache pc(v, us[k - 1]);
    std::vector<RegularSet> features;
    for (int al = 0; al < n; ++al) {
      features.push_back(per_location(v, [&](int x) {
        RegularSet any = RegularSet::empty(v.alphabet(), SetKind::Channels);
        for (int be = 0; be < v.num_actions(o); ++be) any = unite(any, intersect(v.available(o, x, be), pc.post(x, a.joint(i, al, be))));
        return intersect(v.available(i, x, al), any);
      }));
    }
    if (determinize)
      for (int al = 0; al < n; ++al) {
        features.push_back(per_location(v, [&](int x) {
          RegularSet all = v.available(i, x, al);
          for (int be = 0; be < v.num_actions(o); ++be) all = subtract(all, subtract(v.available(o, x, be), pc.post(x, a.joint(i, al, be))));
          return all;
        }));
      }
    CellBuilder cb;
    for (const auto& p : partition(slice, features)) {
      std::vector<int> useful;
      std::optional<int> single;
      for (int al = 0; al < n; ++al) {
        if (p.in[idx(al)]) useful.push_back(al);
        if (determinize && !single && p.in[idx(n + al)]) single = al;
      }
      if (useful.empty()) continue;
      cb.add(p.set, single ? point_mass(n, *single) : uniform_over(n, useful), "U" + std::to_string(k));
    }
    cb.flush(s);
  }
  return s;
}

PFMStrategy synth_as_reach(const Region& region) {
  require_plain(region, "as_buchi", "synth_as_reach");
  const GameView& v = region.trace.views.back();
  const MonitoredArena& a = v.arena();
  const int i = region.player, n = v.num_actions(i);
  PFMStrategy s(a.base_ptr(), i);
  std::vector<RegularSet> features;
  for (int al = 0; al < n; ++al) features.push_back(intersect(v.available_states(i, al), a.allowed_states(i, al)));
  CellBuilder cb;
  for (const auto& p : partition(region.winning, features)) {
    std::vector<int> stay;
    for (int al = 0; al < n; ++al)
      if (p.in[idx(al)]) stay.push_back(al);
    if (!stay.empty()) cb.add(p.set, uniform_over(n, stay), "Stay(W)");
  }
  cb.flush(s);
  return s;
}

CountingStrategy synth_spoiler(const Region& region) {
  require_plain(region, "as_buchi", "synth_spoiler");
  const auto& t = region.trace;
  const int i = region.player, o = 1 - i;
  const GameView plain = unfrozen(t.views[0]);
  const MonitoredArena& a = plain.arena();
  const int ni = plain.num_actions(i), no = plain.num_actions(o);
  const RegularSet& w = region.winning;
  auto ds = t.series("D"), ys = t.series("Y");
  if (subtract(ds[0], w).is_empty()) throw Error("synth_spoiler: the player wins everywhere, there is nothing to spoil");

  CountingStrategy out{PFMStrategy(a.base_ptr(), o), PFMStrategy(a.base_ptr(), o)};
  CellBuilder urgent, fallback;
  auto emit = [&](const RegularSet& guard, int beta, const std::vector<char>& allowed_o, const std::string& label) {
    urgent.add(guard, point_mass(no, beta), label);
    std::vector<int> others;
    for (int b = 0; b < no; ++b)
      if (allowed_o[idx(b)] && b != beta) others.push_back(b);
    fallback.add(guard, others.empty() ? point_mass(no, beta) : uniform_over(no, others), label);
  };
  std::vector<RegularSet> allowed_o, allowed_i;
  for (int b = 0; b < no; ++b) allowed_o.push_back(a.allowed_states(o, b));
  for (int al = 0; al < ni; ++al) allowed_i.push_back(a.allowed_states(i, al));

  // location-local targets for the hiding test: leaving l or entering W
  std::vector<std::unique_ptr<PostCache>> stay_here;
  std::vector<RegularSet> hide_targets;
  for (int l = 0; l < plain.num_locations(); ++l)
    hide_targets.push_back(unite(w, complement(prefix_location(l, a.channel_universe()))));
  for (int l = 0; l < plain.num_locations(); ++l) stay_here.push_back(std::make_unique<PostCache>(plain, hide_targets[idx(l)]));
  PostCache into_w(plain, w);

  for (std::size_t k = 0; k < ys.size(); ++k) {
    // D_k \ Y_k: the opponent confines the play outside Y_k
    RegularSet yslice = subtract(subtract(ds[k], ys[k]), w);
    if (!yslice.is_empty()) {
      GameView conf = stay(t.views[k], o, complement(ys[k]));
      std::vector<RegularSet> features = allowed_o;
      for (int b = 0; b < no; ++b) features.push_back((*conf.restriction(o))[idx(b)]);
      for (const auto& p : partition(yslice, features)) {
        for (int b = 0; b < no; ++b)
          if (p.in[idx(b)] && p.in[idx(no + b)]) {
            emit(p.set, b, p.in, "Y" + std::to_string(k) + " confine");
            break;
          }
      }
    }
    // Y_k \ D_(k+1): hide at the current location when possible
    RegularSet dslice = subtract(intersect(ds[k], ys[k]), ds[k + 1]);
    if (!dslice.is_empty()) {
      std::vector<RegularSet> features = allowed_o;
      features.insert(features.end(), allowed_i.begin(), allowed_i.end());
      for (int b = 0; b < no; ++b)
        for (int al = 0; al < ni; ++al) {
          const int j = a.joint(i, al, b);
          features.push_back(per_location(plain, [&](int x) { return subtract(plain.defined(x, j), stay_here[idx(a.base_location(x))]->post(x, j)); }));
          features.push_back(per_location(plain, [&](int x) { return subtract(plain.defined(x, j), into_w.post(x, j)); }));
        }
      for (const auto& p : partition(dslice, features)) {
        auto hidden = [&](int b, int al) { return p.in[idx(no + ni + 2 * (b * ni + al))]; };
        auto outside = [&](int b, int al) { return p.in[idx(no + ni + 2 * (b * ni + al) + 1)]; };
        int best = -1;
        std::pair<int, int> best_score{0, 0};
        for (int b = 0; b < no; ++b) {
          if (!p.in[idx(b)]) continue;
          std::pair<int, int> score{0, 0};
          for (int al = 0; al < ni; ++al)
            if (p.in[idx(no + al)]) {
              score.first += hidden(b, al);
              score.second += outside(b, al);
            }
          if (score > best_score) {
            best_score = score;
            best = b;
          }
        }
        if (best >= 0 && best_score.first > 0) emit(p.set, best, p.in, "D" + std::to_string(k + 1) + " hide");
      }
    }
  }
  urgent.flush(out.urgent);
  fallback.flush(out.fallback);
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json dfa_json(const Dfa& d) { return json{{"states", d.num_states()}, {"delta", d.delta}, {"accepting", std::vector<int>(d.accepting.begin(), d.accepting.end())}}; }

json pfm_json(const PFMStrategy& s, std::vector<json>& automata, std::map<std::uint64_t, std::size_t>& refs) {
  json cells = json::array();
  for (const auto& c : s.cells()) {
    auto [it, fresh] = refs.emplace(c.guard.digest(), automata.size());
    if (fresh) automata.push_back(dfa_json(c.guard.dfa()));
    json weights = json::object();
    for (std::size_t a = 0; a < c.weights.size(); ++a)
      if (c.weights[a] != Rational(0)) weights[s.arena()->action_name(s.player(), static_cast<int>(a))] = format_rational(c.weights[a]);
    cells.push_back(json{{"guard", it->second}, {"weights", weights}, {"label", c.label}, {"sample", describe_guard(c.guard)}});
  }
  return json{{"cells", cells}};
}

RegularSet guard_from(const ArenaPtr& arena, const json& g, const json& automata) {
  if (g.is_string()) return from_regex(arena->alphabet, g.get<std::string>(), SetKind::States);
  const json& d = automata.at(g.get<std::size_t>());
  Dfa dfa;
  dfa.num_symbols = arena->alphabet->size();
  dfa.delta = d.at("delta").get<std::vector<int>>();
  for (int x : d.at("accepting").get<std::vector<int>>()) dfa.accepting.push_back(static_cast<char>(x));
  if (static_cast<int>(dfa.delta.size()) != dfa.num_states() * dfa.num_symbols) throw SyntaxError("automaton size mismatch", 0);
  for (int q : dfa.delta)
    if (q < 0 || q >= dfa.num_states()) throw SyntaxError("automaton transition out of range", 0);
  return RegularSet(arena->alphabet, SetKind::States, std::move(dfa));
}

PFMStrategy pfm_from(const ArenaPtr& arena, int player, const json& j, const json& automata) {
  PFMStrategy s(arena, player);
  for (const auto& c : j.at("cells")) {
    ActionWeights w(idx(arena->num_actions(player)), Rational(0));
    for (const auto& [name, value] : c.at("weights").items()) {
      auto a = arena->action_index(player, name);
      if (!a) throw SyntaxError("unknown action '" + name + "'", 0);
      w[idx(*a)] = value.is_string() ? parse_rational(value.get<std::string>()) : Rational(value.get<std::int64_t>());
    }
    s.add_cell(guard_from(arena, c.at("guard"), automata), std::move(w), c.value("label", ""));
  }
  return s;
}

}  // namespace

std::string serialize(const Strategy& s) {
  std::vector<json> automata;
  std::map<std::uint64_t, std::size_t> refs;
  const ArenaPtr& arena = strategy_arena(s);
  json j{{"format", "cslcg-strategy"}, {"player", arena->agents[idx(strategy_player(s))]}};
  if (auto* p = std::get_if<PFMStrategy>(&s)) {
    j["kind"] = "pfm";
    j["strategy"] = pfm_json(*p, automata, refs);
  } else {
    const auto& c = std::get<CountingStrategy>(s);
    j["kind"] = "counting";
    j["schedule"] = "p_k = 2^(-1/2^k), k = moves so far";
    j["urgent"] = pfm_json(c.urgent, automata, refs);
    j["fallback"] = pfm_json(c.fallback, automata, refs);
  }
  j["alphabet"] = json{{"locations", arena->alphabet->locations()}, {"messages", arena->alphabet->messages()}};
  j["automata"] = automata;
  return j.dump(2) + "\n";
}

Strategy parse_strategy(const ArenaPtr& arena, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SyntaxError(std::string("strategy: ") + e.what(), e.byte);
  }
  try {
    auto player = arena->agent_index(j.at("player").get<std::string>());
    if (!player) throw SyntaxError("strategy: unknown player '" + j.at("player").get<std::string>() + "'", 0);
    const json automata = j.value("automata", json::array());
    const std::string kind = j.value("kind", "pfm");
    if (kind == "pfm") return pfm_from(arena, *player, j.at("strategy"), automata);
    if (kind == "counting") return CountingStrategy{pfm_from(arena, *player, j.at("urgent"), automata), pfm_from(arena, *player, j.at("fallback"), automata)};
    throw SyntaxError("strategy: unknown kind '" + kind + "'", 0);
  } catch (const json::exception& e) {
    throw SyntaxError(std::string("strategy: ") + e.what(), 0);
  }
}

std::string describe_guard(const RegularSet& guard, int max_len, std::size_t max_words) {
  auto words = enumerate(guard, max_len);
  std::string out;
  for (std::size_t k = 0; k < words.size() && k < max_words; ++k) {
    if (k) out += ", ";
    out += guard.alphabet()->render(words[k]);
  }
  if (words.size() > max_words || words.empty()) out += words.empty() ? "(no short words)" : ", ...";
  return out;
}

std::string strategy_to_dot(const Strategy& s, const std::string& name) {
  std::ostringstream os;
  auto cells = [&](const PFMStrategy& p, const std::string& prefix) {
    for (std::size_t k = 0; k < p.cells().size(); ++k) {
      const auto& c = p.cells()[k];
      os << "  " << prefix << k << " [shape=box, label=\"" << c.label << "\\n" << describe_guard(c.guard) << "\\n" << format_weights(p, c.weights) << "\"];\n";
      if (k) os << "  " << prefix << (k - 1) << " -> " << prefix << k << " [label=\"else\"];\n";
    }
    os << "  " << prefix << "default [shape=box, label=\"otherwise\\nuniform over allowed\"];\n";
    if (!p.cells().empty()) os << "  " << prefix << (p.cells().size() - 1) << " -> " << prefix << "default [label=\"else\"];\n";
  };
  os << "digraph \"" << name << "\" {\n  rankdir=TB;\n";
  if (auto* p = std::get_if<PFMStrategy>(&s)) {
    cells(*p, "c");
  } else {
    const auto& c = std::get<CountingStrategy>(s);
    os << "  subgraph cluster_u { label=\"urgent, weight p_k\";\n";
    cells(c.urgent, "u");
    os << "  }\n  subgraph cluster_v { label=\"fallback, weight 1 - p_k\";\n";
    cells(c.fallback, "v");
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace cslcg
