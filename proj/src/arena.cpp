#include "cslcg/arena.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "cslcg/error.hpp"

namespace cslcg {

int Arena::num_joint() const {
  int n = 1;
  for (const auto& a : actions) n *= static_cast<int>(a.size());
  return n;
}

int Arena::encode(const std::vector<int>& profile) const {
  int j = 0;
  for (int i = 0; i < num_agents(); ++i) j = j * num_actions(i) + profile[static_cast<std::size_t>(i)];
  return j;
}

std::vector<int> Arena::decode(int joint) const {
  std::vector<int> p(static_cast<std::size_t>(num_agents()));
  for (int i = num_agents() - 1; i >= 0; --i) {
    p[static_cast<std::size_t>(i)] = joint % num_actions(i);
    joint /= num_actions(i);
  }
  return p;
}

std::optional<int> Arena::agent_index(std::string_view name) const {
  for (int i = 0; i < num_agents(); ++i)
    if (agents[static_cast<std::size_t>(i)] == name) return i;
  return std::nullopt;
}

std::optional<int> Arena::action_index(int agent, std::string_view name) const {
  for (int a = 0; a < num_actions(agent); ++a)
    if (action_name(agent, a) == name) return a;
  return std::nullopt;
}

std::string Arena::joint_name(int joint) const {
  auto p = decode(joint);
  bool short_names = true;
  for (int i = 0; i < num_agents(); ++i) short_names = short_names && action_name(i, p[static_cast<std::size_t>(i)]).size() == 1;
  std::string out;
  for (int i = 0; i < num_agents(); ++i) {
    if (i && !short_names) out += ',';
    out += action_name(i, p[static_cast<std::size_t>(i)]);
  }
  return short_names ? out : "(" + out + ")";
}

void Arena::reset_table() {
  table.assign(static_cast<std::size_t>(alphabet->num_locations()),
               std::vector<Distribution>(static_cast<std::size_t>(num_joint())));
}

// ---------------------------------------------------------------------------
// Allowed actions

RegularSet defined_channels(const Arena& arena, int location, int joint) {
  std::optional<int> popped;
  for (const auto& o : arena.row(location, joint)) {
    if (o.probability <= Rational(0) || o.op.tag != ChannelOp::Tag::Pop) continue;
    if (popped && *popped != o.op.message) return RegularSet::empty(arena.alphabet, SetKind::Channels);
    popped = o.op.message;
  }
  if (!popped) return RegularSet::universe(arena.alphabet, SetKind::Channels);
  return channels_ending_with(arena.alphabet, *popped);
}

namespace {

// Calls fn(joint) for every joint action whose component for `agent` is `action`.
template <class Fn>
void for_completions(const Arena& arena, int agent, int action, Fn&& fn) {
  for (int j = 0; j < arena.num_joint(); ++j)
    if (arena.decode(j)[static_cast<std::size_t>(agent)] == action) fn(j);
}

bool row_defined(const Arena& arena, int location, int joint, const std::vector<int>& channel) {
  for (const auto& o : arena.row(location, joint))
    if (o.probability > Rational(0) && !o.op.apply(channel)) return false;
  return true;
}

}  // namespace

RegularSet allowed_channels(const Arena& arena, int location, int agent, int action) {
  RegularSet out = RegularSet::empty(arena.alphabet, SetKind::Channels);
  std::set<int> pops;
  bool free = false;
  for_completions(arena, agent, action, [&](int j) {
    if (free) return;
    std::set<int> here;
    for (const auto& o : arena.row(location, j))
      if (o.probability > Rational(0) && o.op.tag == ChannelOp::Tag::Pop) here.insert(o.op.message);
    if (here.empty()) free = true;
    else if (here.size() == 1) pops.insert(*here.begin());
  });
  if (free) return RegularSet::universe(arena.alphabet, SetKind::Channels);
  for (int m : pops) out = unite(out, channels_ending_with(arena.alphabet, m));
  return out;
}

std::vector<int> allowed_actions(const Arena& arena, const State& s, int agent) {
  std::vector<int> out;
  for (int a = 0; a < arena.num_actions(agent); ++a) {
    bool ok = false;
    for_completions(arena, agent, a, [&](int j) { ok = ok || row_defined(arena, s.location, j, s.channel); });
    if (ok) out.push_back(a);
  }
  return out;
}

RegularSet allowed_region(const Arena& arena, int agent, int action) {
  std::vector<RegularSet> per;
  for (int l = 0; l < arena.alphabet->num_locations(); ++l) per.push_back(allowed_channels(arena, l, agent, action));
  return assemble(arena.alphabet, per);
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate(const Arena& arena) {
  ValidationReport r;
  auto bad = [&](std::string s) { r.violations.push_back(std::move(s)); };
  if (!arena.alphabet) {
    bad("arena has no alphabet");
    return r;
  }
  const Alphabet& al = *arena.alphabet;
  if (arena.agents.empty()) bad("arena has no agents");
  if (arena.actions.size() != arena.agents.size()) {
    bad("action lists do not match the agent list");
    return r;
  }
  std::set<std::string> agent_names;
  std::map<std::string, std::string> owner;
  for (int i = 0; i < arena.num_agents(); ++i) {
    const auto& name = arena.agents[static_cast<std::size_t>(i)];
    if (!agent_names.insert(name).second) bad("agent '" + name + "' declared twice");
    if (arena.actions[static_cast<std::size_t>(i)].empty()) bad("agent '" + name + "' has no actions");
    std::set<std::string> mine;
    for (const auto& a : arena.actions[static_cast<std::size_t>(i)]) {
      if (!mine.insert(a).second) bad("action '" + a + "' listed twice for agent '" + name + "'");
      auto [it, fresh] = owner.emplace(a, name);
      if (!fresh && it->second != name)
        r.notes.push_back("action name '" + a + "' is used by agents '" + it->second + "' and '" + name +
                          "'; actions are agent-qualified");
    }
  }
  if (arena.initial_location < 0 || arena.initial_location >= al.num_locations()) bad("initial location out of range");
  if (!r.ok()) return r;

  const int nj = arena.num_joint();
  if (static_cast<int>(arena.table.size()) != al.num_locations()) {
    bad("transition table does not cover every location");
    return r;
  }
  bool rows_ok = true;
  for (int l = 0; l < al.num_locations(); ++l) {
    if (static_cast<int>(arena.table[static_cast<std::size_t>(l)].size()) != nj) {
      bad("transition table at " + al.locations()[static_cast<std::size_t>(l)] + " has the wrong number of joint actions");
      rows_ok = false;
      continue;
    }
    for (int j = 0; j < nj; ++j) {
      const auto& row = arena.row(l, j);
      std::string where = al.locations()[static_cast<std::size_t>(l)] + " " + arena.joint_name(j);
      if (row.empty()) {
        bad("missing row for " + where);
        rows_ok = false;
        continue;
      }
      Rational sum = 0;
      for (const auto& o : row) {
        if (o.probability <= Rational(0)) bad("non-positive probability in row " + where);
        if (o.location < 0 || o.location >= al.num_locations()) bad("undeclared target location in row " + where);
        if (o.op.tag != ChannelOp::Tag::Nop && (o.op.message < 0 || o.op.message >= al.num_messages()))
          bad("undeclared message in row " + where);
        sum += o.probability;
      }
      if (sum != Rational(1)) {
        std::ostringstream os;
        os << "distribution of row " << where << " sums to " << sum << ", not 1";
        bad(os.str());
      }
    }
  }
  if (!rows_ok || !r.ok()) return r;

  auto sample = [&](const RegularSet& s) {
    auto w = enumerate(s, 4);
    return w.empty() ? std::string("?") : "'" + al.render(w.front()) + "'";
  };
  for (int l = 0; l < al.num_locations(); ++l) {
    const std::string& ln = al.locations()[static_cast<std::size_t>(l)];
    std::vector<std::vector<RegularSet>> allowed(static_cast<std::size_t>(arena.num_agents()));
    for (int i = 0; i < arena.num_agents(); ++i) {
      RegularSet any = RegularSet::empty(arena.alphabet, SetKind::Channels);
      for (int a = 0; a < arena.num_actions(i); ++a) {
        allowed[static_cast<std::size_t>(i)].push_back(allowed_channels(arena, l, i, a));
        any = unite(any, allowed[static_cast<std::size_t>(i)].back());
      }
      RegularSet stuck = complement(any);
      if (!stuck.is_empty())
        bad("agent '" + arena.agents[static_cast<std::size_t>(i)] + "' has no allowed action at " + ln +
            " for channels such as " + sample(prefix_location(l, stuck)));
    }
    for (int j = 0; j < nj; ++j) {
      auto p = arena.decode(j);
      RegularSet all = RegularSet::universe(arena.alphabet, SetKind::Channels);
      for (int i = 0; i < arena.num_agents(); ++i)
        all = intersect(all, allowed[static_cast<std::size_t>(i)][static_cast<std::size_t>(p[static_cast<std::size_t>(i)])]);
      RegularSet broken = subtract(all, defined_channels(arena, l, j));
      if (!broken.is_empty())
        bad("joint action " + arena.joint_name(j) + " at " + ln +
            " combines allowed actions into an undefined operation, e.g. at " + sample(prefix_location(l, broken)));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Coalitions

namespace {

std::vector<int> rest_of(const Arena& arena, const std::vector<int>& coalition) {
  std::vector<int> rest;
  for (int i = 0; i < arena.num_agents(); ++i)
    if (std::find(coalition.begin(), coalition.end(), i) == coalition.end()) rest.push_back(i);
  return rest;
}

// Mixed-radix decoding of a group action into per-agent actions.
void fill_group(const Arena& arena, const std::vector<int>& group, int action, std::vector<int>& profile) {
  for (int k = static_cast<int>(group.size()) - 1; k >= 0; --k) {
    int agent = group[static_cast<std::size_t>(k)];
    profile[static_cast<std::size_t>(agent)] = action % arena.num_actions(agent);
    action /= arena.num_actions(agent);
  }
}

std::pair<std::string, std::vector<std::string>> group_actions(const Arena& arena, const std::vector<int>& group) {
  if (group.empty()) return {"_nobody", {"_"}};
  std::string name;
  std::vector<std::string> names{""};
  bool short_names = true;
  for (int a : group)
    for (const auto& n : arena.actions[static_cast<std::size_t>(a)]) short_names = short_names && n.size() == 1;
  for (std::size_t k = 0; k < group.size(); ++k) {
    int agent = group[k];
    if (k) name += '+';
    name += arena.agents[static_cast<std::size_t>(agent)];
    std::vector<std::string> next;
    for (const auto& prefix : names)
      for (const auto& n : arena.actions[static_cast<std::size_t>(agent)])
        next.push_back(k == 0 ? n : prefix + (short_names ? "" : ",") + n);
    names = std::move(next);
  }
  return {name, names};
}

}  // namespace

std::vector<int> coalition_profile(const Arena& arena, const std::vector<int>& coalition, int c_action, int r_action) {
  std::vector<int> profile(static_cast<std::size_t>(arena.num_agents()));
  fill_group(arena, coalition, c_action, profile);
  fill_group(arena, rest_of(arena, coalition), r_action, profile);
  return profile;
}

Arena coalition_arena(const Arena& arena, const std::vector<int>& coalition_in) {
  std::vector<int> coalition = coalition_in;
  std::sort(coalition.begin(), coalition.end());
  coalition.erase(std::unique(coalition.begin(), coalition.end()), coalition.end());
  if (coalition.empty()) throw ModelError("coalition must be non-empty");
  for (int a : coalition)
    if (a < 0 || a >= arena.num_agents()) throw ModelError("coalition member out of range");
  std::vector<int> rest = rest_of(arena, coalition);

  Arena out;
  out.alphabet = arena.alphabet;
  out.initial_location = arena.initial_location;
  auto [cname, cacts] = group_actions(arena, coalition);
  auto [rname, racts] = group_actions(arena, rest);
  out.agents = {cname, rname};
  out.actions = {cacts, racts};
  out.reset_table();
  for (int l = 0; l < arena.alphabet->num_locations(); ++l)
    for (int c = 0; c < out.num_actions(0); ++c)
      for (int r = 0; r < out.num_actions(1); ++r)
        out.table[static_cast<std::size_t>(l)][static_cast<std::size_t>(out.encode({c, r}))] =
            arena.row(l, arena.encode(coalition_profile(arena, coalition, c, r)));
  return out;
}

// ---------------------------------------------------------------------------
// Losses

Rational loss_probability(const LossModel& model, const std::vector<int>& w, const std::vector<int>& w2) {
  const std::size_t n = w.size(), m = w2.size();
  if (m > n) return 0;
  // embeddings[j]: number of ways to embed w2[0..j) into the prefix read so far
  std::vector<std::int64_t> embeddings(m + 1, 0);
  embeddings[0] = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = std::min(m, i + 1); j >= 1; --j)
      if (w[i] == w2[j - 1]) embeddings[j] += embeddings[j - 1];
  Rational p = embeddings[m];
  for (std::size_t k = 0; k < n - m; ++k) p *= model.lambda;
  for (std::size_t k = 0; k < m; ++k) p *= 1 - model.lambda;
  return p;
}

std::string arena_to_dot(const Arena& arena) {
  const Alphabet& al = *arena.alphabet;
  std::map<std::pair<int, int>, std::vector<std::string>> labels;
  for (int l = 0; l < al.num_locations(); ++l)
    for (int j = 0; j < arena.num_joint(); ++j)
      for (const auto& o : arena.row(l, j)) {
        std::string lbl = arena.joint_name(j);
        if (o.op.tag == ChannelOp::Tag::Push) lbl += "|" + al.messages()[static_cast<std::size_t>(o.op.message)] + "!";
        if (o.op.tag == ChannelOp::Tag::Pop) lbl += "|" + al.messages()[static_cast<std::size_t>(o.op.message)] + "?";
        if (o.probability != Rational(1)) {
          std::ostringstream os;
          os << " [" << o.probability << "]";
          lbl += os.str();
        }
        labels[{l, o.location}].push_back(lbl);
      }
  std::ostringstream os;
  os << "digraph arena {\n  init [shape=point];\n  init -> \"" << al.locations()[static_cast<std::size_t>(arena.initial_location)] << "\";\n";
  for (const auto& n : al.locations()) os << "  \"" << n << "\" [shape=ellipse];\n";
  for (const auto& [key, ls] : labels) {
    os << "  \"" << al.locations()[static_cast<std::size_t>(key.first)] << "\" -> \""
       << al.locations()[static_cast<std::size_t>(key.second)] << "\" [label=\"";
    for (std::size_t k = 0; k < ls.size(); ++k) os << (k ? ", " : "") << ls[k];
    os << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Monitors

Monitor Monitor::none() {
  Monitor m;
  m.num_states = 1;
  m.next = {0};
  m.state_names = {""};
  return m;
}

Monitor Monitor::absorbing(std::vector<RegularSet> targets) {
  Monitor m;
  const int k = static_cast<int>(targets.size());
  m.targets = std::move(targets);
  m.num_states = 1 << k;
  for (int s = 0; s < m.num_states; ++s) {
    std::string name;
    for (int j = 0; j < k; ++j) name += (s >> j & 1) ? '1' : '0';
    m.state_names.push_back(name);
    for (int mask = 0; mask < m.num_states; ++mask) m.next.push_back(s | mask);
  }
  return m;
}

Monitor Monitor::buchi_counter(std::vector<RegularSet> targets) {
  Monitor m;
  const int k = static_cast<int>(targets.size());
  if (k == 0) return none();
  m.targets = std::move(targets);
  m.num_states = 2 * k;
  for (int s = 0; s < m.num_states; ++s) {
    int c = s / 2;
    m.state_names.push_back("c" + std::to_string(c) + "f" + std::to_string(s % 2));
    for (int mask = 0; mask < (1 << k); ++mask) {
      int c2 = c, flag = 0;
      if (mask >> c & 1) {
        c2 = c + 1;
        if (c2 == k) {
          c2 = 0;
          flag = 1;
        }
      }
      m.next.push_back(c2 * 2 + flag);
    }
  }
  return m;
}

Monitor Monitor::product(const Monitor& a, const Monitor& b) {
  if (a.trivial() && a.targets.empty()) return b;
  if (b.trivial() && b.targets.empty()) return a;
  Monitor m;
  m.targets = a.targets;
  m.targets.insert(m.targets.end(), b.targets.begin(), b.targets.end());
  m.num_states = a.num_states * b.num_states;
  const int ka = a.num_targets();
  const int masks = m.num_masks();
  for (int sa = 0; sa < a.num_states; ++sa)
    for (int sb = 0; sb < b.num_states; ++sb) {
      m.state_names.push_back(a.state_names[static_cast<std::size_t>(sa)] + "_" + b.state_names[static_cast<std::size_t>(sb)]);
      for (int mask = 0; mask < masks; ++mask)
        m.next.push_back(a.step(sa, mask & ((1 << ka) - 1)) * b.num_states + b.step(sb, mask >> ka));
    }
  return m;
}

// ---------------------------------------------------------------------------
// Monitored arenas

RegularSet translate_channels(const RegularSet& channels, const AlphabetPtr& to) {
  if (channels.kind() != SetKind::Channels) throw MismatchError("translate_channels needs a channel set");
  const Alphabet& from = *channels.alphabet();
  if (&from == to.get()) return channels;
  if (from.messages() != to->messages()) throw MismatchError("alphabets differ in their messages");
  const Dfa& d = channels.dfa();
  Dfa out;
  out.num_symbols = to->size();
  const int sink = d.num_states();
  out.accepting = d.accepting;
  out.accepting.push_back(0);
  for (int q = 0; q <= sink; ++q)
    for (Symbol s = 0; s < to->size(); ++s) {
      if (q == sink || to->is_location(s)) out.delta.push_back(sink);
      else out.delta.push_back(d.next(q, from.message(to->message_index(s))));
    }
  return RegularSet(to, SetKind::Channels, out);
}

MonitoredArena::MonitoredArena(ArenaPtr base, Monitor monitor) : base_(std::move(base)), monitor_(std::move(monitor)) {
  const Arena& a = *base_;
  if (a.num_agents() != 2) throw ModelError("solvers need a two-player arena; build a coalition arena first");
  const Alphabet& al = *a.alphabet;
  const int S = monitor_.num_states;
  const int L = al.num_locations();
  if (monitor_.trivial()) {
    alphabet_ = a.alphabet;
  } else {
    std::vector<std::string> names;
    for (int l = 0; l < L; ++l)
      for (int m = 0; m < S; ++m) names.push_back(al.locations()[static_cast<std::size_t>(l)] + "#" + monitor_.state_names[static_cast<std::size_t>(m)]);
    alphabet_ = std::make_shared<Alphabet>(names, al.messages());
  }
  const int masks = monitor_.num_masks();
  for (int l = 0; l < L; ++l) {
    std::vector<RegularSet> res;
    for (const auto& t : monitor_.targets) {
      if (!t.alphabet()->same_as(al) || t.kind() != SetKind::States) throw MismatchError("monitor targets must be base state sets");
      res.push_back(residual_location(t, l));
    }
    for (int mask = 0; mask < masks; ++mask) {
      RegularSet g = RegularSet::universe(a.alphabet, SetKind::Channels);
      for (int j = 0; j < monitor_.num_targets(); ++j)
        g = (mask >> j & 1) ? intersect(g, res[static_cast<std::size_t>(j)]) : subtract(g, res[static_cast<std::size_t>(j)]);
      mask_guards_.push_back(translate_channels(g, alphabet_));
    }
  }
  for (int m = 0; m < S; ++m)
    for (int l = 0; l < L; ++l)
      for (int m2 = 0; m2 < S; ++m2) {
        RegularSet g = RegularSet::empty(alphabet_, SetKind::Channels);
        for (int mask = 0; mask < masks; ++mask)
          if (monitor_.step(m, mask) == m2) g = unite(g, mask_guard(l, mask));
        guards_.push_back(g);
      }
  allowed_.resize(2);
  allowed_states_.resize(2);
  for (int p = 0; p < 2; ++p) {
    for (int l = 0; l < L; ++l) {
      std::vector<RegularSet> per;
      for (int act = 0; act < a.num_actions(p); ++act) per.push_back(translate_channels(allowed_channels(a, l, p, act), alphabet_));
      allowed_[static_cast<std::size_t>(p)].push_back(per);
    }
    for (int act = 0; act < a.num_actions(p); ++act) {
      std::vector<RegularSet> per;
      for (int x = 0; x < num_locations(); ++x) per.push_back(allowed(p, base_location(x), act));
      allowed_states_[static_cast<std::size_t>(p)].push_back(assemble(alphabet_, per));
    }
  }
}

int MonitoredArena::joint(int player, int action, int other) const {
  return player == 0 ? base_->encode({action, other}) : base_->encode({other, action});
}

const RegularSet& MonitoredArena::guard(int m, int l, int m2) const {
  const int S = monitor_.num_states;
  return guards_[static_cast<std::size_t>((m * base_->alphabet->num_locations() + l) * S + m2)];
}

const RegularSet& MonitoredArena::allowed(int player, int l, int action) const {
  return allowed_[static_cast<std::size_t>(player)][static_cast<std::size_t>(l)][static_cast<std::size_t>(action)];
}

RegularSet MonitoredArena::land(int m, int l, const RegularSet& lifted_b) const {
  RegularSet out = RegularSet::empty(alphabet_, SetKind::Channels);
  for (int m2 = 0; m2 < monitor_.num_states; ++m2) {
    const RegularSet& g = guard(m, l, m2);
    if (g.is_empty()) continue;
    out = unite(out, intersect(g, residual_location(lifted_b, lift_location(l, m2))));
  }
  return out;
}

RegularSet MonitoredArena::rebase(const RegularSet& base_channels) const { return translate_channels(base_channels, alphabet_); }

RegularSet MonitoredArena::lift(const RegularSet& base_states) const {
  std::vector<int> all(static_cast<std::size_t>(monitor_.num_states));
  for (int m = 0; m < monitor_.num_states; ++m) all[static_cast<std::size_t>(m)] = m;
  return lift_at(base_states, all);
}

RegularSet MonitoredArena::lift_at(const RegularSet& base_states, const std::vector<int>& monitor_states) const {
  if (!base_states.alphabet()->same_as(*base_->alphabet)) throw MismatchError("lift needs a base state set");
  if (monitor_.trivial()) return base_states;
  std::vector<RegularSet> per(static_cast<std::size_t>(num_locations()), RegularSet::empty(alphabet_, SetKind::Channels));
  for (int l = 0; l < base_->alphabet->num_locations(); ++l) {
    RegularSet r = rebase(residual_location(base_states, l));
    for (int m : monitor_states) per[static_cast<std::size_t>(lift_location(l, m))] = r;
  }
  return assemble(alphabet_, per);
}

RegularSet MonitoredArena::project(const RegularSet& lifted) const {
  if (!lifted.alphabet()->same_as(*alphabet_)) throw MismatchError("project needs a lifted state set");
  if (monitor_.trivial()) return lifted;
  std::vector<RegularSet> per;
  for (int l = 0; l < base_->alphabet->num_locations(); ++l) {
    RegularSet c = RegularSet::empty(alphabet_, SetKind::Channels);
    for (int mask = 0; mask < monitor_.num_masks(); ++mask) {
      const RegularSet& g = mask_guard(l, mask);
      if (g.is_empty()) continue;
      c = unite(c, intersect(g, residual_location(lifted, lift_location(l, monitor_.step(0, mask)))));
    }
    per.push_back(translate_channels(c, base_->alphabet));
  }
  return assemble(base_->alphabet, per);
}

int MonitoredArena::mask_of(const State& s) const {
  std::vector<Symbol> word{base_->alphabet->location(s.location)};
  for (int m : s.channel) word.push_back(base_->alphabet->message(m));
  int mask = 0;
  for (int j = 0; j < monitor_.num_targets(); ++j)
    if (monitor_.targets[static_cast<std::size_t>(j)].accepts(word)) mask |= 1 << j;
  return mask;
}

State MonitoredArena::entry(const State& s) const {
  return State{lift_location(s.location, monitor_.step(0, mask_of(s))), s.channel};
}

std::pair<MonitoredArenaPtr, std::vector<RegularSet>> make_absorbing(const ArenaPtr& arena, const std::vector<RegularSet>& targets) {
  if (targets.empty()) throw ModelError("make_absorbing needs at least one target");
  auto lifted = std::make_shared<const MonitoredArena>(arena, Monitor::absorbing(targets));
  std::vector<RegularSet> out;
  for (std::size_t j = 0; j < targets.size(); ++j) {
    std::vector<int> states;
    for (int m = 0; m < lifted->monitor().num_states; ++m)
      if (m >> j & 1) states.push_back(m);
    out.push_back(lifted->lift_at(RegularSet::universe(arena->alphabet, SetKind::States), states));
  }
  return {lifted, out};
}

}  // namespace cslcg
