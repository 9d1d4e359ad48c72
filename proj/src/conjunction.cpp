#include "cslcg/conjunction.hpp"

#include <cctype>

#include "cslcg/error.hpp"

namespace cslcg {

namespace {

const char* kBoundary =
    "; conjunctions beyond this fragment (co-Büchi, general almost-sure LTL) are undecidable for these games";

class ObjectiveParser {
 public:
  ObjectiveParser(AlphabetPtr al, std::string_view text) : al_(std::move(al)), t_(text) {}

  Formula run() {
    Formula f;
    f.disjuncts.push_back(conj());
    while (eat("||")) f.disjuncts.push_back(conj());
    skip();
    if (p_ != t_.size()) fail("unexpected '" + std::string(t_.substr(p_, 8)) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, p_); }
  void skip() {
    while (p_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[p_]))) ++p_;
  }
  bool eat(std::string_view tok) {
    skip();
    if (t_.substr(p_, tok.size()) != tok) return false;
    p_ += tok.size();
    return true;
  }
  std::string word() {
    skip();
    std::size_t b = p_;
    while (p_ < t_.size() && std::isalpha(static_cast<unsigned char>(t_[p_]))) ++p_;
    return std::string(t_.substr(b, p_ - b));
  }

  Conjunction conj() {
    Conjunction c;
    c.atoms.push_back(atom());
    for (;;) {
      skip();
      if (t_.substr(p_, 2) == "&&") p_ += 2;
      else if (p_ < t_.size() && t_[p_] == '&') ++p_;
      else break;
      c.atoms.push_back(atom());
    }
    return c;
  }

  Objective atom() {
    Quantifier quant = Quantifier::AS;
    PathKind kind = PathKind::Eventually;
    std::size_t at = (skip(), p_);
    std::string q = word();
    if (q == "AS") quant = Quantifier::AS;
    else if (q == "NZ") quant = Quantifier::NZ;
    else {
      p_ = at;
      fail("expected AS or NZ");
    }
    at = (skip(), p_);
    std::string path = word();
    if (path == "F") kind = PathKind::Eventually;
    else if (path == "G") kind = PathKind::Always;
    else if (path == "GF") kind = PathKind::Repeatedly;
    else {
      p_ = at;
      fail("expected F, G or GF");
    }
    bool neg = eat("!");
    skip();
    if (p_ >= t_.size() || (t_[p_] != '"' && t_[p_] != '\'')) fail("expected a quoted regular set");
    char quote = t_[p_];
    std::size_t start = ++p_;
    auto end = t_.find(quote, start);
    if (end == std::string_view::npos) fail("unterminated quoted regular set");
    std::string re(t_.substr(start, end - start));
    std::optional<RegularSet> target;
    try {
      target = from_regex(al_, re, SetKind::States);
    } catch (const SyntaxError& e) {
      p_ = start + e.position();
      fail(e.message());
    }
    p_ = end + 1;
    return Objective{quant, kind, neg ? complement(*target) : *target, (neg ? "!" : "") + re};
  }

  AlphabetPtr al_;
  std::string_view t_;
  std::size_t p_ = 0;
};

const char* quant_name(Quantifier q) { return q == Quantifier::AS ? "AS" : "NZ"; }
const char* path_name(PathKind p) { return p == PathKind::Eventually ? "F" : p == PathKind::Always ? "G" : "GF"; }

std::string negate_text(const std::string& t) { return !t.empty() && t[0] == '!' ? t.substr(1) : "!" + t; }

}  // namespace

Formula parse_objective(const AlphabetPtr& alphabet, std::string_view text) { return ObjectiveParser(alphabet, text).run(); }

std::string to_string(const Objective& o) {
  bool neg = !o.text.empty() && o.text[0] == '!';
  return std::string(quant_name(o.quantifier)) + " " + path_name(o.path) + " " + (neg ? "!" : "") + "\"" + (neg ? o.text.substr(1) : o.text) + "\"";
}

std::string to_string(const Conjunction& c) {
  std::string out;
  for (std::size_t k = 0; k < c.atoms.size(); ++k) out += (k ? " & " : "") + to_string(c.atoms[k]);
  return out;
}

std::string to_string(const Formula& f) {
  std::string out;
  for (std::size_t k = 0; k < f.disjuncts.size(); ++k) out += (k ? " || " : "") + to_string(f.disjuncts[k]);
  return out;
}

Objective negate(const Objective& o) {
  if (o.path == PathKind::Repeatedly)
    throw FragmentError("the negation of " + to_string(o) + " is a co-Büchi objective" + kBoundary);
  Objective n = o;
  n.quantifier = o.quantifier == Quantifier::AS ? Quantifier::NZ : Quantifier::AS;
  n.path = o.path == PathKind::Eventually ? PathKind::Always : PathKind::Eventually;
  n.target = complement(o.target);
  n.text = negate_text(o.text);
  return n;
}

Formula formula_of(const Conjunction& c) { return Formula{{c}}; }

Formula conjoin(const Formula& a, const Formula& b) {
  Formula out;
  for (const auto& x : a.disjuncts)
    for (const auto& y : b.disjuncts) {
      Conjunction c = x;
      c.atoms.insert(c.atoms.end(), y.atoms.begin(), y.atoms.end());
      out.disjuncts.push_back(std::move(c));
    }
  return out;
}

Formula negate(const Formula& f) {
  // ¬⋁_k ⋀_j φ_kj = ⋀_k ⋁_j ¬φ_kj, distributed back into DNF
  Formula out{{Conjunction{}}};
  for (const auto& c : f.disjuncts) {
    Formula clause;
    for (const auto& o : c.atoms) clause.disjuncts.push_back(Conjunction{{negate(o)}});
    out = conjoin(out, clause);
  }
  return out;
}

bool syntactically_inconsistent(const Conjunction& c) {
  for (const auto& o : c.atoms)
    if (o.target.is_empty()) return true;
  for (const auto& s : c.atoms) {
    if (s.quantifier != Quantifier::AS || s.path != PathKind::Always) continue;
    for (const auto& t : c.atoms) {
      bool reaches = t.path == PathKind::Eventually || t.path == PathKind::Repeatedly;
      if (reaches && intersect(s.target, t.target).is_empty()) return true;
    }
  }
  for (const auto& r : c.atoms) {
    if (r.quantifier != Quantifier::AS || r.path != PathKind::Eventually) continue;
    for (const auto& u : c.atoms)
      if (u.quantifier == Quantifier::NZ && u.path == PathKind::Always && intersect(r.target, u.target).is_empty()) return true;
  }
  return false;
}

void check_fragment(const Conjunction& c, bool one_and_half) {
  if (c.atoms.empty()) throw FragmentError("empty conjunction");
  int buchi = 0;
  for (const auto& o : c.atoms) {
    if (o.path != PathKind::Repeatedly) continue;
    if (o.quantifier == Quantifier::NZ) throw FragmentError("NZ GF (positive Büchi) is not supported" + std::string(kBoundary));
    ++buchi;
  }
  if (buchi && !one_and_half && c.atoms.size() > 1)
    throw FragmentError("AS GF may only be combined with other objectives when the opponent has no choice (1.5-player query)" + std::string(kBoundary));
}

bool is_one_and_half(const Arena& a, int player) { return a.num_actions(1 - player) == 1; }

bool initial_in(const Arena& arena, const RegularSet& s) { return s.accepts({arena.alphabet->location(arena.initial_location)}); }

std::pair<MonitoredArenaPtr, RegularSet> buchi_degeneralize(const ArenaPtr& arena, const std::vector<RegularSet>& targets) {
  if (targets.empty()) throw ModelError("buchi_degeneralize needs at least one target");
  if (targets.size() == 1) return {std::make_shared<const MonitoredArena>(arena, Monitor::none()), targets[0]};
  auto lifted = std::make_shared<const MonitoredArena>(arena, Monitor::buchi_counter(targets));
  std::vector<int> flagged;
  for (int m = 1; m < lifted->monitor().num_states; m += 2) flagged.push_back(m);
  return {lifted, lifted->lift_at(RegularSet::universe(arena->alphabet, SetKind::States), flagged)};
}

namespace {

// Restricts `player` to stay in w until every kept state still has an action.
std::pair<GameView, RegularSet> settle(const GameView& view, int player, RegularSet w) {
  GameView a = stay(view, player, w);
  for (;;) {
    RegularSet pruned = intersect(w, a.domain());
    if (pruned == w) return {a, w};
    w = std::move(pruned);
    a = stay(a, player, w);
  }
}

}  // namespace

NzBoxElimination eliminate_nz_box(const GameView& restricted, int player, const RegularSet& safe, const RegularSet& done) {
  RegularSet stays = nz_safe(restricted, player, safe).winning;
  RegularSet target = intersect(stays, done);
  return {target, nz_until(restricted, player, safe, target)};
}

ConjunctionRegion solve_conjunction(const ArenaPtr& arena, int player, const Conjunction& phi) {
  const bool half = is_one_and_half(*arena, player);
  check_fragment(phi, half);
  const AlphabetPtr& al = arena->alphabet;
  for (const auto& o : phi.atoms)
    if (!o.target.alphabet()->same_as(*al) || o.target.kind() != SetKind::States) throw MismatchError("objective targets must be state sets of the arena");

  std::vector<RegularSet> reach, safe, buchi, nzf, nzg;
  for (const auto& o : phi.atoms) {
    if (o.quantifier == Quantifier::AS)
      (o.path == PathKind::Eventually ? reach : o.path == PathKind::Always ? safe : buchi).push_back(o.target);
    else
      (o.path == PathKind::Eventually ? nzf : nzg).push_back(o.target);
  }

  Monitor mon = Monitor::product(reach.empty() ? Monitor::none() : Monitor::absorbing(reach),
                                 buchi.size() >= 2 ? Monitor::buchi_counter(buchi) : Monitor::none());
  auto lifted = std::make_shared<const MonitoredArena>(arena, mon);
  GameView view(lifted);
  const RegularSet base_all = RegularSet::universe(al, SetKind::States);
  const RegularSet all = lifted->universe();

  // monitor state = absorbing mask * (counter states) + counter state
  const int counter_states = buchi.size() >= 2 ? 2 * static_cast<int>(buchi.size()) : 1;
  const int full_mask = (1 << reach.size()) - 1;
  std::vector<int> done_states, flag_states;
  for (int m = 0; m < mon.num_states; ++m) {
    if (m / counter_states == full_mask) done_states.push_back(m);
    if (buchi.size() >= 2 && m % 2 == 1) flag_states.push_back(m);
  }
  RegularSet done = reach.empty() ? all : lifted->lift_at(base_all, done_states);
  RegularSet btarget = buchi.empty() ? all : buchi.size() == 1 ? lifted->lift(buchi[0]) : lifted->lift_at(base_all, flag_states);

  ConjunctionRegion out{RegularSet::empty(al, SetKind::States), RegularSet::empty(lifted->alphabet(), SetKind::States), view, {}, false};
  if (syntactically_inconsistent(phi)) {
    out.inconsistent = true;
    return out;
  }

  GameView a = view;
  RegularSet w = a.domain();
  if (!safe.empty()) {
    RegularSet rs = all;
    for (const auto& s : safe) rs = intersect(rs, lifted->lift(s));
    Region r = as_safe(a, player, rs);
    std::tie(a, w) = settle(a, player, intersect(w, r.winning));
    out.parts.push_back(std::move(r));
  }
  if (!reach.empty() || !buchi.empty()) {
    Region r = as_buchi(a, player, intersect(done, btarget));
    std::tie(a, w) = settle(a, player, intersect(w, r.winning));
    out.parts.push_back(std::move(r));
  }
  for (const auto& t : nzf) {
    Region r = nz_reach(a, player, lifted->lift(t));
    w = intersect(w, r.winning);
    out.parts.push_back(std::move(r));
  }
  for (const auto& u : nzg) {
    RegularSet lu = lifted->lift(u);
    if (buchi.empty()) {
      auto e = eliminate_nz_box(a, player, lu, done);
      w = intersect(w, e.region.winning);
      out.parts.push_back(std::move(e.region));
    } else {
      // staying in u must not give up the repeated target: the positive branch
      // ends in a region winning AS(G u & GF target)
      Region su = as_safe(a, player, lu);
      auto [au, wu] = settle(a, player, su.winning);
      Region inner = as_buchi(au, player, intersect(done, btarget));
      Region r = nz_until(a, player, lu, intersect(inner.winning, wu));
      w = intersect(w, r.winning);
      out.parts.push_back(std::move(r));
    }
  }
  out.lifted_winning = w;
  out.view = a;
  out.winning = lifted->project(w);
  return out;
}

ConjunctionRegion solve_formula(const ArenaPtr& arena, int player, const Formula& phi) {
  if (phi.disjuncts.empty()) throw FragmentError("empty formula");
  if (phi.single()) return solve_conjunction(arena, player, phi.disjuncts[0]);
  for (const auto& c : phi.disjuncts)
    if (c.atoms.size() != 1 || c.atoms[0].quantifier != Quantifier::NZ)
      throw FragmentError("a disjunction can be solved directly only when every disjunct is a single NZ objective" + std::string(kBoundary));
  ConjunctionRegion out = solve_conjunction(arena, player, phi.disjuncts[0]);
  out.lifted_winning = out.winning;
  for (std::size_t k = 1; k < phi.disjuncts.size(); ++k) {
    auto r = solve_conjunction(arena, player, phi.disjuncts[k]);
    out.winning = unite(out.winning, r.winning);
    out.parts.insert(out.parts.end(), r.parts.begin(), r.parts.end());
  }
  out.lifted_winning = out.winning;
  out.view = GameView::of(arena);
  return out;
}

}  // namespace cslcg
