#include "cslcg/zerosum.hpp"

#include "cslcg/error.hpp"

namespace cslcg {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

RegularSet empty_channels(const GameView& v) { return RegularSet::empty(v.alphabet(), SetKind::Channels); }

}  // namespace

// ---------------------------------------------------------------------------
// GameView

GameView::GameView(MonitoredArenaPtr arena) {
  if (!arena) throw ModelError("GameView needs an arena");
  auto sh = std::make_shared<Shared>();
  sh->arena = std::move(arena);
  const Arena& base = sh->arena->base();
  for (int l = 0; l < base.alphabet->num_locations(); ++l)
    for (int j = 0; j < base.num_joint(); ++j) sh->defined.push_back(sh->arena->rebase(defined_channels(base, l, j)));
  shared_ = std::move(sh);
  rebuild();
}

GameView GameView::of(const ArenaPtr& two_player) { return GameView(std::make_shared<const MonitoredArena>(two_player, Monitor::none())); }

GameView GameView::restricted(int player, std::vector<RegularSet> per_action) const {
  if (static_cast<int>(per_action.size()) != num_actions(player)) throw MismatchError("restriction needs one state set per action");
  for (const auto& r : per_action)
    if (r.kind() != SetKind::States || !r.alphabet()->same_as(*alphabet())) throw MismatchError("restrictions must be lifted state sets");
  GameView v = *this;
  v.restriction_[idx(player)] = std::move(per_action);
  v.rebuild();
  return v;
}

GameView GameView::frozen(const RegularSet& states) const {
  if (states.kind() != SetKind::States || !states.alphabet()->same_as(*alphabet())) throw MismatchError("frozen set must be a lifted state set");
  GameView v = *this;
  v.frozen_ = states;
  v.rebuild();
  return v;
}

void GameView::rebuild() {
  const MonitoredArena& a = arena();
  const int X = num_locations();
  frozen_at_.clear();
  for (int x = 0; x < X; ++x) frozen_at_.push_back(frozen_ ? residual_location(*frozen_, x) : empty_channels(*this));
  avail_.assign(2, {});
  for (int p = 0; p < 2; ++p) {
    const auto& restr = restriction_[idx(p)];
    for (int x = 0; x < X; ++x) {
      std::vector<RegularSet> per;
      for (int act = 0; act < num_actions(p); ++act) {
        RegularSet s = unite(a.allowed(p, a.base_location(x), act), frozen_at_[idx(x)]);
        if (restr) s = intersect(s, residual_location((*restr)[idx(act)], x));
        per.push_back(s);
      }
      avail_[idx(p)].push_back(std::move(per));
    }
  }
  dom_.clear();
  for (int x = 0; x < X; ++x) {
    RegularSet some[2] = {empty_channels(*this), empty_channels(*this)};
    for (int p = 0; p < 2; ++p)
      for (const auto& s : avail_[idx(p)][idx(x)]) some[p] = unite(some[p], s);
    dom_.push_back(intersect(some[0], some[1]));
  }
}

const RegularSet& GameView::available(int player, int x, int action) const { return avail_[idx(player)][idx(x)][idx(action)]; }

RegularSet GameView::available_states(int player, int action) const {
  std::vector<RegularSet> per;
  for (int x = 0; x < num_locations(); ++x) per.push_back(available(player, x, action));
  return assemble(alphabet(), per);
}

RegularSet GameView::domain() const { return assemble(alphabet(), dom_); }

const RegularSet& GameView::defined(int x, int joint) const {
  const int J = arena().base().num_joint();
  return shared_->defined[idx(arena().base_location(x) * J + joint)];
}

// ---------------------------------------------------------------------------
// Traces

std::vector<RegularSet> FixpointTrace::series(const std::string& name) const {
  std::vector<RegularSet> out;
  for (const auto& s : steps)
    if (s.name == name) out.push_back(s.set);
  return out;
}

int FixpointTrace::iterations() const {
  // nz_reach: additions to U; as_buchi: passes through the loop body
  const std::string counted = algorithm == "as_buchi" ? "Y" : "U";
  int n = 0;
  for (const auto& s : steps) n += s.name == counted;
  return algorithm == "as_buchi" ? n : n - 1;
}

// ---------------------------------------------------------------------------
// Pre

PostCache::PostCache(const GameView& view, const RegularSet& b) : view_(view), b_(b) {
  if (b.kind() != SetKind::States || !b.alphabet()->same_as(*view.alphabet())) throw MismatchError("target must be a lifted state set");
  const MonitoredArena& a = view.arena();
  land_.resize(idx(a.monitor().num_states * a.base().alphabet->num_locations()));
  post_.resize(idx(view.num_locations() * a.base().num_joint()));
}

const RegularSet& PostCache::landing(int m, int l2) {
  const MonitoredArena& a = view_.arena();
  auto& slot = land_[idx(m * a.base().alphabet->num_locations() + l2)];
  if (!slot) slot = up_closure(a.land(m, l2, b_), Order::Subword);
  return *slot;
}

const RegularSet& PostCache::post(int x, int joint) {
  const MonitoredArena& a = view_.arena();
  auto& slot = post_[idx(x * a.base().num_joint() + joint)];
  if (slot) return *slot;
  const int l1 = a.base_location(x), m = a.monitor_state(x);
  RegularSet out = RegularSet::empty(view_.alphabet(), SetKind::Channels);
  for (const auto& o : a.base().row(l1, joint)) {
    if (o.probability <= Rational(0)) continue;
    out = unite(out, op_preimage(o.op, landing(m, o.location)));
  }
  slot = intersect(out, view_.defined(x, joint));
  return *slot;
}

RegularSet pre(const GameView& view, int player, const RegularSet& b) {
  PostCache pc(view, b);
  const MonitoredArena& a = view.arena();
  const int other = 1 - player;
  std::vector<RegularSet> per;
  for (int x = 0; x < view.num_locations(); ++x) {
    RegularSet res = view.domain(x);
    for (int beta = 0; beta < view.num_actions(other) && !res.is_empty(); ++beta) {
      const RegularSet& ob = view.available(other, x, beta);
      if (ob.is_empty()) continue;
      RegularSet good = empty_channels(view);
      for (int alpha = 0; alpha < view.num_actions(player); ++alpha) {
        const RegularSet& av = view.available(player, x, alpha);
        if (av.is_empty()) continue;
        good = unite(good, intersect(av, pc.post(x, a.joint(player, alpha, beta))));
      }
      res = subtract(res, subtract(ob, good));
    }
    const RegularSet& f = view.frozen_at(x);
    if (!f.is_empty()) res = unite(subtract(res, f), intersect(intersect(f, residual_location(b, x)), view.domain(x)));
    per.push_back(std::move(res));
  }
  return assemble(view.alphabet(), per);
}

// ---------------------------------------------------------------------------
// Fixpoints

Region nz_reach(const GameView& view, int player, const RegularSet& target) { return nz_until(view, player, std::nullopt, target); }

Region nz_until(const GameView& view, int player, const std::optional<RegularSet>& within, const RegularSet& target) {
  Region r{target, player, within ? "NZ U" : "NZ F", {}, false};
  r.trace.algorithm = "nz_reach";
  r.trace.player = player;
  r.trace.views.push_back(view);
  RegularSet u = target;
  r.trace.steps.push_back({"U", 0, u});
  for (int k = 1;; ++k) {
    RegularSet step = pre(view, player, u);
    if (within) step = intersect(step, *within);
    RegularSet next = unite(u, step);
    if (next == u) break;
    u = std::move(next);
    r.trace.steps.push_back({"U", k, u});
  }
  r.winning = u;
  return r;
}

Region as_safe(const GameView& view, int player, const RegularSet& safe) {
  Region opp = nz_reach(view, 1 - player, complement(safe));
  return Region{complement(opp.winning), player, "AS G", std::move(opp.trace), true};
}

GameView stay(const GameView& view, int player, const RegularSet& r) {
  PostCache pc(view, complement(r));
  const MonitoredArena& a = view.arena();
  const int other = 1 - player;
  const auto& old = view.restriction(player);
  std::vector<RegularSet> out;
  for (int alpha = 0; alpha < view.num_actions(player); ++alpha) {
    std::vector<RegularSet> per;
    for (int x = 0; x < view.num_locations(); ++x) {
      RegularSet keep = residual_location(r, x);
      if (old) keep = intersect(keep, residual_location((*old)[idx(alpha)], x));
      const RegularSet& f = view.frozen_at(x);
      RegularSet moving = subtract(keep, f);
      if (!moving.is_empty()) {
        RegularSet bad = empty_channels(view);
        for (int beta = 0; beta < view.num_actions(other); ++beta) {
          const RegularSet& ob = view.available(other, x, beta);
          if (ob.is_empty()) continue;
          bad = unite(bad, intersect(ob, pc.post(x, a.joint(player, alpha, beta))));
        }
        moving = subtract(moving, bad);
      }
      per.push_back(unite(moving, intersect(keep, f)));
    }
    out.push_back(assemble(view.alphabet(), per));
  }
  return view.restricted(player, std::move(out));
}

Region as_buchi(const GameView& view, int player, const RegularSet& target) {
  Region out{target, player, "AS GF", {}, false};
  FixpointTrace& t = out.trace;
  t.algorithm = "as_buchi";
  t.player = player;
  GameView a = view;
  RegularSet d = a.domain();
  t.views.push_back(a);
  t.steps.push_back({"D", 0, d});
  for (int k = 0;; ++k) {
    RegularSet c = as_safe(a, 1 - player, subtract(d, target)).winning;
    RegularSet y = nz_reach(a, player, target).winning;
    RegularSet d2 = intersect(d, as_safe(a, player, y).winning);
    GameView a2 = stay(a, player, d2);
    for (;;) {
      RegularSet pruned = intersect(d2, a2.domain());
      if (pruned == d2) break;
      d2 = std::move(pruned);
      a2 = stay(a2, player, d2);
    }
    if (!subset_of(d2, d)) throw Error("as_buchi: D increased between iterations");
    t.steps.push_back({"C", k, c});
    t.steps.push_back({"Y", k, y});
    t.steps.push_back({"D", k + 1, d2});
    t.views.push_back(a2);
    bool done = d2 == d;
    d = std::move(d2);
    a = std::move(a2);
    if (done) break;
  }
  out.winning = d;
  return out;
}

Region as_reach(const GameView& view, int player, const RegularSet& target) {
  RegularSet f = view.frozen_set() ? unite(*view.frozen_set(), target) : target;
  Region r = as_buchi(view.frozen(f), player, target);
  r.objective = "AS F";
  return r;
}

Region nz_safe(const GameView& view, int player, const RegularSet& safe) {
  Region opp = as_reach(view, 1 - player, complement(safe));
  return Region{complement(opp.winning), player, "NZ G", std::move(opp.trace), true};
}

}  // namespace cslcg
