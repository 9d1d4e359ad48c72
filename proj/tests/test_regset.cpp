#include <random>

#include "cslcg/error.hpp"
#include "cslcg/regset.hpp"
#include "doctest.h"

using namespace cslcg;

namespace {

AlphabetPtr ab() { return std::make_shared<Alphabet>(std::vector<std::string>{"l0", "l1", "l2"}, std::vector<std::string>{"a", "b", "c"}); }
AlphabetPtr l_ab() { return std::make_shared<Alphabet>(std::vector<std::string>{"l"}, std::vector<std::string>{"a", "b"}); }

RegularSet st(const AlphabetPtr& a, const char* re) { return from_regex(a, re, SetKind::States); }
RegularSet ch(const AlphabetPtr& a, const char* re) { return from_regex(a, re, SetKind::Channels); }

// All channel words over the first k messages up to length n.
std::vector<std::vector<int>> all_channels(int k, int n) {
  std::vector<std::vector<int>> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (static_cast<int>(out[i].size()) == n) continue;
    for (int m = 0; m < k; ++m) {
      auto w = out[i];
      w.push_back(m);
      out.push_back(w);
    }
  }
  return out;
}

std::vector<Symbol> as_state(const Alphabet& a, int loc, const std::vector<int>& chan) {
  std::vector<Symbol> w{a.location(loc)};
  for (int m : chan) w.push_back(a.message(m));
  return w;
}

std::vector<Symbol> as_channel(const Alphabet& a, const std::vector<int>& chan) {
  std::vector<Symbol> w;
  for (int m : chan) w.push_back(a.message(m));
  return w;
}

// Random state-set: union of a few random words and random starred patterns.
RegularSet random_set(const AlphabetPtr& a, std::mt19937& rng) {
  const char* pieces[] = {"a", "b", "c", "(a|b)*", "M*", "c*", "(ab)*", "M", "b?"};
  std::uniform_int_distribution<int> pick(0, 8), loc(0, a->num_locations() - 1), len(0, 3), cnt(1, 3);
  RegularSet out = RegularSet::empty(a, SetKind::States);
  for (int i = cnt(rng); i > 0; --i) {
    std::string re = a->locations()[static_cast<std::size_t>(loc(rng))];
    for (int j = len(rng); j > 0; --j) re += std::string(".") + pieces[pick(rng)];
    out = unite(out, st(a, re.c_str()));
  }
  return out;
}

}  // namespace

TEST_CASE("alphabet validation and tokenizing") {
  CHECK_THROWS_AS(Alphabet({"l0"}, {"l0"}), ModelError);
  CHECK_THROWS_AS(Alphabet({"L"}, {"a"}), ModelError);
  CHECK_THROWS_AS(Alphabet({}, {"a"}), ModelError);
  Alphabet multi({"l", "l1"}, {"a", "ab"});
  auto w = multi.tokenize("l1 ab a");
  REQUIRE(w.size() == 3);
  CHECK(multi.name(w[0]) == "l1");
  CHECK(multi.name(w[1]) == "ab");
  CHECK(multi.render(w) == "l1 ab a");
  CHECK_THROWS_AS(multi.tokenize("l1 z"), SyntaxError);
}

TEST_CASE("from_regex") {
  auto a = ab();
  auto s = st(a, "l0.(a|b)*");
  CHECK(contains(s, "l0"));
  CHECK(contains(s, "l0 a b b"));
  CHECK_FALSE(contains(s, "l0 c"));
  CHECK_FALSE(contains(s, "l1"));
  CHECK(contains(st(a, "l2.c"), "l2 c"));
  CHECK_FALSE(contains(st(a, "l2.c"), "l2 c c"));
  auto all = ch(a, "(a|b|c)*");
  CHECK(all == RegularSet::universe(a, SetKind::Channels));
  CHECK(st(a, "L.M{0,2}") == st(a, "L.()|L.M|L.M.M"));
  CHECK(st(a, "l0 a{2,}") == st(a, "l0.a.a.a*"));
  CHECK(st(a, "l0.a+") == st(a, "l0 a a*"));
  CHECK_THROWS_AS(st(a, "l0.z"), SyntaxError);
  CHECK_THROWS_AS(st(a, "a.l0"), SyntaxError);
  CHECK_THROWS_AS(st(a, "l0|a"), SyntaxError);
  CHECK_THROWS_AS(ch(a, "l0"), SyntaxError);
  CHECK_THROWS_AS(st(a, "l0.(a"), SyntaxError);
  CHECK_THROWS_AS(contains(s, "a l0"), SyntaxError);
}

TEST_CASE("combine and compare") {
  auto a = ab();
  auto x = st(a, "l0.(a|b)*");
  CHECK(unite(RegularSet::empty(a, SetKind::States), x) == x);
  CHECK(complement(complement(x)) == x);
  auto i = intersect(x, st(a, "L.b*"));
  CHECK(i == st(a, "l0.b*"));
  // enumeration oracle to length 4
  for (int l = 0; l < 3; ++l)
    for (const auto& w : all_channels(3, 4)) {
      auto word = as_state(*a, l, w);
      bool expect = l == 0 && std::all_of(w.begin(), w.end(), [](int m) { return m == 1; });
      CHECK(i.accepts(word) == expect);
    }
  auto c = compare(st(a, "l0.b*"), x);
  CHECK(c.subset);
  CHECK_FALSE(c.equal);
  CHECK_FALSE(c.disjoint);
  CHECK_FALSE(c.a_empty);
  CHECK(compare(RegularSet::empty(a, SetKind::States), x).a_empty);
  CHECK_THROWS_AS(unite(x, ch(a, "a*")), MismatchError);
  auto other = std::make_shared<Alphabet>(std::vector<std::string>{"l0"}, std::vector<std::string>{"a"});
  CHECK_THROWS_AS(unite(x, st(other, "l0")), MismatchError);
}

TEST_CASE("boolean algebra laws on random sets") {
  auto a = ab();
  std::mt19937 rng(7);
  for (int round = 0; round < 40; ++round) {
    auto x = random_set(a, rng), y = random_set(a, rng), z = random_set(a, rng);
    CHECK(complement(unite(x, y)) == intersect(complement(x), complement(y)));
    CHECK(complement(intersect(x, y)) == unite(complement(x), complement(y)));
    CHECK(unite(x, x) == x);
    CHECK(intersect(x, x) == x);
    CHECK(unite(x, intersect(x, y)) == x);
    CHECK(intersect(x, unite(x, y)) == x);
    CHECK(intersect(x, unite(y, z)) == unite(intersect(x, y), intersect(x, z)));
    CHECK(subtract(x, y) == intersect(x, complement(y)));
  }
}

TEST_CASE("up_closure examples") {
  auto a = l_ab();
  auto lab = st(a, "l.a.b");
  auto up = up_closure(lab, Order::State);
  CHECK(up == st(a, "l.(a|b)*a(a|b)*b"));
  auto e = enumerate(up, 3);
  std::vector<std::string> got;
  for (const auto& w : e) got.push_back(a->render(w));
  CHECK(got == std::vector<std::string>{"l a b", "l a a b", "l a b b", "l b a b"});
  CHECK(up_closure(st(a, "l"), Order::State) == st(a, "l"));
  CHECK(up_closure(ch(a, "a.b"), Order::Subword) == ch(a, "(a|b)*a(a|b)*b(a|b)*"));
  CHECK_THROWS_AS(up_closure(ch(a, "a"), Order::State), MismatchError);
}

TEST_CASE("up_closure agrees with direct order definitions") {
  auto a = l_ab();
  auto words = all_channels(2, 5);
  for (const auto& s : all_channels(2, 3)) {
    auto single = state_word(a, 0, s);
    auto up_state = up_closure(single, Order::State);
    auto up_sub = up_closure(single, Order::Subword);
    auto up_chan = up_closure(channel_word(a, s), Order::Subword);
    for (const auto& t : words) {
      CHECK(up_state.accepts(as_state(*a, 0, t)) == state_order(0, s, 0, t));
      CHECK(up_sub.accepts(as_state(*a, 0, t)) == subword(s, t));
      CHECK(up_chan.accepts(as_channel(*a, t)) == subword(s, t));
    }
  }
}

TEST_CASE("up_closure is a closure operator") {
  auto a = ab();
  std::mt19937 rng(11);
  for (int round = 0; round < 30; ++round) {
    auto x = random_set(a, rng), y = random_set(a, rng);
    for (Order o : {Order::Subword, Order::State}) {
      auto ux = up_closure(x, o);
      CHECK(subset_of(x, ux));
      CHECK(up_closure(ux, o) == ux);
      CHECK(subset_of(ux, up_closure(unite(x, y), o)));
      // basis property
      auto mins = minimal_elements(ux, o);
      RegularSet basis = RegularSet::empty(a, SetKind::States);
      for (const auto& w : mins) {
        std::vector<int> chan;
        for (std::size_t k = 1; k < w.size(); ++k) chan.push_back(a->message_index(w[k]));
        basis = unite(basis, state_word(a, w.front(), chan));
      }
      CHECK(up_closure(basis, o) == ux);
      for (const auto& p : mins)
        for (const auto& q : mins) {
          if (p == q) continue;
          std::vector<int> cp, cq;
          for (std::size_t k = 1; k < p.size(); ++k) cp.push_back(a->message_index(p[k]));
          for (std::size_t k = 1; k < q.size(); ++k) cq.push_back(a->message_index(q[k]));
          bool le = o == Order::State ? state_order(p[0], cp, q[0], cq) : (p[0] == q[0] && subword(cp, cq));
          CHECK_FALSE(le);
        }
    }
  }
}

TEST_CASE("residual_location") {
  auto a = ab();
  CHECK(residual_location(st(a, "l0.a.M*"), 0) == ch(a, "a.M*"));
  CHECK(residual_location(st(a, "l0.a.M*"), 1).is_empty());
  auto r = st(a, "L.M*.a.M*");
  for (int l = 0; l < 3; ++l) CHECK(residual_location(r, l) == ch(a, "M*.a.M*"));
  CHECK_THROWS_AS(residual_location(ch(a, "a"), 0), MismatchError);
}

TEST_CASE("op_preimage") {
  auto a = ab();
  auto x = ch(a, "a.b*");
  CHECK(op_preimage(ChannelOp::nop(), x) == x);
  CHECK(op_preimage(ChannelOp::push(0), x) == ch(a, "b*"));
  CHECK(op_preimage(ChannelOp::pop(1), ch(a, "a*")) == ch(a, "a*.b"));
  std::mt19937 rng(3);
  const char* sets[] = {"a.b*", "a*", "(a|c)*b", "M*.c.M*", "()", "b.b|c"};
  for (const char* re : sets) {
    auto s = ch(a, re);
    for (int m = 0; m < 3; ++m)
      for (ChannelOp f : {ChannelOp::nop(), ChannelOp::push(m), ChannelOp::pop(m)}) {
        auto pre = op_preimage(f, s);
        for (const auto& mu : all_channels(3, 4)) {
          auto img = f.apply(mu);
          bool expect = img && s.accepts(as_channel(*a, *img));
          CHECK(pre.accepts(as_channel(*a, mu)) == expect);
        }
      }
  }
}

TEST_CASE("channel operations") {
  CHECK(ChannelOp::push(1).apply({0}) == std::vector<int>{1, 0});
  CHECK(ChannelOp::pop(0).apply({1, 0}) == std::vector<int>{1});
  CHECK_FALSE(ChannelOp::pop(0).apply({0, 1}));
  CHECK_FALSE(ChannelOp::pop(0).apply({}));
}

TEST_CASE("enumerate") {
  auto a = ab();
  CHECK(enumerate(RegularSet::empty(a, SetKind::States), 5).empty());
  auto e = enumerate(st(a, "l0.b*"), 2);
  REQUIRE(e.size() == 3);
  CHECK(a->render(e[0]) == "l0");
  CHECK(a->render(e[1]) == "l0 b");
  CHECK(a->render(e[2]) == "l0 b b");
  auto c = enumerate(ch(a, "a|b.c|()"), 3);
  REQUIRE(c.size() == 3);
  CHECK(c[0].empty());
  CHECK(a->render(c[1]) == "a");
}

TEST_CASE("helpers") {
  auto a = ab();
  CHECK(channels_ending_with(a, 2) == ch(a, "M*.c"));
  CHECK(assemble(a, {ch(a, "a*"), RegularSet::empty(a, SetKind::Channels), ch(a, "c")}) == st(a, "l0.a*|l2.c"));
  CHECK(prefix_location(1, ch(a, "b*")) == st(a, "l1.b*"));
  CHECK(to_dot(st(a, "l0.a"), "x").find("doublecircle") != std::string::npos);
  CHECK(state_order(0, {}, 0, {}));
  CHECK_FALSE(state_order(0, {}, 0, {0}));
  CHECK_FALSE(state_order(0, {0, 1}, 0, {0, 1, 0}));
  CHECK(state_order(0, {0, 1}, 0, {1, 0, 1}));
}
