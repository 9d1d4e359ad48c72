#include "cslcg/model.hpp"

#include <fstream>
#include <sstream>

#include "cslcg/error.hpp"

namespace cslcg {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> words(std::string_view s) {
  std::istringstream is{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  return out;
}

struct RowRule {
  std::string location;  // "*" for any
  std::vector<std::string> pattern;
  std::vector<std::tuple<Rational, std::string, ChannelOp>> outcomes;
  std::size_t line = 0;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  ModelFile run() {
    std::istringstream is(text_);
    std::string raw;
    std::size_t offset = 0;
    std::vector<std::string> agents, locations, messages;
    std::map<std::string, std::vector<std::string>> actions;
    std::string init;
    std::vector<RowRule> rules;
    ModelFile mf;
    while (std::getline(is, raw)) {
      offset_ = offset;
      offset += raw.size() + 1;
      std::string line = raw;
      if (auto h = line.find('#'); h != std::string::npos && line.find('"') == std::string::npos) line.resize(h);
      line = trim(line);
      if (line.empty()) continue;
      auto sp = line.find_first_of(" \t");
      std::string kw = line.substr(0, sp);
      std::string rest = sp == std::string::npos ? "" : trim(line.substr(sp));
      if (kw == "agents") agents = words(rest);
      else if (kw == "locations") locations = words(rest);
      else if (kw == "messages") messages = words(rest);
      else if (kw == "init") init = rest;
      else if (kw == "lambda") {
        try {
          mf.lambda = parse_rational(rest);
        } catch (const SyntaxError& e) {
          fail(e.message());
        }
      }
      else if (kw == "actions") {
        auto w = words(rest);
        if (w.size() < 2) fail("actions needs an agent and at least one action");
        if (actions.count(w[0])) fail("actions for agent '" + w[0] + "' given twice");
        actions[w[0]] = std::vector<std::string>(w.begin() + 1, w.end());
      } else if (kw == "row") rules.push_back(parse_row(rest));
      else if (kw == "goal") {
        auto c = rest.find(':');
        if (c == std::string::npos) fail("goal needs 'agent: objective'");
        mf.goals.emplace_back(trim(rest.substr(0, c)), trim(rest.substr(c + 1)));
      } else if (kw == "property") {
        auto e = rest.find('=');
        if (e == std::string::npos) fail("property needs 'name = objective'");
        mf.properties.emplace_back(trim(rest.substr(0, e)), trim(rest.substr(e + 1)));
      } else fail("unknown keyword '" + kw + "'");
    }
    offset_ = 0;
    if (agents.empty()) fail("missing 'agents'");
    if (locations.empty()) fail("missing 'locations'");
    if (messages.empty()) fail("missing 'messages'");
    Arena& a = mf.arena;
    try {
      a.alphabet = std::make_shared<Alphabet>(locations, messages);
    } catch (const ModelError& e) {
      fail(e.what());
    }
    a.agents = agents;
    for (const auto& ag : agents) {
      auto it = actions.find(ag);
      if (it == actions.end()) fail("no actions for agent '" + ag + "'");
      a.actions.push_back(it->second);
    }
    for (const auto& [ag, _] : actions)
      if (!a.agent_index(ag)) fail("actions given for undeclared agent '" + ag + "'");
    auto l0 = a.alphabet->find_location(init.empty() ? locations.front() : init);
    if (!l0) fail("undeclared initial location '" + init + "'");
    a.initial_location = *l0;
    for (const auto& [ag, _] : mf.goals)
      if (!a.agent_index(ag)) fail("goal for undeclared agent '" + ag + "'");

    a.reset_table();
    std::vector<std::vector<char>> set(locations.size(), std::vector<char>(static_cast<std::size_t>(a.num_joint()), 0));
    for (const auto& r : rules) {
      offset_ = r.line;
      if (r.pattern.size() != agents.size()) fail("row pattern has " + std::to_string(r.pattern.size()) + " entries for " + std::to_string(agents.size()) + " agents");
      std::optional<int> loc;
      if (r.location != "*") {
        loc = a.alphabet->find_location(r.location);
        if (!loc) fail("undeclared location '" + r.location + "'");
      }
      std::vector<std::optional<int>> pat;
      for (std::size_t i = 0; i < agents.size(); ++i) {
        if (r.pattern[i] == "*") pat.emplace_back();
        else {
          auto act = a.action_index(static_cast<int>(i), r.pattern[i]);
          if (!act) fail("undeclared action '" + r.pattern[i] + "' for agent '" + agents[i] + "'");
          pat.emplace_back(*act);
        }
      }
      Distribution dist;
      for (const auto& [p, target, op] : r.outcomes) {
        auto tl = a.alphabet->find_location(target);
        if (!tl) fail("undeclared location '" + target + "'");
        dist.push_back(Outcome{p, *tl, op});
      }
      for (int l = 0; l < a.alphabet->num_locations(); ++l) {
        if (loc && *loc != l) continue;
        for (int j = 0; j < a.num_joint(); ++j) {
          if (set[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)]) continue;
          auto prof = a.decode(j);
          bool match = true;
          for (std::size_t i = 0; i < agents.size(); ++i) match = match && (!pat[i] || *pat[i] == prof[i]);
          if (!match) continue;
          a.table[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] = dist;
          set[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] = 1;
        }
      }
    }
    return mf;
  }

 private:
  [[noreturn]] void fail(const std::string& what) { throw SyntaxError(what, offset_); }

  ChannelOp parse_op(const std::string& text, std::vector<std::string>& pending_messages) {
    auto w = words(text);
    if (w.size() == 1 && w[0] == "nop") return ChannelOp::nop();
    if (w.size() == 2 && (w[0] == "push" || w[0] == "pop")) {
      pending_messages.push_back(w[1]);
      return w[0] == "push" ? ChannelOp::push(-1) : ChannelOp::pop(-1);
    }
    fail("expected 'nop', 'push m' or 'pop m', got '" + text + "'");
  }

  RowRule parse_row(const std::string& rest) {
    RowRule r;
    r.line = offset_;
    auto arrow = rest.find("->");
    if (arrow == std::string::npos) fail("row needs '->'");
    std::string lhs = trim(rest.substr(0, arrow)), rhs = trim(rest.substr(arrow + 2));
    auto open = lhs.find('('), close = lhs.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open) fail("row needs a joint action pattern '(a,b,...)'");
    r.location = trim(lhs.substr(0, open));
    r.pattern = split(lhs.substr(open + 1, close - open - 1), ',');
    for (const auto& part : split(rhs, ';')) {
      if (part.empty()) continue;
      Rational p = 1;
      std::string body = part;
      auto colon = part.find(':');
      if (colon != std::string::npos) {
        try {
          p = parse_rational(trim(part.substr(0, colon)));
        } catch (const SyntaxError& e) {
          fail(e.message());
        }
        body = trim(part.substr(colon + 1));
      }
      if (body.size() < 2 || body.front() != '(' || body.back() != ')') fail("outcome must look like '(loc, op)'");
      auto fields = split(body.substr(1, body.size() - 2), ',');
      if (fields.size() != 2) fail("outcome must look like '(loc, op)'");
      std::vector<std::string> msgs;
      ChannelOp op = parse_op(fields[1], msgs);
      if (!msgs.empty()) {
        pending_.push_back(msgs.front());
        op.message = -2 - static_cast<int>(pending_.size() - 1);  // resolved below
      }
      r.outcomes.emplace_back(p, fields[0], op);
    }
    if (r.outcomes.empty()) fail("row needs at least one outcome");
    return r;
  }

 public:
  // Messages can be declared after rows; resolve symbolic message references.
  void resolve(ModelFile& mf) {
    for (auto& per_loc : mf.arena.table)
      for (auto& row : per_loc)
        for (auto& o : row)
          if (o.op.message <= -2) {
            const std::string& name = pending_[static_cast<std::size_t>(-2 - o.op.message)];
            auto m = mf.arena.alphabet->find_message(name);
            if (!m) throw SyntaxError("undeclared message '" + name + "'", 0);
            o.op.message = *m;
          }
  }

 private:
  const std::string& text_;
  std::size_t offset_ = 0;
  std::vector<std::string> pending_;
};

}  // namespace

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(std::string_view text) {
  std::string t = trim(text);
  try {
    std::size_t used = 0;
    auto slash = t.find('/');
    if (slash == std::string::npos) {
      auto dot = t.find('.');
      if (dot == std::string::npos) {
        std::int64_t n = std::stoll(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return Rational(n);
      }
      std::int64_t den = 1;
      std::string digits = t.substr(0, dot) + t.substr(dot + 1);
      for (std::size_t k = dot + 1; k < t.size(); ++k) den *= 10;
      std::int64_t n = std::stoll(digits, &used);
      if (used != digits.size()) throw std::invalid_argument(t);
      return Rational(n, den);
    }
    std::int64_t n = std::stoll(t.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument(t);
    std::string ds = t.substr(slash + 1);
    std::int64_t d = std::stoll(ds, &used);
    if (used != ds.size() || d == 0) throw std::invalid_argument(t);
    return Rational(n, d);
  } catch (const std::logic_error&) {
    throw SyntaxError("malformed rational '" + t + "'", 0);
  }
}

ModelFile parse_model_text(const std::string& text) {
  Parser p(text);
  ModelFile mf = p.run();
  p.resolve(mf);
  return mf;
}

ModelFile parse_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot read model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_text(ss.str());
}

std::string print_model(const ModelFile& mf) {
  const Arena& a = mf.arena;
  const Alphabet& al = *a.alphabet;
  std::ostringstream os;
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i];
    return s;
  };
  os << "agents " << join(a.agents) << "\n";
  os << "locations " << join(al.locations()) << "\n";
  os << "messages " << join(al.messages()) << "\n";
  os << "init " << al.locations()[static_cast<std::size_t>(a.initial_location)] << "\n";
  if (mf.lambda) os << "lambda " << format_rational(*mf.lambda) << "\n";
  for (int i = 0; i < a.num_agents(); ++i) os << "actions " << a.agents[static_cast<std::size_t>(i)] << " " << join(a.actions[static_cast<std::size_t>(i)]) << "\n";
  for (int l = 0; l < al.num_locations(); ++l)
    for (int j = 0; j < a.num_joint(); ++j) {
      auto p = a.decode(j);
      os << "row " << al.locations()[static_cast<std::size_t>(l)] << " (";
      for (int i = 0; i < a.num_agents(); ++i) os << (i ? "," : "") << a.action_name(i, p[static_cast<std::size_t>(i)]);
      os << ") ->";
      const auto& row = a.row(l, j);
      for (std::size_t k = 0; k < row.size(); ++k) {
        const auto& o = row[k];
        os << (k ? "; " : " ");
        if (row.size() > 1 || o.probability != Rational(1)) os << format_rational(o.probability) << ": ";
        os << "(" << al.locations()[static_cast<std::size_t>(o.location)] << ", ";
        if (o.op.tag == ChannelOp::Tag::Nop) os << "nop";
        else os << (o.op.tag == ChannelOp::Tag::Push ? "push " : "pop ") << al.messages()[static_cast<std::size_t>(o.op.message)];
        os << ")";
      }
      os << "\n";
    }
  for (const auto& [ag, g] : mf.goals) os << "goal " << ag << ": " << g << "\n";
  for (const auto& [n, p] : mf.properties) os << "property " << n << " = " << p << "\n";
  return os.str();
}

}  // namespace cslcg
