#pragma once

// E-Core and A-Core. A profile is in the core when no non-empty coalition of
// losers can jointly force all of its members' goals. E-Core guesses the set W
// of winners (here: enumerates it by increasing size) and asks that
//   step 2: the grand coalition can realise Φ_W = ⋀_{W} Φ_i ∧ ⋀_{¬W} ¬Φ_i ∧ Γ
//   step 3: no non-empty C ⊆ Agt∖W wins ⋀_{C} Φ_i against the rest.
// A-Core is answered by duality: A-Core(Γ) = ¬E-Core(¬Γ).

#include <optional>
#include <string>
#include <vector>

#include "cslcg/conjunction.hpp"
#include "cslcg/model.hpp"

namespace cslcg {

struct GameSpec {
  ArenaPtr arena;
  std::vector<Formula> goals;  // one per agent
  std::vector<std::pair<std::string, Formula>> properties;

  /// Without `require_goals`, agents may lack a goal (their entry stays empty).
  static GameSpec from_model(const ModelFile& model, bool require_goals = true);
  /// A property name or an objective text.
  Formula property(const std::string& name_or_text) const;
  std::string agent_set(const std::vector<int>& agents) const;
};

struct QueryReport {
  std::string formula;
  bool inconsistent = false;
  bool initial_winning = false;
  double seconds = 0;
};

struct Step2Report {
  std::vector<int> winners;
  std::vector<QueryReport> disjuncts;
  bool passes = false;
};

struct CoalitionReport {
  std::vector<int> coalition;
  std::vector<QueryReport> disjuncts;
  bool wins = false;
};

struct Step3Report {
  std::vector<int> winners;
  std::vector<CoalitionReport> coalitions;
  bool no_deviation = true;
  std::optional<std::vector<int>> deviating() const;
};

struct CandidateReport {
  std::vector<int> winners;
  Step2Report step2;
  std::optional<Step3Report> step3;  // only run when step 2 passes
  bool passes() const { return step2.passes && step3 && step3->no_deviation; }
};

struct CoreVerdict {
  std::string problem;  // "e-core" or "a-core"
  std::string gamma;
  bool answer = false;
  std::optional<std::vector<int>> witness;
  std::vector<CandidateReport> candidates;
  /// a-core: one e-core run per disjunct of ¬Γ.
  std::vector<CoreVerdict> parts;
  double seconds = 0;
};

struct CoreOptions {
  int jobs = 1;
};

Step2Report step2_check(const GameSpec& game, const Formula& gamma, const std::vector<int>& winners, const CoreOptions& opt = {});
Step3Report step3_check(const GameSpec& game, const std::vector<int>& winners, const CoreOptions& opt = {});
CoalitionReport coalition_check(const GameSpec& game, const std::vector<int>& coalition);

CoreVerdict e_core(const GameSpec& game, const Formula& gamma, const CoreOptions& opt = {});
CoreVerdict a_core(const GameSpec& game, const Formula& gamma, const CoreOptions& opt = {});

/// Human-readable report: verdict, witness, per-W step tables, timings.
std::string format_verdict(const GameSpec& game, const CoreVerdict& v);

}  // namespace cslcg
