#pragma once

// Textual model files:
//
//   agents S R A
//   locations l0 la lb lF
//   messages a b c
//   init l0
//   actions S a b -
//   row l0 (a,a,-) -> (la, push a)
//   row la (*,dequeue,*) -> 1/2: (lF, pop a); 1/2: (la, nop)
//   goal S: AS G "L.M{0,2}"
//   property phiA = NZ F "..." || NZ G "..."
//
// Rows match joint actions with `*` wildcards; the first matching row wins.

#include <map>
#include <string>
#include <vector>

#include "cslcg/arena.hpp"

namespace cslcg {

struct ModelFile {
  Arena arena;
  std::optional<Rational> lambda;
  std::vector<std::pair<std::string, std::string>> goals;       // agent -> objective text
  std::vector<std::pair<std::string, std::string>> properties;  // name -> objective text
};

ModelFile parse_model_text(const std::string& text);
ModelFile parse_model(const std::string& path);
/// Normal form: one explicit row per (location, joint action).
std::string print_model(const ModelFile& model);

std::string format_rational(const Rational& r);
Rational parse_rational(std::string_view text);

}  // namespace cslcg
