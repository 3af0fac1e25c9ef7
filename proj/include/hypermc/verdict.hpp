// verdict.hpp -- check results: verdict, optional counterexample, run stats.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "automaton.hpp"
#include "formula.hpp"
#include "lasso.hpp"

namespace hypermc {

struct StepStat {
  std::string quantifier;  // "matrix", "exists v", "forall v"
  uint64_t states = 0;     // automaton size after the step
};

struct EngineStats {
  std::vector<StepStat> steps;
  int64_t time_ms = 0;
};

/// Result of one model checking run. A counterexample is attached only when
/// the sentence fails and its quantifier prefix is purely universal (the
/// dualized prefix is then purely existential and witnesses decompose per
/// component): one label lasso per variable, letters are bitmasks over
/// `universe`.
struct Verdict {
  bool holds = false;
  std::map<std::string, Lasso<uint32_t>> counterexample;
  std::vector<std::string> universe;
  EngineStats stats;
};

struct CheckOptions {
  int max_alternations = 2;
  /// Observer for intermediate automata (CLI --dump-automata).
  std::function<void(const std::string&, const BuchiAutomaton&)> dump;
};

inline nlohmann::json lasso_to_json(const Lasso<uint32_t>& w,
                                    const std::vector<std::string>& universe) {
  auto letter = [&](uint32_t bits) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < universe.size(); ++i)
      if (bits & (1u << i)) arr.push_back(universe[i]);
    return arr;
  };
  nlohmann::json j;
  j["stem"] = nlohmann::json::array();
  j["loop"] = nlohmann::json::array();
  for (uint32_t l : w.stem) j["stem"].push_back(letter(l));
  for (uint32_t l : w.loop) j["loop"].push_back(letter(l));
  return j;
}

inline nlohmann::json verdict_to_json(const Verdict& v, LogicId logic, bool with_witness,
                                      bool deterministic) {
  nlohmann::json j;
  j["verdict"] = v.holds ? "holds" : "fails";
  j["logic"] = logic_name(logic);
  if (with_witness && !v.holds && !v.counterexample.empty()) {
    nlohmann::json ce = nlohmann::json::object();
    for (const auto& [var, w] : v.counterexample)
      ce[var] = lasso_to_json(w, v.universe);
    j["counterexample"] = ce;
  } else {
    j["counterexample"] = nullptr;
  }
  nlohmann::json steps = nlohmann::json::array();
  for (const StepStat& s : v.stats.steps)
    steps.push_back({{"quantifier", s.quantifier}, {"states", s.states}});
  j["stats"] = {{"steps", steps}, {"time_ms", deterministic ? 0 : v.stats.time_ms}};
  return j;
}

}  // namespace hypermc
