// kripke.hpp -- finite Kripke structures: JSON format, validation, and
// lasso-path enumeration for the bounded oracle.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "lasso.hpp"

namespace hypermc {

/// Finite Kripke structure. States carry dense indices in file order; the
/// labeling is last-state only and stored as a bitmask over `aps`.
struct KripkeStructure {
  std::vector<std::string> states;            // index -> name
  uint32_t initial = 0;
  std::vector<std::vector<uint32_t>> succ;    // per state, sorted
  std::vector<std::string> aps;               // index -> name
  std::vector<uint32_t> labels;               // per state, bitmask over aps

  uint32_t num_states() const { return static_cast<uint32_t>(states.size()); }

  int ap_index(const std::string& a) const {
    auto it = std::find(aps.begin(), aps.end(), a);
    return it == aps.end() ? -1 : static_cast<int>(it - aps.begin());
  }
  int state_index(const std::string& s) const {
    auto it = std::find(states.begin(), states.end(), s);
    return it == states.end() ? -1 : static_cast<int>(it - states.begin());
  }
  bool has_transition(uint32_t from, uint32_t to) const {
    const auto& v = succ[from];
    return std::binary_search(v.begin(), v.end(), to);
  }
};

inline KripkeStructure parse_kripke(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw KripkeFormatError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object())
    throw KripkeFormatError("top-level value must be an object");
  static const std::set<std::string> known = {"states", "initial", "transitions", "aps", "labels"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw KripkeFormatError("unknown key '" + it.key() + "'");
  for (const auto& k : known)
    if (!j.contains(k))
      throw KripkeFormatError("missing key '" + k + "'");

  KripkeStructure ks;
  if (!j["states"].is_array() || j["states"].empty())
    throw KripkeFormatError("'states' must be a nonempty array of strings");
  for (const auto& s : j["states"]) {
    if (!s.is_string())
      throw KripkeFormatError("'states' must contain strings");
    if (ks.state_index(s.get<std::string>()) >= 0)
      throw KripkeFormatError("duplicate state '" + s.get<std::string>() + "'");
    ks.states.push_back(s.get<std::string>());
  }
  if (!j["initial"].is_string())
    throw KripkeFormatError("'initial' must be a string");
  int init = ks.state_index(j["initial"].get<std::string>());
  if (init < 0)
    throw KripkeFormatError("initial state '" + j["initial"].get<std::string>() + "' is not a state");
  ks.initial = static_cast<uint32_t>(init);

  if (!j["aps"].is_array())
    throw KripkeFormatError("'aps' must be an array of strings");
  for (const auto& a : j["aps"]) {
    if (!a.is_string())
      throw KripkeFormatError("'aps' must contain strings");
    if (ks.ap_index(a.get<std::string>()) >= 0)
      throw KripkeFormatError("duplicate proposition '" + a.get<std::string>() + "'");
    ks.aps.push_back(a.get<std::string>());
  }
  if (ks.aps.size() > 20)
    throw KripkeFormatError("more than 20 atomic propositions are not supported");

  ks.succ.resize(ks.states.size());
  if (!j["transitions"].is_object())
    throw KripkeFormatError("'transitions' must be an object");
  for (auto it = j["transitions"].begin(); it != j["transitions"].end(); ++it) {
    int from = ks.state_index(it.key());
    if (from < 0)
      throw KripkeFormatError("transition source '" + it.key() + "' is not a state");
    if (!it.value().is_array())
      throw KripkeFormatError("transition targets must be an array");
    for (const auto& t : it.value()) {
      if (!t.is_string())
        throw KripkeFormatError("transition targets must be strings");
      int to = ks.state_index(t.get<std::string>());
      if (to < 0)
        throw KripkeFormatError("transition target '" + t.get<std::string>() + "' is not a state");
      ks.succ[from].push_back(static_cast<uint32_t>(to));
    }
  }
  for (uint32_t s = 0; s < ks.num_states(); ++s) {
    auto& v = ks.succ[s];
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.empty())
      throw KripkeFormatError("state '" + ks.states[s] + "' has no successor (the transition relation must be total)");
  }

  ks.labels.assign(ks.states.size(), 0);
  if (!j["labels"].is_object())
    throw KripkeFormatError("'labels' must be an object");
  std::set<std::string> labeled;
  for (auto it = j["labels"].begin(); it != j["labels"].end(); ++it) {
    int s = ks.state_index(it.key());
    if (s < 0)
      throw KripkeFormatError("label key '" + it.key() + "' is not a state");
    labeled.insert(it.key());
    if (!it.value().is_array())
      throw KripkeFormatError("labels must be arrays of proposition names");
    for (const auto& a : it.value()) {
      if (!a.is_string())
        throw KripkeFormatError("labels must be arrays of proposition names");
      int ap = ks.ap_index(a.get<std::string>());
      if (ap < 0)
        throw KripkeFormatError("unknown proposition '" + a.get<std::string>() + "' in label of '" + it.key() + "'");
      ks.labels[s] |= 1u << ap;
    }
  }
  for (const auto& s : ks.states)
    if (!labeled.count(s))
      throw KripkeFormatError("missing label entry for state '" + s + "'");
  return ks;
}

inline std::string serialize_kripke(const KripkeStructure& k) {
  nlohmann::json j;
  j["states"] = k.states;
  j["initial"] = k.states[k.initial];
  nlohmann::json tr = nlohmann::json::object();
  nlohmann::json lb = nlohmann::json::object();
  for (uint32_t s = 0; s < k.num_states(); ++s) {
    std::vector<std::string> names;
    for (uint32_t t : k.succ[s]) names.push_back(k.states[t]);
    tr[k.states[s]] = names;
    std::vector<std::string> aps;
    for (std::size_t a = 0; a < k.aps.size(); ++a)
      if (k.labels[s] & (1u << a)) aps.push_back(k.aps[a]);
    lb[k.states[s]] = aps;
  }
  j["transitions"] = tr;
  j["aps"] = k.aps;
  j["labels"] = lb;
  return j.dump(2);
}

/// True when `p` is a lasso-shaped path of `k`: the stem starts at the
/// initial state, adjacent letters are transitions, and the loop closes.
inline bool is_lasso_path(const KripkeStructure& k, const Lasso<uint32_t>& p) {
  if (p.loop.empty()) return false;
  const uint32_t first = p.stem.empty() ? p.loop.front() : p.stem.front();
  if (first != k.initial) return false;
  for (uint32_t s : p.stem)
    if (s >= k.num_states()) return false;
  for (uint32_t s : p.loop)
    if (s >= k.num_states()) return false;
  const std::size_t n = p.span();
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!k.has_transition(p.at(i), p.at(i + 1))) return false;
  return k.has_transition(p.loop.back(), p.loop.front());
}

/// All lasso paths stem.loop^w of `k` with |stem| <= max_stem and
/// |loop| <= max_loop, as canonical words (deduplicated).
inline std::vector<Lasso<uint32_t>> enumerate_lasso_paths(const KripkeStructure& k,
                                                          std::size_t max_stem,
                                                          std::size_t max_loop) {
  if (max_stem < 1 || max_loop < 1)
    throw std::invalid_argument("lasso bounds must be at least 1");
  std::set<Lasso<uint32_t>> out;
  // Walks of length up to max_stem + max_loop from the initial state; every
  // split into stem/loop with a closing transition yields a candidate.
  std::vector<uint32_t> walk{k.initial};
  auto emit = [&](const std::vector<uint32_t>& w) {
    for (std::size_t stem_len = 0; stem_len <= std::min(max_stem, w.size() - 1); ++stem_len) {
      const std::size_t loop_len = w.size() - stem_len;
      if (loop_len < 1 || loop_len > max_loop) continue;
      if (!k.has_transition(w.back(), w[stem_len])) continue;
      Lasso<uint32_t> l(std::vector<uint32_t>(w.begin(), w.begin() + stem_len),
                        std::vector<uint32_t>(w.begin() + stem_len, w.end()));
      out.insert(canonical(l));
    }
  };
  // Iterative DFS over all walks.
  struct Frame { uint32_t state; std::size_t next_succ; };
  std::vector<Frame> stack{{k.initial, 0}};
  emit(walk);
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (walk.size() >= max_stem + max_loop || f.next_succ >= k.succ[f.state].size()) {
      stack.pop_back();
      walk.pop_back();
      continue;
    }
    uint32_t nxt = k.succ[f.state][f.next_succ++];
    walk.push_back(nxt);
    emit(walk);
    stack.push_back({nxt, 0});
  }
  return {out.begin(), out.end()};
}

/// Pointwise application of the labeling to a lasso path; the result is the
/// canonical form of the trace (letters are label bitmasks over k.aps).
inline Lasso<uint32_t> trace_of(const KripkeStructure& k, const Lasso<uint32_t>& p) {
  if (!is_lasso_path(k, p))
    throw ValidationError("not a lasso path of the Kripke structure");
  Lasso<uint32_t> t;
  for (uint32_t s : p.stem) t.stem.push_back(k.labels[s]);
  for (uint32_t s : p.loop) t.loop.push_back(k.labels[s]);
  return canonical(t);
}

}  // namespace hypermc
