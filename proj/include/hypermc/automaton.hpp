// automaton.hpp -- nondeterministic (generalized) Buchi automata over
// structured tuple alphabets with named components.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "kripke.hpp"
#include "lasso.hpp"

namespace hypermc {

/// One named alphabet component. Letters of the automaton are tuples with
/// one value per component:
///   LabelSet        -- a subset of `aps`, encoded as a bitmask
///   PaddedLabelSet  -- a subset of `aps` or the padding value
///   State           -- a Kripke state index
///   PaddedState     -- a Kripke state index or the padding value
struct Component {
  enum class Kind { LabelSet, PaddedLabelSet, State, PaddedState };

  Kind kind = Kind::LabelSet;
  std::string name;
  std::vector<std::string> aps;  // LabelSet / PaddedLabelSet
  uint32_t num_states = 0;       // State / PaddedState

  uint32_t size() const {
    switch (kind) {
      case Kind::LabelSet: return 1u << aps.size();
      case Kind::PaddedLabelSet: return (1u << aps.size()) + 1;
      case Kind::State: return num_states;
      case Kind::PaddedState: return num_states + 1;
    }
    return 0;
  }
  bool padded() const { return kind == Kind::PaddedLabelSet || kind == Kind::PaddedState; }
  /// Value index of the padding letter; only meaningful for padded kinds.
  uint32_t bottom() const { return size() - 1; }

  bool operator==(const Component&) const = default;

  static Component label_set(std::string name, std::vector<std::string> aps) {
    return {Kind::LabelSet, std::move(name), std::move(aps), 0};
  }
  static Component padded_label_set(std::string name, std::vector<std::string> aps) {
    return {Kind::PaddedLabelSet, std::move(name), std::move(aps), 0};
  }
  static Component state(std::string name, uint32_t n) {
    return {Kind::State, std::move(name), {}, n};
  }
  static Component padded_state(std::string name, uint32_t n) {
    return {Kind::PaddedState, std::move(name), {}, n};
  }
};

using Alphabet = std::vector<Component>;

inline uint64_t letter_count(const Alphabet& a) {
  uint64_t n = 1;
  for (const Component& c : a) n *= c.size();
  return n;
}

inline int component_index(const Alphabet& a, const std::string& name) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].name == name) return static_cast<int>(i);
  return -1;
}

/// Mixed-radix packing of tuple letters: component 0 is the least
/// significant digit.
struct LetterCodec {
  std::vector<uint64_t> stride;
  std::vector<uint32_t> size;

  explicit LetterCodec(const Alphabet& a) {
    uint64_t s = 1;
    for (const Component& c : a) {
      stride.push_back(s);
      size.push_back(c.size());
      s *= c.size();
    }
  }
  uint32_t get(uint64_t letter, std::size_t comp) const {
    return static_cast<uint32_t>((letter / stride[comp]) % size[comp]);
  }
  uint64_t set(uint64_t letter, std::size_t comp, uint32_t value) const {
    uint64_t cur = (letter / stride[comp]) % size[comp];
    return letter + (static_cast<uint64_t>(value) - cur) * stride[comp];
  }
  std::vector<uint32_t> decode(uint64_t letter) const {
    std::vector<uint32_t> v(size.size());
    for (std::size_t i = 0; i < size.size(); ++i) v[i] = get(letter, i);
    return v;
  }
  uint64_t encode(const std::vector<uint32_t>& v) const {
    uint64_t l = 0;
    for (std::size_t i = 0; i < v.size(); ++i) l += static_cast<uint64_t>(v[i]) * stride[i];
    return l;
  }
  /// Re-packs a letter after dropping one component.
  uint64_t erase(uint64_t letter, std::size_t comp) const {
    uint64_t low = letter % stride[comp];
    uint64_t high = letter / (stride[comp] * size[comp]);
    return low + high * stride[comp];
  }
};

struct Transition {
  uint64_t letter;
  uint32_t dst;
  auto operator<=>(const Transition&) const = default;
};

/// Explicit nondeterministic Buchi automaton. `acc_sets` holds one set for
/// an NBA (generalized == false) and any number, including zero, for a GNBA.
/// A GNBA with zero sets accepts every word with an infinite run.
struct BuchiAutomaton {
  Alphabet alphabet;
  uint32_t num_states = 0;
  std::vector<uint32_t> initial;                 // sorted
  std::vector<std::vector<Transition>> trans;    // per source state, sorted
  std::vector<std::vector<uint32_t>> acc_sets;   // each sorted
  bool generalized = false;

  uint64_t num_transitions() const {
    uint64_t n = 0;
    for (const auto& v : trans) n += v.size();
    return n;
  }
  bool in_acc_set(std::size_t set_idx, uint32_t q) const {
    const auto& v = acc_sets[set_idx];
    return std::binary_search(v.begin(), v.end(), q);
  }
  void add_transition(uint32_t src, uint64_t letter, uint32_t dst) {
    trans[src].push_back({letter, dst});
  }
  void sort_transitions() {
    for (auto& v : trans) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  }
};

/// Accepts every word over the alphabet.
inline BuchiAutomaton universal_automaton(Alphabet alphabet) {
  BuchiAutomaton a;
  a.alphabet = std::move(alphabet);
  a.num_states = 1;
  a.initial = {0};
  a.trans.resize(1);
  const uint64_t n = letter_count(a.alphabet);
  a.trans[0].reserve(n);
  for (uint64_t l = 0; l < n; ++l) a.trans[0].push_back({l, 0});
  a.acc_sets = {{0}};
  return a;
}

/// Accepts nothing.
inline BuchiAutomaton empty_automaton(Alphabet alphabet) {
  BuchiAutomaton a;
  a.alphabet = std::move(alphabet);
  a.num_states = 0;
  a.acc_sets = {{}};
  return a;
}

/// Debug serialization (CLI --dump-automata). The format is documented in
/// the README but not stability-guaranteed.
inline nlohmann::json automaton_to_json(const BuchiAutomaton& a) {
  nlohmann::json j;
  LetterCodec codec(a.alphabet);
  nlohmann::json comps = nlohmann::json::array();
  for (const Component& c : a.alphabet) {
    nlohmann::json cj;
    cj["name"] = c.name;
    switch (c.kind) {
      case Component::Kind::LabelSet: cj["kind"] = "label-set"; cj["aps"] = c.aps; break;
      case Component::Kind::PaddedLabelSet: cj["kind"] = "padded-label-set"; cj["aps"] = c.aps; break;
      case Component::Kind::State: cj["kind"] = "state"; cj["states"] = c.num_states; break;
      case Component::Kind::PaddedState: cj["kind"] = "padded-state"; cj["states"] = c.num_states; break;
    }
    comps.push_back(cj);
  }
  j["alphabet"] = comps;
  j["states"] = a.num_states;
  j["initial"] = a.initial;
  j["generalized"] = a.generalized;
  j["acceptance"] = a.acc_sets;
  nlohmann::json tr = nlohmann::json::array();
  for (uint32_t s = 0; s < a.num_states; ++s)
    for (const Transition& t : a.trans[s]) {
      nlohmann::json e;
      e["from"] = s;
      e["letter"] = codec.decode(t.letter);
      e["to"] = t.dst;
      tr.push_back(e);
    }
  j["transitions"] = tr;
  return j;
}

}  // namespace hypermc
