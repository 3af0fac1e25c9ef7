// emptiness.hpp -- nested depth-first search emptiness with lasso witness
// extraction, and ultimately-periodic membership.
#pragma once

#include <optional>
#include <vector>

#include "automaton.hpp"
#include "automaton_ops.hpp"
#include "lasso.hpp"

namespace hypermc {

namespace detail {

struct DfsFrame {
  uint32_t state;
  std::size_t next = 0;
  uint64_t in_letter = 0;  // letter on the edge from the parent frame
};

}  // namespace detail

/// Nested DFS emptiness check. Returns an accepted lasso when the language
/// is nonempty and nothing otherwise. Iteration follows state and
/// transition order, so the witness is deterministic.
inline std::optional<Lasso<uint64_t>> is_empty(const BuchiAutomaton& a0) {
  const BuchiAutomaton a = degeneralize(a0);
  const uint32_t n = a.num_states;
  if (n == 0) return std::nullopt;
  const auto& acc = a.acc_sets[0];
  auto accepting = [&](uint32_t q) { return std::binary_search(acc.begin(), acc.end(), q); };

  std::vector<char> outer_color(n, 0);  // 0 new, 1 on stack, 2 done
  std::vector<char> inner_seen(n, 0);
  std::vector<std::size_t> stack_pos(n, 0);

  using detail::DfsFrame;
  std::vector<DfsFrame> outer;
  outer.reserve(64);

  // Builds the witness from the outer stack (root .. seed) and the inner
  // path (seed .. c --l--> s), where s sits on the outer stack.
  auto build_witness = [&](const std::vector<DfsFrame>& inner, uint64_t closing_letter,
                           uint32_t target) -> Lasso<uint64_t> {
    std::vector<uint64_t> stem, loop;
    for (std::size_t i = 1; i < outer.size(); ++i) stem.push_back(outer[i].in_letter);
    for (std::size_t i = 1; i < inner.size(); ++i) loop.push_back(inner[i].in_letter);
    loop.push_back(closing_letter);
    for (std::size_t i = stack_pos[target] + 1; i < outer.size(); ++i)
      loop.push_back(outer[i].in_letter);
    return canonical(Lasso<uint64_t>(std::move(stem), std::move(loop)));
  };

  // Inner search from `seed`: any edge into a state on the outer stack
  // closes an accepting cycle through the seed.
  auto inner_search = [&](uint32_t seed) -> std::optional<Lasso<uint64_t>> {
    std::vector<DfsFrame> inner{{seed, 0, 0}};
    inner_seen[seed] = 1;
    while (!inner.empty()) {
      DfsFrame& f = inner.back();
      if (f.next >= a.trans[f.state].size()) {
        inner.pop_back();
        continue;
      }
      const Transition t = a.trans[f.state][f.next++];
      if (outer_color[t.dst] == 1)
        return build_witness(inner, t.letter, t.dst);
      if (!inner_seen[t.dst]) {
        inner_seen[t.dst] = 1;
        inner.push_back({t.dst, 0, t.letter});
      }
    }
    return std::nullopt;
  };

  for (uint32_t root : a.initial) {
    if (outer_color[root] != 0) continue;
    outer.assign(1, {root, 0, 0});
    outer_color[root] = 1;
    stack_pos[root] = 0;
    while (!outer.empty()) {
      DfsFrame& f = outer.back();
      if (f.next < a.trans[f.state].size()) {
        const Transition t = a.trans[f.state][f.next++];
        if (outer_color[t.dst] == 0) {
          outer_color[t.dst] = 1;
          stack_pos[t.dst] = outer.size();
          outer.push_back({t.dst, 0, t.letter});
        }
        continue;
      }
      const uint32_t q = f.state;
      if (accepting(q))
        if (auto w = inner_search(q))
          return w;
      outer_color[q] = 2;
      outer.pop_back();
    }
  }
  return std::nullopt;
}

/// One-run automaton spelling exactly stem.loop^w over the given alphabet.
inline BuchiAutomaton lasso_automaton(const Alphabet& alphabet, const Lasso<uint64_t>& w) {
  const uint64_t letters = letter_count(alphabet);
  for (uint64_t l : w.stem)
    if (l >= letters) throw ValidationError("lasso letter outside the alphabet");
  for (uint64_t l : w.loop)
    if (l >= letters) throw ValidationError("lasso letter outside the alphabet");
  BuchiAutomaton a;
  a.alphabet = alphabet;
  a.num_states = static_cast<uint32_t>(w.span());
  a.initial = {0};
  a.trans.resize(a.num_states);
  for (uint32_t i = 0; i < a.num_states; ++i) {
    uint32_t nxt = i + 1 < a.num_states ? i + 1 : static_cast<uint32_t>(w.period_offset());
    a.trans[i].push_back({w.at(i), nxt});
  }
  // Every infinite run accepts; the word itself carries the acceptance.
  a.acc_sets.clear();
  a.generalized = true;
  return a;
}

/// Membership of an ultimately periodic word: emptiness of the product with
/// the one-run lasso automaton.
inline bool accepts_lasso(const BuchiAutomaton& a, const Lasso<uint64_t>& w) {
  BuchiAutomaton la = lasso_automaton(a.alphabet, w);
  return is_empty(intersect(a, la)).has_value();
}

}  // namespace hypermc
