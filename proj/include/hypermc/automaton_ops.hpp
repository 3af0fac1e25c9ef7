// automaton_ops.hpp -- the omega-automata algebra: degeneralization,
// trimming, quotienting, products, projections, complementation, and the
// Kripke restriction monitors.
#pragma once

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include "automaton.hpp"
#include "errors.hpp"

namespace hypermc {

/// Hard cap on constructed state counts; trips the CLI resource guard.
inline constexpr uint32_t kStateGuard = 2'000'000;

inline void check_guard(std::size_t n, const char* what) {
  if (n > kStateGuard)
    throw ResourceGuardError(std::string(what) + " exceeded the state guard");
}

/// Language-preserving NBA for a GNBA via the counter construction
/// (m acceptance sets, counter advances when the current set is visited).
/// Zero sets means every infinite run accepts, so all states become
/// accepting; one set is returned unchanged apart from the NBA tag.
inline BuchiAutomaton degeneralize(const BuchiAutomaton& a) {
  if (!a.generalized)
    return a;
  BuchiAutomaton r;
  r.alphabet = a.alphabet;
  const std::size_t m = a.acc_sets.size();
  if (m == 0) {
    r = a;
    r.generalized = false;
    r.acc_sets.clear();
    std::vector<uint32_t> all(a.num_states);
    for (uint32_t i = 0; i < a.num_states; ++i) all[i] = i;
    r.acc_sets.push_back(std::move(all));
    return r;
  }
  if (m == 1) {
    r = a;
    r.generalized = false;
    return r;
  }
  std::map<std::pair<uint32_t, uint32_t>, uint32_t> ids;
  std::deque<std::pair<uint32_t, uint32_t>> work;
  std::vector<std::pair<uint32_t, uint32_t>> rev;
  auto intern = [&](uint32_t q, uint32_t c) {
    auto [it, fresh] = ids.try_emplace({q, c}, static_cast<uint32_t>(rev.size()));
    if (fresh) {
      rev.push_back({q, c});
      work.push_back({q, c});
      check_guard(rev.size(), "degeneralization");
    }
    return it->second;
  };
  for (uint32_t q : a.initial) r.initial.push_back(intern(q, 0));
  while (!work.empty()) {
    auto [q, c] = work.front();
    work.pop_front();
    uint32_t src = ids.at({q, c});
    uint32_t c2 = a.in_acc_set(c, q) ? static_cast<uint32_t>((c + 1) % m) : c;
    r.trans.resize(rev.size());
    for (const Transition& t : a.trans[q]) {
      uint32_t dst = intern(t.dst, c2);
      r.trans.resize(rev.size());
      r.trans[src].push_back({t.letter, dst});
    }
  }
  r.num_states = static_cast<uint32_t>(rev.size());
  r.trans.resize(rev.size());
  std::vector<uint32_t> acc;
  for (uint32_t i = 0; i < r.num_states; ++i)
    if (rev[i].second == 0 && a.in_acc_set(0, rev[i].first))
      acc.push_back(i);
  r.acc_sets = {std::move(acc)};
  r.generalized = false;
  r.sort_transitions();
  std::sort(r.initial.begin(), r.initial.end());
  r.initial.erase(std::unique(r.initial.begin(), r.initial.end()), r.initial.end());
  return r;
}

namespace detail {

/// Tarjan SCC with deterministic iteration; returns the component id per
/// state (ids in reverse topological discovery order) and whether the
/// component has an internal edge.
struct SccInfo {
  std::vector<int> comp;
  std::vector<char> nontrivial;
  int count = 0;
};

inline SccInfo scc_decompose(const BuchiAutomaton& a) {
  SccInfo out;
  const uint32_t n = a.num_states;
  out.comp.assign(n, -1);
  std::vector<int> low(n, -1), idx(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<uint32_t> stack;
  int counter = 0;

  struct Frame { uint32_t v; std::size_t next; };
  for (uint32_t root = 0; root < n; ++root) {
    if (idx[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    idx[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next < a.trans[f.v].size()) {
        uint32_t w = a.trans[f.v][f.next++].dst;
        if (idx[w] == -1) {
          idx[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], idx[w]);
        }
      } else {
        uint32_t v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == idx[v]) {
          int c = out.count++;
          while (true) {
            uint32_t w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            out.comp[w] = c;
            if (w == v) break;
          }
        }
      }
    }
  }
  out.nontrivial.assign(out.count, 0);
  for (uint32_t v = 0; v < n; ++v)
    for (const Transition& t : a.trans[v])
      if (out.comp[v] == out.comp[t.dst])
        out.nontrivial[out.comp[v]] = 1;
  return out;
}

}  // namespace detail

/// Removes states that are unreachable or cannot contribute to an accepting
/// run. Language-preserving; keeps the acceptance shape.
inline BuchiAutomaton trim(const BuchiAutomaton& a) {
  const uint32_t n = a.num_states;
  std::vector<char> reach(n, 0);
  std::deque<uint32_t> work(a.initial.begin(), a.initial.end());
  for (uint32_t q : a.initial) reach[q] = 1;
  while (!work.empty()) {
    uint32_t q = work.front();
    work.pop_front();
    for (const Transition& t : a.trans[q])
      if (!reach[t.dst]) {
        reach[t.dst] = 1;
        work.push_back(t.dst);
      }
  }
  // A state is useful if it reaches a nontrivial SCC intersecting every
  // acceptance set.
  detail::SccInfo scc = detail::scc_decompose(a);
  std::vector<std::vector<char>> hits(scc.count, std::vector<char>(a.acc_sets.size(), 0));
  for (std::size_t s = 0; s < a.acc_sets.size(); ++s)
    for (uint32_t q : a.acc_sets[s])
      hits[scc.comp[q]][s] = 1;
  std::vector<char> good(n, 0);
  for (uint32_t q = 0; q < n; ++q) {
    int c = scc.comp[q];
    if (!scc.nontrivial[c]) continue;
    bool all = true;
    for (std::size_t s = 0; s < a.acc_sets.size() && all; ++s)
      all = hits[c][s];
    if (all) good[q] = 1;
  }
  // Backward closure of `good`.
  std::vector<std::vector<uint32_t>> preds(n);
  for (uint32_t q = 0; q < n; ++q)
    for (const Transition& t : a.trans[q])
      preds[t.dst].push_back(q);
  std::deque<uint32_t> bwork;
  for (uint32_t q = 0; q < n; ++q)
    if (good[q]) bwork.push_back(q);
  while (!bwork.empty()) {
    uint32_t q = bwork.front();
    bwork.pop_front();
    for (uint32_t p : preds[q])
      if (!good[p]) {
        good[p] = 1;
        bwork.push_back(p);
      }
  }

  std::vector<int> remap(n, -1);
  uint32_t kept = 0;
  for (uint32_t q = 0; q < n; ++q)
    if (reach[q] && good[q]) remap[q] = static_cast<int>(kept++);

  BuchiAutomaton r;
  r.alphabet = a.alphabet;
  r.generalized = a.generalized;
  r.num_states = kept;
  r.trans.resize(kept);
  for (uint32_t q : a.initial)
    if (remap[q] >= 0) r.initial.push_back(static_cast<uint32_t>(remap[q]));
  for (uint32_t q = 0; q < n; ++q) {
    if (remap[q] < 0) continue;
    for (const Transition& t : a.trans[q])
      if (remap[t.dst] >= 0)
        r.trans[remap[q]].push_back({t.letter, static_cast<uint32_t>(remap[t.dst])});
  }
  for (const auto& s : a.acc_sets) {
    std::vector<uint32_t> ns;
    for (uint32_t q : s)
      if (remap[q] >= 0) ns.push_back(static_cast<uint32_t>(remap[q]));
    r.acc_sets.push_back(std::move(ns));
  }
  r.sort_transitions();
  return r;
}

/// Quotient by the coarsest forward bisimulation that respects acceptance
/// membership. Language-preserving; used to shrink inputs before
/// complementation.
inline BuchiAutomaton bisim_quotient(const BuchiAutomaton& a) {
  const uint32_t n = a.num_states;
  if (n == 0) return a;
  std::vector<uint32_t> cls(n, 0);
  // Initial partition: acceptance signature.
  {
    std::map<std::vector<char>, uint32_t> sig_ids;
    for (uint32_t q = 0; q < n; ++q) {
      std::vector<char> sig;
      for (std::size_t s = 0; s < a.acc_sets.size(); ++s)
        sig.push_back(a.in_acc_set(s, q) ? 1 : 0);
      auto [it, fresh] = sig_ids.try_emplace(sig, static_cast<uint32_t>(sig_ids.size()));
      cls[q] = it->second;
    }
  }
  while (true) {
    std::map<std::pair<uint32_t, std::vector<std::pair<uint64_t, uint32_t>>>, uint32_t> sig_ids;
    std::vector<uint32_t> next(n);
    for (uint32_t q = 0; q < n; ++q) {
      std::vector<std::pair<uint64_t, uint32_t>> moves;
      moves.reserve(a.trans[q].size());
      for (const Transition& t : a.trans[q])
        moves.push_back({t.letter, cls[t.dst]});
      std::sort(moves.begin(), moves.end());
      moves.erase(std::unique(moves.begin(), moves.end()), moves.end());
      auto [it, fresh] =
          sig_ids.try_emplace({cls[q], std::move(moves)}, static_cast<uint32_t>(sig_ids.size()));
      next[q] = it->second;
    }
    bool stable = sig_ids.size() == *std::max_element(cls.begin(), cls.end()) + 1;
    cls = std::move(next);
    if (stable) break;
  }
  const uint32_t m = *std::max_element(cls.begin(), cls.end()) + 1;
  BuchiAutomaton r;
  r.alphabet = a.alphabet;
  r.generalized = a.generalized;
  r.num_states = m;
  r.trans.resize(m);
  for (uint32_t q : a.initial) r.initial.push_back(cls[q]);
  std::sort(r.initial.begin(), r.initial.end());
  r.initial.erase(std::unique(r.initial.begin(), r.initial.end()), r.initial.end());
  for (uint32_t q = 0; q < n; ++q)
    for (const Transition& t : a.trans[q])
      r.trans[cls[q]].push_back({t.letter, cls[t.dst]});
  for (const auto& s : a.acc_sets) {
    std::set<uint32_t> ns;
    for (uint32_t q : s) ns.insert(cls[q]);
    r.acc_sets.push_back({ns.begin(), ns.end()});
  }
  r.sort_transitions();
  return r;
}

/// Synchronous product: L(result) = L(a) /\ L(b). Acceptance sets of both
/// operands are lifted, so an NBA pair yields a two-set GNBA (the usual
/// two-phase intersection after degeneralization).
inline BuchiAutomaton intersect(const BuchiAutomaton& a, const BuchiAutomaton& b) {
  if (a.alphabet != b.alphabet)
    throw ValidationError("intersect: alphabet mismatch");
  BuchiAutomaton r;
  r.alphabet = a.alphabet;
  std::map<std::pair<uint32_t, uint32_t>, uint32_t> ids;
  std::deque<std::pair<uint32_t, uint32_t>> work;
  std::vector<std::pair<uint32_t, uint32_t>> rev;
  auto intern = [&](uint32_t qa, uint32_t qb) {
    auto [it, fresh] = ids.try_emplace({qa, qb}, static_cast<uint32_t>(rev.size()));
    if (fresh) {
      rev.push_back({qa, qb});
      work.push_back({qa, qb});
      check_guard(rev.size(), "product");
    }
    return it->second;
  };
  for (uint32_t qa : a.initial)
    for (uint32_t qb : b.initial)
      r.initial.push_back(intern(qa, qb));
  while (!work.empty()) {
    auto [qa, qb] = work.front();
    work.pop_front();
    uint32_t src = ids.at({qa, qb});
    const auto& ta = a.trans[qa];
    const auto& tb = b.trans[qb];
    // Merge-join on letters (both sorted).
    std::size_t i = 0, j = 0;
    while (i < ta.size() && j < tb.size()) {
      if (ta[i].letter < tb[j].letter) { ++i; continue; }
      if (tb[j].letter < ta[i].letter) { ++j; continue; }
      uint64_t l = ta[i].letter;
      std::size_t i2 = i, j2 = j;
      while (i2 < ta.size() && ta[i2].letter == l) ++i2;
      while (j2 < tb.size() && tb[j2].letter == l) ++j2;
      for (std::size_t x = i; x < i2; ++x)
        for (std::size_t y = j; y < j2; ++y) {
          uint32_t dst = intern(ta[x].dst, tb[y].dst);
          r.trans.resize(rev.size());
          r.trans[src].push_back({l, dst});
        }
      i = i2;
      j = j2;
    }
    r.trans.resize(std::max(r.trans.size(), rev.size()));
  }
  r.num_states = static_cast<uint32_t>(rev.size());
  r.trans.resize(r.num_states);
  for (const auto& s : a.acc_sets) {
    std::vector<uint32_t> ns;
    for (uint32_t i2 = 0; i2 < r.num_states; ++i2)
      if (std::binary_search(s.begin(), s.end(), rev[i2].first)) ns.push_back(i2);
    r.acc_sets.push_back(std::move(ns));
  }
  for (const auto& s : b.acc_sets) {
    std::vector<uint32_t> ns;
    for (uint32_t i2 = 0; i2 < r.num_states; ++i2)
      if (std::binary_search(s.begin(), s.end(), rev[i2].second)) ns.push_back(i2);
    r.acc_sets.push_back(std::move(ns));
  }
  r.generalized = r.acc_sets.size() != 1;
  r.sort_transitions();
  std::sort(r.initial.begin(), r.initial.end());
  r.initial.erase(std::unique(r.initial.begin(), r.initial.end()), r.initial.end());
  return r;
}

/// Initial-state union: L(result) = L(a) u L(b).
inline BuchiAutomaton union_automata(const BuchiAutomaton& a0, const BuchiAutomaton& b0) {
  if (a0.alphabet != b0.alphabet)
    throw ValidationError("union: alphabet mismatch");
  BuchiAutomaton a = degeneralize(a0), b = degeneralize(b0);
  BuchiAutomaton r;
  r.alphabet = a.alphabet;
  r.num_states = a.num_states + b.num_states;
  r.trans.resize(r.num_states);
  const uint32_t off = a.num_states;
  for (uint32_t q = 0; q < a.num_states; ++q) r.trans[q] = a.trans[q];
  for (uint32_t q = 0; q < b.num_states; ++q)
    for (const Transition& t : b.trans[q])
      r.trans[off + q].push_back({t.letter, off + t.dst});
  r.initial = a.initial;
  for (uint32_t q : b.initial) r.initial.push_back(off + q);
  std::vector<uint32_t> acc = a.acc_sets[0];
  for (uint32_t q : b.acc_sets[0]) acc.push_back(off + q);
  r.acc_sets = {std::move(acc)};
  r.generalized = false;
  r.sort_transitions();
  std::sort(r.initial.begin(), r.initial.end());
  return r;
}

/// Existential projection: drops `component` from the alphabet and erases
/// its digit from every transition letter. No state blowup.
inline BuchiAutomaton project_exists(const BuchiAutomaton& a, const std::string& component) {
  int idx = component_index(a.alphabet, component);
  if (idx < 0)
    throw ValidationError("project: unknown component '" + component + "'");
  LetterCodec codec(a.alphabet);
  BuchiAutomaton r = a;
  r.alphabet.erase(r.alphabet.begin() + idx);
  for (auto& v : r.trans)
    for (Transition& t : v)
      t.letter = codec.erase(t.letter, static_cast<std::size_t>(idx));
  r.sort_transitions();
  return r;
}

namespace detail {

/// Subset-construction complement for safety automata (every state
/// accepting): a word is rejected exactly when the run tree dies, so the
/// complement accepts on reaching the empty subset.
inline BuchiAutomaton safety_complement(const BuchiAutomaton& a) {
  const uint64_t letters = letter_count(a.alphabet);
  std::map<std::vector<uint32_t>, uint32_t> ids;
  std::deque<std::vector<uint32_t>> work;
  std::vector<std::vector<uint32_t>> rev;
  auto intern = [&](std::vector<uint32_t> s) {
    auto [it, fresh] = ids.try_emplace(s, static_cast<uint32_t>(rev.size()));
    if (fresh) {
      rev.push_back(s);
      work.push_back(std::move(s));
      check_guard(rev.size(), "safety complement");
    }
    return it->second;
  };
  BuchiAutomaton r;
  r.alphabet = a.alphabet;
  r.initial = {intern(a.initial)};
  while (!work.empty()) {
    std::vector<uint32_t> s = work.front();
    work.pop_front();
    uint32_t src = ids.at(s);
    // Group the union of outgoing transitions by letter.
    std::vector<Transition> all;
    for (uint32_t q : s)
      all.insert(all.end(), a.trans[q].begin(), a.trans[q].end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    std::size_t i = 0;
    uint64_t covered = 0;
    std::vector<std::pair<uint64_t, uint32_t>> out;
    while (i < all.size()) {
      uint64_t l = all[i].letter;
      std::vector<uint32_t> dst;
      while (i < all.size() && all[i].letter == l) dst.push_back(all[i++].dst);
      std::sort(dst.begin(), dst.end());
      dst.erase(std::unique(dst.begin(), dst.end()), dst.end());
      out.push_back({l, intern(std::move(dst))});
      ++covered;
    }
    // Letters with no successor go to the empty subset.
    uint32_t sink = 0;
    if (covered < letters) sink = intern({});
    r.trans.resize(rev.size());
    if (covered < letters) {
      std::size_t k = 0;
      for (uint64_t l = 0; l < letters; ++l) {
        if (k < out.size() && out[k].first == l) {
          r.trans[src].push_back({l, out[k].second});
          ++k;
        } else {
          r.trans[src].push_back({l, sink});
        }
      }
    } else {
      for (auto& [l, d] : out) r.trans[src].push_back({l, d});
    }
  }
  r.num_states = static_cast<uint32_t>(rev.size());
  r.trans.resize(r.num_states);
  std::vector<uint32_t> acc;
  for (uint32_t q = 0; q < r.num_states; ++q)
    if (rev[q].empty()) acc.push_back(q);
  r.acc_sets = {std::move(acc)};
  r.generalized = false;
  r.sort_transitions();
  return r;
}

/// Rank-based complement state: per-state ranks (-1 = absent) plus the
/// breakpoint set of even-ranked states still owing a decrease.
struct RankState {
  std::vector<int32_t> ranks;
  std::vector<uint32_t> owing;
  auto operator<=>(const RankState&) const = default;
};

/// Rank-based complementation. Ranks are bounded by 2(n - |F|) + 2 and
/// accepting states carry even ranks. Per step, each tracked state either
/// follows its bound or drops one below it (parity-adjusted); runs accept
/// when the breakpoint set empties infinitely often.
inline BuchiAutomaton rank_complement(const BuchiAutomaton& a) {
  const uint32_t n = a.num_states;
  const auto& acc = a.acc_sets[0];
  auto is_acc = [&](uint32_t q) { return std::binary_search(acc.begin(), acc.end(), q); };
  const int32_t max_rank = 2 * static_cast<int32_t>(n - acc.size()) + 2;

  std::map<RankState, uint32_t> ids;
  std::deque<RankState> work;
  std::vector<char> is_accepting_state;
  auto intern = [&](RankState s) {
    auto [it, fresh] = ids.try_emplace(s, static_cast<uint32_t>(ids.size()));
    if (fresh) {
      is_accepting_state.push_back(s.owing.empty());
      work.push_back(std::move(s));
      check_guard(ids.size(), "rank-based complement");
    }
    return it->second;
  };

  RankState init;
  init.ranks.assign(n, -1);
  for (uint32_t q : a.initial) init.ranks[q] = max_rank;
  BuchiAutomaton r;
  r.alphabet = a.alphabet;
  r.initial = {intern(init)};

  const uint64_t letters = letter_count(a.alphabet);
  std::vector<std::vector<Transition>> out_trans;
  while (!work.empty()) {
    RankState s = work.front();
    work.pop_front();
    uint32_t src = ids.at(s);
    out_trans.resize(ids.size());

    bool any_present = false;
    for (uint32_t q = 0; q < n; ++q) any_present |= s.ranks[q] >= 0;
    if (!any_present) {
      // Dead run tree: every extension is rejected by `a`, accept everything.
      for (uint64_t l = 0; l < letters; ++l)
        out_trans[src].push_back({l, src});
      continue;
    }

    for (uint64_t l = 0; l < letters; ++l) {
      std::vector<int32_t> bound(n, -1);
      for (uint32_t q = 0; q < n; ++q) {
        if (s.ranks[q] < 0) continue;
        const auto& tq = a.trans[q];
        auto it = std::lower_bound(tq.begin(), tq.end(), Transition{l, 0});
        for (; it != tq.end() && it->letter == l; ++it)
          bound[it->dst] = bound[it->dst] < 0 ? s.ranks[q] : std::min(bound[it->dst], s.ranks[q]);
      }
      std::vector<uint32_t> present;
      for (uint32_t q = 0; q < n; ++q)
        if (bound[q] >= 0) present.push_back(q);

      // Successor set of the owing states under this letter.
      std::vector<char> owing_succ(n, 0);
      for (uint32_t q : s.owing) {
        const auto& tq = a.trans[q];
        auto it = std::lower_bound(tq.begin(), tq.end(), Transition{l, 0});
        for (; it != tq.end() && it->letter == l; ++it)
          owing_succ[it->dst] = 1;
      }

      if (present.empty()) {
        RankState dead;
        dead.ranks.assign(n, -1);
        uint32_t dst = intern(std::move(dead));
        out_trans.resize(ids.size());
        out_trans[src].push_back({l, dst});
        continue;
      }

      // Per-state rank options: the propagated bound or one below it,
      // adjusted to even on accepting states.
      std::vector<std::vector<int32_t>> opts(present.size());
      for (std::size_t i = 0; i < present.size(); ++i) {
        uint32_t q = present[i];
        auto adj = [&](int32_t v) { return (is_acc(q) && v % 2 == 1) ? v - 1 : v; };
        int32_t o1 = adj(bound[q]);
        if (o1 >= 0) opts[i].push_back(o1);
        if (bound[q] - 1 >= 0) {
          int32_t o2 = adj(bound[q] - 1);
          if (o2 >= 0 && (opts[i].empty() || opts[i][0] != o2)) opts[i].push_back(o2);
        }
        if (opts[i].empty()) opts[i].push_back(0);  // non-accepting with bound 0
      }
      if (present.size() > 24)
        throw ResourceGuardError("rank-based complement outdegree too large");

      std::vector<std::size_t> pick(present.size(), 0);
      while (true) {
        RankState ns;
        ns.ranks.assign(n, -1);
        for (std::size_t i = 0; i < present.size(); ++i)
          ns.ranks[present[i]] = opts[i][pick[i]];
        if (s.owing.empty()) {
          for (uint32_t q : present)
            if (ns.ranks[q] % 2 == 0) ns.owing.push_back(q);
        } else {
          for (uint32_t q : present)
            if (owing_succ[q] && ns.ranks[q] % 2 == 0) ns.owing.push_back(q);
        }
        uint32_t dst = intern(std::move(ns));
        out_trans.resize(ids.size());
        out_trans[src].push_back({l, dst});
        // Advance the mixed-radix pick.
        std::size_t i = 0;
        for (; i < present.size(); ++i) {
          if (++pick[i] < opts[i].size()) break;
          pick[i] = 0;
        }
        if (i == present.size()) break;
      }
    }
  }

  r.num_states = static_cast<uint32_t>(ids.size());
  r.trans = std::move(out_trans);
  r.trans.resize(r.num_states);
  std::vector<uint32_t> acc_states;
  for (uint32_t q = 0; q < r.num_states; ++q)
    if (is_accepting_state[q]) acc_states.push_back(q);
  r.acc_sets = {std::move(acc_states)};
  r.generalized = false;
  r.sort_transitions();
  return r;
}

}  // namespace detail

/// Complement: L(result) = all words over the alphabet not in L(a).
/// The input is degeneralized, trimmed, and quotiented first; safety-shaped
/// automata take the subset-construction shortcut, everything else goes
/// through the rank-based construction.
inline BuchiAutomaton complement(const BuchiAutomaton& a) {
  BuchiAutomaton t = trim(degeneralize(a));
  if (t.num_states == 0)
    return universal_automaton(a.alphabet);
  BuchiAutomaton q = bisim_quotient(t);
  if (q.acc_sets[0].size() == q.num_states)
    return detail::safety_complement(q);
  return detail::rank_complement(q);
}

/// Universal projection via the complement of the existential projection of
/// the complement.
inline BuchiAutomaton project_forall(const BuchiAutomaton& a, const std::string& component) {
  if (component_index(a.alphabet, component) < 0)
    throw ValidationError("project: unknown component '" + component + "'");
  return complement(project_exists(complement(a), component));
}

// -- Kripke restriction -------------------------------------------------------

struct RestrictMode {
  enum class Kind { Trace, Path, Prefix, FullPath, DelayedStart };
  Kind kind = Kind::Trace;
  uint32_t delay = 0;        // DelayedStart
  std::string ref;           // DelayedStart: component holding the parent path

  static RestrictMode trace() { return {Kind::Trace, 0, {}}; }
  static RestrictMode path() { return {Kind::Path, 0, {}}; }
  static RestrictMode prefix() { return {Kind::Prefix, 0, {}}; }
  static RestrictMode full_path() { return {Kind::FullPath, 0, {}}; }
  static RestrictMode delayed_start(uint32_t d, std::string ref_component) {
    return {Kind::DelayedStart, d, std::move(ref_component)};
  }
};

/// Constrains one alphabet component to follow the Kripke structure:
///   Trace        -- the component spells a trace of k (labels along a path)
///   Path/FullPath-- the component spells a path of k from the initial state
///   Prefix       -- a nonempty path prefix from the initial state, then
///                   bottom forever (adds one acceptance set)
///   DelayedStart -- bottom for `delay` steps, then a path starting at the
///                   state the `ref` component holds at position `delay`
inline BuchiAutomaton restrict_to_kripke(const BuchiAutomaton& a, const std::string& component,
                                         const KripkeStructure& k, const RestrictMode& mode) {
  const int ci = component_index(a.alphabet, component);
  if (ci < 0)
    throw ValidationError("restrict: unknown component '" + component + "'");
  const Component& comp = a.alphabet[ci];
  const uint32_t n = k.num_states();
  LetterCodec codec(a.alphabet);

  int ri = -1;
  switch (mode.kind) {
    case RestrictMode::Kind::Trace:
      if (comp.kind != Component::Kind::LabelSet || comp.aps != k.aps)
        throw ValidationError("restrict trace: component must range over label sets of the structure");
      break;
    case RestrictMode::Kind::Path:
    case RestrictMode::Kind::FullPath:
      if ((comp.kind != Component::Kind::State && comp.kind != Component::Kind::PaddedState) ||
          comp.num_states != n)
        throw ValidationError("restrict path: component must range over states of the structure");
      break;
    case RestrictMode::Kind::Prefix:
      if (comp.kind != Component::Kind::PaddedState || comp.num_states != n)
        throw ValidationError("restrict prefix: component must range over padded states");
      break;
    case RestrictMode::Kind::DelayedStart:
      if (comp.kind != Component::Kind::PaddedState || comp.num_states != n)
        throw ValidationError("restrict delayed-start: component must range over padded states");
      ri = component_index(a.alphabet, mode.ref);
      if (ri < 0 || ri == ci)
        throw ValidationError("restrict delayed-start: unknown reference component '" + mode.ref + "'");
      if ((a.alphabet[ri].kind != Component::Kind::State &&
           a.alphabet[ri].kind != Component::Kind::PaddedState) ||
          a.alphabet[ri].num_states != n)
        throw ValidationError("restrict delayed-start: reference component must range over states");
      break;
  }
  const bool comp_padded = comp.padded();
  const uint32_t bottom = comp_padded ? comp.bottom() : UINT32_MAX;

  // Monitor encoding:
  //   Trace/Path/FullPath : [0, n) current / expected state
  //   Prefix              : [0, n) expecting, n = done
  //   DelayedStart        : [0, delay) waiting, delay = sync, delay+1+s walking
  const uint32_t M_DONE = n;
  auto monitor_init = [&]() -> uint32_t {
    switch (mode.kind) {
      case RestrictMode::Kind::Trace:
      case RestrictMode::Kind::Path:
      case RestrictMode::Kind::FullPath:
      case RestrictMode::Kind::Prefix:
        return k.initial;
      case RestrictMode::Kind::DelayedStart:
        return mode.delay == 0 ? mode.delay : 0;  // sync state when delay == 0
    }
    return 0;
  };
  // Appends monitor successors for monitor state `m` when the component
  // digit is `v` and the reference digit is `rv`.
  auto monitor_step = [&](uint32_t m, uint32_t v, uint32_t rv, std::vector<uint32_t>& out) {
    switch (mode.kind) {
      case RestrictMode::Kind::Trace:
        if (v == k.labels[m])
          for (uint32_t s2 : k.succ[m]) out.push_back(s2);
        return;
      case RestrictMode::Kind::Path:
      case RestrictMode::Kind::FullPath:
        if (v == m)  // padded kinds: bottom never equals a state index
          for (uint32_t s2 : k.succ[m]) out.push_back(s2);
        return;
      case RestrictMode::Kind::Prefix:
        if (m == M_DONE) {
          if (v == bottom) out.push_back(M_DONE);
          return;
        }
        if (v == m) {
          for (uint32_t s2 : k.succ[m]) out.push_back(s2);
          out.push_back(M_DONE);
        }
        return;
      case RestrictMode::Kind::DelayedStart: {
        if (m < mode.delay) {  // waiting phase: component must be bottom
          if (v == bottom) out.push_back(m + 1 == mode.delay ? mode.delay : m + 1);
          return;
        }
        if (m == mode.delay) {  // sync: component equals the parent state
          if (v < n && v == rv)
            for (uint32_t s2 : k.succ[v]) out.push_back(mode.delay + 1 + s2);
          return;
        }
        uint32_t s = m - mode.delay - 1;
        if (v == s)
          for (uint32_t s2 : k.succ[s]) out.push_back(mode.delay + 1 + s2);
        return;
      }
    }
  };

  BuchiAutomaton r;
  r.alphabet = a.alphabet;
  std::map<std::pair<uint32_t, uint32_t>, uint32_t> ids;
  std::deque<std::pair<uint32_t, uint32_t>> work;
  std::vector<std::pair<uint32_t, uint32_t>> rev;
  auto intern = [&](uint32_t qa, uint32_t qm) {
    auto [it, fresh] = ids.try_emplace({qa, qm}, static_cast<uint32_t>(rev.size()));
    if (fresh) {
      rev.push_back({qa, qm});
      work.push_back({qa, qm});
      check_guard(rev.size(), "restriction product");
    }
    return it->second;
  };
  const uint32_t m0 = monitor_init();
  for (uint32_t qa : a.initial) r.initial.push_back(intern(qa, m0));
  std::vector<uint32_t> msucc;
  while (!work.empty()) {
    auto [qa, qm] = work.front();
    work.pop_front();
    uint32_t src = ids.at({qa, qm});
    for (const Transition& t : a.trans[qa]) {
      const uint32_t v = codec.get(t.letter, static_cast<std::size_t>(ci));
      const uint32_t rv = ri >= 0 ? codec.get(t.letter, static_cast<std::size_t>(ri)) : 0;
      msucc.clear();
      monitor_step(qm, v, rv, msucc);
      for (uint32_t m2 : msucc) {
        uint32_t dst = intern(t.dst, m2);
        r.trans.resize(rev.size());
        r.trans[src].push_back({t.letter, dst});
      }
    }
    r.trans.resize(std::max(r.trans.size(), rev.size()));
  }
  r.num_states = static_cast<uint32_t>(rev.size());
  r.trans.resize(r.num_states);
  for (const auto& s : a.acc_sets) {
    std::vector<uint32_t> ns;
    for (uint32_t i = 0; i < r.num_states; ++i)
      if (std::binary_search(s.begin(), s.end(), rev[i].first)) ns.push_back(i);
    r.acc_sets.push_back(std::move(ns));
  }
  if (mode.kind == RestrictMode::Kind::Prefix) {
    std::vector<uint32_t> ns;
    for (uint32_t i = 0; i < r.num_states; ++i)
      if (rev[i].second == M_DONE) ns.push_back(i);
    r.acc_sets.push_back(std::move(ns));
  }
  r.generalized = r.acc_sets.size() != 1;
  r.sort_transitions();
  std::sort(r.initial.begin(), r.initial.end());
  r.initial.erase(std::unique(r.initial.begin(), r.initial.end()), r.initial.end());
  return r;
}

/// Applies the labeling function in reverse: every label-set component turns
/// into a state component, and a transition on a state tuple exists exactly
/// when the original automaton moves on the tuple of labels.
inline BuchiAutomaton relabel_to_states(const BuchiAutomaton& a, const KripkeStructure& k) {
  for (const Component& c : a.alphabet) {
    if ((c.kind != Component::Kind::LabelSet && c.kind != Component::Kind::PaddedLabelSet) ||
        c.aps != k.aps)
      throw ValidationError("relabel: every component must range over label sets of the structure");
  }
  const uint32_t n = k.num_states();
  Alphabet na;
  for (const Component& c : a.alphabet)
    na.push_back(c.kind == Component::Kind::LabelSet ? Component::state(c.name, n)
                                                     : Component::padded_state(c.name, n));
  LetterCodec old_codec(a.alphabet), new_codec(na);
  // States sharing a label map to the same transitions.
  std::vector<std::vector<uint32_t>> by_label(1u << k.aps.size());
  for (uint32_t s = 0; s < n; ++s) by_label[k.labels[s]].push_back(s);

  BuchiAutomaton r;
  r.alphabet = na;
  r.num_states = a.num_states;
  r.initial = a.initial;
  r.acc_sets = a.acc_sets;
  r.generalized = a.generalized;
  r.trans.resize(a.num_states);
  const std::size_t width = a.alphabet.size();
  for (uint32_t q = 0; q < a.num_states; ++q) {
    for (const Transition& t : a.trans[q]) {
      // Enumerate all state tuples whose labels form this letter.
      std::vector<const std::vector<uint32_t>*> choices(width);
      std::vector<uint32_t> fixed(width, UINT32_MAX);
      bool possible = true;
      for (std::size_t i = 0; i < width && possible; ++i) {
        uint32_t v = old_codec.get(t.letter, i);
        if (a.alphabet[i].padded() && v == a.alphabet[i].bottom()) {
          fixed[i] = na[i].bottom();
        } else {
          choices[i] = &by_label[v];
          possible = !choices[i]->empty();
        }
      }
      if (!possible) continue;
      std::vector<std::size_t> pick(width, 0);
      while (true) {
        std::vector<uint32_t> vals(width);
        for (std::size_t i = 0; i < width; ++i)
          vals[i] = fixed[i] != UINT32_MAX ? fixed[i] : (*choices[i])[pick[i]];
        r.trans[q].push_back({new_codec.encode(vals), t.dst});
        std::size_t i = 0;
        for (; i < width; ++i) {
          if (fixed[i] != UINT32_MAX) continue;
          if (++pick[i] < choices[i]->size()) break;
          pick[i] = 0;
        }
        if (i == width) break;
      }
    }
  }
  r.sort_transitions();
  return r;
}

}  // namespace hypermc
