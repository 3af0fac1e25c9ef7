// engine_mple.hpp -- model checking MPL[E] by recursive construction of a
// Buchi automaton over padded state tuples: one component per free variable,
// first-order components spell a nonempty path prefix followed by bottom,
// second-order components spell a full path.
#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <string>
#include <vector>

#include "automaton_ops.hpp"
#include "emptiness.hpp"
#include "engine_linear.hpp"
#include "errors.hpp"
#include "formula.hpp"
#include "kripke.hpp"
#include "rewrite.hpp"
#include "validate.hpp"
#include "verdict.hpp"

namespace hypermc {

/// Ordered variable environment; defines the alphabet (one padded state
/// component per variable, in first-binding order).
struct VarEnv {
  std::vector<std::pair<std::string, VarSort>> vars;

  int index_of(const std::string& v) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i].first == v) return static_cast<int>(i);
    return -1;
  }
  VarEnv extended(const std::string& v, VarSort s) const {
    if (index_of(v) >= 0)
      throw ValidationError("variable '" + v + "' is bound twice; rename one binder");
    VarEnv e = *this;
    e.vars.push_back({v, s});
    return e;
  }
  Alphabet alphabet(const KripkeStructure& k) const {
    Alphabet a;
    for (const auto& [v, s] : vars)
      a.push_back(Component::padded_state(v, k.num_states()));
    return a;
  }
};

namespace detail {

/// Small helper: an automaton over the environment alphabet whose behavior
/// depends only on the watched components; every other component is free.
template <typename StepFn>
BuchiAutomaton monitor_automaton(const Alphabet& alphabet, uint32_t num_states,
                                 std::vector<uint32_t> initial, std::vector<uint32_t> accepting,
                                 const std::vector<int>& watched, StepFn&& step) {
  LetterCodec codec(alphabet);
  const uint64_t letters = letter_count(alphabet);
  BuchiAutomaton a;
  a.alphabet = alphabet;
  a.num_states = num_states;
  a.initial = std::move(initial);
  a.trans.resize(num_states);
  std::vector<uint32_t> vals(watched.size());
  std::vector<uint32_t> succ;
  for (uint64_t l = 0; l < letters; ++l) {
    for (std::size_t i = 0; i < watched.size(); ++i)
      vals[i] = codec.get(l, static_cast<std::size_t>(watched[i]));
    for (uint32_t q = 0; q < num_states; ++q) {
      succ.clear();
      step(q, vals, succ);
      for (uint32_t q2 : succ) a.trans[q].push_back({l, q2});
    }
  }
  a.acc_sets = {std::move(accepting)};
  a.generalized = false;
  a.sort_transitions();
  return a;
}

}  // namespace detail

/// Automaton for one MPL[E] atom over the environment's alphabet. Only the
/// atom's own components are constrained.
inline BuchiAutomaton atom_automaton(const Formula& atom, const VarEnv& env,
                                     const KripkeStructure& k) {
  const Alphabet alphabet = env.alphabet(k);
  const uint32_t n = k.num_states();
  const uint32_t bot = n;
  auto comp_of = [&](const std::string& v) {
    int i = env.index_of(v);
    if (i < 0)
      throw ValidationError("unknown variable '" + v + "'");
    return i;
  };
  switch (atom.kind()) {
    case FKind::PredAt: {
      // Track the last state of x; accept once x is bottom forever and the
      // proposition held in that last state.
      int ap = k.ap_index(atom.name());
      if (ap < 0)
        throw ValidationError("atomic proposition '" + atom.name() + "' is not part of the structure");
      const int cx = comp_of(atom.var());
      // States: 0 = start, 1..n = seen state (value-1), n+1 = done.
      const uint32_t done = n + 1;
      return detail::monitor_automaton(
          alphabet, n + 2, {0}, {done}, {cx},
          [&](uint32_t q, const std::vector<uint32_t>& v, std::vector<uint32_t>& out) {
            const uint32_t x = v[0];
            if (q == 0) {
              if (x < n) out.push_back(x + 1);
            } else if (q == done) {
              if (x == bot) out.push_back(done);
            } else {
              if (x < n) out.push_back(x + 1);
              if (x == bot && (k.labels[q - 1] >> ap) & 1) out.push_back(done);
            }
          });
    }
    case FKind::PrefixLe: {
      // x is a (not necessarily proper) prefix of y: equal until x bottoms
      // out, then y runs free until it bottoms out too.
      const int cx = comp_of(atom.name()), cy = comp_of(atom.var());
      // 0 = both live, 1 = only y live, 2 = both done.
      return detail::monitor_automaton(
          alphabet, 3, {0}, {2}, {cx, cy},
          [&](uint32_t q, const std::vector<uint32_t>& v, std::vector<uint32_t>& out) {
            const uint32_t x = v[0], y = v[1];
            switch (q) {
              case 0:
                if (x < n && x == y) out.push_back(0);
                else if (x == bot && y < n) out.push_back(1);
                else if (x == bot && y == bot) out.push_back(2);
                break;
              case 1:
                if (x == bot && y < n) out.push_back(1);
                else if (x == bot && y == bot) out.push_back(2);
                break;
              case 2:
                if (x == bot && y == bot) out.push_back(2);
                break;
            }
          });
    }
    case FKind::VarEq: {
      const int cx = comp_of(atom.name()), cy = comp_of(atom.var());
      return detail::monitor_automaton(
          alphabet, 2, {0}, {1}, {cx, cy},
          [&](uint32_t q, const std::vector<uint32_t>& v, std::vector<uint32_t>& out) {
            const uint32_t x = v[0], y = v[1];
            if (q == 0) {
              if (x < n && x == y) out.push_back(0);
              else if (x == bot && y == bot) out.push_back(1);
            } else {
              if (x == bot && y == bot) out.push_back(1);
            }
          });
    }
    case FKind::ElemOf: {
      // x agrees with X until x bottoms out; X is unconstrained afterwards.
      const int cx = comp_of(atom.name()), cX = comp_of(atom.var());
      return detail::monitor_automaton(
          alphabet, 2, {0}, {1}, {cx, cX},
          [&](uint32_t q, const std::vector<uint32_t>& v, std::vector<uint32_t>& out) {
            const uint32_t x = v[0], X = v[1];
            if (q == 0) {
              if (x < n && x == X) out.push_back(0);
              else if (x == bot) out.push_back(1);
            } else {
              if (x == bot) out.push_back(1);
            }
          });
    }
    case FKind::EqLevel: {
      // x and y bottom out at the same position; values are unrelated.
      const int cx = comp_of(atom.name()), cy = comp_of(atom.var());
      return detail::monitor_automaton(
          alphabet, 2, {0}, {1}, {cx, cy},
          [&](uint32_t q, const std::vector<uint32_t>& v, std::vector<uint32_t>& out) {
            const uint32_t x = v[0], y = v[1];
            if (q == 0) {
              if (x < n && y < n) out.push_back(0);
              else if (x == bot && y == bot) out.push_back(1);
            } else {
              if (x == bot && y == bot) out.push_back(1);
            }
          });
    }
    default:
      throw ValidationError("not an MPL[E] atom");
  }
}

/// Well-formedness automaton: every first-order component is a nonempty
/// non-bottom prefix followed by bottom forever; second-order components are
/// never bottom.
inline BuchiAutomaton wellformed_automaton(const VarEnv& env, const KripkeStructure& k) {
  const Alphabet alphabet = env.alphabet(k);
  const uint32_t n = k.num_states();
  const uint32_t bot = n;
  std::vector<int> fo, so;
  for (std::size_t i = 0; i < env.vars.size(); ++i)
    (env.vars[i].second == VarSort::FirstOrder ? fo : so).push_back(static_cast<int>(i));
  std::vector<int> watched = fo;
  watched.insert(watched.end(), so.begin(), so.end());
  // States: bitmask of first-order components already bottomed out, plus a
  // distinguished start state where bottom is not allowed yet.
  const uint32_t masks = 1u << fo.size();
  const uint32_t start = masks;  // nonempty-prefix requirement
  const uint32_t full = masks - 1;
  return detail::monitor_automaton(
      alphabet, masks + 1, {start}, {full}, watched,
      [&, fo_count = fo.size()](uint32_t q, const std::vector<uint32_t>& v,
                                std::vector<uint32_t>& out) {
        for (std::size_t i = fo_count; i < v.size(); ++i)
          if (v[i] == bot) return;  // second-order components never bottom
        if (q == start) {
          for (std::size_t i = 0; i < fo_count; ++i)
            if (v[i] == bot) return;
          out.push_back(0);
          return;
        }
        uint32_t next = q;
        for (std::size_t i = 0; i < fo_count; ++i) {
          const bool done = (q >> i) & 1;
          if (done) {
            if (v[i] != bot) return;
          } else if (v[i] == bot) {
            next |= 1u << i;
          }
        }
        out.push_back(next);
      });
}

/// Negation under well-formedness: complement intersected with the
/// well-formedness automaton for the current environment.
inline BuchiAutomaton negate_wf(const BuchiAutomaton& a, const VarEnv& env,
                                const KripkeStructure& k) {
  return intersect(complement(a), wellformed_automaton(env, k));
}

/// Existential first-order elimination: the component must spell a path
/// prefix ending in bottom, then it is projected away.
inline BuchiAutomaton elim_exists_fo(const BuchiAutomaton& a, const std::string& x,
                                     const KripkeStructure& k) {
  return project_exists(restrict_to_kripke(a, x, k, RestrictMode::prefix()), x);
}

/// Existential second-order elimination: the component must spell a full
/// path, then it is projected away.
inline BuchiAutomaton elim_exists_so(const BuchiAutomaton& a, const std::string& X,
                                     const KripkeStructure& k) {
  return project_exists(restrict_to_kripke(a, X, k, RestrictMode::full_path()), X);
}

namespace detail {

/// Lowers implications, biconditionals and universal quantifiers; the
/// recursive construction then only sees atoms, !, &, | and exists.
inline Formula lower_mple(const Formula& f) {
  switch (f.kind()) {
    case FKind::Forall:
      return Formula::not_(Formula::exists(f.name(), f.sort(),
                                           Formula::not_(lower_mple(f.child(0)))));
    case FKind::Exists:
      return Formula::exists(f.name(), f.sort(), lower_mple(f.child(0)));
    case FKind::Not:
      return Formula::not_(lower_mple(f.child(0)));
    case FKind::And:
      return Formula::and_(lower_mple(f.child(0)), lower_mple(f.child(1)));
    case FKind::Or:
      return Formula::or_(lower_mple(f.child(0)), lower_mple(f.child(1)));
    case FKind::Implies:
      return Formula::or_(Formula::not_(lower_mple(f.child(0))), lower_mple(f.child(1)));
    case FKind::Iff: {
      Formula l = lower_mple(f.child(0)), r = lower_mple(f.child(1));
      return Formula::or_(Formula::and_(l, r),
                          Formula::and_(Formula::not_(l), Formula::not_(r)));
    }
    default:
      return f;
  }
}

inline int mple_alternations(const Formula& f, bool neg, int last_exists /* -1 none */) {
  switch (f.kind()) {
    case FKind::Exists:
    case FKind::Forall: {
      bool ex = (f.kind() == FKind::Exists) != neg;
      int sw = last_exists >= 0 && last_exists != static_cast<int>(ex) ? 1 : 0;
      return sw + mple_alternations(f.child(0), neg, ex ? 1 : 0);
    }
    case FKind::Not:
      return mple_alternations(f.child(0), !neg, last_exists);
    default: {
      int m = 0;
      for (const Formula& c : f.children())
        m = std::max(m, mple_alternations(c, neg, last_exists));
      return m;
    }
  }
}

struct MpleBuilder {
  const KripkeStructure& k;
  const CheckOptions& opts;
  std::vector<StepStat>* steps;

  void record(const std::string& what, const BuchiAutomaton& a) {
    steps->push_back({what, a.num_states});
    if (opts.dump) opts.dump(what, a);
  }

  BuchiAutomaton build(const Formula& f, const VarEnv& env) {
    switch (f.kind()) {
      case FKind::True:
        return universal_automaton(env.alphabet(k));
      case FKind::False:
        return empty_automaton(env.alphabet(k));
      case FKind::PredAt:
      case FKind::PrefixLe:
      case FKind::VarEq:
      case FKind::ElemOf:
      case FKind::EqLevel:
        return atom_automaton(f, env, k);
      case FKind::Not: {
        BuchiAutomaton a = negate_wf(build(f.child(0), env), env, k);
        record("not", a);
        return trim(a);
      }
      case FKind::And:
        return trim(intersect(build(f.child(0), env), build(f.child(1), env)));
      case FKind::Or:
        return trim(union_automata(build(f.child(0), env), build(f.child(1), env)));
      case FKind::Exists: {
        VarEnv inner = env.extended(f.name(), f.sort());
        BuchiAutomaton a = build(f.child(0), inner);
        a = f.sort() == VarSort::FirstOrder ? elim_exists_fo(a, f.name(), k)
                                            : elim_exists_so(a, f.name(), k);
        a = trim(a);
        record("exists " + f.name(), a);
        return a;
      }
      default:
        throw ValidationError("construct not available in MPL[E]");
    }
  }
};

}  // namespace detail

/// Model checks a closed MPL[E] sentence against `k`: builds the automaton
/// for the negated sentence by structural recursion and decides by
/// emptiness over the unit alphabet. Verdict only, no witness extraction.
inline Verdict check_mple(const KripkeStructure& k, const Formula& f,
                          const CheckOptions& opts = {}) {
  validate(f, LogicId::MPLE);
  const auto t0 = std::chrono::steady_clock::now();
  Formula resolved = resolve_label_classes(f);
  Formula lowered = detail::lower_mple(Formula::not_(resolved));
  if (detail::mple_alternations(lowered, false, -1) > opts.max_alternations)
    throw ResourceGuardError("quantifier alternation depth exceeds --max-alternations");

  Verdict verdict;
  verdict.universe = k.aps;
  detail::MpleBuilder builder{k, opts, &verdict.stats.steps};
  BuchiAutomaton a = builder.build(lowered, VarEnv{});
  verdict.holds = !is_empty(a).has_value();
  verdict.stats.time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
  return verdict;
}

}  // namespace hypermc
