// engine_branching.hpp -- HyperCTL* model checking for the X-guarded
// quantifier fragment over state-tuple alphabets, using padded delayed-start
// components: a path bound under d X-operators reads bottom for its first d
// positions and then follows the structure from its parent's current state.
#pragma once

#include <algorithm>
#include <cassert>
#include <chrono>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "automaton_ops.hpp"
#include "emptiness.hpp"
#include "engine_linear.hpp"
#include "errors.hpp"
#include "formula.hpp"
#include "kripke.hpp"
#include "rewrite.hpp"
#include "tableau.hpp"
#include "validate.hpp"
#include "verdict.hpp"

namespace hypermc {

struct StartDelay {
  std::string parent;   // empty = bound at the root
  uint32_t delay = 0;   // X operators between this binder and its parent
  uint32_t total = 0;   // delay summed along the binder chain
  bool is_exists = false;
  std::size_t doc_order = 0;
};

namespace detail {

inline void delays_rec(const Formula& f, const std::string& parent, uint32_t x_count,
                       uint32_t parent_total, std::map<std::string, StartDelay>& out,
                       std::size_t& counter) {
  switch (f.kind()) {
    case FKind::Exists:
    case FKind::Forall: {
      if (out.count(f.name()))
        throw ValidationError("path variable '" + f.name() + "' is bound twice; rename one binder");
      StartDelay d;
      d.parent = parent;
      d.delay = x_count;
      d.total = parent_total + x_count;
      d.is_exists = f.kind() == FKind::Exists;
      d.doc_order = counter++;
      out.emplace(f.name(), d);
      delays_rec(f.child(0), f.name(), 0, d.total, out, counter);
      return;
    }
    case FKind::Next:
      delays_rec(f.child(0), parent, x_count + 1, parent_total, out, counter);
      return;
    case FKind::Not:
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
    case FKind::Iff:
      for (const Formula& c : f.children())
        delays_rec(c, parent, x_count, parent_total, out, counter);
      return;
    default:
      // U/W/R/F/G operands were checked quantifier-free by validation.
      return;
  }
}

inline bool contains_quant(const Formula& f) {
  if (is_quantifier(f)) return true;
  for (const Formula& c : f.children())
    if (contains_quant(c)) return true;
  return false;
}

/// Pushes a root negation through Booleans, X and quantifiers; quantifier-free
/// subtrees keep their negation for the tableau's normal form.
inline Formula push_neg_branching(const Formula& f, bool neg) {
  if (!contains_quant(f))
    return neg ? Formula::not_(f) : f;
  switch (f.kind()) {
    case FKind::Exists:
    case FKind::Forall: {
      FKind k = f.kind();
      if (neg) k = k == FKind::Exists ? FKind::Forall : FKind::Exists;
      return Formula::quant(k, f.name(), f.sort(), push_neg_branching(f.child(0), neg));
    }
    case FKind::Not:
      return push_neg_branching(f.child(0), !neg);
    case FKind::Next:
      return Formula::next(push_neg_branching(f.child(0), neg));
    case FKind::And:
    case FKind::Or: {
      FKind k = f.kind();
      if (neg) k = k == FKind::And ? FKind::Or : FKind::And;
      return Formula::binary(k, push_neg_branching(f.child(0), neg),
                             push_neg_branching(f.child(1), neg));
    }
    case FKind::Implies:
      return push_neg_branching(
          Formula::or_(Formula::not_(f.child(0)), f.child(1)), neg);
    case FKind::Iff: {
      const Formula &l = f.child(0), &r = f.child(1);
      return push_neg_branching(Formula::or_(Formula::and_(l, r),
                                             Formula::and_(Formula::not_(l), Formula::not_(r))),
                                neg);
    }
    default:
      throw ValidationError("quantifier inside a U/W/R/F/G operand is outside the supported fragment");
  }
}

/// Strips quantifier nodes in place, leaving one global matrix.
inline Formula flatten_quants(const Formula& f) {
  if (is_quantifier(f))
    return flatten_quants(f.child(0));
  if (f.arity() == 0) return f;
  std::vector<Formula> cs;
  for (const Formula& c : f.children()) cs.push_back(flatten_quants(c));
  if (f.arity() == 1) return Formula::unary(f.kind(), std::move(cs[0]));
  return Formula::binary(f.kind(), std::move(cs[0]), std::move(cs[1]));
}

#ifndef NDEBUG
/// Padding discipline: along every run, a delayed component is bottom on
/// exactly the positions before its total delay. Checked structurally on the
/// first `delay` BFS levels plus the sync level.
inline void check_padding(const BuchiAutomaton& a, const std::string& comp, uint32_t delay) {
  int ci = component_index(a.alphabet, comp);
  if (ci < 0) return;
  LetterCodec codec(a.alphabet);
  const uint32_t bot = a.alphabet[ci].bottom();
  std::set<uint32_t> level(a.initial.begin(), a.initial.end());
  for (uint32_t step = 0; step <= delay; ++step) {
    std::set<uint32_t> next;
    for (uint32_t q : level)
      for (const Transition& t : a.trans[q]) {
        uint32_t v = codec.get(t.letter, ci);
        if (step < delay)
          assert(v == bot && "component must be padded before its start delay");
        else
          assert(v != bot && "component must start after its delay");
        next.insert(t.dst);
      }
    level = std::move(next);
  }
}
#endif

}  // namespace detail

/// Start-delay analysis: for every path quantifier, its parent binder and
/// the number of X operators separating them. The formula must validate as
/// the X-guarded HyperCTL* fragment.
inline std::map<std::string, StartDelay> start_delay_analysis(const Formula& f) {
  validate(f, LogicId::HyperCTLStar);
  std::map<std::string, StartDelay> out;
  std::size_t counter = 0;
  detail::delays_rec(f, "", 0, 0, out, counter);
  return out;
}

/// Model checks an X-guarded HyperCTL* sentence against `k`.
inline Verdict check_hyperctls(const KripkeStructure& k, const Formula& f,
                               const CheckOptions& opts = {}) {
  validate(f, LogicId::HyperCTLStar);
  const auto t0 = std::chrono::steady_clock::now();

  Formula dual = detail::push_neg_branching(f, true);
  std::map<std::string, StartDelay> delays;
  {
    std::size_t counter = 0;
    detail::delays_rec(dual, "", 0, 0, delays, counter);
  }
  // Alternation guard over the elimination order.
  std::vector<const std::pair<const std::string, StartDelay>*> order;
  for (const auto& e : delays) order.push_back(&e);
  std::sort(order.begin(), order.end(),
            [](auto* a, auto* b) { return a->second.doc_order > b->second.doc_order; });
  {
    int alts = 0;
    for (std::size_t i = 1; i < order.size(); ++i)
      if (order[i]->second.is_exists != order[i - 1]->second.is_exists) ++alts;
    if (alts > opts.max_alternations)
      throw ResourceGuardError("quantifier alternation depth exceeds --max-alternations");
  }

  Formula matrix = detail::flatten_quants(dual);
  for (const auto& [var, d] : delays)
    for (const auto& ap : collect_atom_aps(matrix, var))
      if (k.ap_index(ap) < 0)
        throw ValidationError("atomic proposition '" + ap + "' is not part of the structure");

  // Label alphabet with padding, then state alphabet, document order.
  Alphabet label_alpha;
  {
    std::vector<const std::pair<const std::string, StartDelay>*> doc(order.rbegin(), order.rend());
    for (auto* e : doc)
      label_alpha.push_back(Component::padded_label_set(e->first, k.aps));
  }

  Verdict verdict;
  verdict.universe = k.aps;
  auto record = [&](const std::string& what, const BuchiAutomaton& a) {
    verdict.stats.steps.push_back({what, a.num_states});
    if (opts.dump) opts.dump(what, a);
  };

  auto restrict_var = [&](BuchiAutomaton a, const std::string& var) {
    const StartDelay& d = delays.at(var);
    RestrictMode mode = d.parent.empty() ? RestrictMode::path()
                                         : RestrictMode::delayed_start(d.total, d.parent);
    a = restrict_to_kripke(a, var, k, mode);
#ifndef NDEBUG
    detail::check_padding(a, var, d.total);
#endif
    return a;
  };

  const bool purely_exists = std::all_of(order.begin(), order.end(),
                                         [](auto* e) { return e->second.is_exists; });
  const bool prenex = std::all_of(order.begin(), order.end(),
                                  [](auto* e) { return e->second.total == 0; });

  if (purely_exists) {
    BuchiAutomaton a = relabel_to_states(matrix_to_nba(to_nnf(matrix), label_alpha), k);
    record("matrix", a);
    for (auto* e : order) {
      a = trim(restrict_var(std::move(a), e->first));
      record("exists " + e->first, a);
    }
    auto w = is_empty(a);
    verdict.holds = !w.has_value();
    if (w && prenex) {
      // Components carry states; map them back to label lassos.
      LetterCodec codec(a.alphabet);
      for (std::size_t ci = 0; ci < a.alphabet.size(); ++ci) {
        Lasso<uint32_t> l;
        for (uint64_t letter : w->stem) l.stem.push_back(k.labels[codec.get(letter, ci)]);
        for (uint64_t letter : w->loop) l.loop.push_back(k.labels[codec.get(letter, ci)]);
        verdict.counterexample.emplace(a.alphabet[ci].name, canonical(l));
      }
    }
  } else {
    struct Block {
      bool is_exists;
      std::vector<std::string> vars;
    };
    std::vector<Block> blocks;
    for (auto* e : order) {
      if (blocks.empty() || blocks.back().is_exists != e->second.is_exists)
        blocks.push_back({e->second.is_exists, {}});
      blocks.back().vars.push_back(e->first);
    }
    BuchiAutomaton a;
    bool result_complemented = false;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
      const Block& b = blocks[bi];
      const bool last = bi + 1 == blocks.size();
      if (bi == 0) {
        Formula m = b.is_exists ? matrix : Formula::not_(matrix);
        a = relabel_to_states(matrix_to_nba(to_nnf(m), label_alpha), k);
        record("matrix", a);
      } else if (!b.is_exists) {
        a = trim(complement(a));
      }
      for (const std::string& var : b.vars) {
        a = restrict_var(std::move(a), var);
        a = trim(project_exists(a, var));
        record((b.is_exists ? "exists " : "forall ") + var, a);
      }
      if (!b.is_exists) {
        if (last)
          result_complemented = true;
        else
          a = trim(complement(a));
      }
    }
    verdict.holds = result_complemented ? accepts_lasso(a, detail::unit_lasso())
                                        : !is_empty(a).has_value();
  }

  verdict.stats.time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
  return verdict;
}

}  // namespace hypermc
