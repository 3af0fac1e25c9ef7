// oracle.hpp -- independent ground truth: exact LTL evaluation on ultimately
// periodic words and bounded brute-force checking of prenex sentences.
#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"
#include "kripke.hpp"
#include "lasso.hpp"
#include "rewrite.hpp"

namespace hypermc {
namespace oracle {

/// Variable assignment for matrix evaluation: one lasso of letter bitmasks
/// per variable, all interpreted over the shared `universe` of proposition
/// names (bit i of a letter is universe[i]).
struct WordAssignment {
  std::vector<std::string> universe;
  std::map<std::string, Lasso<uint32_t>> words;

  int bit_of(const std::string& ap) const {
    auto it = std::find(universe.begin(), universe.end(), ap);
    return it == universe.end() ? -1 : static_cast<int>(it - universe.begin());
  }
};

namespace detail {

struct EvalContext {
  const WordAssignment& assign;
  std::size_t stem = 0, loop = 1;  // common shape
  std::map<std::pair<const void*, std::size_t>, bool> memo;

  std::size_t fold(std::size_t i) const {
    return i < stem ? i : stem + (i - stem) % loop;
  }
  std::size_t horizon(std::size_t i) const { return std::max(i, stem) + loop; }

  uint32_t letter(const std::string& var, std::size_t i) const {
    auto it = assign.words.find(var);
    if (it == assign.words.end())
      throw ValidationError("unassigned variable '" + var + "'");
    return it->second.at(i);
  }
};

inline bool eval_rec(EvalContext& cx, const Formula& f, std::size_t pos) {
  const std::size_t i = cx.fold(pos);
  auto key = std::make_pair(f.id(), i);
  if (auto it = cx.memo.find(key); it != cx.memo.end())
    return it->second;
  bool r = false;
  switch (f.kind()) {
    case FKind::True: r = true; break;
    case FKind::False: r = false; break;
    case FKind::Atom: {
      const std::string& v = f.var().empty() ? f.name() : f.var();
      int bit = cx.assign.bit_of(f.name());
      if (bit < 0)
        throw ValidationError("proposition '" + f.name() + "' not in the evaluation universe");
      r = (cx.letter(v, i) >> bit) & 1;
      break;
    }
    case FKind::Not: r = !eval_rec(cx, f.child(0), i); break;
    case FKind::And: r = eval_rec(cx, f.child(0), i) && eval_rec(cx, f.child(1), i); break;
    case FKind::Or: r = eval_rec(cx, f.child(0), i) || eval_rec(cx, f.child(1), i); break;
    case FKind::Implies: r = !eval_rec(cx, f.child(0), i) || eval_rec(cx, f.child(1), i); break;
    case FKind::Iff: r = eval_rec(cx, f.child(0), i) == eval_rec(cx, f.child(1), i); break;
    case FKind::Next: r = eval_rec(cx, f.child(0), i + 1); break;
    case FKind::Until: {
      r = false;
      for (std::size_t k = i; k < cx.horizon(i); ++k) {
        if (eval_rec(cx, f.child(1), k)) { r = true; break; }
        if (!eval_rec(cx, f.child(0), k)) { r = false; break; }
      }
      break;
    }
    case FKind::WeakUntil: {
      r = true;
      for (std::size_t k = i; k < cx.horizon(i); ++k) {
        if (eval_rec(cx, f.child(1), k)) { r = true; break; }
        if (!eval_rec(cx, f.child(0), k)) { r = false; break; }
      }
      break;
    }
    case FKind::Release: {
      r = true;
      for (std::size_t k = i; k < cx.horizon(i); ++k) {
        if (!eval_rec(cx, f.child(1), k)) { r = false; break; }
        if (eval_rec(cx, f.child(0), k)) { r = true; break; }
      }
      break;
    }
    case FKind::Eventually: {
      r = false;
      for (std::size_t k = i; k < cx.horizon(i); ++k)
        if (eval_rec(cx, f.child(0), k)) { r = true; break; }
      break;
    }
    case FKind::Globally: {
      r = true;
      for (std::size_t k = i; k < cx.horizon(i); ++k)
        if (!eval_rec(cx, f.child(0), k)) { r = false; break; }
      break;
    }
    default:
      throw ValidationError("matrix evaluation: not a quantifier-free LTL construct");
  }
  cx.memo.emplace(key, r);
  return r;
}

/// Rebuilds every assigned word on a common stem/loop shape so positions
/// fold uniformly.
inline WordAssignment normalize(const WordAssignment& a) {
  std::size_t stem = 0, loop = 1;
  for (const auto& [v, w] : a.words) {
    stem = std::max(stem, w.stem.size());
    loop = std::lcm(loop, w.loop.size());
  }
  WordAssignment out;
  out.universe = a.universe;
  for (const auto& [v, w] : a.words) {
    Lasso<uint32_t> nw;
    for (std::size_t i = 0; i < stem; ++i) nw.stem.push_back(w.at(i));
    for (std::size_t i = stem; i < stem + loop; ++i) nw.loop.push_back(w.at(i));
    out.words.emplace(v, std::move(nw));
  }
  return out;
}

}  // namespace detail

/// Exact truth value of a quantifier-free matrix on an assignment of
/// ultimately periodic words at position `pos`. Evaluation terminates by
/// folding positions beyond the stem modulo the loop and scanning one loop
/// period past the stem for each temporal operator.
inline bool eval_ltl_lasso(const Formula& matrix, const WordAssignment& assignment,
                           std::size_t pos) {
  WordAssignment norm = detail::normalize(assignment);
  detail::EvalContext cx{norm};
  if (!norm.words.empty()) {
    cx.stem = norm.words.begin()->second.stem.size();
    cx.loop = norm.words.begin()->second.loop.size();
  }
  if (pos >= cx.stem + cx.loop)
    pos = cx.fold(pos);
  return detail::eval_rec(cx, matrix, pos);
}

enum class ThreeValued { HoldsWithinBound, FailsWithinBound, Unknown };

inline const char* to_string(ThreeValued v) {
  switch (v) {
    case ThreeValued::HoldsWithinBound: return "holds-within-bound";
    case ThreeValued::FailsWithinBound: return "fails-within-bound";
    case ThreeValued::Unknown: return "unknown";
  }
  return "?";
}

struct BoundedResult {
  ThreeValued value = ThreeValued::Unknown;
  bool bounded_verdict = false;  // the raw relativized truth value
  /// Universal-quantifier choices along the failing branch (only for
  /// FailsWithinBound).
  std::map<std::string, Lasso<uint32_t>> refutation;
};

namespace detail {

/// A Kripke structure whose reachable part is a single path has exactly one
/// trace; the bounded enumeration is then exhaustive when that lasso fits.
inline bool traces_exhaustive(const KripkeStructure& k, std::size_t max_stem,
                              std::size_t max_loop) {
  std::vector<uint32_t> path{k.initial};
  std::set<uint32_t> seen{k.initial};
  uint32_t cur = k.initial;
  while (true) {
    if (k.succ[cur].size() != 1)
      return false;
    uint32_t nxt = k.succ[cur][0];
    if (seen.count(nxt)) {
      auto entry = std::find(path.begin(), path.end(), nxt);
      std::size_t stem = static_cast<std::size_t>(entry - path.begin());
      std::size_t loop = path.size() - stem;
      return stem <= max_stem && loop <= max_loop;
    }
    seen.insert(nxt);
    path.push_back(nxt);
    cur = nxt;
  }
}

inline std::vector<Lasso<uint32_t>> prop_value_lassos(int bit, std::size_t max_stem,
                                                      std::size_t max_loop) {
  std::set<Lasso<uint32_t>> out;
  const uint32_t on = 1u << bit;
  for (std::size_t sl = 0; sl <= max_stem; ++sl)
    for (std::size_t ll = 1; ll <= max_loop; ++ll) {
      const std::size_t total = sl + ll;
      for (uint32_t bits = 0; bits < (1u << total); ++bits) {
        Lasso<uint32_t> w;
        for (std::size_t i = 0; i < sl; ++i) w.stem.push_back((bits >> i) & 1 ? on : 0);
        for (std::size_t i = sl; i < total; ++i) w.loop.push_back((bits >> i) & 1 ? on : 0);
        out.insert(canonical(w));
      }
    }
  return {out.begin(), out.end()};
}

struct BoundedEval {
  const std::vector<PrefixEntry>& prefix;
  const Formula& matrix;
  const std::vector<Lasso<uint32_t>>& traces;
  std::size_t max_stem, max_loop;
  WordAssignment assign;
  std::map<std::string, Lasso<uint32_t>> refutation;

  bool run(std::size_t idx) {
    if (idx == prefix.size())
      return eval_ltl_lasso(matrix, assign, 0);
    const PrefixEntry& q = prefix[idx];
    std::vector<Lasso<uint32_t>> domain;
    if (q.sort == VarSort::Trace) {
      domain = traces;
    } else {
      domain = prop_value_lassos(assign.bit_of(q.var), max_stem, max_loop);
    }
    for (const auto& w : domain) {
      // Refutation entries from an earlier sibling branch are stale.
      for (std::size_t j = idx; j < prefix.size(); ++j)
        refutation.erase(prefix[j].var);
      assign.words[q.var] = w;
      bool sub = run(idx + 1);
      if (q.is_exists && sub) {
        assign.words.erase(q.var);
        return true;
      }
      if (!q.is_exists && !sub) {
        refutation[q.var] = w;
        assign.words.erase(q.var);
        return false;
      }
    }
    assign.words.erase(q.var);
    return !q.is_exists;
  }
};

}  // namespace detail

/// Bounded brute-force check of a prenex HyperLTL/HyperQPTL sentence:
/// trace quantifiers range over the lasso paths of `k` within the bounds,
/// propositional quantifiers over value lassos of the same shape. The
/// relativized verdict is promoted to a sound answer only when the
/// quantifier domains allow it: a refutation is sound when every
/// existential domain was exhaustive, a verification when every universal
/// domain was.
inline BoundedResult bounded_check(const KripkeStructure& k, const Formula& f,
                                   std::size_t max_stem, std::size_t max_loop) {
  if (max_stem < 1 || max_loop < 1)
    throw std::invalid_argument("bounded_check: bounds must be at least 1");
  auto [prefix, matrix] = split_prenex(f);

  std::vector<Lasso<uint32_t>> traces;
  {
    std::set<Lasso<uint32_t>> tset;
    for (const auto& p : enumerate_lasso_paths(k, max_stem, max_loop))
      tset.insert(trace_of(k, p));
    traces.assign(tset.begin(), tset.end());
  }

  detail::BoundedEval ev{prefix, matrix, traces, max_stem, max_loop};
  ev.assign.universe = k.aps;
  for (const auto& q : prefix)
    if (q.sort == VarSort::Prop)
      ev.assign.universe.push_back(q.var);

  const bool verdict = ev.run(0);

  const bool tr_exhaustive = detail::traces_exhaustive(k, max_stem, max_loop);
  bool exists_exhaustive = true, forall_exhaustive = true;
  for (const auto& q : prefix) {
    const bool dom_exhaustive = q.sort == VarSort::Trace ? tr_exhaustive : false;
    if (q.is_exists)
      exists_exhaustive &= dom_exhaustive;
    else
      forall_exhaustive &= dom_exhaustive;
  }

  BoundedResult out;
  out.bounded_verdict = verdict;
  if (verdict) {
    out.value = forall_exhaustive ? ThreeValued::HoldsWithinBound : ThreeValued::Unknown;
  } else {
    out.value = exists_exhaustive ? ThreeValued::FailsWithinBound : ThreeValued::Unknown;
    if (out.value == ThreeValued::FailsWithinBound)
      out.refutation = ev.refutation;
  }
  return out;
}

}  // namespace oracle
}  // namespace hypermc
