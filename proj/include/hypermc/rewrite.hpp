// rewrite.hpp -- semantics-preserving formula transforms: dualization,
// negation normal form, core lowering, and knowledge elimination.
#pragma once

#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"

namespace hypermc {

/// Returns a formula equivalent to !f. Prenex sentences get their prefix
/// dualized and their matrix negated; everything else is negated at the root.
inline Formula dualize_negation(const Formula& f) {
  if (!is_quantifier(f))
    return Formula::not_(f);
  auto [prefix, matrix] = split_prenex(f);
  for (auto& q : prefix)
    q.is_exists = !q.is_exists;
  return rebuild_prenex(prefix, Formula::not_(matrix));
}

namespace detail {

inline Formula nnf_rec(const Formula& f, bool neg);

inline Formula nnf_not(const Formula& f) { return nnf_rec(f, true); }
inline Formula nnf_pos(const Formula& f) { return nnf_rec(f, false); }

inline Formula nnf_rec(const Formula& f, bool neg) {
  switch (f.kind()) {
    case FKind::True:
      return neg ? Formula::ff() : Formula::tt();
    case FKind::False:
      return neg ? Formula::tt() : Formula::ff();
    case FKind::Atom:
    case FKind::PredAt:
    case FKind::PrefixLe:
    case FKind::VarEq:
    case FKind::ElemOf:
    case FKind::EqLevel:
      return neg ? Formula::not_(f) : f;
    case FKind::Not:
      return nnf_rec(f.child(0), !neg);
    case FKind::And:
      return neg ? Formula::or_(nnf_not(f.child(0)), nnf_not(f.child(1)))
                 : Formula::and_(nnf_pos(f.child(0)), nnf_pos(f.child(1)));
    case FKind::Or:
      return neg ? Formula::and_(nnf_not(f.child(0)), nnf_not(f.child(1)))
                 : Formula::or_(nnf_pos(f.child(0)), nnf_pos(f.child(1)));
    case FKind::Implies:
      return nnf_rec(Formula::or_(Formula::not_(f.child(0)), f.child(1)), neg);
    case FKind::Iff: {
      const Formula &l = f.child(0), &r = f.child(1);
      Formula both = Formula::and_(l, r);
      Formula none = Formula::and_(Formula::not_(l), Formula::not_(r));
      return nnf_rec(Formula::or_(std::move(both), std::move(none)), neg);
    }
    case FKind::Next:
      return Formula::next(nnf_rec(f.child(0), neg));
    case FKind::Eventually:
      return neg ? Formula::globally(nnf_not(f.child(0)))
                 : Formula::eventually(nnf_pos(f.child(0)));
    case FKind::Globally:
      return neg ? Formula::eventually(nnf_not(f.child(0)))
                 : Formula::globally(nnf_pos(f.child(0)));
    case FKind::Until: {
      if (!neg)
        return Formula::until(nnf_pos(f.child(0)), nnf_pos(f.child(1)));
      // !(a U b) == (!b) W (!a & !b)
      Formula na = nnf_not(f.child(0)), nb = nnf_not(f.child(1));
      return Formula::weak_until(nb, Formula::and_(std::move(na), nb));
    }
    case FKind::WeakUntil: {
      if (!neg)
        return Formula::weak_until(nnf_pos(f.child(0)), nnf_pos(f.child(1)));
      // !(a W b) == (!b) U (!a & !b)
      Formula na = nnf_not(f.child(0)), nb = nnf_not(f.child(1));
      return Formula::until(nb, Formula::and_(std::move(na), nb));
    }
    case FKind::Release: {
      if (!neg)
        return Formula::release(nnf_pos(f.child(0)), nnf_pos(f.child(1)));
      // !(a R b) == (!a) U (!b)
      return Formula::until(nnf_not(f.child(0)), nnf_not(f.child(1)));
    }
    default:
      throw ValidationError("negation normal form is defined on quantifier-free matrices only");
  }
}

}  // namespace detail

/// Negation normal form of a quantifier-free matrix: negations end up on
/// atoms only; U/W/F/G/X are kept via their standard dualities.
inline Formula to_nnf(const Formula& matrix) { return detail::nnf_pos(matrix); }

/// Lowers a quantifier-free matrix to the tableau core {true, false, atom,
/// !, &, |, X, U}. Derived operators become their until forms: F a = true U a,
/// G a = !(true U !a), a W b = !(!b U (!a & !b)), a R b = !(!a U !b).
/// Double negations are collapsed to keep the closure small.
inline Formula to_core(const Formula& f) {
  auto not_c = [](Formula g) {
    if (g.kind() == FKind::Not)
      return g.child(0);
    return Formula::not_(std::move(g));
  };
  switch (f.kind()) {
    case FKind::True:
    case FKind::False:
    case FKind::Atom:
      return f;
    case FKind::Not:
      return not_c(to_core(f.child(0)));
    case FKind::And:
      return Formula::and_(to_core(f.child(0)), to_core(f.child(1)));
    case FKind::Or:
      return Formula::or_(to_core(f.child(0)), to_core(f.child(1)));
    case FKind::Implies:
      return Formula::or_(not_c(to_core(f.child(0))), to_core(f.child(1)));
    case FKind::Iff: {
      Formula l = to_core(f.child(0)), r = to_core(f.child(1));
      return Formula::or_(Formula::and_(l, r), Formula::and_(not_c(l), not_c(r)));
    }
    case FKind::Next:
      return Formula::next(to_core(f.child(0)));
    case FKind::Eventually:
      return Formula::until(Formula::tt(), to_core(f.child(0)));
    case FKind::Globally:
      return not_c(Formula::until(Formula::tt(), not_c(to_core(f.child(0)))));
    case FKind::Until:
      return Formula::until(to_core(f.child(0)), to_core(f.child(1)));
    case FKind::WeakUntil: {
      Formula na = not_c(to_core(f.child(0))), nb = not_c(to_core(f.child(1)));
      return not_c(Formula::until(nb, Formula::and_(std::move(na), nb)));
    }
    case FKind::Release: {
      Formula na = not_c(to_core(f.child(0))), nb = not_c(to_core(f.child(1)));
      return not_c(Formula::until(std::move(na), std::move(nb)));
    }
    default:
      throw ValidationError("matrix contains a non-LTL construct");
  }
}

namespace detail {

/// Collects every identifier used anywhere in the formula, for fresh names.
inline void collect_names(const Formula& f, std::set<std::string>& out) {
  if (!f.name().empty()) out.insert(f.name());
  if (!f.var().empty()) out.insert(f.var());
  for (const auto& o : f.obs()) out.insert(o);
  for (const Formula& c : f.children()) collect_names(c, out);
}

inline std::string fresh_name(const std::string& base, std::set<std::string>& used) {
  if (!used.count(base)) {
    used.insert(base);
    return base;
  }
  for (int i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!used.count(cand)) {
      used.insert(cand);
      return cand;
    }
  }
}

/// Renames trace variable `from` to `to` in atom indices of a matrix.
inline Formula rename_trace_var(const Formula& f, const std::string& from, const std::string& to) {
  if (f.kind() == FKind::Atom)
    return f.var() == from ? Formula::atom(f.name(), to) : f;
  if (f.kind() == FKind::Knowledge) {
    Formula body = rename_trace_var(f.child(0), from, to);
    return Formula::knowledge(f.obs(), f.var() == from ? to : f.var(), std::move(body));
  }
  if (f.arity() == 0) return f;
  std::vector<Formula> cs;
  cs.reserve(f.arity());
  for (const Formula& c : f.children())
    cs.push_back(rename_trace_var(c, from, to));
  if (f.arity() == 1)
    return is_quantifier(f) ? Formula::quant(f.kind(), f.name(), f.sort(), std::move(cs[0]))
                            : Formula::unary(f.kind(), std::move(cs[0]));
  return Formula::binary(f.kind(), std::move(cs[0]), std::move(cs[1]));
}

inline bool contains_knowledge(const Formula& f) {
  if (f.kind() == FKind::Knowledge) return true;
  for (const Formula& c : f.children())
    if (contains_knowledge(c)) return true;
  return false;
}

/// Finds one positively occurring knowledge node; throws if a knowledge node
/// occurs under negative polarity. Returns an invalid Formula when none left.
inline Formula find_knowledge(const Formula& f, bool positive) {
  switch (f.kind()) {
    case FKind::Knowledge:
      if (!positive)
        throw ValidationError("knowledge operator under negative polarity is not eliminable");
      // Rewrite nested operators innermost-first.
      if (Formula inner = find_knowledge(f.child(0), positive); inner.valid())
        return inner;
      return f;
    case FKind::Not:
      return find_knowledge(f.child(0), !positive);
    case FKind::Implies: {
      if (Formula l = find_knowledge(f.child(0), !positive); l.valid())
        return l;
      return find_knowledge(f.child(1), positive);
    }
    case FKind::Iff:
      for (const Formula& c : f.children())
        if (contains_knowledge(c))
          throw ValidationError("knowledge operator under '<->' has mixed polarity");
      return Formula();
    default:
      for (const Formula& c : f.children())
        if (Formula g = find_knowledge(c, positive); g.valid())
          return g;
      return Formula();
  }
}

/// Replaces the first structural occurrence of `what` by `with`.
inline Formula replace_once(const Formula& f, const Formula& what, const Formula& with, bool& done) {
  if (done) return f;
  if (f == what) {
    done = true;
    return with;
  }
  if (f.arity() == 0) return f;
  std::vector<Formula> cs;
  cs.reserve(f.arity());
  for (const Formula& c : f.children())
    cs.push_back(replace_once(c, what, with, done));
  if (f.kind() == FKind::Knowledge) {
    Formula g = Formula::knowledge(f.obs(), f.var(), std::move(cs[0]));
    return g;
  }
  if (is_quantifier(f))
    return Formula::quant(f.kind(), f.name(), f.sort(), std::move(cs[0]));
  if (f.arity() == 1)
    return Formula::unary(f.kind(), std::move(cs[0]));
  return Formula::binary(f.kind(), std::move(cs[0]), std::move(cs[1]));
}

}  // namespace detail

/// Rewrites every (positively occurring) knowledge operator into
/// propositional quantification: each K{A}[pi] psi becomes a fresh
/// existentially quantified proposition u, constrained so that u only marks
/// positions where psi holds on every trace that is A-indistinguishable from
/// pi on the prefix. The marking uses a universally quantified proposition r
/// that singles out the prefix, and a universally quantified trace pi'.
inline Formula eliminate_knowledge(const Formula& f) {
  auto [prefix, matrix] = split_prenex(f);
  std::set<std::string> used;
  detail::collect_names(f, used);

  std::vector<PrefixEntry> front;        // fresh Eprop u binders, outermost
  std::vector<PrefixEntry> back;         // fresh Aprop r / forall pi' binders, innermost
  while (true) {
    Formula site = detail::find_knowledge(matrix, true);
    if (!site.valid())
      break;
    const std::string u = detail::fresh_name("u", used);
    const std::string r = detail::fresh_name("r", used);
    const std::string pi2 = detail::fresh_name(site.var() + "_k", used);

    bool done = false;
    matrix = detail::replace_once(matrix, site, Formula::atom(u), done);

    // (r U (u & r & X G !r)) & G (r -> A_pi = A_pi') -> G (r & X !r -> psi[pi'/pi])
    Formula marks = Formula::until(
        Formula::atom(r),
        Formula::and_(Formula::atom(u),
                      Formula::and_(Formula::atom(r),
                                    Formula::next(Formula::globally(Formula::not_(Formula::atom(r)))))));
    Formula agree = Formula::tt();
    bool first = true;
    for (const std::string& a : site.obs()) {
      Formula eq = Formula::iff(Formula::atom(a, site.var()), Formula::atom(a, pi2));
      agree = first ? eq : Formula::and_(std::move(agree), std::move(eq));
      first = false;
    }
    Formula prefix_match = Formula::globally(Formula::implies(Formula::atom(r), std::move(agree)));
    Formula at_switch = Formula::and_(Formula::atom(r), Formula::next(Formula::not_(Formula::atom(r))));
    Formula body = detail::rename_trace_var(site.child(0), site.var(), pi2);
    Formula requirement = Formula::implies(
        Formula::and_(std::move(marks), std::move(prefix_match)),
        Formula::globally(Formula::implies(std::move(at_switch), std::move(body))));

    matrix = Formula::and_(std::move(matrix), std::move(requirement));
    front.push_back({true, u, VarSort::Prop});
    back.push_back({false, r, VarSort::Prop});
    back.push_back({false, pi2, VarSort::Trace});
  }

  std::vector<PrefixEntry> full;
  full.insert(full.end(), front.begin(), front.end());
  full.insert(full.end(), prefix.begin(), prefix.end());
  full.insert(full.end(), back.begin(), back.end());
  return rebuild_prenex(full, matrix);
}

/// Resolves the X_<ap> label-class shorthand: `x in X_a` with X_a unbound
/// becomes P{a}(x).
inline Formula resolve_label_classes(const Formula& f, const std::set<std::string>& bound = {}) {
  switch (f.kind()) {
    case FKind::ElemOf:
      if (!bound.count(f.var()) && is_label_class_name(f.var()))
        return Formula::pred_at(f.var().substr(2), f.name());
      return f;
    case FKind::Exists:
    case FKind::Forall: {
      std::set<std::string> b2 = bound;
      b2.insert(f.name());
      return Formula::quant(f.kind(), f.name(), f.sort(), resolve_label_classes(f.child(0), b2));
    }
    default: {
      if (f.arity() == 0) return f;
      std::vector<Formula> cs;
      for (const Formula& c : f.children())
        cs.push_back(resolve_label_classes(c, bound));
      if (f.arity() == 1)
        return Formula::unary(f.kind(), std::move(cs[0]));
      return Formula::binary(f.kind(), std::move(cs[0]), std::move(cs[1]));
    }
  }
}

/// Counts polarity switches in a prenex prefix (propositional and trace
/// quantifiers alike).
inline int alternation_depth(const std::vector<PrefixEntry>& prefix) {
  int alts = 0;
  for (std::size_t i = 1; i < prefix.size(); ++i)
    if (prefix[i].is_exists != prefix[i - 1].is_exists)
      ++alts;
  return alts;
}

}  // namespace hypermc
