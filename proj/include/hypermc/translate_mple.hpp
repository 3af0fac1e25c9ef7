// translate_mple.hpp -- embedding of prenex HyperLTL into MPL[E], used as
// differential test apparatus: trace quantifiers become second-order path
// quantifiers, temporal structure becomes first-order constraints over path
// prefixes synchronized with the equal-level predicate.
#pragma once

#include <string>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"
#include "rewrite.hpp"

namespace hypermc {
namespace oracle {

namespace detail {

struct Translator {
  std::vector<std::string> trace_vars;  // prefix order
  std::vector<std::string> chain_vars;  // X_i second-order names per trace
  int fresh_counter = 0;

  std::string fresh(const std::string& base) {
    return base + std::to_string(++fresh_counter);
  }

  /// Conjunction helper.
  static Formula conj(std::vector<Formula> fs) {
    Formula r = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i)
      r = Formula::and_(std::move(r), std::move(fs[i]));
    return r;
  }

  /// pos2 is the immediate successor of pos1 within the chain `chain`.
  Formula successor_in_chain(const std::string& pos1, const std::string& pos2,
                             const std::string& chain) {
    std::string z = fresh("z");
    Formula strictly_between = Formula::exists(
        z, VarSort::FirstOrder,
        conj({Formula::mple_rel(FKind::ElemOf, z, chain),
              Formula::mple_rel(FKind::PrefixLe, pos1, z),
              Formula::mple_rel(FKind::PrefixLe, z, pos2),
              Formula::not_(Formula::mple_rel(FKind::VarEq, z, pos1)),
              Formula::not_(Formula::mple_rel(FKind::VarEq, z, pos2))}));
    return conj({Formula::mple_rel(FKind::ElemOf, pos2, chain),
                 Formula::mple_rel(FKind::PrefixLe, pos1, pos2),
                 Formula::not_(Formula::mple_rel(FKind::VarEq, pos1, pos2)),
                 Formula::not_(strictly_between)});
  }

  /// Existentially binds a fresh position tuple around `body`.
  static Formula bind_tuple(const std::vector<std::string>& ys, Formula body) {
    Formula r = std::move(body);
    for (auto it = ys.rbegin(); it != ys.rend(); ++it)
      r = Formula::exists(*it, VarSort::FirstOrder, std::move(r));
    return r;
  }

  /// Membership and equal-level synchronization of a position tuple.
  std::vector<Formula> sync_constraints(const std::vector<std::string>& ys) {
    std::vector<Formula> cs;
    for (std::size_t i = 0; i < ys.size(); ++i)
      cs.push_back(Formula::mple_rel(FKind::ElemOf, ys[i], chain_vars[i]));
    for (std::size_t i = 1; i < ys.size(); ++i)
      cs.push_back(Formula::mple_rel(FKind::EqLevel, ys[0], ys[i]));
    return cs;
  }

  std::vector<std::string> fresh_tuple(const std::string& base) {
    std::vector<std::string> ys;
    for (std::size_t i = 0; i < trace_vars.size(); ++i)
      ys.push_back(fresh(base));
    return ys;
  }

  int trace_index(const std::string& v) const {
    for (std::size_t i = 0; i < trace_vars.size(); ++i)
      if (trace_vars[i] == v) return static_cast<int>(i);
    return -1;
  }

  /// Translates the matrix at the position tuple `xs`.
  Formula tr(const Formula& f, const std::vector<std::string>& xs) {
    switch (f.kind()) {
      case FKind::True:
        return Formula::tt();
      case FKind::False:
        return Formula::ff();
      case FKind::Atom: {
        int i = trace_index(f.var());
        if (i < 0)
          throw ValidationError("translator: atom without a quantified trace variable");
        return Formula::pred_at(f.name(), xs[i]);
      }
      case FKind::Not:
        return Formula::not_(tr(f.child(0), xs));
      case FKind::And:
        return Formula::and_(tr(f.child(0), xs), tr(f.child(1), xs));
      case FKind::Or:
        return Formula::or_(tr(f.child(0), xs), tr(f.child(1), xs));
      case FKind::Implies:
        return Formula::implies(tr(f.child(0), xs), tr(f.child(1), xs));
      case FKind::Iff:
        return Formula::iff(tr(f.child(0), xs), tr(f.child(1), xs));
      case FKind::Next: {
        auto ys = fresh_tuple("x");
        std::vector<Formula> cs{successor_in_chain(xs[0], ys[0], chain_vars[0])};
        for (std::size_t i = 1; i < ys.size(); ++i)
          cs.push_back(Formula::mple_rel(FKind::ElemOf, ys[i], chain_vars[i]));
        for (std::size_t i = 1; i < ys.size(); ++i)
          cs.push_back(Formula::mple_rel(FKind::EqLevel, ys[0], ys[i]));
        cs.push_back(tr(f.child(0), ys));
        return bind_tuple(ys, conj(std::move(cs)));
      }
      case FKind::Eventually: {
        auto ys = fresh_tuple("y");
        std::vector<Formula> cs = sync_constraints(ys);
        cs.push_back(Formula::mple_rel(FKind::PrefixLe, xs[0], ys[0]));
        cs.push_back(tr(f.child(0), ys));
        return bind_tuple(ys, conj(std::move(cs)));
      }
      case FKind::Globally: {
        auto ys = fresh_tuple("y");
        std::vector<Formula> cs = sync_constraints(ys);
        cs.push_back(Formula::mple_rel(FKind::PrefixLe, xs[0], ys[0]));
        cs.push_back(Formula::not_(tr(f.child(0), ys)));
        return Formula::not_(bind_tuple(ys, conj(std::move(cs))));
      }
      case FKind::Until: {
        auto ys = fresh_tuple("y");
        auto zs = fresh_tuple("w");
        std::vector<Formula> inner = sync_constraints(zs);
        inner.push_back(Formula::mple_rel(FKind::PrefixLe, xs[0], zs[0]));
        inner.push_back(Formula::mple_rel(FKind::PrefixLe, zs[0], ys[0]));
        inner.push_back(Formula::not_(Formula::mple_rel(FKind::VarEq, zs[0], ys[0])));
        inner.push_back(Formula::not_(tr(f.child(0), zs)));
        Formula bad_between = bind_tuple(zs, conj(std::move(inner)));
        std::vector<Formula> cs = sync_constraints(ys);
        cs.push_back(Formula::mple_rel(FKind::PrefixLe, xs[0], ys[0]));
        cs.push_back(tr(f.child(1), ys));
        cs.push_back(Formula::not_(std::move(bad_between)));
        return bind_tuple(ys, conj(std::move(cs)));
      }
      default:
        throw ValidationError("translator: unsupported operator (expand W/R first)");
    }
  }
};

}  // namespace detail

/// Translates a prenex HyperLTL sentence whose matrix uses !, &, |, ->, <->,
/// X, U, F, G over indexed atoms into a closed MPL[E] sentence with the same
/// verdict on every Kripke structure: each trace quantifier becomes a
/// second-order quantifier over full paths, the shared evaluation position
/// becomes a tuple of prefix variables synchronized pairwise with E.
inline Formula hyperltl_to_mple(const Formula& f) {
  auto [prefix, matrix] = split_prenex(f);
  detail::Translator t;
  for (const auto& q : prefix) {
    if (q.sort != VarSort::Trace)
      throw ValidationError("translator: propositional quantification is not expressible");
    t.trace_vars.push_back(q.var);
    t.chain_vars.push_back("T" + std::to_string(t.trace_vars.size()));
  }
  // Initial synchronized tuple: the length-one prefix on every chain.
  auto xs = t.fresh_tuple("x");
  std::vector<Formula> cs;
  for (std::size_t i = 0; i < xs.size(); ++i)
    cs.push_back(Formula::mple_rel(FKind::ElemOf, xs[i], t.chain_vars[i]));
  for (const auto& x : xs) {
    std::string w = t.fresh("m");
    cs.push_back(Formula::not_(Formula::exists(
        w, VarSort::FirstOrder,
        Formula::and_(Formula::mple_rel(FKind::PrefixLe, w, x),
                      Formula::not_(Formula::mple_rel(FKind::VarEq, w, x))))));
  }
  cs.push_back(t.tr(matrix, xs));
  Formula body = t.bind_tuple(xs, detail::Translator::conj(std::move(cs)));
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
    std::size_t i = static_cast<std::size_t>(t.trace_index(it->var));
    body = Formula::quant(it->is_exists ? FKind::Exists : FKind::Forall, t.chain_vars[i],
                          VarSort::SecondOrder, std::move(body));
  }
  return body;
}

}  // namespace oracle
}  // namespace hypermc
