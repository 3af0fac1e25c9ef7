// validate.hpp -- per-logic sentence validation.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"

namespace hypermc {

namespace detail {

struct Scope {
  std::map<std::string, VarSort> vars;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

/// Checks variable usage for one node against the bindings in scope.
inline VarSort lookup(const Scope& sc, const std::string& v, const char* what) {
  auto it = sc.vars.find(v);
  require(it != sc.vars.end(), std::string("free ") + what + " variable '" + v + "'");
  return it->second;
}

inline void check_matrix_linear(const Formula& f, const Scope& sc, LogicId logic) {
  switch (f.kind()) {
    case FKind::True:
    case FKind::False:
      return;
    case FKind::Atom:
      if (f.var().empty()) {
        require(logic != LogicId::HyperLTL,
                "bare atom '" + f.name() + "' is not allowed in HyperLTL (index it with a trace variable)");
        if (logic == LogicId::LTL) return;
        // HyperQPTL: a bare atom must name a quantified proposition.
        require(lookup(sc, f.name(), "proposition") == VarSort::Prop,
                "'" + f.name() + "' is not a quantified proposition");
      } else {
        require(logic != LogicId::LTL, "LTL atoms cannot carry a trace index");
        require(lookup(sc, f.var(), "trace") == VarSort::Trace,
                "'" + f.var() + "' is not a trace variable");
      }
      return;
    case FKind::Knowledge: {
      require(logic == LogicId::HyperQPTL_K, "knowledge operator requires --logic hyperqptl-k");
      require(lookup(sc, f.var(), "trace") == VarSort::Trace,
              "'" + f.var() + "' is not a trace variable");
      check_matrix_linear(f.child(0), sc, logic);
      return;
    }
    case FKind::Exists:
    case FKind::Forall:
      throw ValidationError("quantifier inside the matrix: formula must be in prenex form");
    default:
      require(is_boolean_connective(f.kind()) || is_temporal(f.kind()),
              "operator not available in this logic");
      for (const Formula& c : f.children())
        check_matrix_linear(c, sc, logic);
      return;
  }
}

inline void check_ctls(const Formula& f, const Scope& sc, bool under_quantifier,
                       int x_ops_since_binder) {
  switch (f.kind()) {
    case FKind::True:
    case FKind::False:
      return;
    case FKind::Atom:
      require(!f.var().empty(), "HyperCTL* atoms must be indexed with a path variable");
      require(lookup(sc, f.var(), "path") == VarSort::Path,
              "'" + f.var() + "' is not a path variable");
      return;
    case FKind::Exists:
    case FKind::Forall: {
      Scope sc2 = sc;
      sc2.vars[f.name()] = VarSort::Path;
      check_ctls(f.child(0), sc2, true, 0);
      return;
    }
    case FKind::Next:
      require(under_quantifier, "temporal operator outside any path quantifier");
      check_ctls(f.child(0), sc, under_quantifier, x_ops_since_binder + 1);
      return;
    case FKind::Not:
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
    case FKind::Iff:
      for (const Formula& c : f.children())
        check_ctls(c, sc, under_quantifier, x_ops_since_binder);
      return;
    case FKind::Until:
    case FKind::WeakUntil:
    case FKind::Release:
    case FKind::Eventually:
    case FKind::Globally: {
      require(under_quantifier, "temporal operator outside any path quantifier");
      // Operands of U/W/R/F/G must be quantifier-free: only the X-guarded
      // fragment is supported.
      for (const Formula& c : f.children()) {
        std::vector<const Formula*> todo{&c};
        while (!todo.empty()) {
          const Formula* g = todo.back();
          todo.pop_back();
          require(!is_quantifier(*g),
                  "path quantifier nested inside a U/W/R/F/G operand is outside the supported fragment");
          for (const Formula& gc : g->children())
            todo.push_back(&gc);
        }
        check_ctls(c, sc, under_quantifier, x_ops_since_binder);
      }
      return;
    }
    default:
      throw ValidationError("operator not available in HyperCTL*");
  }
}

inline void check_mple(const Formula& f, const Scope& sc) {
  switch (f.kind()) {
    case FKind::True:
    case FKind::False:
      return;
    case FKind::PredAt:
      require(lookup(sc, f.var(), "first-order") == VarSort::FirstOrder,
              "'" + f.var() + "' is not a first-order variable");
      return;
    case FKind::PrefixLe:
    case FKind::VarEq:
    case FKind::EqLevel:
      require(lookup(sc, f.name(), "first-order") == VarSort::FirstOrder,
              "'" + f.name() + "' is not a first-order variable");
      require(lookup(sc, f.var(), "first-order") == VarSort::FirstOrder,
              "'" + f.var() + "' is not a first-order variable");
      return;
    case FKind::ElemOf: {
      require(lookup(sc, f.name(), "first-order") == VarSort::FirstOrder,
              "'" + f.name() + "' is not a first-order variable");
      auto it = sc.vars.find(f.var());
      if (it == sc.vars.end()) {
        require(is_label_class_name(f.var()),
                "free second-order variable '" + f.var() + "'");
      } else {
        require(it->second == VarSort::SecondOrder,
                "'" + f.var() + "' is not a second-order variable");
      }
      return;
    }
    case FKind::Exists:
    case FKind::Forall: {
      require(f.sort() == VarSort::FirstOrder || f.sort() == VarSort::SecondOrder,
              "MPL[E] quantifiers bind first- or second-order variables");
      Scope sc2 = sc;
      sc2.vars[f.name()] = f.sort();
      check_mple(f.child(0), sc2);
      return;
    }
    case FKind::Not:
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
    case FKind::Iff:
      for (const Formula& c : f.children())
        check_mple(c, sc);
      return;
    default:
      throw ValidationError("temporal operators are not part of MPL[E]");
  }
}

}  // namespace detail

/// Checks that `f` is a closed, well-sorted sentence of `logic`.
/// Linear logics must be prenex; HyperCTL* is restricted to the X-guarded
/// quantifier fragment.
inline void validate(const Formula& f, LogicId logic) {
  using namespace detail;
  switch (logic) {
    case LogicId::HyperQPTLPlus:
    case LogicId::S1SE:
    case LogicId::HyperQCTLStar:
      throw UndecidableLogicError(std::string("logic '") + logic_name(logic) +
                                  "' has an undecidable model checking problem and is not supported");
    case LogicId::LTL:
      check_matrix_linear(f, Scope{}, logic);
      return;
    case LogicId::HyperLTL:
    case LogicId::HyperQPTL:
    case LogicId::HyperQPTL_K: {
      auto [prefix, matrix] = split_prenex(f);
      Scope sc;
      for (const auto& q : prefix) {
        require(q.sort == VarSort::Trace || q.sort == VarSort::Prop,
                "linear logics quantify over traces and propositions");
        require(logic != LogicId::HyperLTL || q.sort == VarSort::Trace,
                "propositional quantification requires --logic hyperqptl");
        require(!sc.vars.count(q.var), "variable '" + q.var + "' bound twice");
        sc.vars[q.var] = q.sort;
      }
      check_matrix_linear(matrix, sc, logic);
      return;
    }
    case LogicId::HyperCTLStar:
      check_ctls(f, Scope{}, false, 0);
      return;
    case LogicId::MPLE:
      check_mple(f, Scope{});
      return;
  }
}

}  // namespace hypermc
