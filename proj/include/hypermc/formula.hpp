// formula.hpp -- shared AST for all supported logics, plus the canonical printer.
#pragma once

#include <algorithm>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypermc {

enum class LogicId {
  LTL,
  HyperLTL,
  HyperQPTL,
  HyperQPTL_K,
  HyperCTLStar,
  MPLE,
  // Recognized only so the front-end can reject them with a diagnostic.
  HyperQPTLPlus,
  S1SE,
  HyperQCTLStar,
};

inline const char* logic_name(LogicId l) {
  switch (l) {
    case LogicId::LTL: return "ltl";
    case LogicId::HyperLTL: return "hyperltl";
    case LogicId::HyperQPTL: return "hyperqptl";
    case LogicId::HyperQPTL_K: return "hyperqptl-k";
    case LogicId::HyperCTLStar: return "hyperctls";
    case LogicId::MPLE: return "mple";
    case LogicId::HyperQPTLPlus: return "hyperqptl+";
    case LogicId::S1SE: return "s1se";
    case LogicId::HyperQCTLStar: return "hyperqctls";
  }
  return "?";
}

enum class VarSort { Trace, Path, Prop, FirstOrder, SecondOrder };

inline const char* sort_name(VarSort s) {
  switch (s) {
    case VarSort::Trace: return "trace";
    case VarSort::Path: return "path";
    case VarSort::Prop: return "prop";
    case VarSort::FirstOrder: return "first-order";
    case VarSort::SecondOrder: return "second-order";
  }
  return "?";
}

enum class FKind {
  True,
  False,
  Atom,       // ap, optionally indexed by a trace/path variable (var empty = bare)
  Not,
  And,
  Or,
  Implies,
  Iff,
  Next,
  Until,
  WeakUntil,
  Release,
  Eventually,
  Globally,
  Exists,     // binder var + sort
  Forall,
  Knowledge,  // obs set + trace variable
  // MPL[E] atoms.
  PredAt,     // P{a}(x)
  PrefixLe,   // x < y   (prefix-or-equal)
  VarEq,      // x = y
  ElemOf,     // x in X
  EqLevel,    // E(x,y)
};

class Formula;

struct FormulaNode {
  FKind kind = FKind::True;
  std::vector<Formula> children;
  std::string name;               // ap name, binder variable, or first operand variable
  std::string var;                // index variable of an atom / second operand variable
  VarSort sort = VarSort::Trace;  // binder sort
  std::vector<std::string> obs;   // knowledge observation set (sorted)
};

/// Immutable formula handle with structural value semantics.
class Formula {
 public:
  Formula() : node_(nullptr) {}

  FKind kind() const { return node_->kind; }
  const std::vector<Formula>& children() const { return node_->children; }
  const Formula& child(std::size_t i) const { return node_->children[i]; }
  std::size_t arity() const { return node_->children.size(); }
  const std::string& name() const { return node_->name; }
  const std::string& var() const { return node_->var; }
  VarSort sort() const { return node_->sort; }
  const std::vector<std::string>& obs() const { return node_->obs; }
  bool valid() const { return node_ != nullptr; }
  /// Stable identity of the underlying node; used for memoization keys.
  const void* id() const { return node_.get(); }

  // -- factories ------------------------------------------------------------
  static Formula tt() { return make({FKind::True}); }
  static Formula ff() { return make({FKind::False}); }
  /// Bare atom (plain LTL proposition or quantified proposition).
  static Formula atom(std::string ap) {
    FormulaNode n{FKind::Atom};
    n.name = std::move(ap);
    return make(std::move(n));
  }
  /// Trace/path-indexed atom a[v].
  static Formula atom(std::string ap, std::string v) {
    FormulaNode n{FKind::Atom};
    n.name = std::move(ap);
    n.var = std::move(v);
    return make(std::move(n));
  }
  static Formula unary(FKind k, Formula f) {
    FormulaNode n{k};
    n.children = {std::move(f)};
    return make(std::move(n));
  }
  static Formula binary(FKind k, Formula l, Formula r) {
    FormulaNode n{k};
    n.children = {std::move(l), std::move(r)};
    return make(std::move(n));
  }
  static Formula not_(Formula f) { return unary(FKind::Not, std::move(f)); }
  static Formula and_(Formula l, Formula r) { return binary(FKind::And, std::move(l), std::move(r)); }
  static Formula or_(Formula l, Formula r) { return binary(FKind::Or, std::move(l), std::move(r)); }
  static Formula implies(Formula l, Formula r) { return binary(FKind::Implies, std::move(l), std::move(r)); }
  static Formula iff(Formula l, Formula r) { return binary(FKind::Iff, std::move(l), std::move(r)); }
  static Formula next(Formula f) { return unary(FKind::Next, std::move(f)); }
  static Formula until(Formula l, Formula r) { return binary(FKind::Until, std::move(l), std::move(r)); }
  static Formula weak_until(Formula l, Formula r) { return binary(FKind::WeakUntil, std::move(l), std::move(r)); }
  static Formula release(Formula l, Formula r) { return binary(FKind::Release, std::move(l), std::move(r)); }
  static Formula eventually(Formula f) { return unary(FKind::Eventually, std::move(f)); }
  static Formula globally(Formula f) { return unary(FKind::Globally, std::move(f)); }
  static Formula quant(FKind k, std::string v, VarSort s, Formula body) {
    FormulaNode n{k};
    n.children = {std::move(body)};
    n.name = std::move(v);
    n.sort = s;
    return make(std::move(n));
  }
  static Formula exists(std::string v, VarSort s, Formula body) {
    return quant(FKind::Exists, std::move(v), s, std::move(body));
  }
  static Formula forall(std::string v, VarSort s, Formula body) {
    return quant(FKind::Forall, std::move(v), s, std::move(body));
  }
  static Formula knowledge(std::vector<std::string> obs, std::string trace_var, Formula body) {
    FormulaNode n{FKind::Knowledge};
    std::sort(obs.begin(), obs.end());
    obs.erase(std::unique(obs.begin(), obs.end()), obs.end());
    n.obs = std::move(obs);
    n.var = std::move(trace_var);
    n.children = {std::move(body)};
    return make(std::move(n));
  }
  static Formula pred_at(std::string ap, std::string x) {
    FormulaNode n{FKind::PredAt};
    n.name = std::move(ap);
    n.var = std::move(x);
    return make(std::move(n));
  }
  static Formula mple_rel(FKind k, std::string x, std::string y) {
    FormulaNode n{k};
    n.name = std::move(x);
    n.var = std::move(y);
    return make(std::move(n));
  }

  bool operator==(const Formula& o) const {
    if (node_ == o.node_) return true;
    if (!node_ || !o.node_) return false;
    const FormulaNode &a = *node_, &b = *o.node_;
    if (a.kind != b.kind || a.name != b.name || a.var != b.var || a.obs != b.obs)
      return false;
    if ((a.kind == FKind::Exists || a.kind == FKind::Forall) && a.sort != b.sort)
      return false;
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
      if (!(a.children[i] == b.children[i])) return false;
    return true;
  }
  bool operator!=(const Formula& o) const { return !(*this == o); }

 private:
  static Formula make(FormulaNode n) {
    Formula f;
    f.node_ = std::make_shared<const FormulaNode>(std::move(n));
    return f;
  }
  std::shared_ptr<const FormulaNode> node_;
};

inline bool is_quantifier(const Formula& f) {
  return f.kind() == FKind::Exists || f.kind() == FKind::Forall;
}

inline bool is_mple_atom(FKind k) {
  return k == FKind::PredAt || k == FKind::PrefixLe || k == FKind::VarEq ||
         k == FKind::ElemOf || k == FKind::EqLevel;
}

inline bool is_temporal(FKind k) {
  return k == FKind::Next || k == FKind::Until || k == FKind::WeakUntil ||
         k == FKind::Release || k == FKind::Eventually || k == FKind::Globally;
}

inline bool is_boolean_connective(FKind k) {
  return k == FKind::Not || k == FKind::And || k == FKind::Or ||
         k == FKind::Implies || k == FKind::Iff;
}

/// Unbound second-order names X_<ap> act as label classes: `x in X_a`
/// abbreviates P{a}(x).
inline bool is_label_class_name(const std::string& name) {
  return name.size() > 2 && name.rfind("X_", 0) == 0;
}

// -- canonical printer --------------------------------------------------------
// Binary operators always print with explicit parentheses; everything is
// separated by single spaces, so parse(print(f)) reproduces f exactly.

namespace detail {

inline const char* binop_token(FKind k) {
  switch (k) {
    case FKind::And: return "&";
    case FKind::Or: return "|";
    case FKind::Implies: return "->";
    case FKind::Iff: return "<->";
    case FKind::Until: return "U";
    case FKind::WeakUntil: return "W";
    case FKind::Release: return "R";
    default: return nullptr;
  }
}

inline void print_rec(std::ostream& os, const Formula& f) {
  switch (f.kind()) {
    case FKind::True: os << "true"; return;
    case FKind::False: os << "false"; return;
    case FKind::Atom:
      os << f.name();
      if (!f.var().empty()) os << "[" << f.var() << "]";
      return;
    case FKind::Not:
      os << "! ";
      print_rec(os, f.child(0));
      return;
    case FKind::Next:
    case FKind::Eventually:
    case FKind::Globally:
      os << (f.kind() == FKind::Next ? "X " : f.kind() == FKind::Eventually ? "F " : "G ");
      print_rec(os, f.child(0));
      return;
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
    case FKind::Iff:
    case FKind::Until:
    case FKind::WeakUntil:
    case FKind::Release:
      os << "(";
      print_rec(os, f.child(0));
      os << " " << binop_token(f.kind()) << " ";
      print_rec(os, f.child(1));
      os << ")";
      return;
    case FKind::Exists:
    case FKind::Forall: {
      const bool ex = f.kind() == FKind::Exists;
      switch (f.sort()) {
        case VarSort::Trace:
        case VarSort::Path: os << (ex ? "exists " : "forall "); break;
        case VarSort::Prop: os << (ex ? "Eprop " : "Aprop "); break;
        case VarSort::FirstOrder: os << (ex ? "exists1 " : "forall1 "); break;
        case VarSort::SecondOrder: os << (ex ? "exists2 " : "forall2 "); break;
      }
      os << f.name() << ". ";
      print_rec(os, f.child(0));
      return;
    }
    case FKind::Knowledge: {
      os << "K{";
      for (std::size_t i = 0; i < f.obs().size(); ++i)
        os << (i ? "," : "") << f.obs()[i];
      os << "}[" << f.var() << "] ";
      print_rec(os, f.child(0));
      return;
    }
    case FKind::PredAt:
      os << "P{" << f.name() << "}(" << f.var() << ")";
      return;
    case FKind::PrefixLe:
      os << "(" << f.name() << " < " << f.var() << ")";
      return;
    case FKind::VarEq:
      os << "(" << f.name() << " = " << f.var() << ")";
      return;
    case FKind::ElemOf:
      os << "(" << f.name() << " in " << f.var() << ")";
      return;
    case FKind::EqLevel:
      os << "E(" << f.name() << "," << f.var() << ")";
      return;
  }
}

}  // namespace detail

inline std::string to_string(const Formula& f) {
  std::ostringstream os;
  detail::print_rec(os, f);
  return os.str();
}

/// Splits a prenex sentence into its quantifier prefix (outermost first)
/// and quantifier-free matrix.
struct PrefixEntry {
  bool is_exists;
  std::string var;
  VarSort sort;
};

inline std::pair<std::vector<PrefixEntry>, Formula> split_prenex(const Formula& f) {
  std::vector<PrefixEntry> prefix;
  Formula cur = f;
  while (is_quantifier(cur)) {
    prefix.push_back({cur.kind() == FKind::Exists, cur.name(), cur.sort()});
    cur = cur.child(0);
  }
  return {std::move(prefix), std::move(cur)};
}

inline Formula rebuild_prenex(const std::vector<PrefixEntry>& prefix, Formula matrix) {
  Formula f = std::move(matrix);
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    f = Formula::quant(it->is_exists ? FKind::Exists : FKind::Forall, it->var, it->sort, std::move(f));
  return f;
}

}  // namespace hypermc
