// tableau.hpp -- closure tableau translation of a quantifier-free LTL matrix
// over indexed atoms into a generalized Buchi automaton on tuple letters.
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "automaton.hpp"
#include "errors.hpp"
#include "formula.hpp"
#include "rewrite.hpp"

namespace hypermc {

namespace detail {

/// Compiled core formula over coordinate indices. Coordinates are the
/// independent members of a tableau state: atoms, X-subformulas and
/// U-subformulas; Boolean structure is evaluated on demand.
struct CoreExpr {
  enum class Op { Const, Coord, Not, And, Or };
  Op op = Op::Const;
  bool value = false;   // Const
  int coord = -1;       // Coord
  int lhs = -1, rhs = -1;
};

struct CoreProgram {
  std::vector<CoreExpr> exprs;  // expression pool, children precede parents

  bool eval(int e, uint32_t assignment) const {
    const CoreExpr& x = exprs[e];
    switch (x.op) {
      case CoreExpr::Op::Const: return x.value;
      case CoreExpr::Op::Coord: return (assignment >> x.coord) & 1;
      case CoreExpr::Op::Not: return !eval(x.lhs, assignment);
      case CoreExpr::Op::And: return eval(x.lhs, assignment) && eval(x.rhs, assignment);
      case CoreExpr::Op::Or: return eval(x.lhs, assignment) || eval(x.rhs, assignment);
    }
    return false;
  }
};

struct TableauCoords {
  // Atom coordinates: (component index, bit in the component's label set).
  std::vector<std::pair<int, int>> atoms;
  // X coordinates: expression of the operand.
  std::vector<int> next_operand;
  // U coordinates: expressions of both operands.
  std::vector<std::pair<int, int>> until_operands;
};

class TableauBuilder {
 public:
  TableauBuilder(const Formula& matrix, const Alphabet& alphabet) : alphabet_(alphabet) {
    root_ = compile(to_core(matrix));
    n_coords_ = static_cast<int>(atom_order_.size() + next_order_.size() + until_order_.size());
    if (n_coords_ > 22)
      throw ResourceGuardError("tableau closure too large");
  }

  BuchiAutomaton build() {
    BuchiAutomaton a;
    a.alphabet = alphabet_;
    const uint32_t n_assign = 1u << n_coords_;

    // Group letters by the truth signature of the atom coordinates.
    LetterCodec codec(alphabet_);
    const uint64_t letters = letter_count(alphabet_);
    std::map<uint32_t, std::vector<uint64_t>> by_sig;
    for (uint64_t l = 0; l < letters; ++l) {
      uint32_t sig = 0;
      for (std::size_t i = 0; i < coords_.atoms.size(); ++i) {
        auto [comp, bit] = coords_.atoms[i];
        uint32_t v = codec.get(l, comp);
        bool truth = false;
        const Component& c = alphabet_[comp];
        if (!c.padded() || v != c.bottom())
          truth = (v >> bit) & 1;
        if (truth) sig |= 1u << i;
      }
      by_sig[sig].push_back(l);
    }
    auto atom_sig = [&](uint32_t m) { return m & ((1u << coords_.atoms.size()) - 1); };

    std::map<uint32_t, uint32_t> ids;
    std::vector<uint32_t> rev;
    std::deque<uint32_t> work;
    auto intern = [&](uint32_t m) {
      auto [it, fresh] = ids.try_emplace(m, static_cast<uint32_t>(rev.size()));
      if (fresh) {
        rev.push_back(m);
        work.push_back(m);
      }
      return it->second;
    };
    for (uint32_t m = 0; m < n_assign; ++m)
      if (prog_.eval(root_, m)) {
        a.initial.push_back(intern(m));
      }

    while (!work.empty()) {
      uint32_t m = work.front();
      work.pop_front();
      uint32_t src = ids.at(m);
      auto group = by_sig.find(atom_sig(m));
      if (group == by_sig.end())
        continue;

      // Forced and free coordinates of the successor.
      uint32_t forced_mask = 0, forced_val = 0;
      bool dead = false;
      const int atoms = static_cast<int>(coords_.atoms.size());
      const int nexts = static_cast<int>(coords_.next_operand.size());
      for (int u = 0; u < static_cast<int>(coords_.until_operands.size()) && !dead; ++u) {
        const int coord = atoms + nexts + u;
        const bool b = (m >> coord) & 1;
        const bool now_psi = prog_.eval(coords_.until_operands[u].second, m);
        const bool now_phi = prog_.eval(coords_.until_operands[u].first, m);
        if (b) {
          if (now_psi) continue;         // discharged; successor bit free
          if (!now_phi) { dead = true; break; }
          forced_mask |= 1u << coord;    // obligation continues
          forced_val |= 1u << coord;
        } else {
          if (now_psi) { dead = true; break; }
          if (now_phi) forced_mask |= 1u << coord;  // forced to stay false
        }
      }
      if (dead) continue;

      std::vector<int> free_coords;
      for (int c = 0; c < n_coords_; ++c)
        if (!(forced_mask & (1u << c))) free_coords.push_back(c);

      const uint32_t combos = 1u << free_coords.size();
      for (uint32_t x = 0; x < combos; ++x) {
        uint32_t m2 = forced_val;
        for (std::size_t i = 0; i < free_coords.size(); ++i)
          if ((x >> i) & 1) m2 |= 1u << free_coords[i];
        // X-coordinate consistency: the bit in m must match the operand in m2.
        bool ok = true;
        for (int xi = 0; xi < nexts && ok; ++xi) {
          const bool bit = (m >> (atoms + xi)) & 1;
          ok = bit == prog_.eval(coords_.next_operand[xi], m2);
        }
        if (!ok) continue;
        uint32_t dst = intern(m2);
        a.trans.resize(rev.size());
        for (uint64_t l : group->second)
          a.trans[src].push_back({l, dst});
      }
      a.trans.resize(std::max(a.trans.size(), rev.size()));
    }

    a.num_states = static_cast<uint32_t>(rev.size());
    a.trans.resize(a.num_states);
    const int atoms = static_cast<int>(coords_.atoms.size());
    const int nexts = static_cast<int>(coords_.next_operand.size());
    for (int u = 0; u < static_cast<int>(coords_.until_operands.size()); ++u) {
      const int coord = atoms + nexts + u;
      std::vector<uint32_t> set;
      for (uint32_t i = 0; i < a.num_states; ++i) {
        uint32_t m = rev[i];
        if (!((m >> coord) & 1) || prog_.eval(coords_.until_operands[u].second, m))
          set.push_back(i);
      }
      a.acc_sets.push_back(std::move(set));
    }
    a.generalized = true;
    a.sort_transitions();
    std::sort(a.initial.begin(), a.initial.end());
    a.initial.erase(std::unique(a.initial.begin(), a.initial.end()), a.initial.end());
    return a;
  }

 private:
  int add_expr(CoreExpr e) {
    prog_.exprs.push_back(e);
    return static_cast<int>(prog_.exprs.size() - 1);
  }

  /// Compiles a core formula to an expression over coordinates. Coordinates
  /// are discovered in two passes so that atoms, X-nodes and U-nodes get
  /// contiguous index ranges.
  int compile(const Formula& core) {
    collect(core);
    // Assign final coordinate numbers: atoms, then X, then U.
    coord_index_.clear();
    int next_id = 0;
    for (const auto& key : atom_order_) coord_index_[key] = next_id++;
    for (const auto& key : next_order_) coord_index_[key] = next_id++;
    for (const auto& key : until_order_) coord_index_[key] = next_id++;
    // Build coordinate payloads.
    for (const auto& key : next_order_)
      coords_.next_operand.push_back(emit(next_nodes_.at(key).child(0)));
    for (const auto& key : until_order_)
      coords_.until_operands.push_back({emit(until_nodes_.at(key).child(0)),
                                        emit(until_nodes_.at(key).child(1))});
    return emit(core);
  }

  void collect(const Formula& f) {
    switch (f.kind()) {
      case FKind::True:
      case FKind::False:
        return;
      case FKind::Atom: {
        std::string key = to_string(f);
        if (!atom_nodes_.count(key)) {
          atom_nodes_.emplace(key, f);
          atom_order_.push_back(key);
          int comp = component_index(alphabet_, f.var().empty() ? f.name() : f.var());
          if (comp < 0)
            throw ValidationError("unhoused atom '" + key + "': no alphabet component for it");
          const Component& c = alphabet_[comp];
          int bit = -1;
          for (std::size_t i = 0; i < c.aps.size(); ++i)
            if (c.aps[i] == f.name()) bit = static_cast<int>(i);
          if (bit < 0)
            throw ValidationError("unhoused atom '" + key + "': proposition not in the component domain");
          coords_.atoms.push_back({comp, bit});
        }
        return;
      }
      case FKind::Not:
      case FKind::And:
      case FKind::Or:
        for (const Formula& c : f.children()) collect(c);
        return;
      case FKind::Next: {
        std::string key = to_string(f);
        if (!next_nodes_.count(key)) {
          next_nodes_.emplace(key, f);
          next_order_.push_back(key);
        }
        collect(f.child(0));
        return;
      }
      case FKind::Until: {
        std::string key = to_string(f);
        if (!until_nodes_.count(key)) {
          until_nodes_.emplace(key, f);
          until_order_.push_back(key);
        }
        collect(f.child(0));
        collect(f.child(1));
        return;
      }
      default:
        throw ValidationError("tableau input must be a quantifier-free LTL matrix");
    }
  }

  int emit(const Formula& f) {
    switch (f.kind()) {
      case FKind::True:
        return add_expr({CoreExpr::Op::Const, true, -1, -1, -1});
      case FKind::False:
        return add_expr({CoreExpr::Op::Const, false, -1, -1, -1});
      case FKind::Atom:
      case FKind::Next:
      case FKind::Until: {
        CoreExpr e;
        e.op = CoreExpr::Op::Coord;
        e.coord = coord_index_.at(to_string(f));
        return add_expr(e);
      }
      case FKind::Not: {
        CoreExpr e;
        e.op = CoreExpr::Op::Not;
        e.lhs = emit(f.child(0));
        return add_expr(e);
      }
      case FKind::And:
      case FKind::Or: {
        CoreExpr e;
        e.op = f.kind() == FKind::And ? CoreExpr::Op::And : CoreExpr::Op::Or;
        e.lhs = emit(f.child(0));
        e.rhs = emit(f.child(1));
        return add_expr(e);
      }
      default:
        throw ValidationError("tableau input must be a quantifier-free LTL matrix");
    }
  }

  const Alphabet& alphabet_;
  CoreProgram prog_;
  TableauCoords coords_;
  std::map<std::string, int> coord_index_;
  std::map<std::string, Formula> atom_nodes_, next_nodes_, until_nodes_;
  std::vector<std::string> atom_order_, next_order_, until_order_;
  int root_ = -1;
  int n_coords_ = 0;
};

}  // namespace detail

/// Translates a quantifier-free matrix into a GNBA over the tuple alphabet:
/// a word is accepted exactly when it satisfies the matrix, where an atom
/// a[v] reads proposition a in the component named v (bare atoms read the
/// component carrying their own name). States are consistent closure
/// assignments; one acceptance set per U-subformula.
inline BuchiAutomaton matrix_to_nba(const Formula& matrix, const Alphabet& alphabet) {
  detail::TableauBuilder b(matrix, alphabet);
  return b.build();
}

}  // namespace hypermc
