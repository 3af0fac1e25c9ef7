// engine_linear.hpp -- HyperLTL / HyperQPTL model checking: negate and
// dualize, translate the matrix, then eliminate quantifiers innermost-first
// by Kripke product and projection; decide by emptiness.
#pragma once

#include <algorithm>
#include <chrono>
#include <set>
#include <string>
#include <vector>

#include "automaton_ops.hpp"
#include "emptiness.hpp"
#include "errors.hpp"
#include "formula.hpp"
#include "kripke.hpp"
#include "rewrite.hpp"
#include "tableau.hpp"
#include "validate.hpp"
#include "verdict.hpp"

namespace hypermc {

/// Atomic propositions read through trace variable `v` in the matrix.
inline std::set<std::string> collect_atom_aps(const Formula& f, const std::string& v) {
  std::set<std::string> out;
  if (f.kind() == FKind::Atom && f.var() == v)
    out.insert(f.name());
  for (const Formula& c : f.children())
    for (const auto& a : collect_atom_aps(c, v))
      out.insert(a);
  return out;
}

namespace detail {

inline Lasso<uint64_t> unit_lasso() { return Lasso<uint64_t>({}, {0}); }

/// Extracts the per-component label lassos from a witness over the tuple
/// alphabet, remapping every component into the shared universe.
inline std::map<std::string, Lasso<uint32_t>> split_witness(
    const Lasso<uint64_t>& w, const Alphabet& alphabet,
    const std::vector<std::string>& universe) {
  LetterCodec codec(alphabet);
  std::map<std::string, Lasso<uint32_t>> out;
  for (std::size_t ci = 0; ci < alphabet.size(); ++ci) {
    const Component& c = alphabet[ci];
    auto remap = [&](uint32_t v) {
      uint32_t bits = 0;
      for (std::size_t i = 0; i < c.aps.size(); ++i) {
        if (!((v >> i) & 1)) continue;
        auto it = std::find(universe.begin(), universe.end(), c.aps[i]);
        if (it != universe.end())
          bits |= 1u << (it - universe.begin());
      }
      return bits;
    };
    Lasso<uint32_t> l;
    for (uint64_t letter : w.stem) l.stem.push_back(remap(codec.get(letter, ci)));
    for (uint64_t letter : w.loop) l.loop.push_back(remap(codec.get(letter, ci)));
    out.emplace(c.name, canonical(l));
  }
  return out;
}

struct LinearPipeline {
  const KripkeStructure& k;
  const CheckOptions& opts;
  Verdict verdict;

  void record(const std::string& what, const BuchiAutomaton& a) {
    verdict.stats.steps.push_back({what, a.num_states});
    if (opts.dump)
      opts.dump(what, a);
  }

  /// Runs the elimination loop on the dualized prefix and matrix.
  void run(const std::vector<PrefixEntry>& dual_prefix, const Formula& dual_matrix) {
    // Alphabet components in prefix order, outermost first.
    Alphabet alphabet;
    for (const auto& q : dual_prefix) {
      if (q.sort == VarSort::Trace)
        alphabet.push_back(Component::label_set(q.var, k.aps));
      else
        alphabet.push_back(Component::label_set(q.var, {q.var}));
    }
    verdict.universe = k.aps;
    for (const auto& q : dual_prefix)
      if (q.sort == VarSort::Prop)
        verdict.universe.push_back(q.var);

    const bool purely_exists =
        std::all_of(dual_prefix.begin(), dual_prefix.end(),
                    [](const PrefixEntry& q) { return q.is_exists; });

    if (purely_exists) {
      // No projection needed for the verdict, and keeping the components
      // lets the emptiness witness decompose into one lasso per variable.
      BuchiAutomaton a = matrix_to_nba(to_nnf(dual_matrix), alphabet);
      record("matrix", a);
      for (auto it = dual_prefix.rbegin(); it != dual_prefix.rend(); ++it) {
        if (it->sort == VarSort::Trace) {
          a = trim(restrict_to_kripke(a, it->var, k, RestrictMode::trace()));
          record("exists " + it->var, a);
        } else {
          record("exists " + it->var, a);
        }
      }
      auto w = is_empty(a);
      verdict.holds = !w.has_value();
      if (w)
        verdict.counterexample = split_witness(*w, alphabet, verdict.universe);
      return;
    }

    // Same-polarity blocks, innermost first.
    struct Block {
      bool is_exists;
      std::vector<PrefixEntry> vars;  // innermost first within the block
    };
    std::vector<Block> blocks;
    for (auto it = dual_prefix.rbegin(); it != dual_prefix.rend(); ++it) {
      if (blocks.empty() || blocks.back().is_exists != it->is_exists)
        blocks.push_back({it->is_exists, {}});
      blocks.back().vars.push_back(*it);
    }

    BuchiAutomaton a;
    bool result_complemented = false;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
      const Block& b = blocks[bi];
      const bool last = bi + 1 == blocks.size();
      if (b.is_exists) {
        if (bi == 0) {
          a = matrix_to_nba(to_nnf(dual_matrix), alphabet);
          record("matrix", a);
        }
        for (const auto& q : b.vars) {
          if (q.sort == VarSort::Trace)
            a = restrict_to_kripke(a, q.var, k, RestrictMode::trace());
          a = trim(project_exists(a, q.var));
          record("exists " + q.var, a);
        }
      } else {
        // forall block: complement, restrict + existentially project, then
        // complement again. The first complement is free on the first block
        // (the tableau of the un-negated matrix is the complement of the
        // tableau of the negated one); the final complement is dropped on
        // the last block and the verdict test flips instead.
        if (bi == 0) {
          a = matrix_to_nba(to_nnf(Formula::not_(dual_matrix)), alphabet);
          record("matrix", a);
        } else {
          a = trim(complement(a));
        }
        for (const auto& q : b.vars) {
          if (q.sort == VarSort::Trace)
            a = restrict_to_kripke(a, q.var, k, RestrictMode::trace());
          a = trim(project_exists(a, q.var));
          record("forall " + q.var, a);
        }
        if (last)
          result_complemented = true;
        else
          a = trim(complement(a));
      }
    }

    if (result_complemented) {
      // L(complement(a)) over the unit alphabet is empty iff `a` accepts the
      // single unit word.
      verdict.holds = accepts_lasso(a, unit_lasso());
    } else {
      verdict.holds = !is_empty(a).has_value();
    }
  }
};

inline Verdict check_linear(const KripkeStructure& k, const Formula& f, LogicId logic,
                            const CheckOptions& opts) {
  validate(f, logic);
  const auto t0 = std::chrono::steady_clock::now();

  Formula dual = dualize_negation(f);
  auto [dual_prefix, dual_matrix] = split_prenex(dual);
  if (alternation_depth(dual_prefix) > opts.max_alternations)
    throw ResourceGuardError("quantifier alternation depth exceeds --max-alternations");
  for (const auto& q : dual_prefix)
    if (q.sort == VarSort::Trace)
      for (const auto& ap : collect_atom_aps(dual_matrix, q.var))
        if (k.ap_index(ap) < 0)
          throw ValidationError("atomic proposition '" + ap + "' is not part of the structure");

  detail::LinearPipeline pipe{k, opts};
  pipe.run(dual_prefix, dual_matrix);
  pipe.verdict.stats.time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                   std::chrono::steady_clock::now() - t0)
                                   .count();
  return pipe.verdict;
}

}  // namespace detail

/// Model checks a prenex HyperLTL sentence against `k`.
inline Verdict check_hyperltl(const KripkeStructure& k, const Formula& f,
                              const CheckOptions& opts = {}) {
  return detail::check_linear(k, f, LogicId::HyperLTL, opts);
}

/// Model checks a prenex HyperQPTL sentence (knowledge-free) against `k`.
/// Quantified propositions are eliminated by projection alone, without the
/// Kripke restriction.
inline Verdict check_hyperqptl(const KripkeStructure& k, const Formula& f,
                               const CheckOptions& opts = {}) {
  return detail::check_linear(k, f, LogicId::HyperQPTL, opts);
}

/// Plain LTL as the one-trace-variable HyperLTL sentence.
inline Formula ltl_as_hyperltl(const Formula& f) {
  struct Rec {
    static Formula index_atoms(const Formula& g, const std::string& v) {
      if (g.kind() == FKind::Atom)
        return Formula::atom(g.name(), v);
      if (g.arity() == 0) return g;
      std::vector<Formula> cs;
      for (const Formula& c : g.children()) cs.push_back(index_atoms(c, v));
      if (g.arity() == 1) return Formula::unary(g.kind(), std::move(cs[0]));
      return Formula::binary(g.kind(), std::move(cs[0]), std::move(cs[1]));
    }
  };
  return Formula::forall("_pi", VarSort::Trace, Rec::index_atoms(f, "_pi"));
}

inline Verdict check_ltl(const KripkeStructure& k, const Formula& f,
                         const CheckOptions& opts = {}) {
  validate(f, LogicId::LTL);
  return check_hyperltl(k, ltl_as_hyperltl(f), opts);
}

}  // namespace hypermc
