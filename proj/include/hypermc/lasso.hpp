// lasso.hpp -- ultimately periodic words as stem + loop.
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hypermc {

/// An ultimately periodic word stem . loop^omega. The loop is never empty.
/// Letters are whatever the context needs: state indices, label bitmasks,
/// or packed tuple letters.
template <typename L>
struct Lasso {
  std::vector<L> stem;
  std::vector<L> loop;

  Lasso() = default;
  Lasso(std::vector<L> s, std::vector<L> l) : stem(std::move(s)), loop(std::move(l)) {
    if (loop.empty())
      throw std::invalid_argument("lasso loop must be nonempty");
  }

  std::size_t period_offset() const { return stem.size(); }
  std::size_t span() const { return stem.size() + loop.size(); }

  /// Letter at absolute position i.
  const L& at(std::size_t i) const {
    if (i < stem.size())
      return stem[i];
    return loop[(i - stem.size()) % loop.size()];
  }

  /// Folds a position into [0, span): positions past the stem are reduced
  /// modulo the loop length.
  std::size_t fold(std::size_t i) const {
    if (i < stem.size())
      return i;
    return stem.size() + (i - stem.size()) % loop.size();
  }

  /// Position reached one step after folded position i.
  std::size_t step(std::size_t i) const { return fold(i + 1); }

  bool operator==(const Lasso& o) const = default;
  auto operator<=>(const Lasso& o) const = default;
};

/// Reduces the loop to its primitive period and shifts loop letters back
/// into the stem whenever that shortens the stem. The result is the unique
/// shortest-stem / shortest-loop representation of the word.
template <typename L>
Lasso<L> canonical(Lasso<L> w) {
  // Primitive period.
  const std::size_t n = w.loop.size();
  for (std::size_t p = 1; p <= n / 2; ++p) {
    if (n % p != 0)
      continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i)
      periodic = w.loop[i] == w.loop[i % p];
    if (periodic) {
      w.loop.resize(p);
      break;
    }
  }
  // Absorb matching stem tail into a loop rotation.
  while (!w.stem.empty() && w.stem.back() == w.loop.back()) {
    w.loop.insert(w.loop.begin(), w.loop.back());
    w.loop.pop_back();
    w.stem.pop_back();
  }
  return w;
}

/// Word equality (representation independent).
template <typename L>
bool same_word(const Lasso<L>& a, const Lasso<L>& b) {
  return canonical(a) == canonical(b);
}

}  // namespace hypermc
