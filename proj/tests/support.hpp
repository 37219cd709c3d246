// Hand-written chains and independent reference implementations shared by the
// test suites. Nothing here calls the algorithms under test.
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "decisive/chain.hpp"
#include "decisive/oracle.hpp"
#include "decisive/rational.hpp"

namespace testing {

using decisive::Distribution;
using decisive::Rational;

// States are naturals; P(i, i+1) = x, P(i, i-1) = 1 - x for i >= 1 and 0 is
// absorbing. F = {0}. Every state reaches 0, so unreachable(F) is empty.
struct GamblerChain {
  using State = std::int64_t;

  Rational x;
  std::int64_t start = 1;

  State initial() const { return start; }
  Distribution<State> successors(State s) const {
    if (s == 0) return {{{0, Rational(1)}}};
    return {{{s + 1, x}, {s - 1, Rational(1) - x}}};
  }
  bool in_target(State s) const { return s == 0; }
  bool in_avoid(State) const { return false; }
  std::optional<bool> in_avoid2(State) const { return std::nullopt; }
};

// A chain whose rows deliberately sum to 9/10.
struct BrokenChain {
  using State = int;
  State initial() const { return 0; }
  Distribution<State> successors(State s) const { return {{{s, Rational(9, 10)}}}; }
  bool in_target(State) const { return false; }
  bool in_avoid(State) const { return false; }
  std::optional<bool> in_avoid2(State) const { return std::nullopt; }
};

inline Rational random_fraction(std::mt19937_64& rng, std::uint64_t max_den) {
  std::uniform_int_distribution<std::uint64_t> den(2, max_den);
  const std::uint64_t d = den(rng);
  std::uniform_int_distribution<std::uint64_t> num(1, d - 1);
  return decisive::make_rational(decisive::Integer(static_cast<unsigned long>(num(rng))),
                                 decisive::Integer(static_cast<unsigned long>(d)));
}

// Random finite chain with up to max_states states, 1..3 successors per row
// with integer weights, and a random target set (possibly empty).
inline decisive::oracle::FiniteChain random_finite_chain(std::mt19937_64& rng, std::size_t max_states = 30) {
  decisive::oracle::FiniteChain fc;
  std::uniform_int_distribution<std::size_t> size(1, max_states);
  const std::size_t n = size(rng);
  for (std::size_t i = 0; i < n; ++i) fc.add_state("s" + std::to_string(i));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<int> fanout(1, 3);
  std::uniform_int_distribution<int> weight(1, 4);
  std::uniform_int_distribution<int> coin(0, 5);
  for (std::size_t i = 0; i < n; ++i) {
    const int k = fanout(rng);
    std::vector<std::pair<std::size_t, int>> succ;
    int total = 0;
    for (int j = 0; j < k; ++j) {
      succ.emplace_back(pick(rng), weight(rng));
      total += succ.back().second;
    }
    for (auto [t, w] : succ) fc.add_edge(i, t, decisive::make_rational(w, total));
    fc.target[i] = coin(rng) == 0;
  }
  fc.initial = pick(rng);
  return fc;
}

// Backward reachability by transitive closure (Warshall), independent of the
// BFS used in the library.
inline std::vector<std::vector<bool>> transitive_closure(const std::vector<std::vector<std::size_t>>& succ) {
  const std::size_t n = succ.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    reach[i][i] = true;
    for (std::size_t j : succ[i]) reach[i][j] = true;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }
  return reach;
}

inline std::vector<std::vector<std::size_t>> successor_lists(const decisive::oracle::FiniteChain& fc) {
  std::vector<std::vector<std::size_t>> succ(fc.size());
  for (std::size_t s = 0; s < fc.size(); ++s) {
    for (const auto& [t, p] : fc.rows[s]) succ[s].push_back(t);
  }
  return succ;
}

// Yes^j / No^j of the path-enumeration loop without merging: every path
// prefix is its own queue entry, exactly as in the textbook formulation.
struct DepthMass {
  Rational yes;
  Rational no;
};

template <class C>
std::vector<DepthMass> unmerged_depth_masses(const C& chain, std::size_t max_depth, bool repeat = false) {
  using S = typename C::State;
  std::vector<DepthMass> out;
  std::deque<std::pair<S, Rational>> queue{{chain.initial(), Rational(1)}};
  Rational yes(0), no(0);
  for (std::size_t depth = 0; depth <= max_depth; ++depth) {
    std::deque<std::pair<S, Rational>> next;
    while (!queue.empty()) {
      auto [s, r] = queue.front();
      queue.pop_front();
      const bool accept = repeat ? chain.in_avoid2(s).value() : chain.in_target(s);
      if (accept) {
        yes += r;
      } else if (chain.in_avoid(s)) {
        no += r;
      } else {
        for (const auto& [t, p] : chain.successors(s).entries) next.emplace_back(t, r * p);
      }
    }
    out.push_back({yes, no});
    queue = std::move(next);
  }
  return out;
}

}  // namespace testing
