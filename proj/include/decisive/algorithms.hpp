#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "decisive/chain.hpp"
#include "decisive/error.hpp"
#include "decisive/rational.hpp"

namespace decisive {

// Snapshot after the states of one depth have been classified.
struct DepthStats {
  std::size_t depth = 0;
  Rational yes;
  Rational no;
  Rational frontier_mass;  // mass still pending after this depth
  std::size_t frontier_size = 0;
  std::uint64_t expansions = 0;
};

struct ApproxOptions {
  Rational eps{1, 100};
  std::uint64_t budget = 1'000'000;  // state expansions
  std::optional<std::size_t> max_depth;
  std::function<void(const DepthStats&)> observer;
};

namespace detail {

enum class Class { Yes, No, Expand };

// Breadth-first path-mass enumeration with per-depth merging of identical
// states. `classify` sends a state's mass to Yes, No or the next depth.
template <EffectiveChain C, class Classify>
QueryResult enumerate_paths(const C& chain, const ApproxOptions& options, Classify classify) {
  if (options.eps <= 0) fail(ErrorCode::InvalidArgument, "InvalidEpsilon: eps must be positive");
  using S = typename C::State;

  std::vector<std::pair<S, Rational>> frontier;
  frontier.emplace_back(chain.initial(), Rational(1));
  Rational yes(0);
  Rational no(0);
  std::uint64_t expansions = 0;
  const Rational goal = Rational(1) - options.eps;

  for (std::size_t depth = 0;; ++depth) {
    std::vector<std::pair<S, Rational>> pending;
    for (auto& [s, mass] : frontier) {
      switch (classify(s)) {
        case Class::Yes: yes += mass; break;
        case Class::No: no += mass; break;
        case Class::Expand: pending.emplace_back(std::move(s), std::move(mass)); break;
      }
    }

    if (options.observer) {
      Rational pending_mass(0);
      for (const auto& entry : pending) pending_mass += entry.second;
      options.observer(DepthStats{depth, yes, no, pending_mass, pending.size(), expansions});
    }

    if (yes + no >= goal) return Approx{yes, options.eps, depth, yes, no, expansions};
    if (expansions + pending.size() > options.budget || (options.max_depth && depth >= *options.max_depth)) {
      return BudgetExhausted{yes, no, depth, expansions};
    }

    DistributionBuilder<S> next;
    for (const auto& [s, mass] : pending) {
      ++expansions;
      for (auto& [succ, p] : chain.successors(s).entries) next.add(std::move(succ), mass * p);
    }
    frontier = std::move(next).build().entries;
  }
}

}  // namespace detail

// Lower approximation theta of P(reach F) with theta <= P <= theta + eps, or
// BudgetExhausted with the bounds reached so far.
template <EffectiveChain C>
QueryResult approx_reach(const C& chain, const ApproxOptions& options) {
  return detail::enumerate_paths(chain, options, [&](const typename C::State& s) {
    if (chain.in_target(s)) return detail::Class::Yes;
    if (chain.in_avoid(s)) return detail::Class::No;
    return detail::Class::Expand;
  });
}

// Same loop for P(visit F infinitely often): mass is accepted once it enters
// the states that cannot reach unreachable(F), and rejected in unreachable(F).
// Throws Unsupported (Avoid2Unsupported) if the chain cannot decide the
// former.
template <EffectiveChain C>
QueryResult approx_repeat_reach(const C& chain, const ApproxOptions& options) {
  return detail::enumerate_paths(chain, options, [&](const typename C::State& s) {
    std::optional<bool> accept = chain.in_avoid2(s);
    if (!accept) {
      fail(ErrorCode::Unsupported,
           "Avoid2Unsupported: this model cannot decide membership in unreachable(unreachable(F))");
    }
    if (*accept) return detail::Class::Yes;
    if (chain.in_avoid(s)) return detail::Class::No;
    return detail::Class::Expand;
  });
}

}  // namespace decisive
