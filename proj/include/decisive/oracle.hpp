#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "decisive/chain.hpp"
#include "decisive/error.hpp"
#include "decisive/rational.hpp"

namespace decisive::oracle {

// A finite Markov chain with explicit rows. Mass that left the truncation
// bounds ends in the absorbing `overflow` state, which is never in F.
struct FiniteChain {
  std::vector<std::vector<std::pair<std::size_t, Rational>>> rows;
  std::vector<bool> target;
  std::vector<bool> avoid;
  std::vector<std::optional<bool>> avoid2;
  std::vector<std::string> labels;
  std::optional<std::size_t> overflow;
  std::size_t initial = 0;

  std::size_t size() const { return rows.size(); }
  std::size_t add_state(std::string label = {});
  void add_edge(std::size_t from, std::size_t to, const Rational& p);

  // Throws InvalidArgument if a row does not sum to 1 or an index is out of
  // range.
  void check() const;
};

// Enumerates the states reachable from chain.initial() through states that
// satisfy in_bounds. Successors outside the bounds are redirected to the
// overflow state. Throws LimitExceeded when more than state_limit in-bound
// states are found. `states`, if given, receives the enumerated states in
// index order (the overflow state has no entry).
template <EffectiveChain C, class InBounds>
FiniteChain truncate(const C& chain, InBounds in_bounds, std::size_t state_limit,
                     std::vector<typename C::State>* states = nullptr) {
  using S = typename C::State;
  FiniteChain fc;
  std::unordered_map<S, std::size_t> index;
  std::vector<S> order;           // in-bound states in discovery order
  std::vector<std::size_t> ids;   // their indices in fc
  std::deque<std::size_t> queue;  // positions in order

  auto intern = [&](const S& s) -> std::size_t {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    if (order.size() >= state_limit) {
      fail(ErrorCode::LimitExceeded, "truncation exceeded the state limit of " + std::to_string(state_limit));
    }
    const std::size_t id = fc.add_state(describe_state(chain, s, order.size()));
    index.emplace(s, id);
    fc.target[id] = chain.in_target(s);
    fc.avoid[id] = chain.in_avoid(s);
    fc.avoid2[id] = chain.in_avoid2(s);
    queue.push_back(order.size());
    order.push_back(s);
    ids.push_back(id);
    return id;
  };
  auto overflow = [&]() -> std::size_t {
    if (!fc.overflow) {
      fc.overflow = fc.add_state("overflow");
      fc.avoid[*fc.overflow] = true;
      fc.add_edge(*fc.overflow, *fc.overflow, Rational(1));
    }
    return *fc.overflow;
  };

  const S init = chain.initial();
  if (!in_bounds(init)) fail(ErrorCode::InvalidArgument, "initial state lies outside the truncation bounds");
  fc.initial = intern(init);
  while (!queue.empty()) {
    const std::size_t pos = queue.front();
    queue.pop_front();
    const S s = order[pos];
    const std::size_t id = ids[pos];
    for (const auto& [next, p] : chain.successors(s).entries) {
      const std::size_t to = in_bounds(next) ? intern(next) : overflow();
      fc.add_edge(id, to, p);
    }
  }
  if (states) *states = std::move(order);
  return fc;
}

struct Band {
  Rational lower;
  Rational upper;

  Rational width() const { return upper - lower; }
  bool contains(const Rational& q) const { return lower <= q && q <= upper; }
};

// Exact P(reach F): lower counts overflow as a non-F absorbing state, upper
// counts it as F. Uses fc.target when F is not given.
Band exact_reach_prob(const FiniteChain& fc, const std::vector<bool>& f);
Band exact_reach_prob(const FiniteChain& fc);

// Exact P(visit F infinitely often) through bottom strongly connected
// components: lower = P(reach a BSCC meeting F), upper adds the overflow mass.
Band exact_repeat_reach_prob(const FiniteChain& fc, const std::vector<bool>& f);
Band exact_repeat_reach_prob(const FiniteChain& fc);

// Absorption probabilities into `goal` for every state.
std::vector<Rational> absorption_probabilities(const FiniteChain& fc, const std::vector<bool>& goal);

// States from which no path reaches `f`.
std::vector<bool> unreachable_set(const FiniteChain& fc, const std::vector<bool>& f);

// Bottom strongly connected components, each as a sorted list of states.
std::vector<std::vector<std::size_t>> bottom_sccs(const FiniteChain& fc);

// A FiniteChain seen as an EffectiveChain. Both unreachable sets are
// recomputed on the graph from the target flags.
class ExplicitChain {
 public:
  using State = std::size_t;

  explicit ExplicitChain(FiniteChain fc);

  State initial() const { return fc_.initial; }
  Distribution<State> successors(State s) const;
  bool in_target(State s) const { return fc_.target[s]; }
  bool in_avoid(State s) const { return avoid_[s]; }
  std::optional<bool> in_avoid2(State s) const { return avoid2_[s]; }
  std::string describe(State s) const { return fc_.labels[s]; }

  const FiniteChain& finite() const { return fc_; }

 private:
  FiniteChain fc_;
  std::vector<bool> avoid_;
  std::vector<bool> avoid2_;
};

struct MonteCarloResult {
  std::uint64_t runs = 0;
  std::uint64_t successes = 0;
  double estimate = 0;
  double lower = 0;  // 95% Wilson interval
  double upper = 0;
};

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t runs, double z = 1.959963984540054);

enum class Event {
  Reach,               // reach F within the horizon; runs entering unreachable(F) stop early
  ReachWithinHorizon,  // reach F within the horizon; no early stop
};

// Generator: std::mt19937_64, one per run, seeded from (seed, run index).
inline std::mt19937_64 run_generator(std::uint64_t seed, std::uint64_t run) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(run >> 32)};
  return std::mt19937_64(seq);
}

template <EffectiveChain C>
MonteCarloResult monte_carlo(const C& chain, Event event, std::uint64_t runs, std::uint64_t horizon,
                             std::uint64_t seed) {
  if (runs == 0) fail(ErrorCode::InvalidArgument, "monte carlo needs at least one run");
  MonteCarloResult result;
  result.runs = runs;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint64_t r = 0; r < runs; ++r) {
    auto gen = run_generator(seed, r);
    typename C::State s = chain.initial();
    bool hit = false;
    for (std::uint64_t step = 0;; ++step) {
      if (chain.in_target(s)) {
        hit = true;
        break;
      }
      if (step >= horizon) break;
      if (event == Event::Reach && chain.in_avoid(s)) break;
      auto dist = chain.successors(s);
      const double u = unit(gen);
      double acc = 0;
      std::size_t pick = dist.entries.size() - 1;
      for (std::size_t i = 0; i < dist.entries.size(); ++i) {
        acc += dist.entries[i].second.get_d();
        if (u < acc) {
          pick = i;
          break;
        }
      }
      s = std::move(dist.entries[pick].first);
    }
    if (hit) ++result.successes;
  }
  result.estimate = static_cast<double>(result.successes) / static_cast<double>(runs);
  std::tie(result.lower, result.upper) = wilson_interval(result.successes, runs);
  return result;
}

}  // namespace decisive::oracle
