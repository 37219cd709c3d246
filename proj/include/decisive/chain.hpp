#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "decisive/rational.hpp"

namespace decisive {

inline void hash_combine(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

// A finite probability distribution over states. Produced by the model
// frontends through DistributionBuilder, which merges duplicate states and
// drops nothing; entries keep first-insertion order so results are
// reproducible.
template <class State>
struct Distribution {
  std::vector<std::pair<State, Rational>> entries;

  Rational total() const {
    Rational sum(0);
    for (const auto& [state, p] : entries) sum += p;
    return sum;
  }

  std::size_t size() const { return entries.size(); }

  // Probability mass assigned to `s` (zero when absent).
  Rational probability_of(const State& s) const {
    for (const auto& [state, p] : entries) {
      if (state == s) return p;
    }
    return Rational(0);
  }
};

template <class State, class Hash = std::hash<State>>
class DistributionBuilder {
 public:
  void add(State s, const Rational& p) {
    if (p == 0) return;
    auto [it, inserted] = index_.try_emplace(s, entries_.size());
    if (inserted) {
      entries_.emplace_back(std::move(s), p);
    } else {
      entries_[it->second].second += p;
    }
  }

  Distribution<State> build() && { return Distribution<State>{std::move(entries_)}; }

 private:
  std::unordered_map<State, std::size_t, Hash> index_;
  std::vector<std::pair<State, Rational>> entries_;
};

// What a model must provide to be analysed: one initial state, finitely
// branching successor distributions and membership oracles for the target set
// F, for F~ = states from which F is unreachable, and optionally for the
// states from which F~ is unreachable (nullopt = not supported by the model).
template <class C>
concept EffectiveChain = requires(const C& chain, const typename C::State& s) {
  typename C::State;
  { chain.initial() } -> std::convertible_to<typename C::State>;
  { chain.successors(s) } -> std::convertible_to<Distribution<typename C::State>>;
  { chain.in_target(s) } -> std::convertible_to<bool>;
  { chain.in_avoid(s) } -> std::convertible_to<bool>;
  { chain.in_avoid2(s) } -> std::convertible_to<std::optional<bool>>;
  { std::hash<typename C::State>{}(s) } -> std::convertible_to<std::size_t>;
  { s == s } -> std::convertible_to<bool>;
};

enum class Verdict { Holds, Fails, Unknown };

const char* verdict_name(Verdict v) noexcept;

struct TriBool {
  Verdict verdict = Verdict::Unknown;
  std::string reason;

  static TriBool holds(std::string why = {}) { return {Verdict::Holds, std::move(why)}; }
  static TriBool fails(std::string why = {}) { return {Verdict::Fails, std::move(why)}; }
  static TriBool unknown(std::string why) { return {Verdict::Unknown, std::move(why)}; }
  static TriBool from_bool(bool b, std::string why = {}) {
    return {b ? Verdict::Holds : Verdict::Fails, std::move(why)};
  }

  bool is_holds() const { return verdict == Verdict::Holds; }
  bool is_fails() const { return verdict == Verdict::Fails; }
  bool is_unknown() const { return verdict == Verdict::Unknown; }

  TriBool negated() const {
    switch (verdict) {
      case Verdict::Holds: return {Verdict::Fails, reason};
      case Verdict::Fails: return {Verdict::Holds, reason};
      case Verdict::Unknown: return *this;
    }
    return *this;
  }
};

struct Qualitative {
  TriBool verdict;
};

// theta == yes and yes + no >= 1 - eps.
struct Approx {
  Rational theta;
  Rational eps;
  std::size_t depth = 0;
  Rational yes;
  Rational no;
  std::uint64_t expansions = 0;
};

// The run stopped before yes + no reached 1 - eps. yes is still a lower and
// 1 - no an upper bound of the probability.
struct BudgetExhausted {
  Rational yes;
  Rational no;
  std::size_t depth = 0;
  std::uint64_t expansions = 0;
};

using QueryResult = std::variant<Qualitative, Approx, BudgetExhausted>;

struct DecisivenessCertificate {
  enum class Kind { FiniteAttractor, GloballyCoarse, Unverified };

  Kind kind = Kind::Unverified;
  std::string citation;
  Rational beta;
  std::size_t span = 0;
  Rational alpha;
  std::string target;

  // alpha = beta^span; requires 0 < beta <= 1.
  static DecisivenessCertificate globally_coarse(const Rational& beta, std::size_t span,
                                                 std::string target);
  static DecisivenessCertificate finite_attractor(std::string citation, std::string target);
};

const char* certificate_kind_name(DecisivenessCertificate::Kind kind) noexcept;

struct ContractViolation {
  std::size_t sample_index = 0;
  std::string state;
  std::string kind;
  std::string message;
};

struct ContractReport {
  std::size_t checked = 0;
  std::vector<ContractViolation> violations;

  bool ok() const { return violations.empty(); }
};

template <class C, class S>
std::string describe_state(const C& chain, const S& s, std::size_t index) {
  if constexpr (requires { { chain.describe(s) } -> std::convertible_to<std::string>; }) {
    return chain.describe(s);
  } else {
    return "#" + std::to_string(index);
  }
}

// Checks the Markov-chain axioms on sampled states. Violations are reported as
// data; nothing here throws on a broken chain.
template <EffectiveChain C>
ContractReport validate_chain_contract(const C& chain, const std::vector<typename C::State>& samples) {
  ContractReport report;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    ++report.checked;
    auto add = [&](std::string kind, std::string message) {
      report.violations.push_back({i, describe_state(chain, s, i), std::move(kind), std::move(message)});
    };

    const bool target = chain.in_target(s);
    const bool avoid = chain.in_avoid(s);
    if (target && avoid) add("target-avoid-overlap", "state is both in F and in the unreachable set of F");
    if (auto avoid2 = chain.in_avoid2(s); avoid2 && *avoid2 && avoid) {
      add("avoid-avoid2-overlap", "state is in both unreachable(F) and unreachable(unreachable(F))");
    }

    Distribution<typename C::State> dist = chain.successors(s);
    if (dist.entries.empty()) {
      add("empty", "successor distribution is empty");
      continue;
    }
    Rational sum(0);
    std::unordered_map<typename C::State, int> seen;
    for (const auto& [next, p] : dist.entries) {
      sum += p;
      if (p <= 0) add("non-positive", "successor probability " + to_fraction(p) + " is not positive");
      if (++seen[next] == 2) add("duplicate", "successor listed more than once");
    }
    if (sum != 1) add("sum", "probabilities sum to " + to_fraction(sum) + " instead of 1");
  }
  return report;
}

}  // namespace decisive
