#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "decisive/chain.hpp"
#include "decisive/rational.hpp"
#include "decisive/wqo.hpp"

namespace decisive::pvass {

using ControlState = std::uint32_t;

struct Marking {
  ControlState control = 0;
  std::vector<std::int64_t> values;

  friend bool operator==(const Marking&, const Marking&) = default;
};

std::size_t hash_value(const Marking& m);

struct Transition {
  ControlState src = 0;
  std::vector<int> op;  // entries in {-1, 0, +1}, one per variable
  ControlState dst = 0;
  std::uint64_t weight = 1;

  bool is_always_enabled() const;
};

// Product order: equal control states and componentwise <= on valuations.
struct MarkingOrder {
  bool leq(const Marking& a, const Marking& b) const {
    return a.control == b.control && vector_leq(a.values, b.values);
  }
  std::size_t bucket(const Marking& m) const { return m.control; }
};

using MarkingSet = Antichain<Marking, MarkingOrder>;

struct Pvass {
  std::vector<std::string> states;
  std::vector<std::string> vars;
  std::vector<Transition> transitions;
  Marking initial;

  std::size_t num_states() const { return states.size(); }
  std::size_t num_vars() const { return vars.size(); }
  std::optional<ControlState> find_state(const std::string& name) const;
  std::string describe(const Marking& m) const;
};

struct ValidationOptions {
  // Add a weight-1 nop self-loop to control states without an always-enabled
  // transition instead of rejecting the model.
  bool auto_selfloop = false;
};

// Checks weights, op ranges and deadlock-freedom. May repair deadlocks under
// `auto_selfloop`. Throws Error(ValidationError).
void validate(Pvass& model, const ValidationOptions& options = {});

// Throws Error(MalformedState) for out-of-range controls, wrong arity or
// negative counters.
void check_marking(const Pvass& model, const Marking& m);

bool is_enabled(const Transition& t, const Marking& m);
Marking fire(const Transition& t, const Marking& m);

Distribution<Marking> successors(const Pvass& model, const Marking& s);

// The unique minimal marking whose t-successor covers `target_min`, if t ends
// in target_min's control state.
std::optional<Marking> min_pre_transition(const Pvass& model, const Transition& t, const Marking& target_min);

// An upward-closed set of markings given by its minimal elements. Built from
// a set Q of control states it is the set of Q-states.
struct UpwardTarget {
  MarkingSet basis;
  std::optional<std::set<ControlState>> q_states;

  static UpwardTarget from_q_states(const Pvass& model, const std::set<ControlState>& q);
  static UpwardTarget from_basis(std::vector<Marking> minimal);

  bool contains(const Marking& m) const { return basis.covers(m); }
  bool is_q_state_target() const { return q_states.has_value(); }
  std::string describe(const Pvass& model) const;
};

SaturationResult<Marking, MarkingOrder> pre_star_upward(const Pvass& model, const UpwardTarget& target,
                                                        std::size_t limit = kDefaultBasisLimit);

enum class EmptinessCertificate { None, InitialInSet, ControlUnreachable, BoundedExhaustive };

const char* emptiness_certificate_name(EmptinessCertificate c) noexcept;

struct DownwardReachAnswer {
  TriBool verdict;
  std::vector<std::size_t> witness;  // transition indices, when Holds
  EmptinessCertificate certificate = EmptinessCertificate::None;
};

struct SearchLimits {
  std::size_t forward_states = 200'000;
  std::size_t karp_miller_nodes = 200'000;
};

// Is some marking of D = complement(↑upward_complement) reachable from init?
// Holds comes with a witness path, Fails with a sound emptiness certificate,
// anything else is Unknown.
DownwardReachAnswer best_effort_reach_downward(const Pvass& model, const Marking& init,
                                               const MarkingSet& upward_complement,
                                               const SearchLimits& limits = {});

// Control states that occur in the Karp-Miller coverability tree; nullopt
// when the node limit is hit.
std::optional<std::vector<bool>> karp_miller_controls(const Pvass& model, const Marking& init,
                                                      std::size_t node_limit, bool* has_omega = nullptr);

enum class Property { Reach, Repeat };
enum class Side { One, Zero };

struct QualQuery {
  Property property = Property::Reach;
  Side side = Side::One;
};

const char* property_name(Property p) noexcept;
const char* side_name(Side s) noexcept;

// Reach-one requires a Q-state target; other targets raise InvalidArgument
// (NotQStateTarget) since the question is undecidable for them.
TriBool qual_decide(const Pvass& model, const Marking& init, const UpwardTarget& target, QualQuery query,
                    const SearchLimits& limits = {});

// Model with all transitions leaving Q removed and a weight-1 nop self-loop
// added on every Q state.
Pvass cut_outgoing(const Pvass& model, const std::set<ControlState>& q);

// Lower bound on all nonzero one-step probabilities: per control state the
// minimum weight over the sum of all weights leaving it.
Rational coarseness_bound(const Pvass& model);

DecisivenessCertificate decisiveness_certificate(const Pvass& model, const UpwardTarget& target);

// Markov chain induced by a PVASS, with F̃ membership decided through the
// predecessor basis of the target. F̃ of F̃ is not available for PVASS.
class Chain {
 public:
  using State = Marking;

  Chain(const Pvass& model, UpwardTarget target);

  Marking initial() const { return model_->initial; }
  Distribution<Marking> successors(const Marking& s) const { return pvass::successors(*model_, s); }
  bool in_target(const Marking& s) const { return target_.contains(s); }
  bool in_avoid(const Marking& s) const { return !pre_star_.covers(s); }
  std::optional<bool> in_avoid2(const Marking&) const { return std::nullopt; }
  std::string describe(const Marking& s) const { return model_->describe(s); }

  const MarkingSet& pre_star() const { return pre_star_; }
  std::size_t span() const { return span_; }

 private:
  const Pvass* model_;
  UpwardTarget target_;
  MarkingSet pre_star_;
  std::size_t span_ = 0;
};

// Deterministic Minsky machine over counters c1, c2 (indices 0 and 1).
struct MinskyInstruction {
  enum class Kind { Increment, TestDecrement };
  Kind kind = Kind::Increment;
  std::uint32_t state = 0;
  std::uint32_t counter = 0;
  std::uint32_t next = 0;      // increment target, or target when the counter is zero
  std::uint32_t nonzero = 0;   // target after decrementing (TestDecrement only)
};

struct MinskyProgram {
  std::uint32_t num_states = 1;
  std::uint32_t start = 0;
  std::uint32_t accept = 0;
  std::vector<MinskyInstruction> instructions;
};

// PVASS weakly simulating the program. Control layout: program states
// k0..k(n-1), then the intermediate states k^1, k^2 for each program state,
// then err. The wrong-guess transition carries weight x = x_num/x_den; weights
// are scaled by x_den so they stay integral.
struct MinskyGadget {
  Pvass model;
  ControlState err = 0;

  ControlState program_state(std::uint32_t k) const { return k; }
  ControlState intermediate(std::uint32_t k, std::uint32_t counter) const;
  UpwardTarget err_target() const;

  std::uint32_t num_program_states = 0;
};

MinskyGadget build_minsky_gadget(const MinskyProgram& program, std::uint64_t x_num = 1, std::uint64_t x_den = 1);

// Adds the IT transformation: after each instruction, c1 += 1 followed by a
// (never-zero) test that decrements it again.
MinskyProgram make_infinitely_testing(const MinskyProgram& program);

}  // namespace decisive::pvass

template <>
struct std::hash<decisive::pvass::Marking> {
  std::size_t operator()(const decisive::pvass::Marking& m) const noexcept {
    return decisive::pvass::hash_value(m);
  }
};
