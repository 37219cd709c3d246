#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "decisive/chain.hpp"
#include "decisive/pvass.hpp"
#include "decisive/rational.hpp"
#include "decisive/wqo.hpp"

namespace decisive::plcs {

using ControlState = std::uint32_t;
using pvass::Property;
using pvass::QualQuery;
using pvass::Side;

// Channel contents are strings whose characters are message indices
// (char 0 = first declared message).
using Word = std::string;

struct Config {
  ControlState control = 0;
  std::vector<Word> channels;

  friend bool operator==(const Config&, const Config&) = default;
};

std::size_t hash_value(const Config& c);

struct Op {
  enum class Kind { Nop, Send, Recv };
  Kind kind = Kind::Nop;
  std::uint32_t channel = 0;
  std::uint32_t message = 0;
};

struct Transition {
  ControlState src = 0;
  Op op;
  ControlState dst = 0;
  std::uint64_t weight = 1;
};

// Control states equal, every channel a subword of the other's.
struct ConfigOrder {
  bool leq(const Config& a, const Config& b) const;
  std::size_t bucket(const Config& c) const { return c.control; }
};

using ConfigSet = Antichain<Config, ConfigOrder>;

struct Plcs {
  std::vector<std::string> states;
  std::vector<std::string> channels;
  std::vector<std::string> messages;
  std::vector<Transition> transitions;
  Rational lambda;
  Config initial;

  std::size_t num_states() const { return states.size(); }
  std::size_t num_channels() const { return channels.size(); }
  std::optional<ControlState> find_state(const std::string& name) const;
  std::string describe(const Config& c) const;
  std::string render_word(const Word& w) const;
};

struct ValidationOptions {
  bool auto_selfloop = false;
};

// Throws Error(ValidationError) on lambda outside (0,1), dangling indices or a
// control state without an always-enabled (nop or send) transition.
void validate(Plcs& model, const ValidationOptions& options = {});

void check_config(const Plcs& model, const Config& c);

bool is_enabled(const Transition& t, const Config& c);
Config apply(const Transition& t, const Config& c);

// All configurations reachable by losing messages, with probability
// a * lambda^b * (1-lambda)^c (a = number of ways, b = lost, c = kept).
Distribution<Config> loss_distribution(const Config& cfg, const Rational& lambda);

// One discrete step (weighted choice among enabled transitions) followed by
// one loss step.
Distribution<Config> step_distribution(const Plcs& model, const Config& cfg);

std::optional<Config> min_pre_lcs(const Plcs& model, const Transition& t, const Config& target_min);

// Upward-closed target; from_q_states gives the Q-states.
struct UpwardTarget {
  ConfigSet basis;
  std::optional<std::set<ControlState>> q_states;

  static UpwardTarget from_q_states(const Plcs& model, const std::set<ControlState>& q);
  static UpwardTarget from_basis(std::vector<Config> minimal);

  bool contains(const Config& c) const { return basis.covers(c); }
  std::string describe(const Plcs& model) const;
};

SaturationResult<Config, ConfigOrder> pre_star(const Plcs& model, const ConfigSet& basis,
                                               std::size_t limit = kDefaultBasisLimit);

// Control states q whose empty-channel configuration lies outside ↑basis:
// the bottoms of the downward-closed complement.
std::set<ControlState> bottom_states(const Plcs& model, const ConfigSet& basis);

ConfigSet q_state_basis(const Plcs& model, const std::set<ControlState>& q);

// The four qualitative questions; always decided (never Unknown). init is the
// configuration before the leading loss step.
TriBool qual_decide(const Plcs& model, const Config& init, const UpwardTarget& target, QualQuery query);

// Basis of the configurations from which ↑(Qerr-states) is reachable without
// visiting F, where Qerr are the bottoms of unreachable(F).
ConfigSet avoid_before_target(const Plcs& model, const UpwardTarget& target);

DecisivenessCertificate certificate(const Plcs& model, const UpwardTarget& target);

// Chain state. The initial state carries `before_loss`: it stands for the
// configuration before the leading loss step, is never counted as a visit of
// F, and its successors are the loss distribution. All other states are
// observed after a discrete step and its loss step.
struct State {
  Config config;
  bool before_loss = false;

  friend bool operator==(const State&, const State&) = default;
};

class Chain {
 public:
  using State = plcs::State;

  Chain(const Plcs& model, UpwardTarget target);

  State initial() const { return {model_->initial, true}; }
  Distribution<State> successors(const State& s) const;
  bool in_target(const State& s) const { return !s.before_loss && target_.contains(s.config); }
  bool in_avoid(const State& s) const { return !pre_target_.covers(s.config); }
  std::optional<bool> in_avoid2(const State& s) const { return !pre_avoid_.covers(s.config); }
  std::string describe(const State& s) const;

  const Plcs& model() const { return *model_; }

 private:
  const Plcs* model_;
  UpwardTarget target_;
  ConfigSet pre_target_;  // Pre*(F)
  ConfigSet pre_avoid_;   // Pre*(unreachable(F))
};

}  // namespace decisive::plcs

template <>
struct std::hash<decisive::plcs::Config> {
  std::size_t operator()(const decisive::plcs::Config& c) const noexcept { return decisive::plcs::hash_value(c); }
};

template <>
struct std::hash<decisive::plcs::State> {
  std::size_t operator()(const decisive::plcs::State& s) const noexcept {
    return decisive::plcs::hash_value(s.config) ^ (s.before_loss ? 0x5bd1e995U : 0U);
  }
};
