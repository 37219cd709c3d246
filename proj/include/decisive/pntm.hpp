#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "decisive/chain.hpp"
#include "decisive/pvass.hpp"
#include "decisive/rational.hpp"

namespace decisive::pntm {

using ControlState = std::uint32_t;
using Symbol = std::uint8_t;  // index into the tape alphabet
using pvass::Property;
using pvass::QualQuery;
using pvass::Side;

struct Transition {
  ControlState src = 0;
  std::vector<Symbol> read;
  ControlState dst = 0;
  std::vector<Symbol> write;
  std::vector<int> moves;  // -1, 0, +1 per tape
  std::uint64_t weight = 1;
};

// Cells visited so far occupy positions [origin, origin + cells.size()).
// stamps[i] is the last time the head visited cell i.
struct TapeConfig {
  std::int64_t head = 0;
  std::int64_t origin = 0;
  std::vector<Symbol> cells;
  std::vector<std::uint64_t> stamps;

  std::size_t head_index() const { return static_cast<std::size_t>(head - origin); }
  friend bool operator==(const TapeConfig&, const TapeConfig&) = default;
};

struct State {
  ControlState control = 0;
  std::uint64_t time = 0;
  std::vector<TapeConfig> tapes;

  friend bool operator==(const State&, const State&) = default;
};

std::size_t hash_value(const State& s);

struct Pntm {
  std::vector<std::string> states;
  std::vector<char> gamma;  // tape alphabet; contains the blank '#'
  std::vector<char> sigma;  // input alphabet (informational)
  std::size_t tapes = 1;
  std::vector<Transition> transitions;
  Rational epsilon;
  State initial;

  std::size_t num_states() const { return states.size(); }
  std::optional<ControlState> find_state(const std::string& name) const;
  std::optional<Symbol> find_symbol(char c) const;
  Symbol blank() const;
  std::string describe(const State& s) const;
};

struct ValidationOptions {
  // Add a weight-1 stay-put transition (rewriting the read symbols) for every
  // missing (control state, read vector) pair instead of rejecting.
  bool auto_total = false;
};

void validate(Pntm& model, const ValidationOptions& options = {});
void check_state(const Pntm& model, const State& s);

// Initial global state: the machine starts at time 1 and the given input cells
// carry stamp 0, so the first step already sees noise for one elapsed unit.
State make_initial(const Pntm& model, ControlState control, const std::vector<std::vector<Symbol>>& contents,
                   const std::vector<std::int64_t>& heads);

// Distribution of the symbols read under all heads after the noisy step. A
// cell last visited k units ago is resampled uniformly over the alphabet with
// probability 1-(1-eps)^k.
using ReadVector = std::vector<Symbol>;

struct ReadVectorHash {
  std::size_t operator()(const ReadVector& v) const noexcept {
    return std::hash<std::string_view>{}(std::string_view(reinterpret_cast<const char*>(v.data()), v.size()));
  }
};

Distribution<ReadVector> noise_distribution(const Pntm& model, const State& s);

// Probability that one tape reads `symbol` given its current symbol and gap.
Rational read_probability(const Rational& epsilon, std::size_t alphabet, std::uint64_t gap, bool same_symbol);

// Noisy step then normal step. The visited cell gets the written symbol and
// stamp = the time of this step; time then advances by one. Cells visited for
// the first time hold the blank with stamp 0.
Distribution<State> step_distribution(const Pntm& model, const State& s);

// Control abstraction: nodes are control states, edges the projection of the
// transitions.
struct ControlGraph {
  std::size_t nodes = 0;
  std::vector<std::vector<ControlState>> succ;
  std::vector<std::vector<ControlState>> pred;

  static ControlGraph of(const Pntm& model);
  static ControlGraph from_edges(std::size_t nodes, const std::vector<std::pair<ControlState, ControlState>>& edges);
  bool has_edge(ControlState a, ControlState b) const;
};

using NodeSet = std::vector<bool>;

NodeSet ef(const ControlGraph& g, const NodeSet& q);
NodeSet not_ef(const ControlGraph& g, const NodeSet& q);
// E(¬avoid U reach): nodes in `reach`, or with a path into `reach` whose
// earlier nodes all lie outside `avoid`.
NodeSet exists_until(const ControlGraph& g, const NodeSet& avoid, const NodeSet& reach);
NodeSet ag_ef(const ControlGraph& g, const NodeSet& q);

struct GraphQuery {
  enum class Kind { EF, NotEF, ExistsUntil, AGEF };
  Kind kind = Kind::EF;
  NodeSet q;      // EF / NotEF / AGEF operand; target of ExistsUntil
  NodeSet avoid;  // ExistsUntil only
};

NodeSet graph_query(const ControlGraph& g, const GraphQuery& query);

NodeSet to_node_set(std::size_t nodes, const std::set<ControlState>& q);

TriBool qual_decide(const Pntm& model, const State& init, const std::set<ControlState>& q, QualQuery query);

// beta = (eps/|Gamma|)^M * w_min / W_max, span = |S|.
DecisivenessCertificate certificate(const Pntm& model);

struct ChainOptions {
  // Oracle mode: states are normalised to their gap vector with gaps capped at
  // gap_cap, so chains that revisit cells become finite. Gaps beyond the cap
  // are treated as equal to the cap.
  bool canonical_gaps = false;
  std::uint64_t gap_cap = 64;
};

class Chain {
 public:
  using State = pntm::State;

  Chain(const Pntm& model, std::set<ControlState> q, ChainOptions options = {});

  State initial() const;
  Distribution<State> successors(const State& s) const;
  bool in_target(const State& s) const { return target_[s.control]; }
  bool in_avoid(const State& s) const { return avoid_[s.control]; }
  std::optional<bool> in_avoid2(const State& s) const { return avoid2_[s.control]; }
  std::string describe(const State& s) const { return model_->describe(s); }

 private:
  State normalise(State s) const;

  const Pntm* model_;
  ChainOptions options_;
  NodeSet target_;
  NodeSet avoid_;
  NodeSet avoid2_;
};

}  // namespace decisive::pntm

template <>
struct std::hash<decisive::pntm::State> {
  std::size_t operator()(const decisive::pntm::State& s) const noexcept { return decisive::pntm::hash_value(s); }
};
