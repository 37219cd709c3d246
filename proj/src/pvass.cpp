#include "decisive/pvass.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

#include "decisive/error.hpp"

namespace decisive::pvass {

namespace {

constexpr std::int64_t kOmega = std::numeric_limits<std::int64_t>::max();

}  // namespace

std::size_t hash_value(const Marking& m) {
  std::size_t seed = std::hash<std::uint32_t>{}(m.control);
  for (std::int64_t v : m.values) hash_combine(seed, std::hash<std::int64_t>{}(v));
  return seed;
}

bool Transition::is_always_enabled() const {
  return std::all_of(op.begin(), op.end(), [](int d) { return d >= 0; });
}

std::optional<ControlState> Pvass::find_state(const std::string& name) const {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) return std::nullopt;
  return static_cast<ControlState>(it - states.begin());
}

std::string Pvass::describe(const Marking& m) const {
  std::string out = m.control < states.size() ? states[m.control] : "?" + std::to_string(m.control);
  out += "(";
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    if (i > 0) out += ",";
    out += (i < vars.size() ? vars[i] : "v" + std::to_string(i)) + "=";
    out += m.values[i] == kOmega ? std::string("w") : std::to_string(m.values[i]);
  }
  out += ")";
  return out;
}

void validate(Pvass& model, const ValidationOptions& options) {
  if (model.states.empty()) fail(ErrorCode::ValidationError, "pvass: no control states");
  const std::size_t n = model.num_states();
  for (std::size_t i = 0; i < model.transitions.size(); ++i) {
    const Transition& t = model.transitions[i];
    const std::string where = "pvass: transition " + std::to_string(i + 1);
    if (t.src >= n || t.dst >= n) fail(ErrorCode::ValidationError, where + " refers to an unknown state");
    if (t.weight == 0) fail(ErrorCode::ValidationError, where + " has weight 0 (weights must be positive)");
    if (t.op.size() != model.num_vars()) fail(ErrorCode::ValidationError, where + " has wrong arity");
    for (int d : t.op) {
      if (d < -1 || d > 1) fail(ErrorCode::ValidationError, where + " changes a variable by more than 1");
    }
  }
  std::vector<bool> safe(n, false);
  for (const Transition& t : model.transitions) {
    if (t.is_always_enabled()) safe[t.src] = true;
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (safe[q]) continue;
    if (!options.auto_selfloop) {
      fail(ErrorCode::ValidationError, "pvass: control state '" + model.states[q] +
                                           "' may deadlock (no always-enabled transition); "
                                           "add a nop self-loop or enable auto-selfloop");
    }
    model.transitions.push_back(
        {static_cast<ControlState>(q), std::vector<int>(model.num_vars(), 0), static_cast<ControlState>(q), 1});
  }
  check_marking(model, model.initial);
}

void check_marking(const Pvass& model, const Marking& m) {
  if (m.control >= model.num_states()) fail(ErrorCode::MalformedState, "marking has unknown control state");
  if (m.values.size() != model.num_vars()) fail(ErrorCode::MalformedState, "marking has wrong arity");
  for (std::int64_t v : m.values) {
    if (v < 0) fail(ErrorCode::MalformedState, "marking has a negative counter");
  }
}

bool is_enabled(const Transition& t, const Marking& m) {
  if (t.src != m.control) return false;
  for (std::size_t i = 0; i < t.op.size(); ++i) {
    if (m.values[i] != kOmega && m.values[i] + t.op[i] < 0) return false;
  }
  return true;
}

Marking fire(const Transition& t, const Marking& m) {
  Marking next{t.dst, m.values};
  for (std::size_t i = 0; i < t.op.size(); ++i) {
    if (next.values[i] != kOmega) next.values[i] += t.op[i];
  }
  return next;
}

Distribution<Marking> successors(const Pvass& model, const Marking& s) {
  check_marking(model, s);
  std::uint64_t total = 0;
  for (const Transition& t : model.transitions) {
    if (is_enabled(t, s)) total += t.weight;
  }
  if (total == 0) fail(ErrorCode::MalformedState, "deadlock at " + model.describe(s));
  DistributionBuilder<Marking> builder;
  for (const Transition& t : model.transitions) {
    if (is_enabled(t, s)) builder.add(fire(t, s), make_rational(Integer(t.weight), Integer(total)));
  }
  return std::move(builder).build();
}

std::optional<Marking> min_pre_transition(const Pvass& model, const Transition& t, const Marking& target_min) {
  (void)model;
  if (t.dst != target_min.control) return std::nullopt;
  Marking pre{t.src, std::vector<std::int64_t>(target_min.values.size(), 0)};
  for (std::size_t i = 0; i < pre.values.size(); ++i) {
    const std::int64_t op = t.op[i];
    pre.values[i] = std::max<std::int64_t>(target_min.values[i] - op, std::max<std::int64_t>(0, -op));
  }
  return pre;
}

UpwardTarget UpwardTarget::from_q_states(const Pvass& model, const std::set<ControlState>& q) {
  UpwardTarget target;
  for (ControlState s : q) {
    if (s >= model.num_states()) fail(ErrorCode::InvalidArgument, "target refers to an unknown control state");
    target.basis.insert(Marking{s, std::vector<std::int64_t>(model.num_vars(), 0)});
  }
  target.q_states = q;
  return target;
}

UpwardTarget UpwardTarget::from_basis(std::vector<Marking> minimal) {
  UpwardTarget target;
  for (Marking& m : minimal) target.basis.insert(std::move(m));
  return target;
}

std::string UpwardTarget::describe(const Pvass& model) const {
  std::string out;
  if (q_states) {
    out = "Q-states {";
    bool first = true;
    for (ControlState q : *q_states) {
      if (!first) out += ",";
      out += model.states[q];
      first = false;
    }
    return out + "}";
  }
  out = "up {";
  bool first = true;
  for (const Marking& m : basis.elements()) {
    if (!first) out += ", ";
    out += model.describe(m);
    first = false;
  }
  return out + "}";
}

SaturationResult<Marking, MarkingOrder> pre_star_upward(const Pvass& model, const UpwardTarget& target,
                                                        std::size_t limit) {
  // Transitions grouped by destination.
  std::vector<std::vector<const Transition*>> into(model.num_states());
  for (const Transition& t : model.transitions) into[t.dst].push_back(&t);
  auto min_pre = [&](const Marking& e) {
    std::vector<Marking> out;
    for (const Transition* t : into[e.control]) {
      if (auto p = min_pre_transition(model, *t, e)) out.push_back(std::move(*p));
    }
    return out;
  };
  return saturate_pre(target.basis, min_pre, limit);
}

const char* emptiness_certificate_name(EmptinessCertificate c) noexcept {
  switch (c) {
    case EmptinessCertificate::None: return "none";
    case EmptinessCertificate::InitialInSet: return "initial-in-set";
    case EmptinessCertificate::ControlUnreachable: return "karp-miller-control";
    case EmptinessCertificate::BoundedExhaustive: return "bounded-exhaustive";
  }
  return "none";
}

std::optional<std::vector<bool>> karp_miller_controls(const Pvass& model, const Marking& init,
                                                      std::size_t node_limit, bool* has_omega) {
  struct Node {
    Marking marking;
    std::size_t parent;
  };
  constexpr std::size_t kRoot = std::numeric_limits<std::size_t>::max();
  std::vector<Node> nodes{{init, kRoot}};
  std::vector<std::size_t> stack{0};
  std::vector<bool> seen(model.num_states(), false);
  bool omega = false;

  while (!stack.empty()) {
    std::size_t current = stack.back();
    stack.pop_back();
    const Marking m = nodes[current].marking;
    seen[m.control] = true;

    bool repeated = false;
    for (std::size_t a = nodes[current].parent; a != kRoot; a = nodes[a].parent) {
      if (nodes[a].marking == m) {
        repeated = true;
        break;
      }
    }
    if (repeated) continue;

    for (const Transition& t : model.transitions) {
      if (!is_enabled(t, m)) continue;
      Marking child = fire(t, m);
      for (std::size_t a = current; a != kRoot; a = nodes[a].parent) {
        const Marking& anc = nodes[a].marking;
        if (anc.control != child.control || !vector_leq(anc.values, child.values)) continue;
        for (std::size_t i = 0; i < child.values.size(); ++i) {
          if (anc.values[i] < child.values[i]) {
            child.values[i] = kOmega;
            omega = true;
          }
        }
      }
      if (nodes.size() >= node_limit) return std::nullopt;
      nodes.push_back({std::move(child), current});
      stack.push_back(nodes.size() - 1);
    }
  }
  if (has_omega) *has_omega = omega;
  return seen;
}

DownwardReachAnswer best_effort_reach_downward(const Pvass& model, const Marking& init,
                                               const MarkingSet& upward_complement, const SearchLimits& limits) {
  check_marking(model, init);
  auto in_downward = [&](const Marking& m) { return !upward_complement.covers(m); };

  if (in_downward(init)) {
    return {TriBool::holds("initial marking lies in the set"), {}, EmptinessCertificate::None};
  }

  // Control states whose zero valuation lies in the downward-closed set: the
  // set is nonempty exactly at these controls.
  std::vector<bool> bottoms(model.num_states(), false);
  bool any_bottom = false;
  for (std::size_t q = 0; q < model.num_states(); ++q) {
    Marking zero{static_cast<ControlState>(q), std::vector<std::int64_t>(model.num_vars(), 0)};
    bottoms[q] = in_downward(zero);
    any_bottom = any_bottom || bottoms[q];
  }
  if (!any_bottom) {
    return {TriBool::fails("the downward-closed set is empty"), {}, EmptinessCertificate::ControlUnreachable};
  }

  // Forward breadth-first search for a witness.
  struct Visit {
    std::size_t parent;
    std::size_t via;
  };
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::unordered_map<Marking, std::size_t> index{{init, 0}};
  std::vector<Marking> order{init};
  std::vector<Visit> visits{{kNone, kNone}};
  bool exhausted = true;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const Marking current = order[head];
    for (std::size_t ti = 0; ti < model.transitions.size(); ++ti) {
      const Transition& t = model.transitions[ti];
      if (!is_enabled(t, current)) continue;
      Marking next = fire(t, current);
      if (index.contains(next)) continue;
      if (order.size() >= limits.forward_states) {
        exhausted = false;
        break;
      }
      index.emplace(next, order.size());
      order.push_back(next);
      visits.push_back({head, ti});
      if (in_downward(next)) {
        std::vector<std::size_t> path;
        for (std::size_t at = order.size() - 1; visits[at].parent != kNone; at = visits[at].parent) {
          path.push_back(visits[at].via);
        }
        std::reverse(path.begin(), path.end());
        return {TriBool::holds("witness path of length " + std::to_string(path.size())), std::move(path),
                EmptinessCertificate::None};
      }
    }
    if (!exhausted) break;
  }
  if (exhausted) {
    return {TriBool::fails("reachable set enumerated exhaustively (" + std::to_string(order.size()) +
                           " markings)"),
            {},
            EmptinessCertificate::BoundedExhaustive};
  }

  if (auto controls = karp_miller_controls(model, init, limits.karp_miller_nodes)) {
    bool hit = false;
    for (std::size_t q = 0; q < model.num_states(); ++q) hit = hit || ((*controls)[q] && bottoms[q]);
    if (!hit) {
      return {TriBool::fails("no control state of the set occurs in the coverability tree"),
              {},
              EmptinessCertificate::ControlUnreachable};
    }
  }
  return {TriBool::unknown("downward-closed reachability not settled within search limits"), {},
          EmptinessCertificate::None};
}

const char* property_name(Property p) noexcept { return p == Property::Reach ? "reach" : "repeat"; }
const char* side_name(Side s) noexcept { return s == Side::One ? "one" : "zero"; }

Pvass cut_outgoing(const Pvass& model, const std::set<ControlState>& q) {
  Pvass cut = model;
  cut.transitions.clear();
  for (const Transition& t : model.transitions) {
    if (!q.contains(t.src)) cut.transitions.push_back(t);
  }
  for (ControlState s : q) cut.transitions.push_back({s, std::vector<int>(model.num_vars(), 0), s, 1});
  return cut;
}

TriBool qual_decide(const Pvass& model, const Marking& init, const UpwardTarget& target, QualQuery query,
                    const SearchLimits& limits) {
  check_marking(model, init);
  if (query.property == Property::Reach && query.side == Side::Zero) {
    auto pre = pre_star_upward(model, target);
    return pre.basis.covers(init) ? TriBool::fails("initial marking can reach the target")
                                  : TriBool::holds("initial marking is outside the predecessors of the target");
  }
  if (query.property == Property::Reach && query.side == Side::One) {
    if (!target.is_q_state_target()) {
      fail(ErrorCode::InvalidArgument,
           "NotQStateTarget: probability-one reachability is only decidable for Q-state targets");
    }
    Pvass cut = cut_outgoing(model, *target.q_states);
    auto pre = pre_star_upward(cut, target);
    auto answer = best_effort_reach_downward(cut, init, pre.basis, limits);
    TriBool verdict = answer.verdict.negated();
    verdict.reason = "unreachable(F) before F: " + answer.verdict.reason;
    return verdict;
  }
  if (query.property == Property::Repeat && query.side == Side::One) {
    auto pre = pre_star_upward(model, target);
    auto answer = best_effort_reach_downward(model, init, pre.basis, limits);
    TriBool verdict = answer.verdict.negated();
    verdict.reason = "reachability of unreachable(F): " + answer.verdict.reason;
    return verdict;
  }
  return TriBool::unknown(
      "open problem: deciding almost-sure avoidance of repeated reachability is not known to be decidable for "
      "PVASS (the chain need not be decisive w.r.t. unreachable(F))");
}

Rational coarseness_bound(const Pvass& model) {
  std::vector<std::uint64_t> min_w(model.num_states(), std::numeric_limits<std::uint64_t>::max());
  std::vector<std::uint64_t> sum_w(model.num_states(), 0);
  for (const Transition& t : model.transitions) {
    min_w[t.src] = std::min(min_w[t.src], t.weight);
    sum_w[t.src] += t.weight;
  }
  Rational beta(1);
  for (std::size_t q = 0; q < model.num_states(); ++q) {
    if (sum_w[q] == 0) continue;
    Rational ratio(Integer(min_w[q]), Integer(sum_w[q]));
    ratio.canonicalize();
    if (ratio < beta) beta = ratio;
  }
  return beta;
}

DecisivenessCertificate decisiveness_certificate(const Pvass& model, const UpwardTarget& target) {
  auto pre = pre_star_upward(model, target);
  return DecisivenessCertificate::globally_coarse(coarseness_bound(model), pre.rounds, target.describe(model));
}

Chain::Chain(const Pvass& model, UpwardTarget target) : model_(&model), target_(std::move(target)) {
  auto pre = pre_star_upward(model, target_);
  pre_star_ = std::move(pre.basis);
  span_ = pre.rounds;
}

ControlState MinskyGadget::intermediate(std::uint32_t k, std::uint32_t counter) const {
  return num_program_states + 2 * k + counter;
}

UpwardTarget MinskyGadget::err_target() const { return UpwardTarget::from_q_states(model, {err}); }

MinskyGadget build_minsky_gadget(const MinskyProgram& program, std::uint64_t x_num, std::uint64_t x_den) {
  const std::uint32_t n = program.num_states;
  if (n == 0 || program.start >= n || program.accept >= n) {
    fail(ErrorCode::InvalidArgument, "MalformedProgram: start/accept out of range");
  }
  if (x_num == 0 || x_den == 0) fail(ErrorCode::InvalidArgument, "MalformedProgram: x must be positive");
  std::vector<int> owner(n, -1);
  for (std::size_t i = 0; i < program.instructions.size(); ++i) {
    const auto& ins = program.instructions[i];
    if (ins.state >= n || ins.next >= n || ins.counter > 1 ||
        (ins.kind == MinskyInstruction::Kind::TestDecrement && ins.nonzero >= n)) {
      fail(ErrorCode::InvalidArgument, "MalformedProgram: instruction " + std::to_string(i) + " out of range");
    }
    if (ins.state == program.accept) {
      fail(ErrorCode::InvalidArgument, "MalformedProgram: the accepting state has an instruction");
    }
    if (owner[ins.state] != -1) {
      fail(ErrorCode::InvalidArgument, "MalformedProgram: state k" + std::to_string(ins.state) +
                                           " has more than one instruction");
    }
    owner[ins.state] = static_cast<int>(i);
  }
  for (std::uint32_t k = 0; k < n; ++k) {
    if (k != program.accept && owner[k] == -1) {
      fail(ErrorCode::InvalidArgument, "MalformedProgram: state k" + std::to_string(k) + " has no instruction");
    }
  }

  MinskyGadget gadget;
  gadget.num_program_states = n;
  Pvass& m = gadget.model;
  m.vars = {"c1", "c2"};
  for (std::uint32_t k = 0; k < n; ++k) m.states.push_back("k" + std::to_string(k));
  for (std::uint32_t k = 0; k < n; ++k) {
    m.states.push_back("k" + std::to_string(k) + "^1");
    m.states.push_back("k" + std::to_string(k) + "^2");
  }
  gadget.err = static_cast<ControlState>(m.states.size());
  m.states.push_back("err");

  auto unit = [](std::uint32_t counter, int delta) {
    std::vector<int> op(2, 0);
    op[counter] = delta;
    return op;
  };
  const std::vector<int> nop(2, 0);
  std::vector<bool> used_intermediate(2 * n, false);

  for (const auto& ins : program.instructions) {
    if (ins.kind == MinskyInstruction::Kind::Increment) {
      m.transitions.push_back({ins.state, unit(ins.counter, +1), ins.next, x_den});
      continue;
    }
    const ControlState mid = gadget.intermediate(ins.next, ins.counter);
    // alpha: faithful decrement; beta: guess "zero" (weight x).
    m.transitions.push_back({ins.state, unit(ins.counter, -1), ins.nonzero, x_den});
    m.transitions.push_back({ins.state, nop, mid, x_num});
    if (!used_intermediate[2 * ins.next + ins.counter]) {
      used_intermediate[2 * ins.next + ins.counter] = true;
      // gamma: continue at the zero branch; delta: wrong guess detected.
      m.transitions.push_back({mid, nop, ins.next, x_den});
      m.transitions.push_back({mid, unit(ins.counter, -1), gadget.err, x_den});
    }
  }
  m.transitions.push_back({program.accept, nop, program.accept, x_den});
  m.transitions.push_back({gadget.err, nop, gadget.err, x_den});
  // Intermediate states never targeted by a test are unreachable; give them a
  // self-loop so the model stays deadlock-free.
  for (std::uint32_t k = 0; k < n; ++k) {
    for (std::uint32_t c = 0; c < 2; ++c) {
      if (!used_intermediate[2 * k + c]) {
        const ControlState mid = gadget.intermediate(k, c);
        m.transitions.push_back({mid, nop, mid, 1});
      }
    }
  }
  m.initial = Marking{program.start, {0, 0}};
  validate(m);
  return gadget;
}

MinskyProgram make_infinitely_testing(const MinskyProgram& program) {
  // Each original instruction at state k now jumps to a fresh "bump" state
  // b(k') that increments c1, then to a test state t(k') that decrements it
  // again before continuing at k'.
  MinskyProgram out;
  const std::uint32_t n = program.num_states;
  out.num_states = 3 * n;
  out.start = program.start;
  out.accept = program.accept;
  auto bump = [n](std::uint32_t k) { return n + k; };
  auto test = [n](std::uint32_t k) { return 2 * n + k; };
  for (auto ins : program.instructions) {
    ins.next = bump(ins.next);
    if (ins.kind == MinskyInstruction::Kind::TestDecrement) ins.nonzero = bump(ins.nonzero);
    out.instructions.push_back(ins);
  }
  for (std::uint32_t k = 0; k < n; ++k) {
    out.instructions.push_back({MinskyInstruction::Kind::Increment, bump(k), 0, test(k), 0});
    out.instructions.push_back({MinskyInstruction::Kind::TestDecrement, test(k), 0, k, k});
  }
  return out;
}

}  // namespace decisive::pvass
