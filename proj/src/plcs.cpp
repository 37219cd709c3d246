#include "decisive/plcs.hpp"

#include <algorithm>
#include <map>

#include "decisive/error.hpp"

namespace decisive::plcs {

std::size_t hash_value(const Config& c) {
  std::size_t seed = std::hash<std::uint32_t>{}(c.control);
  for (const Word& w : c.channels) hash_combine(seed, std::hash<std::string>{}(w));
  return seed;
}

bool ConfigOrder::leq(const Config& a, const Config& b) const {
  if (a.control != b.control || a.channels.size() != b.channels.size()) return false;
  for (std::size_t i = 0; i < a.channels.size(); ++i) {
    if (!subword_leq(a.channels[i], b.channels[i])) return false;
  }
  return true;
}

std::optional<ControlState> Plcs::find_state(const std::string& name) const {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) return std::nullopt;
  return static_cast<ControlState>(it - states.begin());
}

std::string Plcs::render_word(const Word& w) const {
  const bool compact = std::all_of(messages.begin(), messages.end(), [](const std::string& m) { return m.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto idx = static_cast<unsigned char>(w[i]);
    if (!compact && i > 0) out += ' ';
    out += idx < messages.size() ? messages[idx] : "?";
  }
  return out;
}

std::string Plcs::describe(const Config& c) const {
  std::string out = c.control < states.size() ? states[c.control] : "?";
  out += "(";
  for (std::size_t i = 0; i < c.channels.size(); ++i) {
    if (i > 0) out += ",";
    out += (i < channels.size() ? channels[i] : "c" + std::to_string(i)) + "=\"" + render_word(c.channels[i]) + "\"";
  }
  return out + ")";
}

void check_config(const Plcs& model, const Config& c) {
  if (c.control >= model.num_states()) fail(ErrorCode::MalformedState, "configuration has unknown control state");
  if (c.channels.size() != model.num_channels()) fail(ErrorCode::MalformedState, "configuration has wrong channel count");
  for (const Word& w : c.channels) {
    for (char m : w) {
      if (static_cast<unsigned char>(m) >= model.messages.size()) {
        fail(ErrorCode::MalformedState, "configuration holds an undeclared message");
      }
    }
  }
}

void validate(Plcs& model, const ValidationOptions& options) {
  if (model.states.empty()) fail(ErrorCode::ValidationError, "plcs: no control states");
  if (model.lambda <= 0 || model.lambda >= 1) {
    fail(ErrorCode::ValidationError, "plcs: loss rate λ must satisfy 0<λ<1 (got " + to_fraction(model.lambda) + ")");
  }
  if (model.messages.size() > 255) fail(ErrorCode::ValidationError, "plcs: at most 255 messages are supported");
  const std::size_t n = model.num_states();
  std::vector<bool> safe(n, false);
  for (std::size_t i = 0; i < model.transitions.size(); ++i) {
    const Transition& t = model.transitions[i];
    const std::string where = "plcs: transition " + std::to_string(i + 1);
    if (t.src >= n || t.dst >= n) fail(ErrorCode::ValidationError, where + " refers to an unknown state");
    if (t.weight == 0) fail(ErrorCode::ValidationError, where + " has weight 0 (weights must be positive)");
    if (t.op.kind != Op::Kind::Nop &&
        (t.op.channel >= model.num_channels() || t.op.message >= model.messages.size())) {
      fail(ErrorCode::ValidationError, where + " uses an unknown channel or message");
    }
    if (t.op.kind != Op::Kind::Recv) safe[t.src] = true;
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (safe[q]) continue;
    if (!options.auto_selfloop) {
      fail(ErrorCode::ValidationError, "plcs: control state '" + model.states[q] +
                                           "' may deadlock (only receive transitions); "
                                           "add a nop self-loop or enable auto-selfloop");
    }
    model.transitions.push_back({static_cast<ControlState>(q), Op{}, static_cast<ControlState>(q), 1});
  }
  try {
    check_config(model, model.initial);
  } catch (const Error& e) {
    fail(ErrorCode::ValidationError, std::string("plcs: initial ") + e.what());
  }
}

bool is_enabled(const Transition& t, const Config& c) {
  if (t.src != c.control) return false;
  if (t.op.kind != Op::Kind::Recv) return true;
  const Word& w = c.channels[t.op.channel];
  return !w.empty() && static_cast<unsigned char>(w.front()) == t.op.message;
}

Config apply(const Transition& t, const Config& c) {
  Config next = c;
  next.control = t.dst;
  switch (t.op.kind) {
    case Op::Kind::Nop: break;
    case Op::Kind::Send: next.channels[t.op.channel].push_back(static_cast<char>(t.op.message)); break;
    case Op::Kind::Recv: next.channels[t.op.channel].erase(0, 1); break;
  }
  return next;
}

namespace {

// For one channel: every subword obtainable by deletions together with the
// number of deletion sets producing it.
std::map<Word, Integer> subword_counts(const Word& w) {
  std::map<Word, Integer> counts{{Word{}, Integer(1)}};
  for (char ch : w) {
    std::map<Word, Integer> next;
    for (const auto& [kept, ways] : counts) {
      next[kept + ch] += ways;
      next[kept] += ways;
    }
    counts = std::move(next);
  }
  return counts;
}

}  // namespace

Distribution<Config> loss_distribution(const Config& cfg, const Rational& lambda) {
  std::size_t total = 0;
  for (const Word& w : cfg.channels) total += w.size();
  const Rational keep = Rational(1) - lambda;
  std::vector<Rational> lose_pow(total + 1), keep_pow(total + 1);
  lose_pow[0] = 1;
  keep_pow[0] = 1;
  for (std::size_t i = 1; i <= total; ++i) {
    lose_pow[i] = lose_pow[i - 1] * lambda;
    keep_pow[i] = keep_pow[i - 1] * keep;
  }

  // Cartesian product over channels of (kept word, ways, kept count).
  struct Partial {
    std::vector<Word> channels;
    Integer ways;
    std::size_t kept;
  };
  std::vector<Partial> partials{{{}, Integer(1), 0}};
  for (const Word& w : cfg.channels) {
    auto counts = subword_counts(w);
    std::vector<Partial> next;
    next.reserve(partials.size() * counts.size());
    for (const Partial& p : partials) {
      for (const auto& [kept, ways] : counts) {
        Partial q{p.channels, p.ways * ways, p.kept + kept.size()};
        q.channels.push_back(kept);
        next.push_back(std::move(q));
      }
    }
    partials = std::move(next);
  }

  DistributionBuilder<Config> builder;
  for (Partial& p : partials) {
    Rational prob = Rational(p.ways) * lose_pow[total - p.kept] * keep_pow[p.kept];
    builder.add(Config{cfg.control, std::move(p.channels)}, prob);
  }
  return std::move(builder).build();
}

Distribution<Config> step_distribution(const Plcs& model, const Config& cfg) {
  check_config(model, cfg);
  std::uint64_t total = 0;
  for (const Transition& t : model.transitions) {
    if (is_enabled(t, cfg)) total += t.weight;
  }
  if (total == 0) fail(ErrorCode::MalformedState, "deadlock at " + model.describe(cfg));
  DistributionBuilder<Config> builder;
  for (const Transition& t : model.transitions) {
    if (!is_enabled(t, cfg)) continue;
    const Rational pt = make_rational(Integer(t.weight), Integer(total));
    for (auto& [after, pl] : loss_distribution(apply(t, cfg), model.lambda).entries) {
      builder.add(std::move(after), pt * pl);
    }
  }
  return std::move(builder).build();
}

std::optional<Config> min_pre_lcs(const Plcs& model, const Transition& t, const Config& target_min) {
  (void)model;
  if (t.dst != target_min.control) return std::nullopt;
  Config pre = target_min;
  pre.control = t.src;
  switch (t.op.kind) {
    case Op::Kind::Nop: break;
    case Op::Kind::Recv:
      pre.channels[t.op.channel].insert(pre.channels[t.op.channel].begin(), static_cast<char>(t.op.message));
      break;
    case Op::Kind::Send: {
      Word& w = pre.channels[t.op.channel];
      // Otherwise the sent message was lost and the channel is unchanged.
      if (!w.empty() && static_cast<unsigned char>(w.back()) == t.op.message) w.pop_back();
      break;
    }
  }
  return pre;
}

UpwardTarget UpwardTarget::from_q_states(const Plcs& model, const std::set<ControlState>& q) {
  UpwardTarget target;
  target.basis = q_state_basis(model, q);
  target.q_states = q;
  return target;
}

UpwardTarget UpwardTarget::from_basis(std::vector<Config> minimal) {
  UpwardTarget target;
  for (Config& c : minimal) target.basis.insert(std::move(c));
  return target;
}

std::string UpwardTarget::describe(const Plcs& model) const {
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
  for (const Config& c : basis.elements()) {
    if (!first) out += ", ";
    out += model.describe(c);
    first = false;
  }
  return out + "}";
}

ConfigSet q_state_basis(const Plcs& model, const std::set<ControlState>& q) {
  ConfigSet basis;
  for (ControlState s : q) {
    if (s >= model.num_states()) fail(ErrorCode::InvalidArgument, "target refers to an unknown control state");
    basis.insert(Config{s, std::vector<Word>(model.num_channels())});
  }
  return basis;
}

namespace {

template <class Filter>
SaturationResult<Config, ConfigOrder> saturate_filtered(const Plcs& model, const ConfigSet& basis, Filter keep,
                                                        std::size_t limit) {
  std::vector<std::vector<const Transition*>> into(model.num_states());
  for (const Transition& t : model.transitions) into[t.dst].push_back(&t);
  auto min_pre = [&](const Config& e) {
    std::vector<Config> out;
    for (const Transition* t : into[e.control]) {
      if (auto p = min_pre_lcs(model, *t, e); p && keep(*p)) out.push_back(std::move(*p));
    }
    return out;
  };
  return saturate_pre(basis, min_pre, limit);
}

}  // namespace

SaturationResult<Config, ConfigOrder> pre_star(const Plcs& model, const ConfigSet& basis, std::size_t limit) {
  return saturate_filtered(model, basis, [](const Config&) { return true; }, limit);
}

std::set<ControlState> bottom_states(const Plcs& model, const ConfigSet& basis) {
  std::set<ControlState> out;
  for (std::size_t q = 0; q < model.num_states(); ++q) {
    Config bottom{static_cast<ControlState>(q), std::vector<Word>(model.num_channels())};
    if (!basis.covers(bottom)) out.insert(static_cast<ControlState>(q));
  }
  return out;
}

ConfigSet avoid_before_target(const Plcs& model, const UpwardTarget& target) {
  // In lossy semantics F~ (downward-closed) is reachable while avoiding F iff
  // ↑F~ is: surplus messages can be dropped first, and F~ never meets F. The
  // fixpoint therefore starts from the bottoms of F~ and stays upward-closed.
  // A minimal predecessor inside F has its whole upward closure inside F, so
  // filtering minimal elements realises ↑(Pre(X) \ F).
  const auto pre_target = pre_star(model, target.basis);
  const ConfigSet seed = q_state_basis(model, bottom_states(model, pre_target.basis));
  return saturate_filtered(model, seed, [&](const Config& c) { return !target.contains(c); }, kDefaultBasisLimit)
      .basis;
}

TriBool qual_decide(const Plcs& model, const Config& init, const UpwardTarget& target, QualQuery query) {
  check_config(model, init);
  if (query.property == Property::Reach && query.side == Side::Zero) {
    const auto pre = pre_star(model, target.basis);
    return pre.basis.covers(init) ? TriBool::fails("the target is coverable from the initial configuration")
                                  : TriBool::holds("the target is not coverable from the initial configuration");
  }
  if (query.property == Property::Reach && query.side == Side::One) {
    const ConfigSet x = avoid_before_target(model, target);
    return x.covers(init) ? TriBool::fails("unreachable(F) can be reached before F")
                          : TriBool::holds("unreachable(F) cannot be reached before F");
  }

  const auto pre_target = pre_star(model, target.basis);
  const auto q_err = bottom_states(model, pre_target.basis);
  const auto pre_avoid = pre_star(model, q_state_basis(model, q_err));
  if (query.side == Side::One) {
    return pre_avoid.basis.covers(init) ? TriBool::fails("unreachable(F) is reachable")
                                        : TriBool::holds("unreachable(F) is not reachable");
  }
  const auto q_avoid2 = bottom_states(model, pre_avoid.basis);
  const auto pre_avoid2 = pre_star(model, q_state_basis(model, q_avoid2));
  return pre_avoid2.basis.covers(init) ? TriBool::fails("unreachable(unreachable(F)) is reachable")
                                       : TriBool::holds("unreachable(unreachable(F)) is not reachable");
}

DecisivenessCertificate certificate(const Plcs& model, const UpwardTarget& target) {
  return DecisivenessCertificate::finite_attractor(
      "lossy channel chains reach the finite set of empty-channel configurations with probability 1, "
      "so they are decisive w.r.t. every set",
      target.describe(model));
}

Chain::Chain(const Plcs& model, UpwardTarget target) : model_(&model), target_(std::move(target)) {
  pre_target_ = pre_star(model, target_.basis).basis;
  pre_avoid_ = pre_star(model, q_state_basis(model, bottom_states(model, pre_target_))).basis;
}

Distribution<State> Chain::successors(const State& s) const {
  Distribution<Config> inner =
      s.before_loss ? loss_distribution(s.config, model_->lambda) : step_distribution(*model_, s.config);
  Distribution<State> out;
  out.entries.reserve(inner.entries.size());
  for (auto& [c, p] : inner.entries) out.entries.emplace_back(State{std::move(c), false}, std::move(p));
  return out;
}

std::string Chain::describe(const State& s) const {
  return (s.before_loss ? "pre-loss " : "") + model_->describe(s.config);
}

}  // namespace decisive::plcs
