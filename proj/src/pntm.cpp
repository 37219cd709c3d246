#include "decisive/pntm.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>

#include "decisive/error.hpp"

namespace decisive::pntm {

namespace {

// Transitions grouped by (control state, read vector).
std::vector<const Transition*> matching(const Pntm& model, ControlState control, const ReadVector& read) {
  std::vector<const Transition*> out;
  for (const Transition& t : model.transitions) {
    if (t.src == control && t.read == read) out.push_back(&t);
  }
  return out;
}

// Calls f(read vector) for every vector in Gamma^M.
template <class F>
void for_each_read_vector(std::size_t alphabet, std::size_t tapes, F&& f) {
  ReadVector v(tapes, 0);
  while (true) {
    f(v);
    std::size_t i = 0;
    while (i < tapes) {
      if (++v[i] < alphabet) break;
      v[i] = 0;
      ++i;
    }
    if (i == tapes) return;
  }
}

std::string render_read(const Pntm& model, const ReadVector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ",";
    out += v[i] < model.gamma.size() ? std::string(1, model.gamma[v[i]]) : "?";
  }
  return out;
}

}  // namespace

std::size_t hash_value(const State& s) {
  std::size_t seed = std::hash<std::uint32_t>{}(s.control);
  hash_combine(seed, std::hash<std::uint64_t>{}(s.time));
  for (const TapeConfig& t : s.tapes) {
    hash_combine(seed, std::hash<std::int64_t>{}(t.head));
    hash_combine(seed, std::hash<std::int64_t>{}(t.origin));
    for (Symbol c : t.cells) hash_combine(seed, c);
    for (std::uint64_t st : t.stamps) hash_combine(seed, std::hash<std::uint64_t>{}(st));
  }
  return seed;
}

std::optional<ControlState> Pntm::find_state(const std::string& name) const {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) return std::nullopt;
  return static_cast<ControlState>(it - states.begin());
}

std::optional<Symbol> Pntm::find_symbol(char c) const {
  auto it = std::find(gamma.begin(), gamma.end(), c);
  if (it == gamma.end()) return std::nullopt;
  return static_cast<Symbol>(it - gamma.begin());
}

Symbol Pntm::blank() const {
  auto b = find_symbol('#');
  if (!b) fail(ErrorCode::ValidationError, "pntm: tape alphabet lacks the blank '#'");
  return *b;
}

std::string Pntm::describe(const State& s) const {
  std::string out = s.control < states.size() ? states[s.control] : "?" + std::to_string(s.control);
  out += "@t=" + std::to_string(s.time);
  for (const TapeConfig& tape : s.tapes) {
    out += " [";
    for (std::size_t i = 0; i < tape.cells.size(); ++i) {
      if (i == tape.head_index()) out += "^";
      out += tape.cells[i] < gamma.size() ? gamma[tape.cells[i]] : '?';
      out += ":" + std::to_string(tape.stamps[i]);
      if (i + 1 < tape.cells.size()) out += " ";
    }
    out += "]";
  }
  return out;
}

void validate(Pntm& model, const ValidationOptions& options) {
  if (model.states.empty()) fail(ErrorCode::ValidationError, "pntm: no control states");
  if (model.tapes == 0) fail(ErrorCode::ValidationError, "pntm: at least one tape is required");
  if (model.epsilon <= 0 || model.epsilon >= 1) fail(ErrorCode::ValidationError, "pntm: eps must satisfy 0<eps<1");
  if (model.gamma.empty() || model.gamma.size() > 255) {
    fail(ErrorCode::ValidationError, "pntm: tape alphabet must have between 1 and 255 symbols");
  }
  (void)model.blank();
  for (char c : model.sigma) {
    if (!model.find_symbol(c)) {
      fail(ErrorCode::ValidationError, std::string("pntm: input symbol '") + c + "' is not in the tape alphabet");
    }
  }
  const std::size_t n = model.num_states();
  const std::size_t m = model.tapes;
  for (std::size_t i = 0; i < model.transitions.size(); ++i) {
    const Transition& t = model.transitions[i];
    const std::string where = "pntm: transition " + std::to_string(i + 1);
    if (t.src >= n || t.dst >= n) fail(ErrorCode::ValidationError, where + " refers to an unknown state");
    if (t.weight == 0) fail(ErrorCode::ValidationError, where + " has weight 0 (weights must be positive)");
    if (t.read.size() != m || t.write.size() != m || t.moves.size() != m) {
      fail(ErrorCode::ValidationError, where + " does not match the tape count");
    }
    for (std::size_t k = 0; k < m; ++k) {
      if (t.read[k] >= model.gamma.size() || t.write[k] >= model.gamma.size()) {
        fail(ErrorCode::ValidationError, where + " uses a symbol outside the tape alphabet");
      }
      if (t.moves[k] < -1 || t.moves[k] > 1) fail(ErrorCode::ValidationError, where + " has a move outside -1..+1");
    }
  }

  std::map<std::pair<ControlState, ReadVector>, bool> present;
  for (const Transition& t : model.transitions) present[{t.src, t.read}] = true;
  std::vector<Transition> added;
  for (std::size_t q = 0; q < n; ++q) {
    for_each_read_vector(model.gamma.size(), m, [&](const ReadVector& v) {
      if (present.count({static_cast<ControlState>(q), v})) return;
      if (!options.auto_total) {
        fail(ErrorCode::ValidationError, "pntm: not total, no transition for state '" + model.states[q] +
                                             "' reading " + render_read(model, v) +
                                             "; add one or enable auto-total");
      }
      added.push_back({static_cast<ControlState>(q), v, static_cast<ControlState>(q), v, std::vector<int>(m, 0), 1});
    });
  }
  model.transitions.insert(model.transitions.end(), added.begin(), added.end());
  check_state(model, model.initial);
}

void check_state(const Pntm& model, const State& s) {
  if (s.control >= model.num_states()) fail(ErrorCode::MalformedState, "pntm state has unknown control state");
  if (s.tapes.size() != model.tapes) fail(ErrorCode::MalformedState, "pntm state has wrong tape count");
  for (const TapeConfig& t : s.tapes) {
    if (t.cells.size() != t.stamps.size()) fail(ErrorCode::MalformedState, "pntm tape has mismatched stamps");
    if (t.head < t.origin || t.head >= t.origin + static_cast<std::int64_t>(t.cells.size())) {
      fail(ErrorCode::MalformedState, "pntm head lies outside the visited region");
    }
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
      if (t.cells[i] >= model.gamma.size()) fail(ErrorCode::MalformedState, "pntm tape holds an unknown symbol");
      if (t.stamps[i] > s.time) fail(ErrorCode::MalformedState, "pntm stamp lies in the future");
    }
  }
}

State make_initial(const Pntm& model, ControlState control, const std::vector<std::vector<Symbol>>& contents,
                   const std::vector<std::int64_t>& heads) {
  State s;
  s.control = control;
  s.time = 1;
  const Symbol blank = model.blank();
  for (std::size_t i = 0; i < model.tapes; ++i) {
    TapeConfig tape;
    tape.cells = i < contents.size() ? contents[i] : std::vector<Symbol>{};
    tape.head = i < heads.size() ? heads[i] : 0;
    tape.origin = 0;
    if (tape.cells.empty()) tape.cells.push_back(blank);
    // Positions are relative; a head left of the input shifts everything.
    while (tape.head < 0) {
      tape.cells.insert(tape.cells.begin(), blank);
      ++tape.head;
    }
    while (tape.head >= tape.origin + static_cast<std::int64_t>(tape.cells.size())) tape.cells.push_back(blank);
    tape.stamps.assign(tape.cells.size(), 0);
    s.tapes.push_back(std::move(tape));
  }
  return s;
}

Rational read_probability(const Rational& epsilon, std::size_t alphabet, std::uint64_t gap, bool same_symbol) {
  const Rational stay = pow(Rational(1) - epsilon, static_cast<unsigned long>(gap));
  Rational p = (Rational(1) - stay) / Rational(static_cast<unsigned long>(alphabet));
  if (same_symbol) p += stay;
  return p;
}

Distribution<ReadVector> noise_distribution(const Pntm& model, const State& s) {
  const std::size_t alphabet = model.gamma.size();
  // Per tape marginal over the alphabet.
  std::vector<std::vector<Rational>> marginal(s.tapes.size());
  for (std::size_t i = 0; i < s.tapes.size(); ++i) {
    const TapeConfig& tape = s.tapes[i];
    const std::size_t h = tape.head_index();
    const std::uint64_t gap = s.time - tape.stamps[h];
    const Rational other = read_probability(model.epsilon, alphabet, gap, false);
    const Rational same = read_probability(model.epsilon, alphabet, gap, true);
    marginal[i].assign(alphabet, other);
    marginal[i][tape.cells[h]] = same;
  }
  DistributionBuilder<ReadVector, ReadVectorHash> builder;
  for_each_read_vector(alphabet, s.tapes.size(), [&](const ReadVector& v) {
    Rational p(1);
    for (std::size_t i = 0; i < v.size() && p != 0; ++i) p *= marginal[i][v[i]];
    builder.add(v, p);
  });
  return std::move(builder).build();
}

Distribution<State> step_distribution(const Pntm& model, const State& s) {
  check_state(model, s);
  const Symbol blank = model.blank();
  DistributionBuilder<State> builder;
  for (const auto& [read, p_read] : noise_distribution(model, s).entries) {
    auto options = matching(model, s.control, read);
    if (options.empty()) {
      fail(ErrorCode::MalformedState, "pntm: no transition for state '" + model.states[s.control] + "' reading " +
                                          render_read(model, read));
    }
    std::uint64_t total = 0;
    for (const Transition* t : options) total += t->weight;
    for (const Transition* t : options) {
      State next = s;
      next.control = t->dst;
      for (std::size_t i = 0; i < next.tapes.size(); ++i) {
        TapeConfig& tape = next.tapes[i];
        const std::size_t h = tape.head_index();
        tape.cells[h] = t->write[i];
        tape.stamps[h] = s.time;
        tape.head += t->moves[i];
        if (tape.head < tape.origin) {
          tape.cells.insert(tape.cells.begin(), blank);
          tape.stamps.insert(tape.stamps.begin(), 0);
          --tape.origin;
        } else if (tape.head >= tape.origin + static_cast<std::int64_t>(tape.cells.size())) {
          tape.cells.push_back(blank);
          tape.stamps.push_back(0);
        }
      }
      next.time = s.time + 1;
      builder.add(std::move(next), p_read * make_rational(Integer(t->weight), Integer(total)));
    }
  }
  return std::move(builder).build();
}

ControlGraph ControlGraph::of(const Pntm& model) {
  std::vector<std::pair<ControlState, ControlState>> edges;
  for (const Transition& t : model.transitions) edges.emplace_back(t.src, t.dst);
  return from_edges(model.num_states(), edges);
}

ControlGraph ControlGraph::from_edges(std::size_t nodes, const std::vector<std::pair<ControlState, ControlState>>& edges) {
  ControlGraph g;
  g.nodes = nodes;
  g.succ.assign(nodes, {});
  g.pred.assign(nodes, {});
  for (auto [a, b] : edges) {
    if (a >= nodes || b >= nodes) fail(ErrorCode::InvalidArgument, "control graph edge refers to an unknown node");
    if (g.has_edge(a, b)) continue;
    g.succ[a].push_back(b);
    g.pred[b].push_back(a);
  }
  return g;
}

bool ControlGraph::has_edge(ControlState a, ControlState b) const {
  return std::find(succ[a].begin(), succ[a].end(), b) != succ[a].end();
}

NodeSet ef(const ControlGraph& g, const NodeSet& q) { return exists_until(g, NodeSet(g.nodes, false), q); }

NodeSet not_ef(const ControlGraph& g, const NodeSet& q) {
  NodeSet out = ef(g, q);
  out.flip();
  return out;
}

NodeSet exists_until(const ControlGraph& g, const NodeSet& avoid, const NodeSet& reach) {
  if (avoid.size() != g.nodes || reach.size() != g.nodes) {
    fail(ErrorCode::InvalidArgument, "node set size does not match the control graph");
  }
  NodeSet out(g.nodes, false);
  std::deque<ControlState> queue;
  for (std::size_t v = 0; v < g.nodes; ++v) {
    if (reach[v]) {
      out[v] = true;
      queue.push_back(static_cast<ControlState>(v));
    }
  }
  while (!queue.empty()) {
    ControlState v = queue.front();
    queue.pop_front();
    for (ControlState p : g.pred[v]) {
      if (out[p] || avoid[p]) continue;
      out[p] = true;
      queue.push_back(p);
    }
  }
  return out;
}

NodeSet ag_ef(const ControlGraph& g, const NodeSet& q) {
  NodeSet out = ef(g, not_ef(g, q));
  out.flip();
  return out;
}

NodeSet graph_query(const ControlGraph& g, const GraphQuery& query) {
  switch (query.kind) {
    case GraphQuery::Kind::EF: return ef(g, query.q);
    case GraphQuery::Kind::NotEF: return not_ef(g, query.q);
    case GraphQuery::Kind::ExistsUntil: return exists_until(g, query.avoid, query.q);
    case GraphQuery::Kind::AGEF: return ag_ef(g, query.q);
  }
  fail(ErrorCode::Internal, "unknown graph query");
}

NodeSet to_node_set(std::size_t nodes, const std::set<ControlState>& q) {
  NodeSet out(nodes, false);
  for (ControlState s : q) {
    if (s >= nodes) fail(ErrorCode::InvalidArgument, "target refers to an unknown control state");
    out[s] = true;
  }
  return out;
}

TriBool qual_decide(const Pntm& model, const State& init, const std::set<ControlState>& q, QualQuery query) {
  check_state(model, init);
  const ControlGraph g = ControlGraph::of(model);
  const NodeSet target = to_node_set(g.nodes, q);
  const NodeSet avoid = not_ef(g, target);
  const ControlState c = init.control;
  if (query.property == Property::Reach) {
    if (query.side == Side::Zero) {
      return TriBool::from_bool(!ef(g, target)[c], "EF Q checked on the control graph");
    }
    return TriBool::from_bool(!exists_until(g, target, avoid)[c],
                              "no path into NOT-EF Q that avoids Q on the control graph");
  }
  if (query.side == Side::One) {
    return TriBool::from_bool(ag_ef(g, target)[c], "AG EF Q checked on the control graph");
  }
  const NodeSet avoid2 = not_ef(g, avoid);
  return TriBool::from_bool(!ef(g, avoid2)[c], "EF NOT-EF NOT-EF Q checked on the control graph");
}

DecisivenessCertificate certificate(const Pntm& model) {
  std::uint64_t w_min = std::numeric_limits<std::uint64_t>::max();
  std::map<std::pair<ControlState, ReadVector>, std::uint64_t> group;
  for (const Transition& t : model.transitions) {
    w_min = std::min(w_min, t.weight);
    group[{t.src, t.read}] += t.weight;
  }
  if (group.empty()) fail(ErrorCode::ValidationError, "pntm: no transitions");
  std::uint64_t w_max = 0;
  for (const auto& [key, w] : group) w_max = std::max(w_max, w);
  const Rational noise = model.epsilon / Rational(static_cast<unsigned long>(model.gamma.size()));
  const Rational beta = pow(noise, static_cast<unsigned long>(model.tapes)) *
                        make_rational(Integer(static_cast<unsigned long>(w_min)), Integer(static_cast<unsigned long>(w_max)));
  return DecisivenessCertificate::globally_coarse(beta, model.num_states(), "control-state target");
}

Chain::Chain(const Pntm& model, std::set<ControlState> q, ChainOptions options)
    : model_(&model), options_(options) {
  const ControlGraph g = ControlGraph::of(model);
  target_ = to_node_set(g.nodes, q);
  avoid_ = not_ef(g, target_);
  avoid2_ = not_ef(g, avoid_);
  if (options_.canonical_gaps && options_.gap_cap == 0) {
    fail(ErrorCode::InvalidArgument, "gap cap must be positive");
  }
}

State Chain::initial() const { return normalise(model_->initial); }

Distribution<State> Chain::successors(const State& s) const {
  Distribution<State> raw = step_distribution(*model_, s);
  if (!options_.canonical_gaps) return raw;
  DistributionBuilder<State> builder;
  for (auto& [next, p] : raw.entries) builder.add(normalise(std::move(next)), p);
  return std::move(builder).build();
}

State Chain::normalise(State s) const {
  if (!options_.canonical_gaps) return s;
  const std::uint64_t cap = options_.gap_cap;
  for (TapeConfig& tape : s.tapes) {
    for (std::uint64_t& stamp : tape.stamps) {
      const std::uint64_t gap = std::min(s.time - stamp, cap);
      stamp = cap - gap;
    }
    tape.head -= tape.origin;
    tape.origin = 0;
  }
  s.time = cap;
  return s;
}

}  // namespace decisive::pntm
