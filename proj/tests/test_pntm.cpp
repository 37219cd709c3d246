#include <doctest.h>

#include <deque>
#include <random>

#include "decisive/error.hpp"
#include "decisive/oracle.hpp"
#include "decisive/pntm.hpp"
#include "support.hpp"

using namespace decisive;
using namespace decisive::pntm;

namespace {

constexpr Symbol A = 0;
constexpr Symbol BLANK = 1;

// Gamma = {a, #}, one tape, every (state, read) row a stay-put rewrite.
Pntm stay_machine(std::vector<std::string> states, Rational eps = Rational(1, 2)) {
  Pntm m;
  m.states = std::move(states);
  m.gamma = {'a', '#'};
  m.sigma = {'a'};
  m.tapes = 1;
  m.epsilon = eps;
  for (ControlState s = 0; s < m.states.size(); ++s) {
    for (Symbol r : {A, BLANK}) m.transitions.push_back({s, {r}, s, {r}, {0}, 1});
  }
  m.initial = make_initial(m, 0, {{A}}, {0});
  return m;
}

State with_gap(const Pntm& m, Symbol current, std::uint64_t gap) {
  State s = make_initial(m, 0, {{current}}, {0});
  s.time = 1 + gap;
  s.tapes[0].stamps[0] = 1;
  return s;
}

}  // namespace

TEST_CASE("read probabilities") {
  CHECK(read_probability(Rational(1, 2), 2, 1, true) == Rational(3, 4));
  CHECK(read_probability(Rational(1, 2), 2, 1, false) == Rational(1, 4));
  CHECK(read_probability(Rational(1, 2), 2, 0, true) == 1);
  CHECK(read_probability(Rational(1, 2), 2, 0, false) == 0);
  CHECK(read_probability(Rational(1, 3), 3, 2, false) == Rational(5, 27));
}

TEST_CASE("noise distribution examples") {
  Pntm m = stay_machine({"s"});
  validate(m);
  const auto fresh = noise_distribution(m, with_gap(m, A, 0));
  REQUIRE(fresh.size() == 1);
  CHECK(fresh.probability_of({A}) == 1);

  const auto one = noise_distribution(m, with_gap(m, A, 1));
  CHECK(one.probability_of({A}) == Rational(3, 4));
  CHECK(one.probability_of({BLANK}) == Rational(1, 4));

  Pntm two = stay_machine({"s"});
  two.tapes = 2;
  two.transitions.clear();
  for (Symbol r0 : {A, BLANK}) {
    for (Symbol r1 : {A, BLANK}) two.transitions.push_back({0, {r0, r1}, 0, {r0, r1}, {0, 0}, 1});
  }
  two.initial = make_initial(two, 0, {{A}, {A}}, {0, 0});
  validate(two);
  State s = two.initial;
  s.time = 2;
  s.tapes[0].stamps[0] = 1;
  s.tapes[1].stamps[0] = 1;
  const auto joint = noise_distribution(two, s);
  CHECK(joint.size() == 4);
  CHECK(joint.probability_of({A, A}) == Rational(9, 16));
  CHECK(joint.probability_of({A, BLANK}) == Rational(3, 16));
  CHECK(joint.probability_of({BLANK, A}) == Rational(3, 16));
  CHECK(joint.probability_of({BLANK, BLANK}) == Rational(1, 16));
}

TEST_CASE("initial state starts at time 1 with input stamps 0") {
  Pntm m = stay_machine({"s"});
  const State s = make_initial(m, 0, {{A, A}}, {-1});
  CHECK(s.time == 1);
  REQUIRE(s.tapes[0].cells.size() == 3);
  CHECK(s.tapes[0].cells[0] == BLANK);
  CHECK(s.tapes[0].head_index() == 0);
  for (auto stamp : s.tapes[0].stamps) CHECK(stamp == 0);
}

TEST_CASE("deterministic step without noise") {
  Pntm m = stay_machine({"s"});
  m.transitions[0] = {0, {A}, 0, {A}, {+1}, 1};
  validate(m);
  State s = make_initial(m, 0, {{A}}, {0});
  s.time = 1;
  s.tapes[0].stamps[0] = 1;
  const auto d = step_distribution(m, s);
  REQUIRE(d.size() == 1);
  const State& next = d.entries[0].first;
  CHECK(next.time == 2);
  CHECK(next.tapes[0].head == 1);
  REQUIRE(next.tapes[0].cells.size() == 2);
  CHECK(next.tapes[0].cells[1] == BLANK);
  CHECK(next.tapes[0].stamps[1] == 0);
  CHECK(next.tapes[0].stamps[0] == 1);
}

TEST_CASE("step with noise and stay-put transitions") {
  Pntm m = stay_machine({"s"});
  validate(m);
  const auto d = step_distribution(m, with_gap(m, A, 1));
  CHECK(d.size() == 2);
  CHECK(d.total() == 1);
  for (const auto& [next, p] : d.entries) {
    CHECK(next.tapes[0].stamps[0] == 2);
    CHECK(next.time == 3);
    CHECK(p == (next.tapes[0].cells[0] == A ? Rational(3, 4) : Rational(1, 4)));
  }
}

TEST_CASE("weights split each noise outcome") {
  Pntm m = stay_machine({"s", "t", "u"});
  m.transitions.push_back({0, {A}, 1, {A}, {0}, 1});
  m.transitions.push_back({0, {A}, 2, {A}, {0}, 3});
  m.transitions.erase(m.transitions.begin());  // drop the s/a stay-put
  validate(m);
  State s = make_initial(m, 0, {{A}}, {0});
  s.tapes[0].stamps[0] = 1;  // gap 0: no noise
  const auto d = step_distribution(m, s);
  REQUIRE(d.size() == 2);
  for (const auto& [next, p] : d.entries) CHECK(p == (next.control == 1 ? Rational(1, 4) : Rational(3, 4)));
}

TEST_CASE("totality is enforced") {
  Pntm m = stay_machine({"s", "t"});
  m.transitions.pop_back();
  try {
    validate(m);
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ValidationError);
    CHECK(std::string(e.what()).find("'t'") != std::string::npos);
  }
  validate(m, {.auto_total = true});
  CHECK(m.transitions.size() == 4);
}

TEST_CASE("graph queries") {
  // p -> r -> q, s isolated.
  const auto g = ControlGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 2}, {3, 3}});
  const NodeSet q = to_node_set(4, {2});
  CHECK(ef(g, q) == NodeSet{true, true, true, false});
  CHECK(not_ef(g, q) == NodeSet{false, false, false, true});
  CHECK(exists_until(g, to_node_set(4, {1}), q) == NodeSet{false, false, true, false});
  CHECK(ag_ef(g, q) == NodeSet{true, true, true, false});

  const auto cyc = ControlGraph::from_edges(3, {{0, 1}, {1, 2}, {2, 0}});
  CHECK(ag_ef(cyc, to_node_set(3, {1})) == NodeSet{true, true, true});
  CHECK(graph_query(cyc, {GraphQuery::Kind::NotEF, to_node_set(3, {1}), {}}) == NodeSet{false, false, false});
}

TEST_CASE("EF matches transitive closure on random graphs") {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 40; ++round) {
    std::uniform_int_distribution<std::size_t> size(1, 50);
    const std::size_t n = size(rng);
    std::uniform_int_distribution<ControlState> node(0, static_cast<ControlState>(n - 1));
    std::vector<std::pair<ControlState, ControlState>> edges;
    std::vector<std::vector<std::size_t>> succ(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = static_cast<ControlState>(i), b = node(rng);
      edges.emplace_back(a, b);
      succ[a].push_back(b);
      if (rng() % 2) {
        const auto c = node(rng);
        edges.emplace_back(a, c);
        succ[a].push_back(c);
      }
    }
    const auto g = ControlGraph::from_edges(n, edges);
    const auto closure = testing::transitive_closure(succ);
    std::set<ControlState> qset{node(rng)};
    const NodeSet q = to_node_set(n, qset);
    const NodeSet result = ef(g, q);
    for (std::size_t i = 0; i < n; ++i) {
      bool brute = false;
      for (auto t : qset) brute = brute || closure[i][t];
      CHECK(result[i] == brute);
    }
  }
}

TEST_CASE("qualitative examples on p -> q -> r") {
  Pntm m = stay_machine({"p", "q", "r"});
  m.transitions.clear();
  for (Symbol r : {A, BLANK}) {
    m.transitions.push_back({0, {r}, 1, {r}, {0}, 1});
    m.transitions.push_back({1, {r}, 2, {r}, {0}, 1});
    m.transitions.push_back({2, {r}, 2, {r}, {0}, 1});
  }
  validate(m);
  const State init = m.initial;
  CHECK(qual_decide(m, init, {1}, {Property::Reach, Side::One}).is_holds());
  CHECK(qual_decide(m, init, {1}, {Property::Repeat, Side::One}).is_fails());
  CHECK(qual_decide(m, init, {1}, {Property::Repeat, Side::Zero}).is_holds());
  CHECK(qual_decide(m, init, {1}, {Property::Reach, Side::Zero}).is_fails());
}

TEST_CASE("qualitative examples on a strongly connected and a disconnected machine") {
  Pntm cyc = stay_machine({"p", "q"});
  cyc.transitions.clear();
  for (Symbol r : {A, BLANK}) {
    cyc.transitions.push_back({0, {r}, 1, {r}, {0}, 1});
    cyc.transitions.push_back({1, {r}, 0, {r}, {0}, 1});
  }
  validate(cyc);
  for (ControlState c : {0u, 1u}) {
    State s = cyc.initial;
    s.control = c;
    CHECK(qual_decide(cyc, s, {1}, {Property::Repeat, Side::One}).is_holds());
  }

  Pntm iso = stay_machine({"p", "q"});
  validate(iso);
  CHECK(qual_decide(iso, iso.initial, {1}, {Property::Reach, Side::Zero}).is_holds());
  CHECK(qual_decide(iso, iso.initial, {1}, {Property::Repeat, Side::Zero}).is_holds());
}

TEST_CASE("certificates") {
  Pntm m = stay_machine({"s"});
  validate(m);
  auto cert = certificate(m);
  CHECK(cert.beta == Rational(1, 4));
  CHECK(cert.span == 1);

  Pntm two = stay_machine({"s", "t"});
  validate(two);
  auto c2 = certificate(two);
  CHECK(c2.span == 2);
  CHECK(c2.alpha == c2.beta * c2.beta);

  Pntm weighted = stay_machine({"s", "t"});
  weighted.transitions[0].weight = 3;
  weighted.transitions.push_back({0, {A}, 1, {A}, {0}, 1});
  validate(weighted);
  CHECK(certificate(weighted).beta == Rational(1, 4) / 4);
}

TEST_CASE("successors follow control-graph edges and noise stays above eps/|Gamma|") {
  Pntm m = stay_machine({"p", "q"});
  m.transitions[1] = {0, {BLANK}, 1, {A}, {+1}, 2};
  m.transitions[2] = {1, {A}, 0, {BLANK}, {-1}, 1};
  validate(m);
  const auto g = ControlGraph::of(m);
  Chain chain(m, {1});
  std::deque<State> queue{chain.initial()};
  for (int i = 0; i < 200 && !queue.empty(); ++i) {
    State s = queue.front();
    queue.pop_front();
    const auto noise = noise_distribution(m, s);
    CHECK(noise.total() == 1);
    const std::uint64_t gap = s.time - s.tapes[0].stamps[s.tapes[0].head_index()];
    if (gap >= 1) {
      for (Symbol sym : {A, BLANK}) CHECK(noise.probability_of({sym}) >= m.epsilon / 2);
    }
    const auto d = chain.successors(s);
    CHECK(d.total() == 1);
    for (const auto& [next, p] : d.entries) {
      CHECK(g.has_edge(s.control, next.control));
      if (queue.size() < 50) queue.push_back(next);
    }
  }
}

TEST_CASE("canonical gaps make stationary machines finite") {
  Pntm m = stay_machine({"p", "q", "r"});
  m.transitions.clear();
  // p reads a -> q, reads # -> r; q -> r; r absorbing.
  m.transitions.push_back({0, {A}, 1, {A}, {0}, 1});
  m.transitions.push_back({0, {BLANK}, 2, {BLANK}, {0}, 1});
  for (Symbol r : {A, BLANK}) {
    m.transitions.push_back({1, {r}, 2, {r}, {0}, 1});
    m.transitions.push_back({2, {r}, 2, {r}, {0}, 1});
  }
  validate(m);
  Chain chain(m, {1}, {.canonical_gaps = true, .gap_cap = 4});
  auto fc = oracle::truncate(chain, [](const State&) { return true; }, 1000);
  CHECK(fc.size() < 20);
  const auto band = oracle::exact_reach_prob(fc);
  CHECK(band.lower == Rational(3, 4));
  CHECK(band.upper == Rational(3, 4));
  CHECK(oracle::exact_repeat_reach_prob(fc).upper == 0);
}
