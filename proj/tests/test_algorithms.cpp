#include <doctest.h>

#include <random>

#include "decisive/algorithms.hpp"
#include "decisive/error.hpp"
#include "decisive/oracle.hpp"
#include "decisive/plcs.hpp"
#include "decisive/pntm.hpp"
#include "support.hpp"

using namespace decisive;

namespace {

struct Recorder {
  std::vector<DepthStats> stats;
  ApproxOptions options(Rational eps, std::uint64_t budget = 1'000'000) {
    ApproxOptions o;
    o.eps = eps;
    o.budget = budget;
    o.observer = [this](const DepthStats& s) { stats.push_back(s); };
    return o;
  }
};

void check_accumulators(const std::vector<DepthStats>& stats) {
  for (std::size_t i = 0; i < stats.size(); ++i) {
    CHECK(stats[i].yes + stats[i].no + stats[i].frontier_mass == 1);
    CHECK(stats[i].yes + stats[i].no <= 1);
    if (i > 0) {
      CHECK(stats[i].yes >= stats[i - 1].yes);
      CHECK(stats[i].no >= stats[i - 1].no);
    }
  }
}

}  // namespace

TEST_CASE("initial state in F gives theta 1 at depth 0") {
  testing::GamblerChain g{Rational(2, 3), 0};
  const auto r = approx_reach(g, {});
  const auto* a = std::get_if<Approx>(&r);
  REQUIRE(a);
  CHECK(a->theta == 1);
  CHECK(a->depth == 0);
  CHECK(a->expansions == 0);
}

TEST_CASE("gambler with x = 1/3 terminates close to 1") {
  testing::GamblerChain g{Rational(1, 3)};
  Recorder rec;
  const auto r = approx_reach(g, rec.options(Rational(1, 100)));
  const auto* a = std::get_if<Approx>(&r);
  REQUIRE(a);
  CHECK(a->theta >= Rational(99, 100));
  CHECK(a->theta <= 1);
  check_accumulators(rec.stats);
}

TEST_CASE("gambler with x = 2/3 exhausts its budget below 1/2") {
  testing::GamblerChain g{Rational(2, 3)};
  Recorder rec;
  const auto r = approx_reach(g, rec.options(Rational(1, 100), 100'000));
  const auto* b = std::get_if<BudgetExhausted>(&r);
  REQUIRE(b);
  CHECK(b->yes <= Rational(1, 2));
  CHECK(b->yes >= Rational(1, 2) - Rational(1, 100));
  CHECK(b->no == 0);
  CHECK(b->expansions <= 100'000);
  check_accumulators(rec.stats);
}

TEST_CASE("invalid epsilon and unsupported repeat") {
  testing::GamblerChain g{Rational(1, 3)};
  ApproxOptions o;
  o.eps = 0;
  try {
    approx_reach(g, o);
    FAIL("expected InvalidEpsilon");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
    CHECK(std::string(e.what()).find("InvalidEpsilon") != std::string::npos);
  }
  try {
    approx_repeat_reach(g, {});
    FAIL("expected Avoid2Unsupported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unsupported);
    CHECK(std::string(e.what()).find("Avoid2Unsupported") != std::string::npos);
  }
}

TEST_CASE("merged frontier equals per-path enumeration on random chains") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 60; ++round) {
    oracle::ExplicitChain chain(testing::random_finite_chain(rng, 12));
    for (bool repeat : {false, true}) {
      Recorder rec;
      auto opts = rec.options(Rational(1, 1000000));
      opts.max_depth = 8;
      if (repeat) {
        approx_repeat_reach(chain, opts);
      } else {
        approx_reach(chain, opts);
      }
      const auto reference = testing::unmerged_depth_masses(chain, 8, repeat);
      REQUIRE(rec.stats.size() <= reference.size());
      for (std::size_t j = 0; j < rec.stats.size(); ++j) {
        CHECK(rec.stats[j].yes == reference[j].yes);
        CHECK(rec.stats[j].no == reference[j].no);
      }
      check_accumulators(rec.stats);
    }
  }
}

TEST_CASE("every depth sandwiches the exact probability") {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 60; ++round) {
    auto fc = testing::random_finite_chain(rng, 20);
    const auto exact = oracle::exact_reach_prob(fc);
    const auto exact_rep = oracle::exact_repeat_reach_prob(fc);
    REQUIRE(exact.width() == 0);
    oracle::ExplicitChain chain(fc);
    Recorder reach, rep;
    auto o1 = reach.options(Rational(1, 1000));
    o1.max_depth = 30;
    auto o2 = rep.options(Rational(1, 1000));
    o2.max_depth = 30;
    approx_reach(chain, o1);
    approx_repeat_reach(chain, o2);
    for (const auto& s : reach.stats) {
      CHECK(s.yes <= exact.lower);
      CHECK(exact.lower <= 1 - s.no);
    }
    for (const auto& s : rep.stats) {
      CHECK(s.yes <= exact_rep.lower);
      CHECK(exact_rep.lower <= 1 - s.no);
    }
  }
}

TEST_CASE("approximations land within eps of the exact value on finite chains") {
  std::mt19937_64 rng(29);
  for (int round = 0; round < 40; ++round) {
    auto fc = testing::random_finite_chain(rng, 25);
    const Rational exact = oracle::exact_reach_prob(fc).lower;
    const Rational exact_rep = oracle::exact_repeat_reach_prob(fc).lower;
    oracle::ExplicitChain chain(fc);
    ApproxOptions o;
    o.eps = Rational(1, 50);
    const auto r1 = approx_reach(chain, o);
    const auto r2 = approx_repeat_reach(chain, o);
    REQUIRE(std::holds_alternative<Approx>(r1));
    REQUIRE(std::holds_alternative<Approx>(r2));
    const Rational t1 = std::get<Approx>(r1).theta, t2 = std::get<Approx>(r2).theta;
    CHECK(t1 <= exact);
    CHECK(exact <= t1 + o.eps);
    CHECK(t2 <= exact_rep);
    CHECK(exact_rep <= t2 + o.eps);
  }
}

TEST_CASE("repeat on a lossy ping-pong is close to 1") {
  plcs::Plcs m;
  m.states = {"q0", "q1"};
  m.channels = {"c"};
  m.messages = {"m"};
  m.lambda = Rational(1, 10);
  m.transitions = {{0, {plcs::Op::Kind::Send, 0, 0}, 1, 1},
                   {1, {plcs::Op::Kind::Recv, 0, 0}, 0, 1},
                   {1, {}, 0, 1}};
  m.initial = {0, {""}};
  plcs::validate(m);
  plcs::Chain chain(m, plcs::UpwardTarget::from_q_states(m, {1}));
  ApproxOptions o;
  o.eps = Rational(1, 100);
  const auto r = approx_repeat_reach(chain, o);
  REQUIRE(std::holds_alternative<Approx>(r));
  CHECK(std::get<Approx>(r).theta >= Rational(99, 100));
  CHECK(std::get<Approx>(r).theta <= 1);
}

TEST_CASE("noisy machine p -> q -> r matches the finite-chain solve") {
  using namespace decisive::pntm;
  Pntm m;
  m.states = {"p", "q", "r"};
  m.gamma = {'a', '#'};
  m.sigma = {'a'};
  m.epsilon = Rational(1, 2);
  m.transitions = {{0, {0}, 1, {0}, {0}, 1}, {0, {1}, 2, {1}, {0}, 1}, {1, {0}, 2, {0}, {0}, 1},
                   {1, {1}, 2, {1}, {0}, 1}, {2, {0}, 2, {0}, {0}, 1}, {2, {1}, 2, {1}, {0}, 1}};
  m.initial = make_initial(m, 0, {{0}}, {0});
  validate(m);
  Chain chain(m, {1});
  Chain canonical(m, {1}, {.canonical_gaps = true, .gap_cap = 8});
  const auto fc = oracle::truncate(canonical, [](const State&) { return true; }, 10000);
  const auto reach = oracle::exact_reach_prob(fc);
  const auto rep = oracle::exact_repeat_reach_prob(fc);
  REQUIRE(reach.width() == 0);
  CHECK(reach.lower == Rational(3, 4));
  CHECK(rep.lower == 0);

  ApproxOptions o;
  o.eps = Rational(1, 100);
  const auto r = approx_reach(chain, o);
  REQUIRE(std::holds_alternative<Approx>(r));
  CHECK(std::get<Approx>(r).theta <= reach.lower);
  CHECK(reach.lower <= std::get<Approx>(r).theta + o.eps);
  const auto rr = approx_repeat_reach(chain, o);
  REQUIRE(std::holds_alternative<Approx>(rr));
  CHECK(std::get<Approx>(rr).theta == 0);
}

TEST_CASE("globally coarse chains terminate within the certified depth") {
  using namespace decisive::pntm;
  Pntm m;
  m.states = {"p", "q"};
  m.gamma = {'a', '#'};
  m.sigma = {'a'};
  m.epsilon = Rational(1, 3);
  // p stays on a and moves to q on #; q is absorbing.
  m.transitions = {{0, {0}, 0, {0}, {0}, 1}, {0, {1}, 1, {1}, {0}, 1}, {1, {0}, 1, {0}, {0}, 1},
                   {1, {1}, 1, {1}, {0}, 1}};
  m.initial = make_initial(m, 0, {{0}}, {0});
  validate(m);
  const auto cert = certificate(m);
  Chain chain(m, {1});
  ApproxOptions o;
  o.eps = Rational(1, 20);
  const auto r = approx_reach(chain, o);
  REQUIRE(std::holds_alternative<Approx>(r));
  const std::size_t depth = std::get<Approx>(r).depth;
  std::size_t bound = 0;
  while (pow(Rational(1) - cert.alpha, static_cast<unsigned long>(bound / cert.span)) > o.eps) ++bound;
  CHECK(depth <= bound);
}
