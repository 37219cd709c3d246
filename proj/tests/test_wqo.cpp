#include <doctest.h>

#include <deque>
#include <random>

#include "decisive/error.hpp"
#include "decisive/wqo.hpp"

using namespace decisive;
using Vec = std::vector<std::int64_t>;

TEST_CASE("vector order") {
  CHECK(wqo_leq(WqoKind::Vector, Vec{1, 0}, Vec{1, 0}));
  CHECK_FALSE(wqo_leq(WqoKind::Vector, Vec{2, 1}, Vec{1, 3}));
  CHECK_FALSE(wqo_leq(WqoKind::Vector, Vec{1, 3}, Vec{2, 1}));
  CHECK(wqo_leq(WqoKind::Vector, Vec{0, 0}, Vec{4, 2}));
  CHECK_THROWS_AS(vector_leq(Vec{1}, Vec{1, 2}), Error);
}

TEST_CASE("subword order") {
  CHECK(wqo_leq(WqoKind::Subword, std::string("ab"), std::string("acb")));
  CHECK_FALSE(wqo_leq(WqoKind::Subword, std::string("ba"), std::string("ab")));
  CHECK(subword_leq("", "xyz"));
  CHECK_FALSE(subword_leq("a", ""));
}

TEST_CASE("product order compares controls first") {
  ProductValue a{1, {1}, {"a"}};
  ProductValue b{1, {2}, {"ab"}};
  ProductValue c{2, {2}, {"ab"}};
  CHECK(wqo_leq(WqoKind::Product, a, b));
  CHECK_FALSE(wqo_leq(WqoKind::Product, a, c));
}

TEST_CASE("carrier mismatch is rejected") {
  CHECK_THROWS_AS(wqo_leq(WqoKind::Vector, Vec{1}, std::string("a")), Error);
  CHECK_THROWS_AS(wqo_leq(WqoKind::Subword, Vec{1}, Vec{1}), Error);
}

TEST_CASE("embedding counts") {
  CHECK(count_embeddings("a", "aa") == 2);
  CHECK(count_embeddings("", "abc") == 1);
  CHECK(count_embeddings("ab", "aabb") == 4);
  CHECK(count_embeddings("ba", "ab") == 0);
}

TEST_CASE("antichain insert keeps minimal elements") {
  VectorAntichain ac;
  ac.insert({1, 1});
  ac = antichain_insert(ac, Vec{1, 1});
  CHECK(ac.size() == 1);
  ac = antichain_insert(ac, Vec{0, 2});
  CHECK(ac.size() == 2);
  ac = antichain_insert(ac, Vec{0, 0});
  REQUIRE(ac.size() == 1);
  CHECK(ac.elements()[0] == Vec{0, 0});
}

TEST_CASE("covers") {
  VectorAntichain ac;
  CHECK_FALSE(ac.covers({3, 3}));
  ac.insert({1, 1});
  CHECK(ac.covers({2, 3}));
  CHECK_FALSE(ac.covers({0, 5}));
}

TEST_CASE("random inserts keep the antichain pairwise incomparable and the union intact") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coord(0, 6);
  for (int round = 0; round < 50; ++round) {
    VectorAntichain ac;
    std::vector<Vec> inserted;
    for (int i = 0; i < 30; ++i) {
      Vec v{coord(rng), coord(rng), coord(rng)};
      inserted.push_back(v);
      ac.insert(v);
    }
    const auto elems = ac.elements();
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (std::size_t j = 0; j < elems.size(); ++j) {
        if (i != j) CHECK_FALSE(vector_leq(elems[i], elems[j]));
      }
    }
    for (const auto& v : inserted) CHECK(ac.covers(v));
    // Every covered point is above some inserted vector and vice versa.
    for (int a = 0; a <= 6; ++a) {
      for (int b = 0; b <= 6; ++b) {
        for (int c = 0; c <= 6; ++c) {
          Vec x{a, b, c};
          bool brute = false;
          for (const auto& v : inserted) brute = brute || vector_leq(v, x);
          CHECK(ac.covers(x) == brute);
        }
      }
    }
  }
}

TEST_CASE("same_set compares by mutual coverage") {
  VectorAntichain a, b;
  a.insert({1, 0});
  a.insert({0, 1});
  b.insert({0, 1});
  b.insert({1, 0});
  CHECK(a.same_set(b));
  b.insert({0, 0});
  CHECK_FALSE(a.same_set(b));
}

namespace {

// One-counter walk with x+1 and x-1 (x-1 needs x >= 1).
std::vector<Vec> walk_min_pre(const Vec& e) {
  std::vector<Vec> out;
  out.push_back({std::max<std::int64_t>(e[0] - 1, 0)});  // via x+1
  out.push_back({e[0] + 1});                             // via x-1
  return out;
}

// Backward BFS over counter values 0..limit for the same walk.
std::vector<bool> brute_backward(std::int64_t target_min, std::int64_t limit) {
  std::vector<bool> in(limit + 1, false);
  for (std::int64_t v = target_min; v <= limit; ++v) in[v] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::int64_t v = 0; v <= limit; ++v) {
      if (in[v]) continue;
      const bool up = v + 1 <= limit && in[v + 1];
      const bool down = v >= 1 && in[v - 1];
      if (up || down) {
        in[v] = true;
        changed = true;
      }
    }
  }
  return in;
}

}  // namespace

TEST_CASE("saturate_pre with no predecessors is the identity") {
  VectorAntichain basis;
  basis.insert({2});
  auto result = saturate_pre(basis, [](const Vec&) { return std::vector<Vec>{}; });
  CHECK(result.rounds == 0);
  CHECK(result.basis.same_set(basis));
}

TEST_CASE("saturate_pre on the one-counter walk reaches {0} in two rounds") {
  VectorAntichain basis;
  basis.insert({2});
  auto result = saturate_pre(basis, walk_min_pre);
  REQUIRE(result.basis.size() == 1);
  CHECK(result.basis.elements()[0] == Vec{0});
  CHECK(result.rounds == 2);
  const auto brute = brute_backward(2, 10);
  for (std::int64_t v = 0; v <= 10; ++v) CHECK(result.basis.covers({v}) == brute[v]);
}

TEST_CASE("saturate_pre on the guarded walk towards 5 takes five rounds") {
  VectorAntichain basis;
  basis.insert({5});
  auto result = saturate_pre(basis, walk_min_pre);
  CHECK(result.rounds == 5);
  CHECK(result.basis.covers({0}));
}

TEST_CASE("saturate_pre honours the basis limit") {
  VectorAntichain basis;
  basis.insert({100, 0});
  // Each element spawns an incomparable neighbour, growing the antichain.
  auto spread = [](const Vec& e) { return std::vector<Vec>{{e[0] - 1, e[1] + 1}}; };
  try {
    saturate_pre(basis, spread, 10);
    FAIL("expected ResourceExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ResourceExhausted);
  }
}
