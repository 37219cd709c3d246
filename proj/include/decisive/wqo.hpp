#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "decisive/error.hpp"
#include "decisive/rational.hpp"

namespace decisive {

// Componentwise order on vectors of naturals. Throws InvalidArgument when the
// vectors have different lengths.
bool vector_leq(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

// Higman's order: u <= v iff u is a (not necessarily contiguous) subsequence
// of v.
bool subword_leq(std::string_view u, std::string_view v);

// Number of distinct index sets of `v` that spell `u`.
Integer count_embeddings(std::string_view u, std::string_view v);

// Dynamically typed carrier for wqo_leq. A ProductValue compares equal
// control components and then its vector and word parts.
struct ProductValue {
  std::uint32_t control = 0;
  std::vector<std::int64_t> vec;
  std::vector<std::string> words;
};

enum class WqoKind { Vector, Subword, Product };

using WqoValue = std::variant<std::vector<std::int64_t>, std::string, ProductValue>;

bool wqo_leq(WqoKind kind, const WqoValue& a, const WqoValue& b);

// Finite set of pairwise incomparable elements standing for its upward
// closure. Elements are bucketed by Order::bucket (control state for the
// product orders) since elements from different buckets never compare.
//
// Order must provide `bool leq(const T&, const T&) const` and
// `std::size_t bucket(const T&) const`.
template <class T, class Order>
class Antichain {
 public:
  Antichain() = default;
  explicit Antichain(Order order) : order_(std::move(order)) {}

  bool covers(const T& x) const {
    std::size_t b = order_.bucket(x);
    if (b >= buckets_.size()) return false;
    for (const T& m : buckets_[b]) {
      if (order_.leq(m, x)) return true;
    }
    return false;
  }

  // Adds x unless it is already covered; removes elements x now covers.
  // Returns true iff the represented set grew.
  bool insert(T x) {
    if (covers(x)) return false;
    std::size_t b = order_.bucket(x);
    if (b >= buckets_.size()) buckets_.resize(b + 1);
    auto& bucket = buckets_[b];
    std::size_t kept = 0;
    for (std::size_t i = 0; i < bucket.size(); ++i) {
      if (!order_.leq(x, bucket[i])) {
        if (kept != i) bucket[kept] = std::move(bucket[i]);
        ++kept;
      }
    }
    size_ -= bucket.size() - kept;
    bucket.resize(kept);
    bucket.push_back(std::move(x));
    ++size_;
    return true;
  }

  bool contains_element(const T& x) const {
    std::size_t b = order_.bucket(x);
    if (b >= buckets_.size()) return false;
    for (const T& m : buckets_[b]) {
      if (m == x) return true;
    }
    return false;
  }

  std::vector<T> elements() const {
    std::vector<T> out;
    out.reserve(size_);
    for (const auto& bucket : buckets_) out.insert(out.end(), bucket.begin(), bucket.end());
    return out;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const Order& order() const { return order_; }

  // Sets are equal when each basis covers the other.
  bool same_set(const Antichain& other) const {
    for (const auto& bucket : buckets_) {
      for (const T& m : bucket) {
        if (!other.covers(m)) return false;
      }
    }
    for (const auto& bucket : other.buckets_) {
      for (const T& m : bucket) {
        if (!covers(m)) return false;
      }
    }
    return true;
  }

 private:
  Order order_{};
  std::vector<std::vector<T>> buckets_;
  std::size_t size_ = 0;
};

template <class T, class Order>
Antichain<T, Order> antichain_insert(Antichain<T, Order> ac, T x) {
  ac.insert(std::move(x));
  return ac;
}

template <class T, class Order>
struct SaturationResult {
  Antichain<T, Order> basis;
  std::size_t rounds = 0;
};

inline constexpr std::size_t kDefaultBasisLimit = 1'000'000;

// Least upward-closed set containing ↑basis and closed under predecessors,
// where min_pre(e) returns a finite basis of the one-step predecessors of ↑{e}.
// Breadth-layered: each round expands exactly the elements added in the
// previous round, so `rounds` counts the layers that contributed something new
// (the span of the input set).
template <class T, class Order, class MinPre>
SaturationResult<T, Order> saturate_pre(Antichain<T, Order> basis, MinPre&& min_pre,
                                        std::size_t limit = kDefaultBasisLimit) {
  std::vector<T> layer = basis.elements();
  std::size_t rounds = 0;
  while (!layer.empty()) {
    std::vector<T> added;
    for (const T& e : layer) {
      for (T& p : min_pre(e)) {
        if (basis.insert(p)) {
          added.push_back(std::move(p));
          if (basis.size() > limit) {
            fail(ErrorCode::ResourceExhausted,
                 "predecessor basis exceeded " + std::to_string(limit) + " elements");
          }
        }
      }
    }
    // Elements superseded later in the same round are dropped from the layer;
    // whatever replaced them is in `added` as well.
    std::vector<T> next;
    for (T& e : added) {
      if (basis.contains_element(e)) next.push_back(std::move(e));
    }
    if (!next.empty()) ++rounds;
    layer = std::move(next);
  }
  return {std::move(basis), rounds};
}

struct VectorOrder {
  bool leq(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) const {
    return vector_leq(a, b);
  }
  std::size_t bucket(const std::vector<std::int64_t>&) const { return 0; }
};

using VectorAntichain = Antichain<std::vector<std::int64_t>, VectorOrder>;

}  // namespace decisive
