#include "decisive/wqo.hpp"

namespace decisive {

bool vector_leq(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  if (a.size() != b.size()) {
    fail(ErrorCode::InvalidArgument, "vector order: carrier mismatch (" + std::to_string(a.size()) +
                                         " vs " + std::to_string(b.size()) + " components)");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

bool subword_leq(std::string_view u, std::string_view v) {
  std::size_t i = 0;
  for (char c : v) {
    if (i < u.size() && u[i] == c) ++i;
  }
  return i == u.size();
}

Integer count_embeddings(std::string_view u, std::string_view v) {
  // ways[j] = number of embeddings of u[0..j) into the prefix of v seen so far.
  std::vector<Integer> ways(u.size() + 1, Integer(0));
  ways[0] = 1;
  for (char c : v) {
    for (std::size_t j = u.size(); j > 0; --j) {
      if (u[j - 1] == c) ways[j] += ways[j - 1];
    }
  }
  return ways[u.size()];
}

namespace {

bool product_leq(const ProductValue& a, const ProductValue& b) {
  if (a.words.size() != b.words.size()) {
    fail(ErrorCode::InvalidArgument, "product order: carrier mismatch (channel count differs)");
  }
  if (a.control != b.control) return false;
  if (!vector_leq(a.vec, b.vec)) return false;
  for (std::size_t i = 0; i < a.words.size(); ++i) {
    if (!subword_leq(a.words[i], b.words[i])) return false;
  }
  return true;
}

}  // namespace

bool wqo_leq(WqoKind kind, const WqoValue& a, const WqoValue& b) {
  auto mismatch = [] { fail(ErrorCode::InvalidArgument, "wqo_leq: carrier mismatch"); };
  switch (kind) {
    case WqoKind::Vector: {
      const auto* x = std::get_if<std::vector<std::int64_t>>(&a);
      const auto* y = std::get_if<std::vector<std::int64_t>>(&b);
      if (!x || !y) mismatch();
      return vector_leq(*x, *y);
    }
    case WqoKind::Subword: {
      const auto* x = std::get_if<std::string>(&a);
      const auto* y = std::get_if<std::string>(&b);
      if (!x || !y) mismatch();
      return subword_leq(*x, *y);
    }
    case WqoKind::Product: {
      const auto* x = std::get_if<ProductValue>(&a);
      const auto* y = std::get_if<ProductValue>(&b);
      if (!x || !y) mismatch();
      return product_leq(*x, *y);
    }
  }
  mismatch();
  return false;
}

}  // namespace decisive
