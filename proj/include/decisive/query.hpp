#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "decisive/model_io.hpp"
#include "decisive/rational.hpp"

namespace decisive {

enum class QueryKind { Validate, QualReach, QualRepeat, ApproxReach, ApproxRepeat, Certify, Oracle, Simulate };

const char* query_kind_name(QueryKind kind) noexcept;
std::optional<QueryKind> query_kind_from_name(const std::string& name);

struct QuerySpec {
  QueryKind kind = QueryKind::Validate;
  std::optional<pvass::Side> side;  // qualitative queries only
  std::optional<Rational> eps;      // approximate queries only
  std::uint64_t budget = 1'000'000;
  std::vector<std::string> targets;  // overrides the model's target clauses when nonempty
  std::uint64_t seed = 0;
  // oracle: counters (pvass), total channel length (plcs) or visited cells
  // per tape (pntm) are kept <= bound; pntm gaps are capped at gap_cap.
  std::uint64_t bound = 20;
  std::uint64_t gap_cap = 16;
  std::uint64_t state_limit = 200'000;
  // simulate
  std::uint64_t runs = 10'000;
  std::uint64_t horizon = 1'000;
};

// The report body is deterministic for a given model and spec; wall-clock
// data sits in `timing` only.
struct Report {
  nlohmann::ordered_json body;
  nlohmann::ordered_json timing;
  int exit_code = 0;  // 0 decided/computed, 2 Unknown or budget exhausted

  nlohmann::ordered_json document() const;
};

// Throws Error for invalid specs or failures in the underlying modules.
Report run_query(const Model& model, const QuerySpec& spec);

}  // namespace decisive
