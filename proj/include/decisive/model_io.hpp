#pragma once

#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "decisive/plcs.hpp"
#include "decisive/pntm.hpp"
#include "decisive/pvass.hpp"

namespace decisive {

enum class ModelKind { Pvass, Plcs, Pntm };

const char* model_kind_name(ModelKind kind) noexcept;

struct ParseOptions {
  bool auto_selfloop = false;  // pvass, plcs: repair deadlocks with a nop self-loop
  bool auto_total = false;     // pntm: complete missing (state, read) rows
};

// A parsed and validated model file. Target clauses are kept in normalised
// text form (the part after the `target` keyword) and resolved on demand.
struct Model {
  std::variant<pvass::Pvass, plcs::Plcs, pntm::Pntm> data;
  std::vector<std::string> targets;

  ModelKind kind() const { return static_cast<ModelKind>(data.index()); }
};

// Errors carry "line L, column C:" prefixes. Throws Error(SyntaxError) or
// Error(ValidationError).
Model parse_model(std::string_view text, const ParseOptions& options = {});
Model load_model_file(const std::string& path, const ParseOptions& options = {});

// Canonical text form; parse_model(print_model(m)) reproduces m.
std::string print_model(const Model& model);

// Target clauses use the file syntax without the keyword, e.g. "up s1 x>=2"
// or "q s1 s2". Several clauses denote their union. Throws
// Error(InvalidArgument) on malformed clauses or an empty list.
pvass::UpwardTarget resolve_pvass_target(const pvass::Pvass& model, const std::vector<std::string>& clauses);
plcs::UpwardTarget resolve_plcs_target(const plcs::Plcs& model, const std::vector<std::string>& clauses);
std::set<pntm::ControlState> resolve_pntm_target(const pntm::Pntm& model, const std::vector<std::string>& clauses);

}  // namespace decisive
