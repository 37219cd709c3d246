#include "decisive/decisive.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "decisive/error.hpp"
#include "decisive/model_io.hpp"
#include "decisive/query.hpp"

struct decisive_model {
  decisive::Model model;
};

namespace {

thread_local std::string g_last_error;

decisive_status record(decisive::ErrorCode code, const char* message) {
  g_last_error = message;
  return static_cast<decisive_status>(static_cast<int>(code));
}

template <class F>
decisive_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return DECISIVE_OK;
  } catch (const decisive::Error& e) {
    return record(e.code(), e.what());
  } catch (const std::bad_alloc&) {
    return record(decisive::ErrorCode::ResourceExhausted, "out of memory");
  } catch (const std::exception& e) {
    return record(decisive::ErrorCode::Internal, e.what());
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

decisive::ParseOptions parse_options(unsigned flags) {
  decisive::ParseOptions options;
  options.auto_selfloop = (flags & DECISIVE_PARSE_AUTO_SELFLOOP) != 0;
  options.auto_total = (flags & DECISIVE_PARSE_AUTO_TOTAL) != 0;
  return options;
}

void require(bool ok, const char* what) {
  if (!ok) decisive::fail(decisive::ErrorCode::InvalidArgument, what);
}

}  // namespace

extern "C" {

void decisive_query_init(decisive_query* query) {
  if (!query) return;
  decisive::QuerySpec defaults;
  query->kind = DECISIVE_QUERY_VALIDATE;
  query->side = DECISIVE_SIDE_NONE;
  query->eps = nullptr;
  query->budget = defaults.budget;
  query->targets = nullptr;
  query->num_targets = 0;
  query->seed = defaults.seed;
  query->bound = defaults.bound;
  query->gap_cap = defaults.gap_cap;
  query->state_limit = defaults.state_limit;
  query->runs = defaults.runs;
  query->horizon = defaults.horizon;
}

decisive_status decisive_model_parse(const char* text, size_t length, unsigned flags, decisive_model** out) {
  return guarded([&] {
    require(text != nullptr || length == 0, "text is NULL");
    require(out != nullptr, "out is NULL");
    *out = nullptr;
    auto model = std::make_unique<decisive_model>();
    model->model = decisive::parse_model(std::string_view(text ? text : "", length), parse_options(flags));
    *out = model.release();
  });
}

decisive_status decisive_model_load_file(const char* path, unsigned flags, decisive_model** out) {
  return guarded([&] {
    require(path != nullptr, "path is NULL");
    require(out != nullptr, "out is NULL");
    *out = nullptr;
    auto model = std::make_unique<decisive_model>();
    model->model = decisive::load_model_file(path, parse_options(flags));
    *out = model.release();
  });
}

void decisive_model_free(decisive_model* model) { delete model; }

const char* decisive_model_kind(const decisive_model* model) {
  if (!model) return "";
  return decisive::model_kind_name(model->model.kind());
}

decisive_status decisive_model_print(const decisive_model* model, char** out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "NULL argument");
    *out = duplicate(decisive::print_model(model->model));
  });
}

decisive_status decisive_run(const decisive_model* model, const decisive_query* query, char** report_json,
                             int* exit_code) {
  return guarded([&] {
    require(model != nullptr && query != nullptr && report_json != nullptr, "NULL argument");
    *report_json = nullptr;
    require(query->kind >= DECISIVE_QUERY_VALIDATE && query->kind <= DECISIVE_QUERY_SIMULATE, "unknown query kind");
    decisive::QuerySpec spec;
    spec.kind = static_cast<decisive::QueryKind>(query->kind);
    if (query->side == DECISIVE_SIDE_ONE) {
      spec.side = decisive::pvass::Side::One;
    } else if (query->side == DECISIVE_SIDE_ZERO) {
      spec.side = decisive::pvass::Side::Zero;
    } else {
      require(query->side == DECISIVE_SIDE_NONE, "unknown side");
    }
    if (query->eps) spec.eps = decisive::parse_rational(query->eps);
    spec.budget = query->budget;
    require(query->targets != nullptr || query->num_targets == 0, "targets is NULL");
    for (size_t i = 0; i < query->num_targets; ++i) {
      require(query->targets[i] != nullptr, "target clause is NULL");
      spec.targets.emplace_back(query->targets[i]);
    }
    spec.seed = query->seed;
    spec.bound = query->bound;
    spec.gap_cap = query->gap_cap;
    spec.state_limit = query->state_limit;
    spec.runs = query->runs;
    spec.horizon = query->horizon;
    const decisive::Report report = decisive::run_query(model->model, spec);
    *report_json = duplicate(report.document().dump(2));
    if (exit_code) *exit_code = report.exit_code;
  });
}

void decisive_string_free(char* s) { std::free(s); }

const char* decisive_last_error(void) { return g_last_error.c_str(); }

const char* decisive_status_name(decisive_status status) {
  if (status == DECISIVE_OK) return "Ok";
  return decisive::error_code_name(static_cast<decisive::ErrorCode>(static_cast<int>(status)));
}

const char* decisive_version(void) { return "0.1.0"; }

}  // extern "C"
