#include "decisive/query.hpp"

#include <algorithm>
#include <chrono>

#include "decisive/algorithms.hpp"
#include "decisive/error.hpp"
#include "decisive/oracle.hpp"

namespace decisive {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kNames[] = {"validate", "qual-reach", "qual-repeat", "approx-reach",
                                  "approx-repeat", "certify", "oracle", "simulate"};

std::vector<std::string> effective_targets(const Model& model, const QuerySpec& spec) {
  const auto& clauses = spec.targets.empty() ? model.targets : spec.targets;
  if (clauses.empty()) fail(ErrorCode::InvalidArgument, "no target: add 'target' lines to the model or pass --target");
  return clauses;
}

json summary(const Model& model) {
  json out;
  out["kind"] = model_kind_name(model.kind());
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        out["states"] = m.states.size();
        out["transitions"] = m.transitions.size();
        if constexpr (std::is_same_v<T, pvass::Pvass>) {
          out["vars"] = m.vars.size();
        } else if constexpr (std::is_same_v<T, plcs::Plcs>) {
          out["channels"] = m.channels.size();
          out["messages"] = m.messages.size();
          out["loss"] = to_fraction(m.lambda);
        } else {
          out["tapes"] = m.tapes;
          out["gamma"] = m.gamma.size();
          out["eps"] = to_fraction(m.epsilon);
        }
      },
      model.data);
  return out;
}

json certificate_json(const DecisivenessCertificate& cert) {
  json out;
  out["kind"] = certificate_kind_name(cert.kind);
  out["citation"] = cert.citation;
  if (cert.kind == DecisivenessCertificate::Kind::GloballyCoarse) {
    out["beta"] = to_fraction(cert.beta);
    out["span"] = cert.span;
    out["alpha"] = to_fraction(cert.alpha);
    out["alpha_decimal"] = to_decimal(cert.alpha);
  }
  out["target"] = cert.target;
  return out;
}

json verdict_json(const TriBool& v, QueryKind kind, pvass::Side side) {
  json out;
  const std::string event = kind == QueryKind::QualReach ? "reach F" : "visit F infinitely often";
  out["question"] = "P(" + event + ") = " + (side == pvass::Side::One ? "1" : "0");
  out["status"] = v.is_holds() ? "holds" : v.is_fails() ? "fails" : "unknown";
  out["reason"] = v.reason;
  return out;
}

json approx_json(const QueryResult& r, int& exit_code) {
  json out;
  if (const auto* a = std::get_if<Approx>(&r)) {
    out["status"] = "approx";
    out["theta"] = to_fraction(a->theta);
    out["theta_decimal"] = to_decimal(a->theta);
    out["eps"] = to_fraction(a->eps);
    out["lower"] = to_fraction(a->yes);
    out["upper"] = to_fraction(a->theta + a->eps < 1 ? Rational(a->theta + a->eps) : Rational(1));
    out["yes"] = to_fraction(a->yes);
    out["no"] = to_fraction(a->no);
    out["depth"] = a->depth;
    out["expansions"] = a->expansions;
    exit_code = 0;
  } else if (const auto* b = std::get_if<BudgetExhausted>(&r)) {
    out["status"] = "budget-exhausted";
    out["lower"] = to_fraction(b->yes);
    out["lower_decimal"] = to_decimal(b->yes);
    out["upper"] = to_fraction(Rational(1) - b->no);
    out["upper_decimal"] = to_decimal(Rational(1) - b->no);
    out["depth"] = b->depth;
    out["expansions"] = b->expansions;
    exit_code = 2;
  } else {
    fail(ErrorCode::Internal, "unexpected result kind");
  }
  return out;
}

template <class C>
json run_approx(const C& chain, const QuerySpec& spec, int& exit_code) {
  ApproxOptions options;
  options.eps = *spec.eps;
  options.budget = spec.budget;
  if (spec.kind == QueryKind::ApproxReach) return approx_json(approx_reach(chain, options), exit_code);
  return approx_json(approx_repeat_reach(chain, options), exit_code);
}

json band_json(const oracle::Band& band) {
  json out;
  out["lower"] = to_fraction(band.lower);
  out["upper"] = to_fraction(band.upper);
  out["lower_decimal"] = to_decimal(band.lower);
  out["upper_decimal"] = to_decimal(band.upper);
  return out;
}

json oracle_json(const oracle::FiniteChain& fc) {
  json out;
  out["status"] = "computed";
  out["states"] = fc.size();
  out["overflow"] = fc.overflow.has_value();
  out["reach"] = band_json(oracle::exact_reach_prob(fc));
  out["repeat"] = band_json(oracle::exact_repeat_reach_prob(fc));
  return out;
}

json simulate_json(const oracle::MonteCarloResult& r, const QuerySpec& spec) {
  json out;
  out["status"] = "computed";
  out["generator"] = "mt19937_64";
  out["seed"] = spec.seed;
  out["runs"] = r.runs;
  out["horizon"] = spec.horizon;
  out["successes"] = r.successes;
  out["estimate"] = r.estimate;
  out["wilson95"] = {r.lower, r.upper};
  return out;
}

void check_spec(const QuerySpec& spec) {
  const bool qual = spec.kind == QueryKind::QualReach || spec.kind == QueryKind::QualRepeat;
  const bool approx = spec.kind == QueryKind::ApproxReach || spec.kind == QueryKind::ApproxRepeat;
  if (qual && !spec.side) fail(ErrorCode::InvalidArgument, "qualitative queries need a side (one or zero)");
  if (!qual && spec.side) fail(ErrorCode::InvalidArgument, "a side only applies to qualitative queries");
  if (approx && !spec.eps) fail(ErrorCode::InvalidArgument, "approximate queries need eps");
  if (!approx && spec.eps) fail(ErrorCode::InvalidArgument, "eps only applies to approximate queries");
  if (approx && *spec.eps <= 0) fail(ErrorCode::InvalidArgument, "InvalidEpsilon: eps must be positive");
  if (spec.kind == QueryKind::Simulate && spec.runs == 0) fail(ErrorCode::InvalidArgument, "runs must be positive");
}

pvass::QualQuery qual_query(const QuerySpec& spec) {
  return {spec.kind == QueryKind::QualReach ? pvass::Property::Reach : pvass::Property::Repeat, *spec.side};
}

}  // namespace

const char* query_kind_name(QueryKind kind) noexcept { return kNames[static_cast<int>(kind)]; }

std::optional<QueryKind> query_kind_from_name(const std::string& name) {
  for (int i = 0; i < 8; ++i) {
    if (name == kNames[i]) return static_cast<QueryKind>(i);
  }
  return std::nullopt;
}

json Report::document() const {
  json doc = body;
  doc["exit_code"] = exit_code;
  doc["timing"] = timing;
  return doc;
}

Report run_query(const Model& model, const QuerySpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  check_spec(spec);
  Report report;
  json query;
  query["kind"] = query_kind_name(spec.kind);
  if (spec.side) query["side"] = pvass::side_name(*spec.side);
  if (spec.eps) query["eps"] = to_fraction(*spec.eps);
  if (spec.kind == QueryKind::ApproxReach || spec.kind == QueryKind::ApproxRepeat) query["budget"] = spec.budget;
  report.body["model"] = summary(model);

  int exit_code = 0;
  json result;
  const bool needs_target = spec.kind != QueryKind::Validate;
  std::vector<std::string> clauses;
  if (needs_target) {
    clauses = effective_targets(model, spec);
    query["target"] = clauses;
  }
  if (spec.kind == QueryKind::Oracle) {
    query["bound"] = spec.bound;
    query["state_limit"] = spec.state_limit;
    if (model.kind() == ModelKind::Pntm) query["gap_cap"] = spec.gap_cap;
  }
  if (spec.kind == QueryKind::Simulate) {
    query["runs"] = spec.runs;
    query["horizon"] = spec.horizon;
    query["seed"] = spec.seed;
  }
  report.body["query"] = query;

  if (spec.kind == QueryKind::Validate) {
    result["status"] = "valid";
  } else if (const auto* m = std::get_if<pvass::Pvass>(&model.data)) {
    const auto target = resolve_pvass_target(*m, clauses);
    switch (spec.kind) {
      case QueryKind::QualReach:
      case QueryKind::QualRepeat: {
        const TriBool v = pvass::qual_decide(*m, m->initial, target, qual_query(spec));
        result = verdict_json(v, spec.kind, *spec.side);
        exit_code = v.is_unknown() ? 2 : 0;
        break;
      }
      case QueryKind::ApproxReach:
      case QueryKind::ApproxRepeat: result = run_approx(pvass::Chain(*m, target), spec, exit_code); break;
      case QueryKind::Certify:
        result["status"] = "computed";
        result["certificate"] = certificate_json(pvass::decisiveness_certificate(*m, target));
        break;
      case QueryKind::Oracle: {
        const pvass::Chain chain(*m, target);
        const auto bound = static_cast<std::int64_t>(spec.bound);
        auto in_bounds = [&](const pvass::Marking& s) {
          return std::all_of(s.values.begin(), s.values.end(), [&](std::int64_t v) { return v <= bound; });
        };
        result = oracle_json(oracle::truncate(chain, in_bounds, spec.state_limit));
        break;
      }
      case QueryKind::Simulate:
        result = simulate_json(oracle::monte_carlo(pvass::Chain(*m, target), oracle::Event::Reach, spec.runs,
                                                   spec.horizon, spec.seed),
                               spec);
        break;
      case QueryKind::Validate: break;
    }
  } else if (const auto* m = std::get_if<plcs::Plcs>(&model.data)) {
    const auto target = resolve_plcs_target(*m, clauses);
    switch (spec.kind) {
      case QueryKind::QualReach:
      case QueryKind::QualRepeat: {
        const TriBool v = plcs::qual_decide(*m, m->initial, target, qual_query(spec));
        result = verdict_json(v, spec.kind, *spec.side);
        exit_code = v.is_unknown() ? 2 : 0;
        break;
      }
      case QueryKind::ApproxReach:
      case QueryKind::ApproxRepeat: result = run_approx(plcs::Chain(*m, target), spec, exit_code); break;
      case QueryKind::Certify:
        result["status"] = "computed";
        result["certificate"] = certificate_json(plcs::certificate(*m, target));
        break;
      case QueryKind::Oracle: {
        const plcs::Chain chain(*m, target);
        auto in_bounds = [&](const plcs::State& s) {
          std::size_t total = 0;
          for (const auto& w : s.config.channels) total += w.size();
          return total <= spec.bound;
        };
        result = oracle_json(oracle::truncate(chain, in_bounds, spec.state_limit));
        break;
      }
      case QueryKind::Simulate:
        result = simulate_json(
            oracle::monte_carlo(plcs::Chain(*m, target), oracle::Event::Reach, spec.runs, spec.horizon, spec.seed),
            spec);
        break;
      case QueryKind::Validate: break;
    }
  } else {
    const auto& pm = std::get<pntm::Pntm>(model.data);
    const auto q = resolve_pntm_target(pm, clauses);
    switch (spec.kind) {
      case QueryKind::QualReach:
      case QueryKind::QualRepeat: {
        const TriBool v = pntm::qual_decide(pm, pm.initial, q, qual_query(spec));
        result = verdict_json(v, spec.kind, *spec.side);
        exit_code = 0;
        break;
      }
      case QueryKind::ApproxReach:
      case QueryKind::ApproxRepeat: result = run_approx(pntm::Chain(pm, q), spec, exit_code); break;
      case QueryKind::Certify:
        result["status"] = "computed";
        result["certificate"] = certificate_json(pntm::certificate(pm));
        break;
      case QueryKind::Oracle: {
        const pntm::Chain chain(pm, q, {true, spec.gap_cap});
        auto in_bounds = [&](const pntm::State& s) {
          return std::all_of(s.tapes.begin(), s.tapes.end(),
                             [&](const pntm::TapeConfig& t) { return t.cells.size() <= spec.bound; });
        };
        result = oracle_json(oracle::truncate(chain, in_bounds, spec.state_limit));
        result["gap_cap"] = spec.gap_cap;
        break;
      }
      case QueryKind::Simulate:
        result = simulate_json(
            oracle::monte_carlo(pntm::Chain(pm, q), oracle::Event::Reach, spec.runs, spec.horizon, spec.seed), spec);
        break;
      case QueryKind::Validate: break;
    }
  }

  report.body["result"] = result;
  report.exit_code = exit_code;
  const auto elapsed = std::chrono::steady_clock::now() - start;
  report.timing["wall_ms"] = std::chrono::duration<double, std::milli>(elapsed).count();
  return report;
}

}  // namespace decisive
