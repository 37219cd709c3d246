#include <doctest.h>

#include <fstream>
#include <sstream>

#include "decisive/error.hpp"
#include "decisive/model_io.hpp"
#include "decisive/query.hpp"

using namespace decisive;

namespace {

std::string model_path(const std::string& name) { return std::string(DECISIVE_MODELS_DIR) + "/" + name; }

ErrorCode parse_error(const std::string& text, const ParseOptions& options = {}) {
  try {
    parse_model(text, options);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

std::string parse_message(const std::string& text) {
  try {
    parse_model(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

QuerySpec spec(QueryKind kind) {
  QuerySpec s;
  s.kind = kind;
  return s;
}

}  // namespace

TEST_CASE("minimal pvass") {
  const Model m = load_model_file(model_path("minimal.pvass"));
  REQUIRE(m.kind() == ModelKind::Pvass);
  CHECK(std::get<pvass::Pvass>(m.data).num_states() == 1);
}

TEST_CASE("sample models parse") {
  CHECK(load_model_file(model_path("gambler.pvass")).kind() == ModelKind::Pvass);
  const Model pp = load_model_file(model_path("pingpong.plcs"));
  REQUIRE(pp.kind() == ModelKind::Plcs);
  CHECK(std::get<plcs::Plcs>(pp.data).lambda == Rational(1, 10));
  const Model ch = load_model_file(model_path("chain.pntm"));
  REQUIRE(ch.kind() == ModelKind::Pntm);
  CHECK(std::get<pntm::Pntm>(ch.data).epsilon == Rational(1, 2));
  CHECK(ch.targets == std::vector<std::string>{"q q"});
}

TEST_CASE("round trip through the canonical printer") {
  for (const char* name : {"minimal.pvass", "gambler.pvass", "gambler_up.pvass", "pingpong.plcs", "chain.pntm"}) {
    CAPTURE(name);
    const Model m = load_model_file(model_path(name));
    const std::string once = print_model(m);
    const Model again = parse_model(once);
    CHECK(print_model(again) == once);
    CHECK(again.targets == m.targets);
  }
}

TEST_CASE("round trip keeps structure") {
  const std::string text =
      "plcs loss=1/3\nchannels c d\nmessages a b\nstates p q\ninit p c=\"ab\" d=\"\"\n"
      "trans p -> q w=2 send d b\ntrans q -> p w=1 recv c a\ntrans q -> q w=1 nop\ntrans p -> p w=3 nop\n"
      "target up q c>=\"a\" d>=\"b\"\n";
  const Model m = parse_model(text);
  const Model again = parse_model(print_model(m));
  const auto& a = std::get<plcs::Plcs>(m.data);
  const auto& b = std::get<plcs::Plcs>(again.data);
  CHECK(a.initial == b.initial);
  CHECK(a.lambda == b.lambda);
  REQUIRE(a.transitions.size() == b.transitions.size());
  for (std::size_t i = 0; i < a.transitions.size(); ++i) {
    CHECK(a.transitions[i].weight == b.transitions[i].weight);
    CHECK(a.transitions[i].op.kind == b.transitions[i].op.kind);
  }
}

TEST_CASE("syntax errors carry line and column") {
  CHECK(parse_error("") == ErrorCode::SyntaxError);
  CHECK(parse_error("petri\n") == ErrorCode::SyntaxError);
  const std::string msg = parse_message("pvass\nvars x\nstates s\ninit s x=0\ntrans s -> t w=1\n");
  CHECK(msg.find("line 5") != std::string::npos);
  CHECK(msg.find("column") != std::string::npos);
  CHECK(parse_error("pvass\nvars x\nstates s\ninit s x=0\ntrans s -> s w=1 x+2\n") == ErrorCode::SyntaxError);
  CHECK(parse_error("pvass\nvars x\nstates s\ninit s x=0\ntrans s -> s w=1\ntarget up s y>=1\n") ==
        ErrorCode::SyntaxError);
}

TEST_CASE("validation errors") {
  const std::string lcs =
      "plcs loss=0\nchannels c\nmessages a\nstates q\ninit q c=\"\"\ntrans q -> q w=1 nop\n";
  CHECK(parse_error(lcs) == ErrorCode::ValidationError);
  try {
    parse_model(lcs);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("0<λ<1") != std::string::npos);
  }

  const std::string dead = "pvass\nvars x\nstates s\ninit s x=0\ntrans s -> s w=1 x-1\n";
  CHECK(parse_error(dead) == ErrorCode::ValidationError);
  CHECK(std::get<pvass::Pvass>(parse_model(dead, {.auto_selfloop = true}).data).transitions.size() == 2);

  const std::string partial =
      "pntm eps=1/2 tapes=1\ngamma a #\nstates s\ninit s tape0=\"a\" head0=0\n"
      "trans s read a -> s write a move 0\n";
  CHECK(parse_error(partial) == ErrorCode::ValidationError);
  const std::string why = parse_message(partial);
  CHECK(why.find("'s'") != std::string::npos);
  CHECK(why.find("#") != std::string::npos);
  CHECK(std::get<pntm::Pntm>(parse_model(partial, {.auto_total = true}).data).transitions.size() == 2);
}

TEST_CASE("comments") {
  const std::string text =
      "# leading comment\npvass  # kind\nvars x\nstates s # one state\ninit s x=0\ntrans s -> s w=1\n";
  CHECK(parse_model(text).kind() == ModelKind::Pvass);
  const std::string ntm =
      "pntm eps=1/2 tapes=1\n# whole-line comment\ngamma a #\nstates s\ninit s tape0=\"\" head0=0\n"
      "trans s read a -> s write a move 0\ntrans s read # -> s write # move 0\n";
  CHECK(parse_model(ntm).kind() == ModelKind::Pntm);
}

TEST_CASE("targets") {
  const Model m = load_model_file(model_path("gambler_up.pvass"));
  const auto& g = std::get<pvass::Pvass>(m.data);
  const auto up = resolve_pvass_target(g, {"up g x>=3"});
  CHECK_FALSE(up.is_q_state_target());
  CHECK(up.contains({0, {3}}));
  CHECK_FALSE(up.contains({0, {2}}));
  CHECK(resolve_pvass_target(g, {"q g"}).is_q_state_target());
  CHECK_THROWS_AS(resolve_pvass_target(g, {}), Error);
  CHECK_THROWS_AS(resolve_pvass_target(g, {"q nowhere"}), Error);

  const Model pp = load_model_file(model_path("pingpong.plcs"));
  const auto t = resolve_plcs_target(std::get<plcs::Plcs>(pp.data), {"up q0 c>=\"ping\""});
  CHECK(t.contains({0, {std::string(1, '\0')}}));
  CHECK_FALSE(t.contains({0, {""}}));
}

TEST_CASE("query specs are validated") {
  const Model m = load_model_file(model_path("gambler.pvass"));
  CHECK_THROWS_AS(run_query(m, spec(QueryKind::QualReach)), Error);
  QuerySpec approx = spec(QueryKind::ApproxReach);
  CHECK_THROWS_AS(run_query(m, approx), Error);
  approx.eps = Rational(1, 100);
  approx.side = pvass::Side::One;
  CHECK_THROWS_AS(run_query(m, approx), Error);
}

TEST_CASE("approx-reach on the guarded gambler") {
  const Model m = load_model_file(model_path("gambler.pvass"));
  QuerySpec s = spec(QueryKind::ApproxReach);
  s.eps = Rational(1, 100);
  const Report r = run_query(m, s);
  CHECK(r.exit_code == 0);
  CHECK(r.body["result"]["status"] == "approx");
  CHECK(parse_rational(r.body["result"]["theta"].get<std::string>()) >= Rational(99, 100));

  QuerySpec o = spec(QueryKind::Oracle);
  o.bound = 30;
  const Report band = run_query(m, o);
  const Rational upper = parse_rational(band.body["result"]["reach"]["upper"].get<std::string>());
  CHECK(upper == 1);
}

TEST_CASE("qual-repeat zero on a PVASS is unknown") {
  const Model m = load_model_file(model_path("minimal.pvass"));
  QuerySpec s = spec(QueryKind::QualRepeat);
  s.side = pvass::Side::Zero;
  s.targets = {"q s"};
  const Report r = run_query(m, s);
  CHECK(r.exit_code == 2);
  CHECK(r.body["result"]["status"] == "unknown");
  CHECK_FALSE(r.body["result"]["reason"].get<std::string>().empty());
}

TEST_CASE("certify on the noisy machine") {
  const Model m = load_model_file(model_path("chain.pntm"));
  const Report r = run_query(m, spec(QueryKind::Certify));
  CHECK(r.exit_code == 0);
  const auto& cert = r.body["result"]["certificate"];
  CHECK(cert["beta"] == "1/4");
  CHECK(cert["span"] == 3);
  CHECK(cert["alpha"] == "1/64");
}

TEST_CASE("reports are deterministic apart from timing") {
  const Model m = load_model_file(model_path("pingpong.plcs"));
  for (QueryKind kind : {QueryKind::Validate, QueryKind::ApproxRepeat, QueryKind::Oracle, QueryKind::Simulate}) {
    QuerySpec s = spec(kind);
    if (kind == QueryKind::ApproxRepeat) s.eps = Rational(1, 100);
    s.bound = 4;
    s.runs = 200;
    s.seed = 5;
    const Report a = run_query(m, s);
    const Report b = run_query(m, s);
    CHECK(a.body.dump() == b.body.dump());
    CHECK(a.document().contains("timing"));
  }
}
