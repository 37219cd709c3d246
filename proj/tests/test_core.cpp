#include <doctest.h>

#include <random>

#include "decisive/chain.hpp"
#include "decisive/error.hpp"
#include "decisive/rational.hpp"
#include "support.hpp"

using namespace decisive;

TEST_CASE("parse_rational accepts integers, fractions and decimals") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("2/4") == Rational(1, 2));
  CHECK(parse_rational("-6/4") == Rational(-3, 2));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("1/100") == Rational(1, 100));
}

TEST_CASE("parse_rational rejects malformed text") {
  for (const char* bad : {"", "1/0", "a", "1/", "/2", "1.2.3", "1 /2"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_rational(bad), Error);
  }
  try {
    parse_rational("1/0");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("make_rational canonicalizes") {
  const Rational q = make_rational(6, -8);
  CHECK(q.get_num() == -3);
  CHECK(q.get_den() == 4);
  CHECK_THROWS_AS(make_rational(1, 0), Error);
}

TEST_CASE("fraction and decimal rendering") {
  CHECK(to_fraction(Rational(3)) == "3/1");
  CHECK(to_fraction(Rational(-1, 3)) == "-1/3");
  CHECK(to_decimal(Rational(1, 3), 4) == "0.3333");
  CHECK(to_decimal(Rational(2, 3), 3) == "0.666");
  CHECK(to_decimal(Rational(1), 2) == "1.00");
}

TEST_CASE("rational arithmetic is exact") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const Rational a = testing::random_fraction(rng, 1000);
    const Rational b = testing::random_fraction(rng, 1000);
    CHECK((a + b) - b == a);
    CHECK((a * b) / b == a);
    Rational c = a;
    c.canonicalize();
    CHECK(c == a);
    CHECK(c.get_num() == a.get_num());
  }
  CHECK(pow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(pow(Rational(5, 7), 0) == 1);
}

TEST_CASE("DistributionBuilder merges duplicates and keeps first-insertion order") {
  DistributionBuilder<int> b;
  b.add(3, Rational(1, 4));
  b.add(1, Rational(1, 4));
  b.add(3, Rational(1, 2));
  b.add(5, Rational(0));
  const auto d = std::move(b).build();
  REQUIRE(d.size() == 2);
  CHECK(d.entries[0].first == 3);
  CHECK(d.entries[0].second == Rational(3, 4));
  CHECK(d.entries[1].first == 1);
  CHECK(d.total() == 1);
  CHECK(d.probability_of(5) == 0);
}

TEST_CASE("TriBool negation keeps Unknown") {
  CHECK(TriBool::holds().negated().is_fails());
  CHECK(TriBool::fails().negated().is_holds());
  CHECK(TriBool::unknown("x").negated().is_unknown());
  CHECK(TriBool::from_bool(true).is_holds());
  CHECK(std::string(verdict_name(Verdict::Unknown)) == "unknown");
}

TEST_CASE("globally coarse certificate sets alpha = beta^span") {
  const auto cert = DecisivenessCertificate::globally_coarse(Rational(1, 3), 2, "F");
  CHECK(cert.kind == DecisivenessCertificate::Kind::GloballyCoarse);
  CHECK(cert.alpha == Rational(1, 9));
  CHECK(DecisivenessCertificate::globally_coarse(Rational(1), 7, "F").alpha == 1);
  CHECK_THROWS_AS(DecisivenessCertificate::globally_coarse(Rational(0), 1, "F"), Error);
  CHECK_THROWS_AS(DecisivenessCertificate::globally_coarse(Rational(3, 2), 1, "F"), Error);
}

TEST_CASE("validate_chain_contract accepts a proper chain") {
  testing::GamblerChain g{Rational(2, 3)};
  const auto report = validate_chain_contract(g, {0, 1, 2, 50});
  CHECK(report.checked == 4);
  CHECK(report.ok());
}

TEST_CASE("validate_chain_contract reports a row summing to 9/10") {
  testing::BrokenChain broken;
  const auto report = validate_chain_contract(broken, {0});
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].kind == "sum");
  CHECK(report.violations[0].state == "#0");
  CHECK(report.violations[0].message.find("9/10") != std::string::npos);
}

TEST_CASE("gambler successors at 1 with up-probability 2/3") {
  testing::GamblerChain g{Rational(2, 3)};
  const auto d = g.successors(1);
  CHECK(d.probability_of(2) == Rational(2, 3));
  CHECK(d.probability_of(0) == Rational(1, 3));
  CHECK(d.total() == 1);
}

TEST_CASE("error codes have stable names") {
  CHECK(std::string(error_code_name(ErrorCode::SyntaxError)) == "SyntaxError");
  CHECK(static_cast<int>(ErrorCode::LimitExceeded) == 9);
  CHECK(static_cast<int>(ErrorCode::Internal) == 99);
}
