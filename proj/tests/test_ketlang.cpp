#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "qent/ketlang.hpp"
#include "qent/rng.hpp"
#include "qent/statelib.hpp"

using namespace qent;
namespace k = qent::ket;

TEST_CASE("parse: structure of a scaled Bell sum") {
  const auto e = k::parse("(|00>+|11>)/2^(1/2)");
  REQUIRE(e->kind == k::Expr::Kind::Scale);
  CHECK(e->division);
  CHECK(e->scalar.rad_num == 2);
  CHECK(e->arity == 2);
  REQUIRE(e->a->kind == k::Expr::Kind::Paren);
  CHECK(e->a->a->kind == k::Expr::Kind::Sum);
}

TEST_CASE("parse: W4 row and unicode input") {
  const auto ascii = k::parse("(|0001>+|0010>+|0100>+|1000>)/2");
  CHECK(ascii->arity == 4);
  const auto unicode = k::parse("(|0001\xE2\x9F\xA9+|0010\xE2\x9F\xA9+|0100\xE2\x9F\xA9+|1000\xE2\x9F\xA9)/2");
  CHECK(k::ast_equal(ascii, unicode));
  const auto tensored = k::parse("(|01>+|10>)/2^(1/2)\xE2\x8A\x97(|0>+|1>)/2^(1/2)");
  const auto tensored_ascii = k::parse("(|01>+|10>)/2^(1/2)(x)(|0>+|1>)/2^(1/2)");
  CHECK(k::ast_equal(tensored, tensored_ascii));
}

TEST_CASE("parse: syntax errors carry offsets and expectations") {
  try {
    k::parse("(|01>+|10)/2");
    FAIL("expected SyntaxError");
  } catch (const k::SyntaxError& e) {
    CHECK(e.offset == 9);  // the ')' where the ket should have closed
    REQUIRE_FALSE(e.expected.empty());
    CHECK(e.expected.front().find('>') != std::string::npos);
  }

  CHECK_THROWS_AS(k::parse(""), k::SyntaxError);
  CHECK_THROWS_AS(k::parse("(|0>+|1>"), k::SyntaxError);
  CHECK_THROWS_AS(k::parse("|0> @ |1>"), k::SyntaxError);
  CHECK_THROWS_AS(k::parse("2^(1/3)|0>"), k::SyntaxError);
  CHECK_THROWS_AS(k::parse("|0>+|00>"), k::MixedArity);
}

TEST_CASE("evaluate: pinned amplitudes") {
  const PureState ghz = k::evaluate_text("(|0000>+|1111>)/2^(1/2)");
  CHECK(ghz.amp(0).real() == Catch::Approx(std::sqrt(0.5)).margin(1e-15));
  CHECK(ghz.amp(15).real() == Catch::Approx(std::sqrt(0.5)).margin(1e-15));

  const PureState iq = k::evaluate_text("i|1>+|0>");
  CHECK(std::abs(iq.amp(0) - cplx{std::sqrt(0.5), 0.0}) < 1e-15);
  CHECK(std::abs(iq.amp(1) - cplx{0.0, std::sqrt(0.5)}) < 1e-15);

  // zeta0 written with the +-1/2 coefficients spelled one by one.
  const PureState zeta0 = k::evaluate_text(
      "(|0000>-|0011>-|0101>+|0110>)/2", /*normalize=*/false);
  CHECK(zeta0.is_normalized());
  CHECK(zeta0.amp(0b0011).real() == Catch::Approx(-0.5).margin(1e-15));
  const auto reg_zeta0 = named_state("zeta0");
  REQUIRE(reg_zeta0.has_value());
  for (std::size_t i = 0; i < 16; ++i)
    CHECK(std::abs(zeta0.amp(i) - reg_zeta0->amp(i)) < 1e-15);

  double pre_norm = 0.0;
  k::evaluate_text("|0>+|1>", true, &pre_norm);
  CHECK(pre_norm == Catch::Approx(std::sqrt(2.0)).margin(1e-15));

  CHECK_THROWS_AS(k::evaluate_text("|0>-|0>"), ZeroVector);
}

TEST_CASE("evaluate: scalar arithmetic stays exact until the final fold") {
  // 3/sqrt(12) = sqrt(3)/2, so these two spellings must agree bitwise.
  const PureState a = k::evaluate_text("(3|0>+|1>)/sqrt(12)", false);
  CHECK(a.amp(0).real() == Catch::Approx(std::sqrt(0.75)).margin(1e-15));
  const PureState b = k::evaluate_text("(|0>+|1>)/2^(1/2)(x)(|0>+|1>)/2^(1/2)", false);
  CHECK(b.amp(0).real() == Catch::Approx(0.5).margin(1e-16));
  CHECK(b.is_normalized());
}

TEST_CASE("round trip: registry corpus reparses to identical ASTs") {
  for (const auto& row : table1_registry()) {
    const auto ast = k::parse(row.ket_text);
    const std::string printed = k::pretty_print(ast);
    const auto reparsed = k::parse(printed);
    INFO(row.id << ": " << printed);
    CHECK(k::ast_equal(ast, reparsed));
  }
}

TEST_CASE("registry corpus evaluates to the registry states") {
  for (const auto& row : table1_registry()) {
    const PureState from_text = k::evaluate_text(row.ket_text);
    const PureState built = row.build();
    INFO(row.id);
    for (std::size_t i = 0; i < built.dim(); ++i)
      CHECK(std::abs(from_text.amp(i) - built.amp(i)) <= 1e-12);
  }
}

TEST_CASE("fuzz: parser throws KetError, never crashes") {
  RngStream rng(kDefaultSeed, 61);
  const std::string alphabet = "()|01+-/^*i> <sqrtx\xE2\x8A\x97\xE2\x9F\xA9";
  int parsed_ok = 0;
  for (int rep = 0; rep < 3000; ++rep) {
    // Mostly short strings, with occasional inputs up to the 1 KiB bound.
    const std::size_t len =
        rep % 50 == 0 ? 512 + rng.integer(512) : 1 + rng.integer(80);
    std::string text;
    for (std::size_t i = 0; i < len; ++i)
      text += alphabet[rng.integer(alphabet.size())];
    try {
      const auto ast = k::parse(text);
      ++parsed_ok;
      k::pretty_print(ast);
    } catch (const k::KetError&) {
      // expected for almost every random string
    }
  }
  CHECK(parsed_ok >= 0);

  // Mutations of valid corpus strings.
  const std::string base = "(|0001>+|0010>+|0100>+|1000>)/2";
  for (int rep = 0; rep < 2000; ++rep) {
    std::string text = base;
    const std::size_t pos = rng.integer(text.size());
    switch (rng.integer(3)) {
      case 0: text.erase(pos, 1); break;
      case 1: text[pos] = alphabet[rng.integer(alphabet.size())]; break;
      default: text.insert(pos, 1, alphabet[rng.integer(alphabet.size())]); break;
    }
    try {
      k::evaluate(k::parse(text), false);
    } catch (const k::KetError&) {
    } catch (const Error&) {
      // evaluation may reject (ZeroVector etc.); must still be a typed error
    }
  }
}
