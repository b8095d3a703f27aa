#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "scring/relations.hpp"

using namespace scring;

// R generated by x - y; the prolongation closure identifies x and y.
static std::shared_ptr<ExplicitFamily> xy_family() {
  Alphabet ab{{"x", "y"}};
  Polynomial r(FieldKind::rational);
  r.add_term(Rat(1), parse_word(ab, "x"));
  r.add_term(Rat(-1), parse_word(ab, "y"));
  return std::make_shared<ExplicitFamily>(ab, FieldKind::rational, std::vector<Polynomial>{r});
}

// R generated by a.b - c over three generators.
static std::shared_ptr<ExplicitFamily> abc_family() {
  Alphabet ab{{"a", "b", "c"}};
  Polynomial r(FieldKind::rational);
  r.add_term(Rat(1), parse_word(ab, "a.b"));
  r.add_term(Rat(-1), parse_word(ab, "c"));
  return std::make_shared<ExplicitFamily>(ab, FieldKind::rational, std::vector<Polynomial>{r});
}

TEST_CASE("prolongation closure of x - y") {
  auto fam = xy_family();
  CHECK(fam->closure_complete());
  CHECK(fam->relations().size() == 6);
  const Alphabet& ab = fam->alphabet();
  CHECK(fam->in_terms(parse_word(ab, "x^-1.y")));
  CHECK(fam->in_terms(parse_word(ab, "y^-1")));
  CHECK(!fam->in_terms(parse_word(ab, "x.y")));
  CHECK(fam->in_terms(Word{}));

  Polynomial probe(FieldKind::rational);
  probe.add_term(Rat(3), parse_word(ab, "y^-1.x"));
  probe.add_term(Rat(-3), Word{});
  CHECK(fam->contains(probe) == Ternary::yes);  // scalar multiples count
  probe.add_term(Rat(1), parse_word(ab, "x"));
  CHECK(fam->contains(probe) == Ternary::no);
}

TEST_CASE("small pieces and measure in the x - y family") {
  RelationSystem sys(xy_family(), 10, MeasureMode::pieces());
  const Alphabet& ab = sys.alphabet();
  CHECK(sys.is_small_piece(Word{}));
  // moving x from y^-1.x into x.y^-1's context gives y^-1.x.y^-1 - y^-1,
  // which is outside the closure
  CHECK(sys.is_small_piece(parse_word(ab, "x")));
  // x^-1.y occurs in exactly one relation monomial, so every transplant
  // is the identity
  CHECK(!sys.is_small_piece(parse_word(ab, "x^-1.y")));
  CHECK(sys.lambda(Word{}) == 0);
  CHECK(sys.lambda(parse_word(ab, "x")) == 1);
  CHECK(sys.lambda(parse_word(ab, "x^-1.y")) == 2);
  CHECK(format_lambda(kLambdaInf) == "inf");
}

TEST_CASE("transplanting occurrences detects small pieces") {
  RelationSystem sys(abc_family(), 10, MeasureMode::pieces());
  const Alphabet& ab = sys.alphabet();
  // moving b from c^-1.a.b into a.b.c^-1 yields c^-1.a.b.c^-1 - c^-1,
  // which is outside the closure
  CHECK(sys.is_small_piece(parse_word(ab, "b")));
  CHECK(sys.is_small_piece(parse_word(ab, "a.b")));
  CHECK(sys.is_small_piece(parse_word(ab, "c^-1")));
  // c^-1.a.b occurs only once among all relation monomials
  CHECK(!sys.is_small_piece(parse_word(ab, "c^-1.a.b")));
  CHECK(!sys.is_small_piece(parse_word(ab, "b.a")));  // not a relation monomial
  CHECK(sys.lambda(parse_word(ab, "c^-1.a.b")) == 2);
  CHECK(sys.in_terms(parse_word(ab, "b^-1.a^-1.c")));
}

TEST_CASE("letter count measure") {
  Alphabet ab{{"x", "y"}};
  RelationSystem sys(xy_family(), 10,
                     MeasureMode::letter_count({pos(1), neg(1)}));
  CHECK(sys.lambda(parse_word(ab, "x.y.x.y^-1.x")) == 2);
  CHECK(sys.lambda(parse_word(ab, "x.x")) == 0);
  CHECK(sys.lambda(Word{}) == 0);
}

TEST_CASE("max extension scans relation monomials") {
  RelationSystem sys(abc_family(), 10, MeasureMode::pieces());
  const Alphabet& ab = sys.alphabet();
  Word host = parse_word(ab, "c^-1.a.b.b");
  CHECK(sys.max_extension(host, 0) == 3);  // c^-1.a.b
  CHECK(sys.max_extension(host, 1) == 2);  // a.b
  CHECK(sys.max_extension(host, 3) == 1);  // b
}

TEST_CASE("compatibility check passes on a closed list") {
  RelationSystem sys(abc_family(), 10, MeasureMode::pieces());
  CheckReport rep = check_compatibility(sys, 100, 1000);
  CHECK(rep.ok);
  CHECK(!rep.truncated);
  CHECK(rep.checked > 0);
}

TEST_CASE("closure step needs a heavy shared monomial") {
  auto fam = abc_family();
  RelationSystem sys(fam, 10, MeasureMode::pieces());
  const auto& rels = fam->relations();
  REQUIRE(rels.size() >= 2);
  // every monomial here has measure at most 2 < tau - 2
  CHECK(!additive_closure_step(rels[0], rels[1], sys).has_value());
}

TEST_CASE("additive closure membership") {
  auto fam = abc_family();
  RelationSystem sys(fam, 10, MeasureMode::pieces());
  const Alphabet& ab = sys.alphabet();
  Polynomial r(FieldKind::rational);
  r.add_term(Rat(-5), parse_word(ab, "a.b"));
  r.add_term(Rat(5), parse_word(ab, "c"));
  CHECK(is_in_add_closure(r, sys, 10, 1000) == Ternary::yes);

  Polynomial s(FieldKind::rational);
  s.add_term(Rat(1), parse_word(ab, "a.b"));
  s.add_term(Rat(1), parse_word(ab, "c"));
  CHECK(is_in_add_closure(s, sys, 10, 1000) == Ternary::undecided);
}

TEST_CASE("isolation check runs clean on the toy") {
  RelationSystem sys(abc_family(), 10, MeasureMode::pieces());
  CheckReport rep = check_isolation(sys, 6, 4);
  CHECK(rep.ok);  // no monomial reaches measure tau - 2, so no pairs qualify
}

TEST_CASE("measure cache round trip") {
  std::string dir = "/tmp/scring_test_cache";
  {
    RelationSystem sys(abc_family(), 10, MeasureMode::pieces());
    const Alphabet& ab = sys.alphabet();
    CHECK(sys.lambda(parse_word(ab, "c^-1.a.b")) == 2);
    sys.save_cache(dir);
  }
  {
    RelationSystem sys(abc_family(), 10, MeasureMode::pieces());
    sys.load_cache(dir);
    const Alphabet& ab = sys.alphabet();
    CHECK(sys.lambda(parse_word(ab, "c^-1.a.b")) == 2);
  }
}
