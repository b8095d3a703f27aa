#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "scring/oracle.hpp"
#include "scring/presentation.hpp"
#include "scring/rewrite.hpp"

using namespace scring;

static Word random_word(std::mt19937_64& rng, const Alphabet& ab, size_t max_len) {
  std::vector<Letter> ls;
  size_t len = rng() % (max_len + 1);
  for (size_t i = 0; i < len; ++i) {
    int g = int(rng() % size_t(ab.size()));
    ls.push_back(rng() % 2 ? pos(g) : neg(g));
  }
  return Word::from_unreduced(ls);
}

TEST_CASE("word text round trips") {
  Alphabet ab{{"x", "y", "zz"}};
  CHECK(format_word(ab, Word{}) == "1");
  CHECK(parse_word(ab, "1").empty());
  CHECK(parse_word(ab, "x^3") == parse_word(ab, "x.x.x"));
  CHECK(parse_word(ab, "zz^-2.y") == parse_word(ab, "zz^-1.zz^-1.y"));
  CHECK_THROWS_AS(parse_word(ab, "x.x^-1"), ParseError);
  CHECK(parse_word(ab, "x.x^-1", true).empty());
  CHECK_THROWS_AS(parse_word(ab, "q"), ParseError);
  CHECK_THROWS_AS(parse_word(ab, "x..y"), ParseError);

  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    Word w = random_word(rng, ab, 12);
    std::string text = format_word(ab, w);
    CHECK(parse_word(ab, text) == w);
    CHECK(format_word(ab, parse_word(ab, text)) == text);
  }
}

TEST_CASE("coefficient text round trips in both fields") {
  CHECK(format_coeff(FieldKind::rational, Rat(1)) == "1");
  CHECK(format_coeff(FieldKind::rational, Rat(-1)) == "-1");
  CHECK(format_coeff(FieldKind::rational, Rat(3, 4)) == "3/4");
  CHECK(parse_coeff(FieldKind::rational, "2/4") == Rat(1, 2));
  CHECK(parse_coeff(FieldKind::gf2, "3") == 1);
  CHECK(parse_coeff(FieldKind::gf2, "1/3") == 1);
  CHECK_THROWS_AS(parse_coeff(FieldKind::gf2, "1/2"), ParseError);
  CHECK_THROWS_AS(parse_coeff(FieldKind::rational, "1/0"), ParseError);
  CHECK_THROWS_AS(parse_coeff(FieldKind::rational, "x"), ParseError);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Rat a(int64_t(rng() % 2000) - 1000, int64_t(rng() % 999) + 1);
    std::string text = format_coeff(FieldKind::rational, a);
    CHECK(parse_coeff(FieldKind::rational, text) == a);
    CHECK(format_coeff(FieldKind::rational, parse_coeff(FieldKind::rational, text)) == text);
  }
}

TEST_CASE("polynomial text round trips") {
  Alphabet ab{{"x", "y"}};
  Polynomial zero(FieldKind::rational);
  CHECK(format_poly(ab, zero) == "0");
  CHECK(parse_poly(ab, FieldKind::rational, "0").is_zero());

  Polynomial p(FieldKind::rational);
  p.add_term(Rat(1, 2), parse_word(ab, "x.y"));
  p.add_term(-1, parse_word(ab, "x"));
  p.add_term(1, Word{});
  CHECK(format_poly(ab, p) == "1/2*x.y - 1*x + 1*1");
  CHECK(parse_poly(ab, FieldKind::rational, format_poly(ab, p)) == p);

  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    Polynomial q(FieldKind::rational);
    size_t terms = rng() % 5;
    for (size_t t = 0; t < terms; ++t)
      q.add_term(Rat(int64_t(rng() % 19) - 9, int64_t(rng() % 7) + 1), random_word(rng, ab, 6));
    std::string text = format_poly(ab, q);
    CHECK(parse_poly(ab, FieldKind::rational, text) == q);
    CHECK(format_poly(ab, parse_poly(ab, FieldKind::rational, text)) == text);
  }

  // gf2 parse folds coefficients mod 2
  Polynomial g = parse_poly(ab, FieldKind::gf2, "3*x + 1*y + 1*y");
  CHECK(format_poly(ab, g) == "1*x");
}

TEST_CASE("presentation files parse and format losslessly") {
  std::string text =
      "field rational\n"
      "generators x y\n"
      "tau 10\n"
      "relation -1*y + 1*x\n"
      "relation 1*x.y + 1/2*y - 1*1\n";
  PresentationFile pf = parse_presentation(text);
  CHECK(pf.field == FieldKind::rational);
  CHECK(pf.alphabet.size() == 2);
  REQUIRE(pf.tau.has_value());
  CHECK(*pf.tau == 10);
  REQUIRE(pf.relations.size() == 2);
  CHECK(format_presentation(pf) == text);

  // comments and blank lines vanish; structure survives
  std::string noisy = "# header\n\nfield rational\ngenerators x y\n# middle\ntau 10\n"
                      "relation 1*x - 1*y\nrelation 1*x.y + 1/2*y - 1*1\n";
  CHECK(format_presentation(parse_presentation(noisy)) == text);

  std::string tri = "field gf2\ngenerators x y z t\nfamily trinomial w=z.t.z n1=4 n2=25\n";
  PresentationFile pt = parse_presentation(tri);
  CHECK(pt.field == FieldKind::gf2);
  REQUIRE(pt.trinomial.has_value());
  CHECK(pt.trinomial->n1 == 4);
  CHECK(pt.trinomial->n2 == 25);
  CHECK(pt.trinomial->w == parse_word(pt.alphabet, "z.t.z"));
  CHECK(format_presentation(pt) == tri);

  std::string grp = "field rational\ngenerators a b\nfamily group a^2.b.a^3.b\n";
  PresentationFile pg = parse_presentation(grp);
  REQUIRE(pg.group_relators.size() == 1);
  CHECK(pg.group_relators[0].size() == 7);
}

TEST_CASE("presentation grammar violations name their line") {
  auto msg_of = [](const std::string& text) {
    try {
      parse_presentation(text);
      return std::string{};
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
  };
  CHECK(msg_of("generators x\nfield rational\nfield gf2\n").find("line 3") != std::string::npos);
  CHECK(msg_of("relation 1*x\ngenerators x\n").find("before generators") != std::string::npos);
  CHECK(msg_of("generators x\nrelation 1*x\nfamily group x\n").find("mixed") != std::string::npos);
  CHECK(msg_of("generators a\nfamily group a.a\nrelation 1*a\n").find("mixed") != std::string::npos);
  CHECK(msg_of("generators x y z t\nfamily trinomial w=z n1=4 n2=25\n"
               "family trinomial w=z n1=4 n2=25\n")
            .find("duplicate") != std::string::npos);
  CHECK(msg_of("generators x\nfrobnicate 3\n").find("unknown keyword") != std::string::npos);
  CHECK(msg_of("generators x\ntau ten\n").find("natural") != std::string::npos);
  CHECK(msg_of("generators x y z t\nfamily trinomial v=z n1=4 n2=25\n").find("w=") !=
        std::string::npos);
  CHECK(msg_of("generators x x\n").find("duplicate generator") != std::string::npos);
  CHECK(msg_of("generators x\nrelation 0\n").find("zero") != std::string::npos);
  CHECK(msg_of("field rational\n").find("no generators") != std::string::npos);
}

TEST_CASE("explicit presentations build working systems") {
  std::string text = "field rational\ngenerators x y\ntau 10\nrelation 1*x - 1*y\n";
  RelationSystem sys = build_system(parse_presentation(text));
  CHECK(sys.tau() == 10);
  CHECK(sys.field() == FieldKind::rational);
  CHECK(sys.in_terms(parse_word(sys.alphabet(), "x")));
  CHECK(build_system(parse_presentation(text), 12).tau() == 12);

  std::string no_tau = "field rational\ngenerators x y\nrelation 1*x - 1*y\n";
  CHECK_THROWS_AS(build_system(parse_presentation(no_tau)), PreconditionError);
  CHECK(build_system(parse_presentation(no_tau), 10).tau() == 10);
  CHECK_THROWS_AS(build_system(parse_presentation(no_tau), 9), PreconditionError);
}

TEST_CASE("presets load by name and derive their thresholds") {
  auto names = preset_names();
  REQUIRE(names.size() == 2);
  CHECK(names[0] == "demo-group");
  CHECK(names[1] == "demo-trinomial");
  CHECK(preset_presentation("nope").empty());
  CHECK_THROWS_AS(load_presentation("no-such-file.pres"), ParseError);

  std::string gtext = preset_presentation("demo-group");
  CHECK(format_presentation(parse_presentation(gtext)) == gtext);
  PresentationFile pg = load_presentation("demo-group");
  REQUIRE(pg.group_relators.size() == 1);
  CHECK(pg.group_relators[0].size() == 368);
  CHECK_FALSE(pg.tau.has_value());
  RelationSystem gsys = build_system(pg);
  CHECK(gsys.tau() == 10);
  CHECK(build_system(pg, 11).tau() == 11);

  std::string ttext = preset_presentation("demo-trinomial");
  CHECK(format_presentation(parse_presentation(ttext)) == ttext);
  RelationSystem tsys = build_system(load_presentation("demo-trinomial"));
  CHECK(tsys.tau() == 10);
  Word v = trinomial_v(demo_trinomial_params());
  CHECK(tsys.in_terms(v));
}

TEST_CASE("certificate text round trips and rejects tampering") {
  RelationSystem sys = build_system(load_presentation("demo-group"));
  const Alphabet& ab = sys.alphabet();
  Word R = load_presentation("demo-group").group_relators[0];
  Word A = parse_word(ab, "b.a.b");
  Word conj = Word::concat(Word::concat(A, R), A.inverse());

  Polynomial p(FieldKind::rational);
  p.add_term(1, conj);
  p.add_term(-1, Word{});
  ReduceResult rr = greedy_reduce(p, sys);
  REQUIRE(rr.trace.outcome == ReduceOutcome::zero);
  REQUIRE(rr.certificate.has_value());
  REQUIRE(verify_certificate(p, *rr.certificate));

  std::string cert = format_certificate(ab, *rr.certificate);
  Certificate back = parse_certificate(ab, FieldKind::rational, cert);
  CHECK(verify_certificate(p, back));
  CHECK(format_certificate(ab, back) == cert);

  // a changed leading coefficient parses but no longer expands to p
  std::string tampered = cert;
  REQUIRE(tampered.substr(0, 2) == "1 ");
  tampered[0] = '2';
  Certificate bad = parse_certificate(ab, FieldKind::rational, tampered);
  CHECK_FALSE(verify_certificate(p, bad));

  // gf2 cannot read rational certificate coefficients with even denominators
  ReduceResult rh = greedy_reduce(p.scaled(Rat(1, 2)), sys);
  REQUIRE(rh.trace.outcome == ReduceOutcome::zero);
  std::string hcert = format_certificate(ab, *rh.certificate);
  CHECK(hcert.find("1/2") != std::string::npos);
  CHECK_THROWS_AS(parse_certificate(ab, FieldKind::gf2, hcert), ParseError);
}
