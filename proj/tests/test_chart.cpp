#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "scring/chart.hpp"

using namespace scring;

// R generated by a.b - c; the prolongation closure has 12 relations.
static std::shared_ptr<ExplicitFamily> abc_family() {
  Alphabet ab{{"a", "b", "c"}};
  Polynomial r(FieldKind::rational);
  r.add_term(Rat(1), parse_word(ab, "a.b"));
  r.add_term(Rat(-1), parse_word(ab, "c"));
  return std::make_shared<ExplicitFamily>(ab, FieldKind::rational, std::vector<Polynomial>{r});
}

static RelationSystem abc_system() {
  return RelationSystem(abc_family(), 10, MeasureMode::pieces());
}

// Alternating word of the given length starting with x (generator 0).
static Word xy_run(size_t letters) {
  std::vector<Letter> ls;
  for (size_t i = 0; i < letters; ++i) ls.push_back(i % 2 == 0 ? pos(0) : pos(1));
  return Word::from_letters(ls);
}

// Alternating word of the given length starting with y (generator 1).
static Word yx_run(size_t letters) {
  std::vector<Letter> ls;
  for (size_t i = 0; i < letters; ++i) ls.push_back(i % 2 == 0 ? pos(1) : pos(0));
  return Word::from_letters(ls);
}

// R generated by u - v with u = x(yx)^5 and v = (yx)^5 = u without its first
// letter.  Every positive monomial of the closure is a subword of u, so the
// alternating runs below have fully predictable charts.  Measured by letter
// count, u reaches 11 with tau = 10.
static std::shared_ptr<ExplicitFamily> run_family() {
  Alphabet ab{{"x", "y"}};
  Polynomial r(FieldKind::rational);
  r.add_term(Rat(1), xy_run(11));
  r.add_term(Rat(-1), yx_run(10));
  return std::make_shared<ExplicitFamily>(ab, FieldKind::rational, std::vector<Polynomial>{r});
}

static RelationSystem run_system() {
  return RelationSystem(run_family(), 10,
                        MeasureMode::letter_count({pos(0), neg(0), pos(1), neg(1)}));
}

TEST_CASE("chart of a word with a maximal prefix and a trailing letter") {
  RelationSystem sys = abc_system();
  const Alphabet& ab = sys.alphabet();
  Chart ch = compute_chart(sys, parse_word(ab, "c^-1.a.b.b"));
  REQUIRE(ch.occs.size() == 2);
  CHECK(ch.occs[0].start == 0);
  CHECK(ch.occs[0].len == 3);
  CHECK(ch.occs[0].word == parse_word(ab, "c^-1.a.b"));
  CHECK(ch.occs[1].start == 3);
  CHECK(ch.occs[1].len == 1);
  CHECK(ch.occs[1].word == parse_word(ab, "b"));
  CHECK(minimal_covering(ch) == 2);
  CHECK(covered_indices(ch).empty());
  CHECK(non_covered_indices(ch) == std::vector<size_t>{0, 1});
  CHECK(compute_chart(sys, Word{}).occs.empty());
  CHECK(minimal_covering(compute_chart(sys, Word{})) == 0);
}

TEST_CASE("touching singletons form one component") {
  RelationSystem sys = abc_system();
  const Alphabet& ab = sys.alphabet();
  Chart ch = compute_chart(sys, parse_word(ab, "b.a.c.a^-1.b"));
  REQUIRE(ch.occs.size() == 5);
  for (size_t j = 0; j < 5; ++j) {
    CHECK(ch.occs[j].start == j);
    CHECK(ch.occs[j].len == 1);
  }
  CHECK(minimal_covering(ch) == 5);
}

TEST_CASE("replacement by an incident word and its images") {
  RelationSystem sys = abc_system();
  const Alphabet& ab = sys.alphabet();
  Word host = parse_word(ab, "c^-1.a.b.b");
  Chart before = compute_chart(sys, host);
  Replacement r{before.occs[1], parse_word(ab, "a^-1.c")};
  Word after_host = apply_replacement(host, r);
  CHECK(after_host == parse_word(ab, "c^-1.a.b.a^-1.c"));
  Chart after = compute_chart(sys, after_host);
  REQUIRE(after.occs.size() == 2);
  CHECK(after.occs[1].word == parse_word(ab, "a^-1.c"));
  CHECK(images_of(sys, before, 0, r, after) == std::vector<size_t>{0});
  CHECK(images_of(sys, before, 1, r, after) == std::vector<size_t>{1});
}

TEST_CASE("replacement by 1 cancels context letters") {
  RelationSystem sys = abc_system();
  const Alphabet& ab = sys.alphabet();
  Word host = parse_word(ab, "b.a.c.a^-1.b");
  Chart before = compute_chart(sys, host);
  Replacement r{before.occs[2], Word{}};
  Word after_host = apply_replacement(host, r);
  CHECK(after_host == parse_word(ab, "b.b"));
  Chart after = compute_chart(sys, after_host);
  REQUIRE(after.occs.size() == 2);
  CHECK(images_of(sys, before, 0, r, after) == std::vector<size_t>{0});
  CHECK(images_of(sys, before, 1, r, after).empty());  // the a cancels away
  CHECK(images_of(sys, before, 3, r, after).empty());
  CHECK(images_of(sys, before, 4, r, after) == std::vector<size_t>{1});
  CHECK(images_of(sys, before, 2, r, after).empty());  // target with substitute 1
}

TEST_CASE("replacement by 1 can cancel the whole context") {
  RelationSystem sys = abc_system();
  const Alphabet& ab = sys.alphabet();
  Word host = parse_word(ab, "a.c.a^-1");
  Chart before = compute_chart(sys, host);
  REQUIRE(before.occs.size() == 3);
  Replacement r{before.occs[1], Word{}};
  Word after_host = apply_replacement(host, r);
  CHECK(after_host.empty());
  Chart after = compute_chart(sys, after_host);
  CHECK(after.occs.empty());
  CHECK(images_of(sys, before, 0, r, after).empty());
  CHECK(images_of(sys, before, 2, r, after).empty());
}

TEST_CASE("replacement target must match the host") {
  RelationSystem sys = abc_system();
  const Alphabet& ab = sys.alphabet();
  Word host = parse_word(ab, "a.b");
  Replacement r{{0, 1, parse_word(ab, "b")}, Word{}};
  CHECK_THROWS_AS(apply_replacement(host, r), PreconditionError);
}

TEST_CASE("admissibility gate on the target measure") {
  RelationSystem sys = abc_system();
  const Alphabet& ab = sys.alphabet();
  Chart ch = compute_chart(sys, parse_word(ab, "c^-1.a.b.b"));
  // both occurrences measure at most 2 < tau - 2
  CHECK(!is_admissible(sys, ch, 0, parse_word(ab, "c")));
  CHECK(!is_admissible(sys, ch, 1, parse_word(ab, "a^-1.c")));
  CHECK(!is_admissible(sys, ch, 1, Word{}));
}

TEST_CASE("overlapping runs: chart, covering, neighbours, images") {
  RelationSystem sys = run_system();
  Word host = xy_run(17);  // (xy)^8 x
  Chart ch = compute_chart(sys, host);
  REQUIRE(ch.occs.size() == 4);
  for (size_t j = 0; j < 4; ++j) {
    CHECK(ch.occs[j].start == 2 * j);
    CHECK(ch.occs[j].len == 11);
    CHECK(ch.occs[j].word == xy_run(11));
  }
  CHECK(minimal_covering(ch) == 2);
  CHECK(covered_indices(ch) == std::vector<size_t>{1, 2});
  CHECK(non_covered_indices(ch) == std::vector<size_t>{0, 3});
  CHECK(long_indices(sys, ch) == std::vector<size_t>{0, 1, 2, 3});

  NeighbourSubwords ns0 = neighbour_subwords(sys, ch, 0);
  CHECK(ns0.t.start == 0);
  CHECK(ns0.t.len == 11);   // no left neighbour
  CHECK(ns0.i.start == 0);
  CHECK(ns0.i.len == 2);    // heavy right neighbour starts at 2
  CHECK(ns0.m.len == 2);
  CHECK(ns0.m.word == xy_run(2));

  NeighbourSubwords ns1 = neighbour_subwords(sys, ch, 1);
  CHECK(ns1.t.start == 11);  // left neighbour [0,11) ends at 11
  CHECK(ns1.t.len == 2);
  CHECK(ns1.i.start == 2);
  CHECK(ns1.i.len == 2);     // right neighbour starts at 4
  CHECK(ns1.m.len == 0);     // crossing cuts leave an empty middle

  // replacing [0,11) by v shifts the rest left by one and merges the runs
  Replacement r{ch.occs[0], yx_run(10)};
  Word after_host = apply_replacement(host, r);
  CHECK(after_host == yx_run(16));
  Chart after = compute_chart(sys, after_host);
  REQUIRE(after.occs.size() == 4);
  CHECK(after.occs[0].len == 10);
  CHECK(after.occs[1].start == 1);
  CHECK(after.occs[3].start == 5);
  CHECK(images_of(sys, ch, 0, r, after) == std::vector<size_t>{0});
  // the key segment [10,12) sits inside three of the new occurrences
  CHECK(images_of(sys, ch, 1, r, after) == std::vector<size_t>{1, 2, 3});
}

TEST_CASE("virtual members under the letter count measure") {
  RelationSystem sys = run_system();
  CHECK(run_family()->closure_complete());

  // measure 11 >= tau certifies directly
  Chart full = compute_chart(sys, xy_run(11));
  REQUIRE(full.occs.size() == 1);
  CHECK(decide_virtual(sys, full, 0) == Ternary::yes);

  // measure 8 with nothing to replace is a definite no
  Chart lone = compute_chart(sys, xy_run(8));
  REQUIRE(lone.occs.size() == 1);
  CHECK(decide_virtual(sys, lone, 0) == Ternary::no);

  // measure below tau - 2 fails the gate
  Chart light = compute_chart(sys, xy_run(7));
  REQUIRE(light.occs.size() == 1);
  CHECK(decide_virtual(sys, light, 0) == Ternary::no);
}

TEST_CASE("virtual member found by replacing the blocking neighbour") {
  RelationSystem sys = run_system();
  // (xy)^4 then (yx)^4: the doubled y splits the chart into two runs of
  // measure 8 = tau - 2
  Word host = Word::concat(xy_run(8), yx_run(8));
  REQUIRE(host.size() == 16);
  Chart ch = compute_chart(sys, host);
  REQUIRE(ch.occs.size() == 2);
  CHECK(ch.occs[0].len == 8);
  CHECK(ch.occs[1].start == 8);
  CHECK(ch.occs[1].len == 8);

  // replacing the right run by x(yx)^4 merges everything into (xy)^8 x,
  // whose leftmost occurrence has measure 11
  CHECK(is_admissible(sys, ch, 1, xy_run(9)));
  CHECK(decide_virtual(sys, ch, 0) == Ternary::yes);

  // the mirrored attempt stays blocked by the doubled letter, and the
  // bounded partner enumeration cannot certify exhaustion
  CHECK(decide_virtual(sys, ch, 1) == Ternary::undecided);

  ChartAnalysis an = analyze_chart(sys, host);
  CHECK(an.nu == 2);
  CHECK(!an.f.has_value());
  CHECK_THROWS_AS(f_char(sys, host), PreconditionError);
}

TEST_CASE("analysis of a fully decided host") {
  RelationSystem sys = run_system();
  Word host = Word::concat(xy_run(8), yx_run(6));
  Chart ch = compute_chart(sys, host);
  REQUIRE(ch.occs.size() == 2);
  // the second run has measure 6: both flags resolve to no
  ChartAnalysis an = analyze_chart(sys, host);
  CHECK(an.measure == std::vector<Lambda>{8, 6});
  CHECK(an.member == std::vector<bool>{false, false});
  CHECK(an.virt == std::vector<Ternary>{Ternary::no, Ternary::no});
  REQUIRE(an.f.has_value());
  CHECK(an.f->nu == 2);
  CHECK(an.f->v == 0);

  ChartAnalysis one = analyze_chart(sys, xy_run(11));
  REQUIRE(one.f.has_value());
  CHECK(one.f->nu == 1);
  CHECK(one.f->v == 1);
  CHECK(one.member == std::vector<bool>{true});

  FChar empty = f_char(sys, Word{});
  CHECK(empty.nu == 0);
  CHECK(empty.v == 0);

  // mechanics only: the toy breaks v <= nu, which the filtration rejects
  ChartAnalysis wide = analyze_chart(sys, xy_run(17));
  REQUIRE(wide.f.has_value());
  CHECK(wide.f->nu == 2);
  CHECK(wide.f->v == 4);
  CHECK_THROWS_AS(filtration_index(*wide.f), PreconditionError);
}

TEST_CASE("filtration recurrence and its inverse") {
  CHECK(filtration_value(0).nu == 0);
  CHECK(filtration_value(0).v == 0);
  CHECK(filtration_value(1).nu == 1);
  CHECK(filtration_value(1).v == 0);
  CHECK(filtration_value(2).nu == 1);
  CHECK(filtration_value(2).v == 1);
  CHECK(filtration_value(3).nu == 2);
  CHECK(filtration_value(3).v == 0);
  CHECK(filtration_value(4).nu == 2);
  CHECK(filtration_value(4).v == 1);
  CHECK(filtration_index(FChar{2, 1}) == 4);
  for (size_t n = 0; n <= 20; ++n) CHECK(filtration_index(filtration_value(n)) == n);
  CHECK(fchar_less(FChar{1, 0}, FChar{1, 1}));
  CHECK(fchar_less(FChar{1, 1}, FChar{2, 0}));
  CHECK(!fchar_less(FChar{2, 0}, FChar{1, 1}));
}

TEST_CASE("derived monomials of the full run") {
  RelationSystem sys = run_system();
  DerivedBounds bounds;
  bounds.max_words = 10;
  bounds.max_word_len = 50;
  DerivedSet d = derived_monomials(sys, xy_run(11), bounds);
  CHECK(d.complete);
  REQUIRE(d.words.size() == 3);
  CHECK(d.words[0].first == xy_run(11));
  CHECK(d.words[1].first == yx_run(10));
  // v extends on the left to x^-1 v inside the closure
  Word xinv_v = Word::concat(Word::from_letters({neg(0)}), yx_run(10));
  CHECK(d.words[2].first == xinv_v);
  for (const auto& [w, f] : d.words) {
    CHECK(f.nu == 1);
    CHECK(f.v == 1);
  }
}
