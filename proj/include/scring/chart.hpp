#pragma once

#include <optional>

#include "scring/relations.hpp"

namespace scring {

// Occurrence of a relation monomial inside a host word.
struct Occ {
  size_t start = 0;
  size_t len = 0;
  Word word;

  size_t end() const { return start + len; }
  bool contains(size_t s, size_t e) const { return start <= s && e <= end(); }
  friend bool operator==(const Occ&, const Occ&) = default;
};

// Maximal occurrences of a host word, left to right.  Starts and ends are
// strictly increasing; no occurrence contains another.
struct Chart {
  Word host;
  std::vector<Occ> occs;
};

Chart compute_chart(RelationSystem& sys, const Word& host);

// Whether every letter of occs[idx] lies inside some other occurrence.
bool fully_covered(const Chart& chart, size_t idx);
std::vector<size_t> covered_indices(const Chart& chart);
std::vector<size_t> non_covered_indices(const Chart& chart);
// Occurrences of measure >= 3.
std::vector<size_t> long_indices(RelationSystem& sys, const Chart& chart);

// Size of a minimal covering: occurrences are grouped into runs of
// pairwise non-separated segments, and each run's span is covered greedily.
size_t minimal_covering(const Chart& chart);

/****** replacements and images ******/

struct Replacement {
  Occ target;       // occurrence of the host being substituted
  Word substitute;  // may be empty; then the join cancels freely
};

Word apply_replacement(const Word& host, const Replacement& r);

// Images of before.occs[idx] in the replaced word, as indices into
// after.occs.  Empty when the occurrence is swallowed by a cancellation.
std::vector<size_t> images_of(RelationSystem& sys, const Chart& before, size_t idx,
                              const Replacement& r, const Chart& after);

// target measure >= tau - 2, substitute nonempty, and the substitute not
// fully covered by images of the other measure >= 3 occurrences.
bool is_admissible(RelationSystem& sys, const Chart& before, size_t idx, const Word& substitute);

/****** neighbour subwords ******/

// Parts of occurrence b after cutting at heavy neighbours (measure >= tau-3):
// t starts where the heavy left neighbour ends, i ends where the heavy right
// neighbour starts, m is their intersection (possibly empty).
struct NeighbourSubwords {
  Occ t, i, m;
};

NeighbourSubwords neighbour_subwords(RelationSystem& sys, const Chart& chart, size_t idx);

/****** virtual members ******/

struct VirtualOptions {
  size_t depth = 3;         // bound on replacement sequence length
  size_t partner_len = 80;  // relation partner length bound
  size_t max_states = 4000;
  bool prune = true;  // middle-part measure prune
  bool dedup = true;
};

// Whether some sequence of admissible replacements away from b carries the
// host to a word where b's image reaches measure tau.  The trivial sequence
// counts, so measure >= tau already answers yes.
Ternary decide_virtual(RelationSystem& sys, const Chart& chart, size_t idx,
                       const VirtualOptions& opt = {});

/****** characteristic and filtration ******/

struct FChar {
  size_t nu = 0;
  size_t v = 0;
  friend bool operator==(const FChar&, const FChar&) = default;
};

bool fchar_less(const FChar& a, const FChar& b);  // lexicographic

struct ChartAnalysis {
  Chart chart;
  std::vector<Lambda> measure;   // per occurrence
  std::vector<bool> member;      // measure >= tau
  std::vector<Ternary> virt;
  size_t nu = 0;
  std::optional<FChar> f;  // absent when some virtual flag is undecided
};

ChartAnalysis analyze_chart(RelationSystem& sys, const Word& host, const VirtualOptions& opt = {});

// f value required in chart-analysis contexts that cannot tolerate an
// undecided flag; throws PreconditionError naming the first undecided
// occurrence.
FChar f_char(RelationSystem& sys, const Word& host, const VirtualOptions& opt = {});

// Diagonal enumeration (0,0), (1,0), (1,1), (2,0), ... of f values.
FChar filtration_value(size_t n);
size_t filtration_index(const FChar& f);

/****** derived monomials ******/

struct DerivedBounds {
  size_t max_words = 200;
  size_t max_word_len = 400;
  VirtualOptions virt;
};

struct DerivedSet {
  std::vector<std::pair<Word, FChar>> words;
  bool complete = true;  // false when a cap cut the closure
};

// Closure of U under replacing a virtual member by an incident monomial
// (empty allowed, with cancellation).
DerivedSet derived_monomials(RelationSystem& sys, const Word& host, const DerivedBounds& bounds);

}  // namespace scring
