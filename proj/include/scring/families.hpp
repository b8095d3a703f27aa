#pragma once

#include "scring/relations.hpp"

namespace scring {

/******************************  group relators  ****************************/

struct GroupPresentation {
  Alphabet alphabet;
  std::vector<Word> relators;
  std::vector<Word> symmetrized;  // cyclic shifts of the relators and their inverses
};

// Validates nonempty cyclically reduced relators and that no symmetrized
// relator is a subword of another, then computes the symmetrized closure.
GroupPresentation group_presentation(Alphabet ab, std::vector<Word> relators);

// c == 1, or c is a prefix of at least two distinct symmetrized relator
// streams (the relator repeated past its end).
bool group_small_piece(const Word& c, const GroupPresentation& pres);

inline constexpr size_t kNoPieceBound = std::numeric_limits<size_t>::max();

// Minimum over the symmetrized relators of the least number of group small
// pieces concatenating to the relator; kNoPieceBound when some relator is
// not a product of small pieces at all.
size_t check_Cm(const GroupPresentation& pres);

// Repeatedly replaces the leftmost longest occurrence of strictly more than
// half of a relator circle by the complementary arc until none remains.
Word dehn_reduce(const Word& w, const GroupPresentation& pres);

// Relation system of the group ring: monomials are the relator circle words
// (arcs of any winding), relations the binomials joining two arcs with the
// same endpoints, tau = floor(m/2) - 1 for the computed C(m) value; errors
// when m < 22.
RelationSystem make_group_system(const GroupPresentation& pres,
                                 FieldKind k = FieldKind::rational);

/******************************  trinomial quotients  ***********************/

struct TrinomialParams {
  Alphabet alphabet;
  int x = 0;  // generator indices; v is built from x and y
  int y = 1;
  Word w;
  size_t n1 = 0;
  size_t n2 = 0;
};

// x^{n1} y x^{n1+1} y ... x^{n2} y
Word trinomial_v(const TrinomialParams& params);

// Two directed labeled cycles sharing the base vertex 0: the v-cycle through
// vertices 1..|v|-1 and the w-cycle through |v|..|v|+|w|-2.
struct TwoLoopGraph {
  struct Edge {
    size_t from = 0;
    size_t to = 0;
    Letter label;
    bool v_marker = false;  // first edge of the v-cycle, counts winding
    bool w_marker = false;
  };
  Word v, w;
  std::vector<Edge> edges;
  std::vector<std::vector<size_t>> out;  // vertex -> edge ids
  std::vector<std::vector<size_t>> in;

  size_t vertices() const { return out.size(); }
};

TwoLoopGraph two_loop_graph(const Word& v, const Word& w);

// Number of distinct edge paths spelling c, traversing an edge forward on
// its label and backward on the inverse.  The empty word counts one path
// per vertex.
size_t count_paths(const Word& c, const TwoLoopGraph& g);

// Validates the parameters (each violation named separately), then builds
// the relation system: the measure counts y letters, tau = 10, smallness is
// path non-uniqueness, relations are the conjugates of v^-1 - 1 - w and the
// equal-path binomials.
RelationSystem make_trinomial_system(const TrinomialParams& params,
                                     FieldKind k = FieldKind::rational);

/******************************  demo presets  ******************************/

// Single relator a^4 b a^5 b ... a^26 b over {a, b}.
GroupPresentation demo_group_presentation();

// Generators {x, y, z, t}, w = z.t.z, n1 = 4, n2 = 25.
TrinomialParams demo_trinomial_params();

}  // namespace scring
