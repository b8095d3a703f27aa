#pragma once

#include "scring/rewrite.hpp"

namespace scring {

// Hard caps for the reference searches.  Oracles refuse (error or a reported
// cap flag) instead of silently truncating.
struct OracleCaps {
  size_t lambda_max_letters = 24;  // exhaustive measure explores 2^(n-1) cuts
  size_t virtual_partner_len = 160;
  size_t virtual_max_states = 200000;
  size_t member_max_rows = 4000;
  size_t member_max_cols = 8000;
};

// Whether the expansion sum coeff * left * relation * right over the steps
// equals p term by term.
bool verify_certificate(const Polynomial& p, const Certificate& cert);

struct MembershipResult {
  bool member = false;
  std::optional<Certificate> certificate;  // present and verified on member
  bool capped = false;                     // a saturation cap was hit
  size_t rows = 0;
  size_t cols = 0;
};

// Linear-algebra membership search bounded by word length: saturates the
// words reachable from the monomials of p by relation application keeping
// every word shorter than len_bound, then solves for p as an exact linear
// combination of the placed relations.  Gaussian elimination over the field;
// columns ordered by host word Deglex then position, rows by first discovery.
// member implies a verified certificate; unknown (member == false) is not a
// non-membership proof.  Errors when a monomial of p reaches len_bound.
MembershipResult bounded_membership(const Polynomial& p, RelationSystem& sys, size_t len_bound,
                                    const OracleCaps& caps = {});

// Minimum over every cut-point subset of the number of parts, all parts small
// pieces; kLambdaInf when no cut works.  Independent of the memoized search.
// Errors on words longer than the cap.  Letter-count measures have a closed
// form and are returned directly.
Lambda exhaustive_lambda(RelationSystem& sys, const Word& u, const OracleCaps& caps = {});

struct ExhaustiveVirtualResult {
  Ternary answer = Ternary::undecided;
  bool capped = false;
  size_t states = 0;
};

// Unpruned breadth-first enumeration of admissible replacement sequences up
// to depth_cap, reporting whether the occurrence reaches measure tau.  The
// state cap is reported, never silently applied.
ExhaustiveVirtualResult exhaustive_virtual(RelationSystem& sys, const Chart& chart, size_t idx,
                                           size_t depth_cap, const OracleCaps& caps = {});

}  // namespace scring
