#pragma once

#include <optional>

#include "scring/chart.hpp"

namespace scring {

// One rewriting step pinned to a position: the relation is applied to the
// occurrence of pivot sitting between left and right in the host word.
// Invariant: pivot is a monomial of relation with nonzero coefficient.
struct Layout {
  Word left;
  Polynomial relation{FieldKind::rational};
  Word right;
  Word pivot;
};

// left * relation * right in the group algebra, with free cancellation.
Polynomial expand_layout(const Layout& l);

Layout layout_of(const Word& host, const Occ& target, const Polynomial& relation);

// Replaces the pivot occurrence by the rest of its relation: with
// relation = sum_j alpha_j a_j and target's word a_h, returns
//   sum_{j != h} (-alpha_h^-1 alpha_j) * L a_j R
// where host = L a_h R split at the target.  Throws PreconditionError when
// target's word is not a monomial of relation.
Polynomial multi_turn(const Word& host, const Occ& target, const Polynomial& relation);

/******************************  certificates  ******************************/

struct CertStep {
  Rat coeff;
  Layout layout;
};

// Membership witness: sum of coeff * left * relation * right over the steps
// equals the certified polynomial exactly.
struct Certificate {
  std::vector<CertStep> steps;
};

// One line per step, "<coeff> * <L-word> * rel{<polynomial>} * <R-word>".
// Empty context words print as "1".  The pivot is bookkeeping for the
// reduction run and is not part of the text form; parsing leaves it empty.
std::string format_certificate(const Alphabet& ab, const Certificate& c);
Certificate parse_certificate(const Alphabet& ab, FieldKind k, std::string_view text);

/******************************  monomial order  ****************************/

struct CompareOptions {
  VirtualOptions virt{};
  size_t partner_len = 240;  // incident-monomial enumeration bound
  size_t rep_passes = 32;    // cap on representative fixpoint sweeps
};

// Fixpoint of slot minimization: every virtual-member slot is repeatedly
// replaced by the measure-then-Deglex least incident monomial that keeps the
// slot a virtual member and preserves the characteristic.
Word class_representative(RelationSystem& sys, const Word& u, const CompareOptions& opt = {});

// Strict total order on monomials: characteristic first, then Deglex on the
// class representatives, then slot-wise virtual-member words left to right by
// measure then Deglex, then Deglex.  Negative when u precedes v, zero only
// for equal words.  Throws PreconditionError when a virtual-membership answer
// inside either chart is undecided.
int compare_f(RelationSystem& sys, const Word& u, const Word& v, const CompareOptions& opt = {});

/******************************  greedy descent  ****************************/

struct GreedyOptions {
  CompareOptions cmp{};
  bool pair_closures = true;  // try one-step additive combinations on stuck
  size_t pair_bound = 64;
};

// A qualifying turn at the current highest monomial W: pivot is a virtual
// member of chart(W), every replaced term lands strictly below W, and
// subtracting delta * expand_layout(layout) from the input removes W.
struct GreedyCandidate {
  Layout layout;
  Rat delta;
  Polynomial next{FieldKind::rational};
};

// All qualifying turns in deterministic order (first_only stops at one).
// Empty means stuck.  Throws PreconditionError on zero input or when the
// highest-monomial selection hits an undecided virtual membership.
std::vector<GreedyCandidate> greedy_candidates(const Polynomial& p, RelationSystem& sys,
                                               const GreedyOptions& opt = {},
                                               bool first_only = true);

struct TraceStep {
  Word highest;
  Polynomial relation{FieldKind::rational};
  Polynomial result{FieldKind::rational};
};

enum class ReduceOutcome { zero, stuck, budget };

struct ReductionTrace {
  Polynomial start{FieldKind::rational};
  std::vector<TraceStep> steps;
  ReduceOutcome outcome = ReduceOutcome::zero;
  Polynomial remainder{FieldKind::rational};  // zero exactly when outcome == zero
};

struct ReduceResult {
  ReductionTrace trace;
  std::optional<Certificate> certificate;  // present exactly on zero
};

// 10 * n^2 with n = total letters over the monomials plus the monomial count.
size_t default_step_budget(const Polynomial& p);

// First-found greedy descent.  max_steps == 0 means the default budget.
ReduceResult greedy_reduce(const Polynomial& p, RelationSystem& sys, size_t max_steps = 0,
                           const GreedyOptions& opt = {});

struct BranchReport {
  size_t branches = 0;       // leaves of the explored tree
  size_t zero_branches = 0;  // leaves that reached zero
  bool all_zero = false;
  bool budget_hit = false;
  bool stuck_hit = false;
  size_t steps_used = 0;
};

// Explores every qualifying turn at every step, sharing one step budget
// across the tree (0 means the default budget).
BranchReport greedy_all_branches(const Polynomial& p, RelationSystem& sys,
                                 size_t max_total_steps = 0, const GreedyOptions& opt = {});

}  // namespace scring
