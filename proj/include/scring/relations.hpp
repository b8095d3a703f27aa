#pragma once

#include <limits>
#include <memory>
#include <random>
#include <unordered_map>

#include "scring/poly.hpp"

namespace scring {

enum class Ternary { yes, no, undecided };

// Measure of a monomial.  kLambdaInf means the word admits no decomposition
// into small pieces at all.
using Lambda = long long;
inline constexpr Lambda kLambdaInf = std::numeric_limits<Lambda>::max();

inline Lambda lambda_add(Lambda a, Lambda b) {
  return (a == kLambdaInf || b == kLambdaInf) ? kLambdaInf : a + b;
}

std::string format_lambda(Lambda v);

// Either the minimal number of small pieces concatenating (without
// cancellation) to the word, or a plain count of distinguished letters for
// families where single letters are not small pieces and the piece measure
// degenerates to infinity on almost everything.
struct MeasureMode {
  bool count_letters = false;
  std::vector<Letter> counted;

  static MeasureMode pieces() { return {}; }
  static MeasureMode letter_count(std::vector<Letter> ls) { return {true, std::move(ls)}; }
};

// A set of defining relations, possibly infinite, presented operationally:
// membership of monomials, relation enumeration anchored at a term, and
// membership of polynomials in the set.  All enumerations are deterministic.
class RelationFamily {
 public:
  virtual ~RelationFamily() = default;

  virtual const Alphabet& alphabet() const = 0;
  virtual FieldKind field() const = 0;
  virtual std::string describe() const = 0;

  // Membership of u in the set of monomials of relations.  The empty word
  // always belongs.
  virtual bool in_terms(const Word& u) = 0;

  // Largest len with host[from, from+len) a relation monomial (0 if none).
  virtual size_t max_extension(const Word& host, size_t from);

  // Definite small-piece decision where the family knows one; nullopt falls
  // back to the generic search over enumerated relations.
  virtual std::optional<bool> certified_small_piece(const Word& u) { (void)u; return std::nullopt; }

  // Relations having u among their monomials.  Monomials other than u longer
  // than partner_len_bound are not required to appear.  Ordered by increasing
  // largest-partner length, ties broken canonically.
  virtual std::vector<Polynomial> relations_with_term(const Word& u, size_t partner_len_bound) = 0;

  // Membership of p in the relation set (up to the closure the family
  // certifies).  Definite answers only where the family can be exact.
  virtual Ternary contains(const Polynomial& p) = 0;

  // Whether the one-step additive combinations of relations sharing a
  // monomial are known to stay inside the relation set.
  virtual bool additive_closure_certified() const = 0;

  // Deterministic bounded list of nonempty relation monomials (resp. whole
  // relations with every monomial of length <= max_len).  *truncated is set
  // when max_count cut the enumeration short.
  virtual std::vector<Word> enumerate_terms(size_t max_len, size_t max_count, bool* truncated) = 0;
  virtual std::vector<Polynomial> sample_relations(size_t max_len, size_t max_count, bool* truncated) = 0;

  // Pseudo-random relation monomial of length in [1, max_len], for tests.
  virtual Word random_term(std::mt19937_64& rng, size_t max_len) = 0;
};

// Finite relation list, closed under the letter-prolongation rule: when a
// monomial of r starts with x^-1 the product x*r is adjoined, and
// symmetrically on final letters.  Closure may be cut by a cap.
class ExplicitFamily : public RelationFamily {
 public:
  ExplicitFamily(Alphabet ab, FieldKind k, std::vector<Polynomial> relations,
                 size_t closure_cap = 4096);

  const Alphabet& alphabet() const override { return ab_; }
  FieldKind field() const override { return kind_; }
  std::string describe() const override;
  bool in_terms(const Word& u) override;
  std::vector<Polynomial> relations_with_term(const Word& u, size_t partner_len_bound) override;
  Ternary contains(const Polynomial& p) override;
  bool additive_closure_certified() const override { return false; }
  std::vector<Word> enumerate_terms(size_t max_len, size_t max_count, bool* truncated) override;
  std::vector<Polynomial> sample_relations(size_t max_len, size_t max_count, bool* truncated) override;
  Word random_term(std::mt19937_64& rng, size_t max_len) override;

  bool closure_complete() const { return closure_complete_; }
  const std::vector<Polynomial>& relations() const { return rels_; }

 private:
  Alphabet ab_;
  FieldKind kind_;
  std::vector<Polynomial> rels_;  // normalized: leading coefficient 1
  std::vector<Word> terms_;       // sorted by Deglex
  bool closure_complete_ = true;
};

// One presentation with its parameters and memoized derived data.
class RelationSystem {
 public:
  RelationSystem(std::shared_ptr<RelationFamily> family, long long tau, MeasureMode mode);

  RelationFamily& family() { return *family_; }
  const RelationFamily& family() const { return *family_; }
  long long tau() const { return tau_; }
  const MeasureMode& measure_mode() const { return mode_; }
  const Alphabet& alphabet() const { return family_->alphabet(); }
  FieldKind field() const { return family_->field(); }

  bool in_terms(const Word& u);
  bool is_small_piece(const Word& u);
  Lambda lambda(const Word& u);
  size_t max_extension(const Word& host, size_t from);

  // Same family and measure under a different threshold, fresh memos.
  RelationSystem with_tau(long long tau) const { return {family_, tau, mode_}; }

  // Cache persistence for the measure memo; dir comes from SCRING_CACHE_DIR.
  void load_cache(const std::string& dir);
  void save_cache(const std::string& dir) const;

 private:
  bool generic_small_piece(const Word& u);
  Lambda lambda_pieces(const Word& u);

  std::shared_ptr<RelationFamily> family_;
  long long tau_;
  MeasureMode mode_;
  std::unordered_map<Word, bool, WordHash> in_terms_memo_;
  std::unordered_map<Word, bool, WordHash> piece_memo_;
  std::unordered_map<Word, Lambda, WordHash> lambda_memo_;
};

struct CheckReport {
  bool ok = true;
  size_t checked = 0;
  bool truncated = false;  // an enumeration cap was hit somewhere
  std::vector<std::string> failures;
};

// Letter-prolongation closure: when x^-1 is the initial letter of a monomial
// of a sampled relation, x*r must again be a relation; symmetrically for
// final letters.
CheckReport check_compatibility(RelationSystem& sys, size_t max_len, size_t max_count);

// Sampled linear combinations of relations keep a monomial of measure
// >= tau + 1.
CheckReport check_small_cancellation(RelationSystem& sys, size_t samples, uint64_t seed);

// Bounded search for violations of the two overlap-isolation conditions.
// With a certified additive closure only directly incident pairs need to be
// examined.
CheckReport check_isolation(RelationSystem& sys, size_t witness_len_bound, size_t piece_len_bound);

// alpha^-1 p - beta^-1 q for the Deglex-largest shared monomial of measure
// >= tau - 2 (alpha, beta its coefficients); nullopt when there is none.
std::optional<Polynomial> additive_closure_step(const Polynomial& p, const Polynomial& q,
                                                RelationSystem& sys);

// Membership of p in the additive closure of the relation set.  Definite
// family answers are used first; otherwise a bounded closure search runs.
Ternary is_in_add_closure(const Polynomial& p, RelationSystem& sys, size_t len_bound,
                          size_t pair_bound);

}  // namespace scring
