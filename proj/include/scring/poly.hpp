#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>

#include "scring/words.hpp"

namespace scring {

// Exact coefficient arithmetic.  GF(2) values are kept normalized to 0/1;
// rationals are arbitrary precision.  No floating point anywhere.
using Rat = boost::multiprecision::cpp_rational;

enum class FieldKind { gf2, rational };

// Normalizes a into the field.  For gf2 the denominator must be odd.
Rat field_norm(FieldKind k, const Rat& a);
Rat field_inv(FieldKind k, const Rat& a);

std::string format_coeff(FieldKind k, const Rat& a);
Rat parse_coeff(FieldKind k, std::string_view text);

// Sparse polynomial in the group algebra, terms ordered by Deglex.
class Polynomial {
 public:
  explicit Polynomial(FieldKind k) : kind_(k) {}
  static Polynomial monomial(FieldKind k, const Rat& c, const Word& w);

  FieldKind field() const { return kind_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }
  const std::map<Word, Rat, DeglexLess>& terms() const { return terms_; }
  Rat coeff(const Word& w) const;
  const Word& leading_term() const;  // Deglex-largest; error on zero

  void add_term(const Rat& c, const Word& w);

  Polynomial& operator+=(const Polynomial& q);
  Polynomial& operator-=(const Polynomial& q);
  friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
  friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
  Polynomial scaled(const Rat& c) const;

  // L * p * R in the group algebra, with free cancellation.
  Polynomial conjugated(const Word& left, const Word& right) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  FieldKind kind_;
  std::map<Word, Rat, DeglexLess> terms_;
};

// Text form "<coeff>*<word> + <coeff>*<word> - ...", Deglex-descending,
// sign of every term after the first carried by the +/- separator.
// The zero polynomial prints as "0".
std::string format_poly(const Alphabet& ab, const Polynomial& p);
Polynomial parse_poly(const Alphabet& ab, FieldKind k, std::string_view text);

}  // namespace scring
