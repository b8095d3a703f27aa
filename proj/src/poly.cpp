#include "scring/poly.hpp"

#include <sstream>

namespace scring {

Rat field_norm(FieldKind k, const Rat& a) {
  if (k == FieldKind::rational) return a;
  Rat::value_type den = denominator(a);
  if (den % 2 == 0) throw PreconditionError("coefficient with even denominator is not a GF(2) value");
  Rat::value_type num = numerator(a) % 2;
  return num == 0 ? Rat(0) : Rat(1);
}

Rat field_inv(FieldKind k, const Rat& a) {
  Rat n = field_norm(k, a);
  if (n == 0) throw PreconditionError("division by zero coefficient");
  return k == FieldKind::gf2 ? Rat(1) : Rat(1) / n;
}

std::string format_coeff(FieldKind k, const Rat& a) {
  Rat n = field_norm(k, a);
  std::ostringstream os;
  os << n;
  return os.str();
}

Rat parse_coeff(FieldKind k, std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty coefficient");
  size_t slash = s.find('/');
  try {
    Rat v;
    if (slash == std::string::npos) {
      v = Rat(Rat::value_type(s));
    } else {
      Rat::value_type num(s.substr(0, slash));
      Rat::value_type den(s.substr(slash + 1));
      if (den == 0) throw ParseError("zero denominator in coefficient '" + s + "'");
      v = Rat(num, den);
    }
    return field_norm(k, v);
  } catch (const PreconditionError& e) {
    throw ParseError(e.msg);
  } catch (const std::runtime_error&) {
    throw ParseError("bad coefficient '" + s + "'");
  }
}

Polynomial Polynomial::monomial(FieldKind k, const Rat& c, const Word& w) {
  Polynomial p(k);
  p.add_term(c, w);
  return p;
}

Rat Polynomial::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Rat(0) : it->second;
}

const Word& Polynomial::leading_term() const {
  if (terms_.empty()) throw PreconditionError("zero polynomial has no leading term");
  return terms_.rbegin()->first;
}

void Polynomial::add_term(const Rat& c, const Word& w) {
  Rat v = field_norm(kind_, c);
  if (v == 0) return;
  auto [it, fresh] = terms_.emplace(w, v);
  if (!fresh) {
    it->second = field_norm(kind_, it->second + v);
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& q) {
  if (kind_ != q.kind_) throw PreconditionError("field mismatch");
  for (const auto& [w, c] : q.terms_) add_term(c, w);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& q) {
  if (kind_ != q.kind_) throw PreconditionError("field mismatch");
  for (const auto& [w, c] : q.terms_) add_term(-c, w);
  return *this;
}

Polynomial Polynomial::scaled(const Rat& c) const {
  Polynomial out(kind_);
  for (const auto& [w, v] : terms_) out.add_term(v * c, w);
  return out;
}

Polynomial Polynomial::conjugated(const Word& left, const Word& right) const {
  Polynomial out(kind_);
  for (const auto& [w, c] : terms_)
    out.add_term(c, Word::concat(Word::concat(left, w), right));
  return out;
}

std::string format_poly(const Alphabet& ab, const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const Rat& c = it->second;
    if (first) {
      out += format_coeff(p.field(), c);
      first = false;
    } else {
      bool negative = c < 0;
      out += negative ? " - " : " + ";
      out += format_coeff(p.field(), negative ? Rat(-c) : c);
    }
    out += "*";
    out += format_word(ab, it->first);
  }
  return out;
}

static std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(uint8_t(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(uint8_t(s.back()))) s.remove_suffix(1);
  return s;
}

Polynomial parse_poly(const Alphabet& ab, FieldKind k, std::string_view text) {
  text = trim(text);
  if (text == "0") return Polynomial(k);
  Polynomial p(k);

  // split on top-level " + " / " - "; a leading sign belongs to the first coeff
  size_t pos = 0;
  int sign = 1;
  while (pos < text.size()) {
    size_t next = std::string_view::npos;
    int next_sign = 1;
    for (size_t i = pos + 1; i + 1 < text.size(); ++i) {
      if ((text[i] == '+' || text[i] == '-') && std::isspace(uint8_t(text[i - 1])) &&
          std::isspace(uint8_t(text[i + 1]))) {
        next = i;
        next_sign = text[i] == '+' ? 1 : -1;
        break;
      }
    }
    std::string_view part = trim(text.substr(pos, (next == std::string_view::npos ? text.size() : next - 1) - pos));
    size_t star = part.find('*');
    if (star == std::string_view::npos)
      throw ParseError("term without '*': '" + std::string(part) + "'");
    Rat c = parse_coeff(k, trim(part.substr(0, star)));
    Word w = parse_word(ab, trim(part.substr(star + 1)));
    p.add_term(sign < 0 ? Rat(-c) : c, w);
    if (next == std::string_view::npos) break;
    pos = next + 1;
    sign = next_sign;
  }
  return p;
}

}  // namespace scring
