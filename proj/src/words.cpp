#include "scring/words.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace scring {

static bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(uint8_t(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(uint8_t(c)) && c != '_') return false;
  return s != "rel";  // reserved by the certificate syntax
}

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  for (size_t i = 0; i < names_.size(); ++i) {
    if (!valid_name(names_[i])) throw ParseError("bad generator name: '" + names_[i] + "'");
    for (size_t j = 0; j < i; ++j)
      if (names_[i] == names_[j]) throw ParseError("duplicate generator name: '" + names_[i] + "'");
  }
}

std::optional<int> Alphabet::index(std::string_view name) const {
  for (size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return int(i);
  return std::nullopt;
}

Word Word::from_letters(std::vector<Letter> ls) {
  for (size_t i = 0; i + 1 < ls.size(); ++i)
    if (ls[i + 1] == ls[i].inverse()) throw PreconditionError("word is not freely reduced");
  Word w;
  w.ls_ = std::move(ls);
  return w;
}

Word Word::from_unreduced(const std::vector<Letter>& ls) {
  std::vector<Letter> out;
  out.reserve(ls.size());
  for (const Letter& l : ls) {
    if (!out.empty() && out.back() == l.inverse())
      out.pop_back();
    else
      out.push_back(l);
  }
  Word w;
  w.ls_ = std::move(out);
  return w;
}

Word Word::inverse() const {
  std::vector<Letter> out;
  out.reserve(ls_.size());
  for (auto it = ls_.rbegin(); it != ls_.rend(); ++it) out.push_back(it->inverse());
  Word w;
  w.ls_ = std::move(out);
  return w;
}

Word Word::subword(size_t from, size_t len) const {
  if (from + len > ls_.size()) throw PreconditionError("subword out of range");
  Word w;
  w.ls_.assign(ls_.begin() + long(from), ls_.begin() + long(from + len));
  return w;
}

bool Word::is_prefix_of(const Word& w) const {
  if (size() > w.size()) return false;
  return std::equal(ls_.begin(), ls_.end(), w.ls_.begin());
}

bool Word::is_suffix_of(const Word& w) const {
  if (size() > w.size()) return false;
  return std::equal(ls_.rbegin(), ls_.rend(), w.ls_.rbegin());
}

size_t Word::cancellation(const Word& a, const Word& b) {
  size_t k = 0;
  size_t m = std::min(a.size(), b.size());
  while (k < m && b.ls_[k] == a.ls_[a.size() - 1 - k].inverse()) ++k;
  return k;
}

Word Word::concat(const Word& a, const Word& b) {
  size_t k = cancellation(a, b);
  Word w;
  w.ls_.reserve(a.size() + b.size() - 2 * k);
  w.ls_.assign(a.ls_.begin(), a.ls_.end() - long(k));
  w.ls_.insert(w.ls_.end(), b.ls_.begin() + long(k), b.ls_.end());
  return w;
}

std::optional<Word> Word::concat_nocancel(const Word& a, const Word& b) {
  if (cancellation(a, b) != 0) return std::nullopt;
  Word w;
  w.ls_ = a.ls_;
  w.ls_.insert(w.ls_.end(), b.ls_.begin(), b.ls_.end());
  return w;
}

std::vector<size_t> Word::occurrences_of(const Word& pattern) const {
  if (pattern.empty()) throw PreconditionError("occurrences_of needs a nonempty pattern");
  std::vector<size_t> out;
  if (pattern.size() > size()) return out;
  for (size_t i = 0; i + pattern.size() <= size(); ++i) {
    if (std::equal(pattern.ls_.begin(), pattern.ls_.end(), ls_.begin() + long(i))) out.push_back(i);
  }
  return out;
}

size_t WordHash::operator()(const Word& w) const {
  size_t h = 0x9e3779b97f4a7c15ULL;
  for (const Letter& l : w.letters()) {
    h ^= l.code() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h ^ w.size();
}

bool lex_less(const Word& a, const Word& b) {
  size_t m = std::min(a.size(), b.size());
  for (size_t i = 0; i < m; ++i) {
    uint32_t x = a.letter(i).code(), y = b.letter(i).code();
    if (x != y) return x < y;
  }
  return a.size() < b.size();
}

bool deglex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return lex_less(a, b);
}

Word parse_word(const Alphabet& ab, std::string_view text, bool auto_reduce) {
  // strip surrounding spaces
  while (!text.empty() && std::isspace(uint8_t(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(uint8_t(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty word text");
  if (text == "1") return Word{};

  std::vector<Letter> ls;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t dot = text.find('.', pos);
    std::string_view tok = text.substr(pos, (dot == std::string_view::npos ? text.size() : dot) - pos);
    if (tok.empty()) throw ParseError("empty letter in word: '" + std::string(text) + "'");

    std::string_view name = tok;
    long long power = 1;
    if (size_t caret = tok.find('^'); caret != std::string_view::npos) {
      name = tok.substr(0, caret);
      std::string_view ps = tok.substr(caret + 1);
      auto [p, ec] = std::from_chars(ps.data(), ps.data() + ps.size(), power);
      if (ec != std::errc{} || p != ps.data() + ps.size() || power == 0)
        throw ParseError("bad exponent in '" + std::string(tok) + "'");
    }
    auto idx = ab.index(name);
    if (!idx) throw ParseError("unknown generator '" + std::string(name) + "'");
    Letter l{int16_t(*idx), int8_t(power > 0 ? 1 : -1)};
    for (long long i = 0; i < std::llabs(power); ++i) ls.push_back(l);

    if (dot == std::string_view::npos) break;
    pos = dot + 1;
    if (pos == text.size()) throw ParseError("word ends with '.'");
  }
  if (auto_reduce) return Word::from_unreduced(ls);
  try {
    return Word::from_letters(std::move(ls));
  } catch (const PreconditionError&) {
    throw ParseError("word is not freely reduced: '" + std::string(text) + "'");
  }
}

std::string format_word(const Alphabet& ab, const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += '.';
    const Letter& l = w.letter(i);
    out += ab.name(l.gen);
    if (l.sign < 0) out += "^-1";
  }
  return out;
}

}  // namespace scring
