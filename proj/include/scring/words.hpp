#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scring {

struct ParseError : std::exception {
  std::string msg;
  explicit ParseError(std::string m) : msg(std::move(m)) {}
  const char* what() const noexcept override { return msg.c_str(); }
};

struct PreconditionError : std::exception {
  std::string msg;
  explicit PreconditionError(std::string m) : msg(std::move(m)) {}
  const char* what() const noexcept override { return msg.c_str(); }
};

// Generator names for one presentation.  Indices are dense and stable.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);
  int size() const { return int(names_.size()); }
  const std::string& name(int idx) const { return names_.at(size_t(idx)); }
  std::optional<int> index(std::string_view name) const;

 private:
  std::vector<std::string> names_;
};

// A generator or its inverse.  code() packs (generator, sign) so that
// comparing codes gives the letter order used everywhere: generator 0
// positive, generator 0 inverse, generator 1 positive, ...
struct Letter {
  int16_t gen = 0;
  int8_t sign = 1;  // +1 or -1

  uint32_t code() const { return uint32_t(uint16_t(gen)) * 2u + (sign < 0 ? 1u : 0u); }
  Letter inverse() const { return Letter{gen, int8_t(-sign)}; }
  friend bool operator==(const Letter&, const Letter&) = default;
};

inline Letter pos(int gen) { return Letter{int16_t(gen), 1}; }
inline Letter neg(int gen) { return Letter{int16_t(gen), -1}; }

// Freely reduced word.  The empty word is the monomial 1.
class Word {
 public:
  Word() = default;

  // Rejects input containing a factor x.x^-1.  from_unreduced cancels instead.
  static Word from_letters(std::vector<Letter> ls);
  static Word from_unreduced(const std::vector<Letter>& ls);

  size_t size() const { return ls_.size(); }
  bool empty() const { return ls_.empty(); }
  const Letter& letter(size_t i) const { return ls_.at(i); }
  const std::vector<Letter>& letters() const { return ls_; }

  Word inverse() const;
  Word subword(size_t from, size_t len) const;
  bool is_prefix_of(const Word& w) const;
  bool is_suffix_of(const Word& w) const;

  // Product with free cancellation at the junction.
  static Word concat(const Word& a, const Word& b);
  // Product only when no letter cancels at the junction.
  static std::optional<Word> concat_nocancel(const Word& a, const Word& b);
  // Number of letter pairs cancelled in concat(a, b).
  static size_t cancellation(const Word& a, const Word& b);

  // Start positions of every occurrence of pattern (pattern nonempty).
  std::vector<size_t> occurrences_of(const Word& pattern) const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Letter> ls_;
};

struct WordHash {
  size_t operator()(const Word& w) const;
};

// Length first, then letter codes left to right.
bool deglex_less(const Word& a, const Word& b);
// Pure letter-code lexicographic order (prefixes first).
bool lex_less(const Word& a, const Word& b);

struct DeglexLess {
  bool operator()(const Word& a, const Word& b) const { return deglex_less(a, b); }
};

// Dot syntax: letters joined by '.', inverse written ^-1, "1" is the empty
// word.  parse accepts name^k for any nonzero k; format always emits
// single letters.  With auto_reduce the parsed word is freely reduced,
// otherwise unreduced input is an error.
Word parse_word(const Alphabet& ab, std::string_view text, bool auto_reduce = false);
std::string format_word(const Alphabet& ab, const Word& w);

}  // namespace scring
