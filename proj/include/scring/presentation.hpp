#pragma once

#include "scring/families.hpp"

namespace scring {

// Parsed presentation file.  Explicit relation lines and generated-family
// lines exclude each other; at most one generated family per file.
struct PresentationFile {
  FieldKind field = FieldKind::rational;
  Alphabet alphabet;
  std::optional<long long> tau;
  std::vector<Polynomial> relations;
  std::vector<Word> group_relators;
  std::optional<TrinomialParams> trinomial;
};

// Line grammar:
//   field gf2|rational
//   generators <name> <name> ...
//   tau <natural>
//   relation <coeff>*<word> [(+|-) <coeff>*<word>]...
//   family group <relator-word>
//   family trinomial w=<word> n1=<nat> n2=<nat>
// Lines starting '#' are comments, blank lines are skipped.  field and
// generators precede the lines that depend on them; the trinomial loop
// letters are the first two generators.
PresentationFile parse_presentation(std::string_view text);

// Canonical text form.  Parsing it reproduces the structure, and formatting
// a parse of canonical text is the identity.
std::string format_presentation(const PresentationFile& pf);

// Relation system of a parsed file.  Generated families derive their own
// threshold unless overridden; explicit relation lists take tau from the
// file or the override.  closure_cap bounds the prolongation closure of
// explicit lists.
RelationSystem build_system(const PresentationFile& pf,
                            std::optional<long long> tau_override = std::nullopt,
                            size_t closure_cap = 4096);

/******************************  derived names  ****************************/

// Extra monomial names accepted in word and polynomial input alongside the
// generators: the defining words of a generated family (v and w for a
// trinomial family; R for a single group relator, R1, R2, ... otherwise).
// A generator of the same name shadows the table entry.
struct NameTable {
  Alphabet alphabet;
  std::vector<std::pair<std::string, Word>> words;

  const Word* find(std::string_view name) const;
};

NameTable name_table(const PresentationFile& pf);

// parse_word / parse_poly grammar with named words substituted; a named
// word under ^n repeats with free reduction at the seams.
Word parse_named_word(const NameTable& t, std::string_view text, bool auto_reduce = false);
Polynomial parse_named_poly(const NameTable& t, FieldKind k, std::string_view text);

// Built-in presentation sources.  Empty string for an unknown name.
std::string preset_presentation(std::string_view name);
std::vector<std::string> preset_names();

// Parses a preset by name, or reads and parses a file.
PresentationFile load_presentation(const std::string& name_or_path);

}  // namespace scring
