#include "scring/relations.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace scring {

std::string format_lambda(Lambda v) {
  return v == kLambdaInf ? "inf" : std::to_string(v);
}

size_t RelationFamily::max_extension(const Word& host, size_t from) {
  for (size_t len = host.size() - from; len >= 1; --len)
    if (in_terms(host.subword(from, len))) return len;
  return 0;
}

/****** helpers ******/

static Polynomial monic(const Polynomial& p) {
  if (p.is_zero()) return p;
  return p.scaled(field_inv(p.field(), p.coeff(p.leading_term())));
}

// canonical order on normalized polynomials, for deterministic listings
static bool poly_less(const Polynomial& a, const Polynomial& b) {
  auto ia = a.terms().begin(), ib = b.terms().begin();
  for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
    if (ia->first != ib->first) return deglex_less(ia->first, ib->first);
    if (ia->second != ib->second) return ia->second < ib->second;
  }
  return ia == a.terms().end() && ib != b.terms().end();
}

static size_t longest_term(const Polynomial& p) {
  size_t n = 0;
  for (const auto& [w, c] : p.terms()) n = std::max(n, w.size());
  return n;
}

/****** ExplicitFamily ******/

ExplicitFamily::ExplicitFamily(Alphabet ab, FieldKind k, std::vector<Polynomial> relations,
                               size_t closure_cap)
    : ab_(std::move(ab)), kind_(k) {
  std::set<Polynomial, bool (*)(const Polynomial&, const Polynomial&)> seen(poly_less);
  std::vector<Polynomial> queue;
  for (const Polynomial& r : relations) {
    if (r.field() != kind_) throw PreconditionError("relation field mismatch");
    if (r.is_zero()) throw PreconditionError("zero polynomial is not a relation");
    Polynomial m = monic(r);
    if (seen.insert(m).second) queue.push_back(m);
  }
  // letter-prolongation closure
  for (size_t i = 0; i < queue.size(); ++i) {
    if (queue.size() > closure_cap) {
      closure_complete_ = false;
      break;
    }
    Polynomial r = queue[i];
    std::vector<std::pair<Word, Word>> muls;  // (left, right) one-letter multipliers
    for (const auto& [w, c] : r.terms()) {
      if (w.empty()) continue;
      muls.push_back({Word::from_letters({w.letter(0).inverse()}), Word{}});
      muls.push_back({Word{}, Word::from_letters({w.letter(w.size() - 1).inverse()})});
    }
    for (const auto& [l, rt] : muls) {
      Polynomial nr = monic(r.conjugated(l, rt));
      if (nr.is_zero()) continue;
      if (seen.insert(nr).second) queue.push_back(nr);
    }
  }
  rels_.assign(seen.begin(), seen.end());

  std::set<Word, DeglexLess> ts;
  for (const Polynomial& r : rels_)
    for (const auto& [w, c] : r.terms())
      if (!w.empty()) ts.insert(w);
  terms_.assign(ts.begin(), ts.end());
}

std::string ExplicitFamily::describe() const {
  std::ostringstream os;
  os << "explicit list of " << rels_.size() << " relations"
     << (closure_complete_ ? "" : " (prolongation closure truncated)");
  return os.str();
}

bool ExplicitFamily::in_terms(const Word& u) {
  if (u.empty()) return true;
  return std::binary_search(terms_.begin(), terms_.end(), u, DeglexLess{});
}

std::vector<Polynomial> ExplicitFamily::relations_with_term(const Word& u, size_t) {
  std::vector<Polynomial> out;
  for (const Polynomial& r : rels_)
    if (r.coeff(u) != 0) out.push_back(r);
  std::stable_sort(out.begin(), out.end(), [](const Polynomial& a, const Polynomial& b) {
    size_t la = longest_term(a), lb = longest_term(b);
    if (la != lb) return la < lb;
    return poly_less(a, b);
  });
  return out;
}

Ternary ExplicitFamily::contains(const Polynomial& p) {
  if (p.is_zero()) return Ternary::no;
  Polynomial m = monic(p);
  for (const Polynomial& r : rels_)
    if (r == m) return Ternary::yes;
  return closure_complete_ ? Ternary::no : Ternary::undecided;
}

std::vector<Word> ExplicitFamily::enumerate_terms(size_t max_len, size_t max_count,
                                                  bool* truncated) {
  std::vector<Word> out;
  for (const Word& w : terms_) {
    if (w.size() > max_len) continue;
    if (out.size() == max_count) {
      if (truncated) *truncated = true;
      break;
    }
    out.push_back(w);
  }
  return out;
}

std::vector<Polynomial> ExplicitFamily::sample_relations(size_t max_len, size_t max_count,
                                                         bool* truncated) {
  std::vector<Polynomial> out;
  for (const Polynomial& r : rels_) {
    if (longest_term(r) > max_len) continue;
    if (out.size() == max_count) {
      if (truncated) *truncated = true;
      break;
    }
    out.push_back(r);
  }
  if (!closure_complete_ && truncated) *truncated = true;
  return out;
}

Word ExplicitFamily::random_term(std::mt19937_64& rng, size_t max_len) {
  std::vector<Word> pool = enumerate_terms(max_len, size_t(-1), nullptr);
  if (pool.empty()) throw PreconditionError("no relation monomials within length bound");
  return pool[rng() % pool.size()];
}

/****** RelationSystem ******/

RelationSystem::RelationSystem(std::shared_ptr<RelationFamily> family, long long tau,
                               MeasureMode mode)
    : family_(std::move(family)), tau_(tau), mode_(std::move(mode)) {
  if (!family_) throw PreconditionError("null relation family");
  if (tau_ < 10) throw PreconditionError("tau must be at least 10");
}

bool RelationSystem::in_terms(const Word& u) {
  if (u.empty()) return true;
  auto it = in_terms_memo_.find(u);
  if (it != in_terms_memo_.end()) return it->second;
  bool v = family_->in_terms(u);
  in_terms_memo_.emplace(u, v);
  return v;
}

size_t RelationSystem::max_extension(const Word& host, size_t from) {
  return family_->max_extension(host, from);
}

bool RelationSystem::is_small_piece(const Word& u) {
  if (u.empty()) return true;
  auto it = piece_memo_.find(u);
  if (it != piece_memo_.end()) return it->second;
  bool v;
  if (auto certified = family_->certified_small_piece(u))
    v = *certified;
  else
    v = generic_small_piece(u);
  piece_memo_.emplace(u, v);
  return v;
}

// Search for relations p, q with monomials a = a1*u*a2, b = b1*u*b2 such
// that moving p into q's position fails: b1 a1^-1 p or p a2^-1 b2 falls
// outside the relation set.
bool RelationSystem::generic_small_piece(const Word& u) {
  if (!in_terms(u)) return false;
  std::vector<Polynomial> rels = family_->sample_relations(size_t(-1), size_t(-1), nullptr);
  for (const Polynomial& p : rels) {
    for (const auto& [a, ca] : p.terms()) {
      for (size_t i : a.occurrences_of(u)) {
        Word a1 = a.subword(0, i);
        Word a2 = a.subword(i + u.size(), a.size() - i - u.size());
        for (const Polynomial& q : rels) {
          for (const auto& [b, cb] : q.terms()) {
            for (size_t j : b.occurrences_of(u)) {
              Word b1 = b.subword(0, j);
              Word b2 = b.subword(j + u.size(), b.size() - j - u.size());
              Polynomial left = p.conjugated(Word::concat(b1, a1.inverse()), Word{});
              if (family_->contains(left) == Ternary::no) return true;
              Polynomial right = p.conjugated(Word{}, Word::concat(a2.inverse(), b2));
              if (family_->contains(right) == Ternary::no) return true;
            }
          }
        }
      }
    }
  }
  return false;
}

Lambda RelationSystem::lambda(const Word& u) {
  if (mode_.count_letters) {
    Lambda n = 0;
    for (const Letter& l : u.letters())
      if (std::find(mode_.counted.begin(), mode_.counted.end(), l) != mode_.counted.end()) ++n;
    return n;
  }
  if (u.empty()) return 0;
  auto it = lambda_memo_.find(u);
  if (it != lambda_memo_.end()) return it->second;
  Lambda v = lambda_pieces(u);
  lambda_memo_.emplace(u, v);
  return v;
}

// shortest-path over cut positions: dist[j] = pieces needed for u[0, j)
Lambda RelationSystem::lambda_pieces(const Word& u) {
  size_t n = u.size();
  std::vector<Lambda> dist(n + 1, kLambdaInf);
  dist[0] = 0;
  for (size_t j = 1; j <= n; ++j) {
    for (size_t i = 0; i < j; ++i) {
      if (dist[i] == kLambdaInf) continue;
      if (dist[i] + 1 >= dist[j]) continue;
      if (is_small_piece(u.subword(i, j - i))) dist[j] = dist[i] + 1;
    }
  }
  return dist[n];
}

/****** measure cache persistence ******/

static std::string cache_key(const RelationSystem& sys) {
  std::string tag = sys.family().describe() + "|tau=" + std::to_string(sys.tau()) +
                    (sys.measure_mode().count_letters ? "|letters" : "|pieces");
  size_t h = std::hash<std::string>{}(tag);
  std::ostringstream os;
  os << std::hex << h << ".lambda";
  return os.str();
}

void RelationSystem::load_cache(const std::string& dir) {
  if (mode_.count_letters) return;
  std::ifstream in(std::filesystem::path(dir) / cache_key(*this));
  if (!in) return;
  std::string wtext, vtext;
  while (in >> wtext >> vtext) {
    try {
      Word w = parse_word(alphabet(), wtext);
      Lambda v = vtext == "inf" ? kLambdaInf : std::stoll(vtext);
      lambda_memo_.emplace(w, v);
    } catch (const std::exception&) {
      lambda_memo_.clear();  // stale or foreign cache file
      return;
    }
  }
}

void RelationSystem::save_cache(const std::string& dir) const {
  if (mode_.count_letters) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return;
  std::ofstream out(std::filesystem::path(dir) / cache_key(*this));
  if (!out) return;
  for (const auto& [w, v] : lambda_memo_)
    out << format_word(alphabet(), w) << ' ' << format_lambda(v) << '\n';
}

/****** axiom checks ******/

CheckReport check_compatibility(RelationSystem& sys, size_t max_len, size_t max_count) {
  CheckReport rep;
  RelationFamily& fam = sys.family();
  std::vector<Polynomial> rels = fam.sample_relations(max_len, max_count, &rep.truncated);
  const Alphabet& ab = fam.alphabet();
  for (const Polynomial& r : rels) {
    for (const auto& [w, c] : r.terms()) {
      if (w.empty()) continue;
      struct Side {
        Word left, right;
      };
      Side sides[2] = {{Word::from_letters({w.letter(0).inverse()}), Word{}},
                       {Word{}, Word::from_letters({w.letter(w.size() - 1).inverse()})}};
      for (const Side& s : sides) {
        Polynomial moved = r.conjugated(s.left, s.right);
        ++rep.checked;
        switch (fam.contains(moved)) {
          case Ternary::yes:
            break;
          case Ternary::no:
            rep.ok = false;
            rep.failures.push_back("prolongation of " + format_poly(ab, r) + " by " +
                                   (s.left.empty() ? format_word(ab, s.right) + " (right)"
                                                   : format_word(ab, s.left) + " (left)") +
                                   " leaves the relation set");
            break;
          case Ternary::undecided:
            rep.truncated = true;
            break;
        }
      }
    }
  }
  return rep;
}

CheckReport check_small_cancellation(RelationSystem& sys, size_t samples, uint64_t seed) {
  CheckReport rep;
  RelationFamily& fam = sys.family();
  const Alphabet& ab = fam.alphabet();
  std::mt19937_64 rng(seed);
  // Terms must be long enough to carry relations; probe a few to find the scale.
  size_t term_len_cap = 80;
  for (const Polynomial& r : fam.sample_relations(4096, 32, nullptr))
    for (const auto& [w, c] : r.terms()) term_len_cap = std::max(term_len_cap, w.size() + 16);
  for (size_t s = 0; s < samples; ++s) {
    size_t k = 2 + rng() % 3;
    Polynomial combo(sys.field());
    for (size_t i = 0; i < k; ++i) {
      Word t = fam.random_term(rng, term_len_cap);
      std::vector<Polynomial> cands = fam.relations_with_term(t, term_len_cap);
      if (cands.empty()) continue;
      const Polynomial& r = cands[rng() % cands.size()];
      Rat gamma = sys.field() == FieldKind::gf2 ? Rat(1) : Rat(1 + int(rng() % 3)) * (rng() % 2 ? 1 : -1);
      combo += r.scaled(gamma);
    }
    if (combo.is_zero()) continue;
    ++rep.checked;
    bool keeps = false;
    for (const auto& [w, c] : combo.terms()) {
      if (sys.lambda(w) >= sys.tau() + 1) {
        keeps = true;
        break;
      }
    }
    if (!keeps) {
      rep.ok = false;
      rep.failures.push_back("combination " + format_poly(ab, combo) +
                             " has no monomial of measure >= tau + 1");
      if (rep.failures.size() >= 5) return rep;
    }
  }
  return rep;
}

std::optional<Polynomial> additive_closure_step(const Polynomial& p, const Polynomial& q,
                                                RelationSystem& sys) {
  if (p.field() != q.field()) throw PreconditionError("field mismatch");
  const Word* best = nullptr;
  for (const auto& [w, c] : p.terms()) {
    if (q.coeff(w) == 0) continue;
    if (sys.lambda(w) < sys.tau() - 2) continue;
    if (!best || deglex_less(*best, w)) best = &w;
  }
  if (!best) return std::nullopt;
  Rat alpha = p.coeff(*best), beta = q.coeff(*best);
  return p.scaled(field_inv(p.field(), alpha)) - q.scaled(field_inv(q.field(), beta));
}

Ternary is_in_add_closure(const Polynomial& p, RelationSystem& sys, size_t len_bound,
                          size_t pair_bound) {
  RelationFamily& fam = sys.family();
  switch (fam.contains(p)) {
    case Ternary::yes:
      return Ternary::yes;
    case Ternary::no:
      if (fam.additive_closure_certified()) return Ternary::no;
      break;
    case Ternary::undecided:
      break;
  }
  if (p.is_zero()) return Ternary::no;

  Polynomial target = monic(p);
  std::set<Polynomial, bool (*)(const Polynomial&, const Polynomial&)> pool(poly_less);
  std::vector<Polynomial> list;
  auto push = [&](const Polynomial& r) {
    Polynomial m = monic(r);
    if (!m.is_zero() && pool.insert(m).second) list.push_back(m);
  };
  for (const auto& [w, c] : p.terms())
    for (const Polynomial& r : fam.relations_with_term(w, len_bound)) push(r);

  size_t pairs_done = 0;
  for (size_t i = 0; i < list.size(); ++i) {
    if (list[i] == target) return Ternary::yes;
    for (size_t j = 0; j + 1 <= i; ++j) {
      if (pairs_done++ > pair_bound) return Ternary::undecided;
      if (auto r = additive_closure_step(list[i], list[j], sys)) push(*r);
      if (auto r = additive_closure_step(list[j], list[i], sys)) push(*r);
    }
  }
  return fam.additive_closure_certified() ? Ternary::no : Ternary::undecided;
}

/****** overlap isolation ******/

namespace {

struct IsolationScratch {
  std::vector<Word> witnesses;
  std::vector<Word> pieces;
};

// longest prefix p of m with a.p a relation monomial (a.m concatenates
// without cancellation)
Word right_overlap(RelationSystem& sys, const Word& a, const Word& m) {
  Word best;
  for (size_t len = m.size(); len >= 1; --len) {
    Word cand = Word::concat(a, m.subword(0, len));
    if (cand.size() == a.size() + len && sys.in_terms(cand)) return m.subword(0, len);
  }
  return best;
}

Word left_overlap(RelationSystem& sys, const Word& m, const Word& a) {
  Word best;
  for (size_t len = m.size(); len >= 1; --len) {
    Word cand = Word::concat(m.subword(m.size() - len, len), a);
    if (cand.size() == a.size() + len && sys.in_terms(cand)) return m.subword(m.size() - len, len);
  }
  return best;
}

bool incident_or_equal(RelationSystem& sys, const Word& b1, const Word& bn) {
  if (b1 == bn) return true;
  Polynomial bin(sys.field());
  bin.add_term(Rat(1), b1);
  bin.add_term(Rat(-1), bn);
  if (bin.is_zero()) return true;
  if (sys.family().contains(bin) == Ternary::yes) return true;
  for (const Polynomial& r : sys.family().relations_with_term(b1, size_t(-1)))
    if (r.coeff(bn) != 0) return true;
  return false;
}

}  // namespace

CheckReport check_isolation(RelationSystem& sys, size_t witness_len_bound,
                            size_t piece_len_bound) {
  CheckReport rep;
  RelationFamily& fam = sys.family();
  const Alphabet& ab = fam.alphabet();
  long long need = sys.tau() - 2;
  if (!fam.additive_closure_certified()) rep.truncated = true;

  bool t1 = false, t2 = false, t3 = false;
  std::vector<Polynomial> rels = fam.sample_relations(witness_len_bound, 20000, &t1);
  IsolationScratch scratch;
  for (const Word& t : fam.enumerate_terms(witness_len_bound, 20000, &t2))
    if (sys.lambda(t) >= need) scratch.witnesses.push_back(t);
  for (const Word& t : fam.enumerate_terms(piece_len_bound, 20000, &t3))
    if (sys.is_small_piece(t)) scratch.pieces.push_back(t);
  rep.truncated = rep.truncated || t1 || t2 || t3;

  auto chain_exists_left = [&](const Word& a, const Word& p1, const Word& pk) {
    for (const Word& l : scratch.pieces) {
      auto la = Word::concat_nocancel(l, a);
      if (!la || !sys.in_terms(*la)) continue;
      Word b1 = Word::concat(*la, p1);
      if (!sys.in_terms(b1) || sys.lambda(b1) < need) continue;
      for (const Word& l2 : scratch.pieces) {
        auto l2a = Word::concat_nocancel(l2, a);
        if (!l2a || !sys.in_terms(*l2a)) continue;
        Word bn = Word::concat(*l2a, pk);
        if (!sys.in_terms(bn) || sys.lambda(bn) < need) continue;
        if (incident_or_equal(sys, b1, bn)) return true;
      }
    }
    return false;
  };
  auto chain_exists_right = [&](const Word& a, const Word& s1, const Word& sk) {
    for (const Word& r : scratch.pieces) {
      auto ar = Word::concat_nocancel(a, r);
      if (!ar || !sys.in_terms(*ar)) continue;
      Word b1 = Word::concat(s1, *ar);
      if (!sys.in_terms(b1) || sys.lambda(b1) < need) continue;
      for (const Word& r2 : scratch.pieces) {
        auto ar2 = Word::concat_nocancel(a, r2);
        if (!ar2 || !sys.in_terms(*ar2)) continue;
        Word bn = Word::concat(sk, *ar2);
        if (!sys.in_terms(bn) || sys.lambda(bn) < need) continue;
        if (incident_or_equal(sys, b1, bn)) return true;
      }
    }
    return false;
  };

  for (const Polynomial& r : rels) {
    std::vector<Word> long_terms;
    for (const auto& [w, c] : r.terms())
      if (!w.empty() && sys.lambda(w) >= need) long_terms.push_back(w);
    for (size_t i = 0; i < long_terms.size(); ++i) {
      for (size_t j = 0; j < long_terms.size(); ++j) {
        if (i == j) continue;
        const Word& m1 = long_terms[i];
        const Word& mk = long_terms[j];
        for (const Word& a : scratch.witnesses) {
          ++rep.checked;
          // left-sided condition
          {
            auto am1 = Word::concat_nocancel(a, m1);
            auto amk = Word::concat_nocancel(a, mk);
            if (am1 && amk && !sys.in_terms(*am1) && !sys.in_terms(*amk)) {
              Word tail = a.subword(a.size() - 1, 1);
              bool m1_max = !sys.in_terms(Word::concat(tail, m1));
              bool mk_max = !sys.in_terms(Word::concat(tail, mk));
              if (m1_max && mk_max) {
                Word p1 = right_overlap(sys, a, m1);
                Word pk = right_overlap(sys, a, mk);
                Word r1 = Word::concat(p1.inverse(), m1);
                Word rk = Word::concat(pk.inverse(), mk);
                if (r1 == rk && chain_exists_left(a, p1, pk)) {
                  rep.ok = false;
                  rep.failures.push_back(
                      "left condition fails: witness " + format_word(ab, a) + " with " +
                      format_word(ab, m1) + " and " + format_word(ab, mk));
                  if (rep.failures.size() >= 5) return rep;
                }
              }
            }
          }
          // right-sided condition
          {
            auto m1a = Word::concat_nocancel(m1, a);
            auto mka = Word::concat_nocancel(mk, a);
            if (m1a && mka && !sys.in_terms(*m1a) && !sys.in_terms(*mka)) {
              Word head = a.subword(0, 1);
              bool m1_max = !sys.in_terms(Word::concat(m1, head));
              bool mk_max = !sys.in_terms(Word::concat(mk, head));
              if (m1_max && mk_max) {
                Word s1 = left_overlap(sys, m1, a);
                Word sk = left_overlap(sys, mk, a);
                Word r1 = Word::concat(m1, s1.inverse());
                Word rk = Word::concat(mk, sk.inverse());
                if (r1 == rk && chain_exists_right(a, s1, sk)) {
                  rep.ok = false;
                  rep.failures.push_back(
                      "right condition fails: witness " + format_word(ab, a) + " with " +
                      format_word(ab, m1) + " and " + format_word(ab, mk));
                  if (rep.failures.size() >= 5) return rep;
                }
              }
            }
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace scring
