#include "scring/families.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <string>

namespace scring {

namespace {

bool cyclically_reduced(const Word& w) {
  if (w.empty()) return false;
  if (w.size() == 1) return true;
  return !(w.letter(0) == w.letter(w.size() - 1).inverse());
}

// Rotations of a cyclically reduced word stay reduced.
Word rotate(const Word& w, size_t by) {
  size_t n = w.size();
  std::vector<Letter> ls;
  ls.reserve(n);
  for (size_t k = 0; k < n; ++k) ls.push_back(w.letter((by + k) % n));
  return Word::from_letters(std::move(ls));
}

// Prefix match against the relator repeated past its end.
bool stream_has_prefix(const Word& s, const Word& c) {
  const auto& S = s.letters();
  const auto& C = c.letters();
  for (size_t k = 0; k < C.size(); ++k)
    if (!(S[k % S.size()] == C[k])) return false;
  return true;
}

}  // namespace

/******************************  group relators  ****************************/

GroupPresentation group_presentation(Alphabet ab, std::vector<Word> relators) {
  GroupPresentation pres;
  pres.alphabet = std::move(ab);
  pres.relators = std::move(relators);
  if (pres.relators.empty()) throw PreconditionError("group presentation: no relators");
  std::set<Word, DeglexLess> sym;
  for (const Word& r : pres.relators) {
    if (r.empty()) throw PreconditionError("group presentation: empty relator");
    if (!cyclically_reduced(r))
      throw PreconditionError("group presentation: relator not cyclically reduced: " +
                              format_word(pres.alphabet, r));
    Word ri = r.inverse();
    for (size_t i = 0; i < r.size(); ++i) {
      sym.insert(rotate(r, i));
      sym.insert(rotate(ri, i));
    }
  }
  pres.symmetrized.assign(sym.begin(), sym.end());
  for (const Word& a : pres.symmetrized)
    for (const Word& b : pres.symmetrized)
      if (a.size() < b.size() && !b.occurrences_of(a).empty())
        throw PreconditionError("group presentation: relator " + format_word(pres.alphabet, a) +
                                " is a subword of " + format_word(pres.alphabet, b));
  return pres;
}

bool group_small_piece(const Word& c, const GroupPresentation& pres) {
  if (c.empty()) return true;
  int hits = 0;
  for (const Word& s : pres.symmetrized)
    if (stream_has_prefix(s, c) && ++hits >= 2) return true;
  return false;
}

size_t check_Cm(const GroupPresentation& pres) {
  const auto& sym = pres.symmetrized;
  size_t n = sym.size();
  // Longest piece starting at each circle position: the longest common prefix
  // of the position's stream with any other symmetrized stream.
  std::vector<size_t> best(n, 0);
  for (size_t i = 0; i < n; ++i) {
    const auto& A = sym[i].letters();
    size_t cap = A.size();
    for (size_t j = 0; j < n && best[i] < cap; ++j) {
      if (j == i) continue;
      const auto& B = sym[j].letters();
      size_t k = 0;
      while (k < cap && A[k % A.size()] == B[k % B.size()]) ++k;
      best[i] = std::max(best[i], k);
    }
  }
  std::unordered_map<Word, size_t, WordHash> index;
  for (size_t i = 0; i < n; ++i) index.emplace(sym[i], i);
  std::vector<size_t> rot1(n);
  for (size_t i = 0; i < n; ++i) rot1[i] = index.at(rotate(sym[i], 1));
  size_t m = kNoPieceBound;
  for (size_t i = 0; i < n; ++i) {
    size_t len = sym[i].size();
    std::vector<size_t> reach(len);  // longest small piece starting at p
    size_t cur = i;
    for (size_t p = 0; p < len; ++p) {
      reach[p] = best[cur];
      cur = rot1[cur];
    }
    std::vector<size_t> dp(len + 1, kNoPieceBound);
    dp[0] = 0;
    for (size_t a = 0; a < len; ++a) {
      if (dp[a] == kNoPieceBound) continue;
      size_t to = std::min(len, a + reach[a]);
      for (size_t b = a + 1; b <= to; ++b) dp[b] = std::min(dp[b], dp[a] + 1);
    }
    m = std::min(m, dp[len]);
  }
  return m;
}

Word dehn_reduce(const Word& w0, const GroupPresentation& pres) {
  Word w = w0;
  for (;;) {
    bool replaced = false;
    for (size_t s = 0; s < w.size() && !replaced; ++s) {
      size_t best_len = 0;
      const Word* best_stream = nullptr;
      const auto& W = w.letters();
      for (const Word& r : pres.symmetrized) {
        const auto& R = r.letters();
        size_t k = 0;
        while (s + k < W.size() && W[s + k] == R[k % R.size()]) ++k;
        if (k > best_len) {
          best_len = k;
          best_stream = &r;
        }
      }
      if (best_stream == nullptr || 2 * best_len <= best_stream->size()) continue;
      // The matched arc closes up to full windings of the relator circle, so
      // only the residue needs a complementary arc, spelled against the rest
      // of the circle.
      size_t rho = best_stream->size();
      size_t rem = best_len % rho;
      Word e = rem == 0 ? Word() : best_stream->subword(rem, rho - rem).inverse();
      Word left = w.subword(0, s);
      Word right = w.subword(s + best_len, w.size() - s - best_len);
      w = Word::concat(Word::concat(left, e), right);
      replaced = true;
    }
    if (!replaced) break;
  }
  return w;
}

namespace {

// Monomials are the arcs of the relator circles (with any winding), relations
// the binomials joining two arcs that share both endpoints.
class GroupRelatorFamily final : public RelationFamily {
 public:
  GroupRelatorFamily(GroupPresentation pres, FieldKind k)
      : pres_(std::move(pres)), kind_(k) {}

  const Alphabet& alphabet() const override { return pres_.alphabet; }
  FieldKind field() const override { return kind_; }

  std::string describe() const override {
    return "group relator ring: " + std::to_string(pres_.relators.size()) + " relator(s), " +
           std::to_string(pres_.symmetrized.size()) + " symmetrized";
  }

  bool in_terms(const Word& u) override {
    if (u.empty()) return true;
    for (const Word& s : pres_.symmetrized)
      if (stream_has_prefix(s, u)) return true;
    return false;
  }

  size_t max_extension(const Word& host, size_t from) override {
    const auto& H = host.letters();
    size_t cap = H.size() - from;
    size_t best = 0;
    for (const Word& s : pres_.symmetrized) {
      const auto& S = s.letters();
      size_t k = 0;
      while (k < cap && H[from + k] == S[k % S.size()]) ++k;
      best = std::max(best, k);
      if (best == cap) break;
    }
    return best;
  }

  std::optional<bool> certified_small_piece(const Word& u) override {
    return group_small_piece(u, pres_);
  }

  std::vector<Polynomial> relations_with_term(const Word& u, size_t bound) override {
    // Partners more than a few windings longer than u join nothing new; keeps
    // effectively-infinite bounds finite.
    bound = std::min(bound, u.size() + 4 * max_rho() + 64);
    std::set<Word, DeglexLess> partners;
    for (const auto& rz : realizations(u)) {
      size_t rho = pres_.relators[rz.cls].size();
      size_t fwd0 = (rz.end + rho - rz.start) % rho;
      for (size_t len = fwd0; len <= bound; len += rho) {
        Word d = stream_word(rz.cls, +1, rz.start, len);
        if (!(d == u)) partners.insert(std::move(d));
      }
      size_t bwd0 = (rz.start + rho - rz.end) % rho;
      for (size_t len = bwd0; len <= bound; len += rho) {
        Word d = stream_word(rz.cls, -1, rz.start, len);
        if (!(d == u)) partners.insert(std::move(d));
      }
    }
    std::vector<Word> ps(partners.begin(), partners.end());
    std::stable_sort(ps.begin(), ps.end(), [&](const Word& a, const Word& b) {
      size_t ka = std::max(u.size(), a.size());
      size_t kb = std::max(u.size(), b.size());
      if (ka != kb) return ka < kb;
      return deglex_less(a, b);
    });
    std::vector<Polynomial> rels;
    rels.reserve(ps.size());
    for (const Word& d : ps) {
      Polynomial p(kind_);
      p.add_term(1, u);
      p.add_term(-1, d);
      rels.push_back(std::move(p));
    }
    return rels;
  }

  Ternary contains(const Polynomial& p) override {
    // Every relation of this family is a binomial, and additive combinations
    // of binomials sharing a monomial are again binomials.
    if (p.term_count() != 2) return Ternary::no;
    auto it = p.terms().begin();
    const Word& c = it->first;
    Rat alpha = it->second;
    ++it;
    const Word& d = it->first;
    Rat beta = it->second;
    if (field_norm(kind_, alpha + beta) != 0) return Ternary::no;
    if (c.empty() || d.empty()) {
      const Word& other = c.empty() ? d : c;
      for (const auto& rz : realizations(other))
        if (rz.start == rz.end) return Ternary::yes;
      return Ternary::no;
    }
    auto rc = realizations(c);
    auto rd = realizations(d);
    for (const auto& a : rc)
      for (const auto& b : rd)
        if (a.cls == b.cls && a.start == b.start && a.end == b.end) return Ternary::yes;
    return Ternary::no;
  }

  bool additive_closure_certified() const override { return true; }

  std::vector<Word> enumerate_terms(size_t max_len, size_t max_count, bool* truncated) override {
    std::set<Word, DeglexLess> out;
    bool trunc = false;
    size_t len_cap = 4 * max_rho() + 64;
    bool clamped = max_len > len_cap;
    if (clamped) max_len = len_cap;
    max_count = std::min<size_t>(max_count, 20000);
    for (size_t len = 1; len <= max_len && !trunc; ++len) {
      for (const Word& s : pres_.symmetrized) {
        const auto& S = s.letters();
        std::vector<Letter> ls;
        ls.reserve(len);
        for (size_t k = 0; k < len; ++k) ls.push_back(S[k % S.size()]);
        Word wd = Word::from_letters(std::move(ls));
        if (out.count(wd)) continue;
        if (out.size() >= max_count) {
          trunc = true;
          break;
        }
        out.insert(std::move(wd));
      }
    }
    if (truncated) *truncated = trunc || clamped;
    return {out.begin(), out.end()};
  }

  // Joined arc pairs have lengths summing to a multiple of the circle, so every
  // relation has a side at least half a circle long.  Ascending enumeration
  // never reaches that scale; slide windows of several such lengths instead.
  std::vector<Polynomial> sample_relations(size_t max_len, size_t max_count, bool* truncated) override {
    max_count = std::min<size_t>(max_count, 20000);
    std::vector<Polynomial> out;
    std::set<std::string> seen;
    for (size_t cls = 0; cls < pres_.relators.size(); ++cls) {
      size_t rho = pres_.relators[cls].size();
      size_t len_cap = std::min(max_len, 2 * rho + 64);
      if (len_cap < rho / 2 + 1) continue;
      size_t lens[] = {rho / 2 + 1, (5 * rho) / 8, (3 * rho) / 4, rho - 1, rho};
      size_t step = std::max<size_t>(1, rho / 16);
      for (int dir : {+1, -1})
        for (size_t startpos = 0; startpos < rho; startpos += step)
          for (size_t len : lens) {
            if (len > len_cap) continue;
            Word c = stream_word(cls, dir, startpos, len);
            for (const Polynomial& p : relations_with_term(c, len_cap)) {
              if (!(p.leading_term() == c)) continue;  // orient once per pair
              std::string key = format_poly(pres_.alphabet, p);
              if (!seen.insert(std::move(key)).second) continue;
              out.push_back(p);
              if (out.size() >= max_count) {
                if (truncated) *truncated = true;
                return out;
              }
            }
          }
    }
    if (truncated) *truncated = true;  // the family is infinite
    return out;
  }

  Word random_term(std::mt19937_64& rng, size_t max_len) override {
    const Word& s = pres_.symmetrized[rng() % pres_.symmetrized.size()];
    size_t len = 1 + size_t(rng() % std::max<size_t>(max_len, 1));
    const auto& S = s.letters();
    std::vector<Letter> ls;
    ls.reserve(len);
    for (size_t k = 0; k < len; ++k) ls.push_back(S[k % S.size()]);
    return Word::from_letters(std::move(ls));
  }

 private:
  struct Realization {
    size_t cls = 0;
    int dir = 1;
    size_t start = 0;  // circle positions
    size_t end = 0;
  };

  std::vector<Realization> realizations(const Word& u) const {
    std::vector<Realization> out;
    for (size_t cls = 0; cls < pres_.relators.size(); ++cls) {
      const auto& R = pres_.relators[cls].letters();
      size_t rho = R.size();
      for (int dir : {+1, -1}) {
        for (size_t o = 0; o < rho; ++o) {
          bool ok = true;
          for (size_t k = 0; k < u.size(); ++k) {
            Letter expect = dir > 0 ? R[(o + k) % rho]
                                    : R[(o + rho - 1 - (k % rho)) % rho].inverse();
            if (!(u.letter(k) == expect)) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          size_t end = dir > 0 ? (o + u.size()) % rho
                               : (o + rho - (u.size() % rho)) % rho;
          out.push_back({cls, dir, o, end});
        }
      }
    }
    return out;
  }

  size_t max_rho() const {
    size_t m = 0;
    for (const Word& r : pres_.relators) m = std::max(m, r.size());
    return m;
  }

  Word stream_word(size_t cls, int dir, size_t offset, size_t len) const {
    const auto& R = pres_.relators[cls].letters();
    size_t rho = R.size();
    std::vector<Letter> ls;
    ls.reserve(len);
    for (size_t k = 0; k < len; ++k) {
      if (dir > 0)
        ls.push_back(R[(offset + k) % rho]);
      else
        ls.push_back(R[(offset + rho - 1 - (k % rho)) % rho].inverse());
    }
    return Word::from_letters(std::move(ls));
  }

  GroupPresentation pres_;
  FieldKind kind_;
};

}  // namespace

RelationSystem make_group_system(const GroupPresentation& pres, FieldKind k) {
  size_t m = check_Cm(pres);
  if (m == kNoPieceBound)
    throw PreconditionError(
        "group system: some relator admits no factorization into small pieces");
  if (m < 22)
    throw PreconditionError("group system: small cancellation constant C(" +
                            std::to_string(m) + ") is below the required C(22)");
  long long tau = (long long)(m / 2) - 1;
  auto fam = std::make_shared<GroupRelatorFamily>(pres, k);
  return RelationSystem(std::move(fam), tau, MeasureMode::pieces());
}

/******************************  trinomial quotients  ***********************/

Word trinomial_v(const TrinomialParams& params) {
  std::vector<Letter> ls;
  for (size_t i = params.n1; i <= params.n2; ++i) {
    for (size_t k = 0; k < i; ++k) ls.push_back(pos(params.x));
    ls.push_back(pos(params.y));
  }
  return Word::from_letters(std::move(ls));
}

TwoLoopGraph two_loop_graph(const Word& v, const Word& w) {
  if (v.empty() || w.empty()) throw PreconditionError("two-loop graph: empty cycle word");
  TwoLoopGraph g;
  g.v = v;
  g.w = w;
  size_t nv = v.size() + w.size() - 1;
  g.out.assign(nv, {});
  g.in.assign(nv, {});
  auto add = [&g](size_t from, size_t to, Letter l, bool vm, bool wm) {
    size_t id = g.edges.size();
    g.edges.push_back({from, to, l, vm, wm});
    g.out[from].push_back(id);
    g.in[to].push_back(id);
  };
  for (size_t k = 0; k < v.size(); ++k)
    add(k == 0 ? 0 : k, k + 1 == v.size() ? 0 : k + 1, v.letter(k), k == 0, false);
  for (size_t k = 0; k < w.size(); ++k)
    add(k == 0 ? 0 : v.size() - 1 + k, k + 1 == w.size() ? 0 : v.size() + k, w.letter(k),
        false, k == 0);
  return g;
}

namespace {

size_t count_paths_from(const TwoLoopGraph& g, const Word& c, size_t k, size_t vertex) {
  if (k == c.size()) return 1;
  const Letter& l = c.letter(k);
  size_t total = 0;
  for (size_t e : g.out[vertex])
    if (g.edges[e].label == l) total += count_paths_from(g, c, k + 1, g.edges[e].to);
  for (size_t e : g.in[vertex])
    if (g.edges[e].label.inverse() == l) total += count_paths_from(g, c, k + 1, g.edges[e].from);
  return total;
}

}  // namespace

size_t count_paths(const Word& c, const TwoLoopGraph& g) {
  if (c.empty()) return g.vertices();
  size_t total = 0;
  for (size_t s = 0; s < g.vertices(); ++s) total += count_paths_from(g, c, 0, s);
  return total;
}

namespace {

struct TrinRealization {
  size_t start = 0;
  size_t end = 0;
  long long vw = 0;  // signed crossings of the two marker edges
  long long ww = 0;
  std::vector<size_t> base_visits;  // letter indices at the base vertex
};

// Relations are the conjugates A (v^-1 - 1 - w) B over base-vertex splits and
// the binomials joining two paths with the same endpoints and windings.
class TrinomialLoopFamily final : public RelationFamily {
 public:
  TrinomialLoopFamily(TrinomialParams params, FieldKind k)
      : params_(std::move(params)),
        kind_(k),
        v_(trinomial_v(params_)),
        vinv_(v_.inverse()),
        g_(two_loop_graph(v_, params_.w)) {}

  const Alphabet& alphabet() const override { return params_.alphabet; }
  FieldKind field() const override { return kind_; }

  std::string describe() const override {
    return "trinomial quotient ring: |v| = " + std::to_string(v_.size()) +
           ", w = " + format_word(params_.alphabet, params_.w) +
           ", n1 = " + std::to_string(params_.n1) + ", n2 = " + std::to_string(params_.n2);
  }

  const TwoLoopGraph& graph() const { return g_; }
  const Word& v() const { return v_; }

  bool in_terms(const Word& u) override {
    if (u.empty()) return true;
    size_t total = 0;
    for (size_t s = 0; s < g_.vertices() && total == 0; ++s)
      total += count_paths_from(g_, u, 0, s);
    return total > 0;
  }

  size_t max_extension(const Word& host, size_t from) override {
    size_t best = 0;
    for (size_t s = 0; s < g_.vertices() && best + from < host.size(); ++s)
      extend_from(host, from, s, 0, best);
    return best;
  }

  std::optional<bool> certified_small_piece(const Word& u) override {
    if (u.empty()) return true;
    return count_paths(u, g_) >= 2;
  }

  std::vector<Polynomial> relations_with_term(const Word& u, size_t bound) override {
    // Partners much longer than a loop pair around u join nothing new; keeps
    // effectively-infinite bounds finite.
    bound = std::min(bound, u.size() + 2 * (v_.size() + params_.w.size()) + 64);
    std::vector<Polynomial> result;
    std::set<std::string> seen;
    auto emit = [&](const Polynomial& p) {
      for (const auto& [m, c] : p.terms())
        if (!(m == u) && m.size() > bound) return;
      std::string key = format_poly(params_.alphabet, p);
      if (seen.insert(std::move(key)).second) result.push_back(p);
    };
    auto rzs = realizations(u);
    for (const auto& rz : rzs) {
      // u as the middle term: insert the defining trinomial at a base visit
      for (size_t i : rz.base_visits)
        emit(conj_tri(u.subword(0, i), u.subword(i, u.size() - i)));
      // u as the v^-1 or w term: a closed segment between two base visits
      for (size_t a = 0; a + 1 < rz.base_visits.size(); ++a)
        for (size_t b = a + 1; b < rz.base_visits.size(); ++b) {
          size_t i = rz.base_visits[a], j = rz.base_visits[b];
          Word seg = u.subword(i, j - i);
          if (seg == vinv_ || seg == params_.w)
            emit(conj_tri(u.subword(0, i), u.subword(j, u.size() - j)));
        }
    }
    // equal-path binomials
    std::set<Word, DeglexLess> partners;
    for (const auto& rz : rzs) {
      size_t nodes = 0;
      std::vector<Letter> acc;
      partner_search(rz.start, rz.end, rz.vw, rz.ww, bound, rz.start, 0, 0, acc, partners,
                     nodes);
    }
    for (const Word& d : partners) {
      if (d == u) continue;
      Polynomial p(kind_);
      p.add_term(1, u);
      p.add_term(-1, d);
      emit(p);
    }
    std::stable_sort(result.begin(), result.end(),
                     [&](const Polynomial& a, const Polynomial& b) {
                       size_t ka = largest_len(a), kb = largest_len(b);
                       if (ka != kb) return ka < kb;
                       return format_poly(params_.alphabet, a) < format_poly(params_.alphabet, b);
                     });
    return result;
  }

  Ternary contains(const Polynomial& p) override {
    if (p.term_count() == 2) {
      auto it = p.terms().begin();
      const Word& c = it->first;
      Rat alpha = it->second;
      ++it;
      const Word& d = it->first;
      Rat beta = it->second;
      if (field_norm(kind_, alpha + beta) != 0) return Ternary::no;
      auto rc = realizations(c);
      auto rd = realizations(d);
      for (const auto& a : rc)
        for (const auto& b : rd)
          if (a.start == b.start && a.end == b.end && a.vw == b.vw && a.ww == b.ww)
            return Ternary::yes;
      return Ternary::no;
    }
    if (p.term_count() == 3) {
      // gamma * A (v^-1 - 1 - w) B: pick the candidate carrying +gamma, split
      // the middle term at its base visits and rebuild the other two
      std::vector<std::pair<Word, Rat>> ts(p.terms().begin(), p.terms().end());
      for (int pi = 0; pi < 3; ++pi) {
        Rat gamma = ts[size_t(pi)].second;
        int o1 = (pi + 1) % 3, o2 = (pi + 2) % 3;
        if (field_norm(kind_, ts[size_t(o1)].second + gamma) != 0) continue;
        if (field_norm(kind_, ts[size_t(o2)].second + gamma) != 0) continue;
        const Word& P = ts[size_t(pi)].first;
        for (int mi : {o1, o2}) {
          const Word& M = ts[size_t(mi)].first;
          const Word& T = ts[size_t(mi == o1 ? o2 : o1)].first;
          for (const auto& rz : realizations(M))
            for (size_t i : rz.base_visits) {
              Word A = M.subword(0, i);
              Word B = M.subword(i, M.size() - i);
              if (Word::concat(Word::concat(A, vinv_), B) == P &&
                  Word::concat(Word::concat(A, params_.w), B) == T)
                return Ternary::yes;
            }
        }
      }
      return Ternary::undecided;
    }
    if (p.term_count() <= 1) return Ternary::no;
    return Ternary::undecided;
  }

  bool additive_closure_certified() const override { return true; }

  std::vector<Word> enumerate_terms(size_t max_len, size_t max_count, bool* truncated) override {
    std::set<Word, DeglexLess> out;
    bool trunc = false;
    size_t len_cap = v_.size() + 2 * params_.w.size() + 64;
    bool clamped = max_len > len_cap;
    if (clamped) max_len = len_cap;
    max_count = std::min<size_t>(max_count, 20000);
    std::vector<Letter> acc;
    for (size_t s = 0; s < g_.vertices() && !trunc; ++s) gen_terms(s, max_len, max_count, acc, out, trunc);
    if (truncated) *truncated = trunc || clamped;
    return {out.begin(), out.end()};
  }

  std::vector<Polynomial> sample_relations(size_t max_len, size_t max_count, bool* truncated) override {
    max_count = std::min<size_t>(max_count, 20000);
    bool trunc = false;
    std::vector<Word> terms = enumerate_terms(max_len, max_count + 64, &trunc);
    std::vector<Polynomial> out;
    std::set<std::string> seen;
    for (const Word& u : terms) {
      if (out.size() >= max_count) {
        trunc = true;
        break;
      }
      for (const Polynomial& p : relations_with_term(u, max_len)) {
        bool fits = true;
        for (const auto& [m, c] : p.terms())
          if (m.size() > max_len) {
            fits = false;
            break;
          }
        if (!fits) continue;
        std::string key = format_poly(params_.alphabet, p);
        if (seen.insert(std::move(key)).second) {
          out.push_back(p);
          if (out.size() >= max_count) break;
        }
      }
    }
    if (truncated) *truncated = trunc;
    return out;
  }

  Word random_term(std::mt19937_64& rng, size_t max_len) override {
    for (int attempt = 0; attempt < 64; ++attempt) {
      size_t target = 1 + size_t(rng() % std::max<size_t>(max_len, 1));
      size_t vtx = rng() % g_.vertices();
      std::vector<Letter> acc;
      while (acc.size() < target) {
        struct Move {
          Letter l;
          size_t next;
        };
        std::vector<Move> moves;
        for (size_t e : g_.out[vtx]) {
          Letter l = g_.edges[e].label;
          if (!acc.empty() && l == acc.back().inverse()) continue;
          moves.push_back({l, g_.edges[e].to});
        }
        for (size_t e : g_.in[vtx]) {
          Letter l = g_.edges[e].label.inverse();
          if (!acc.empty() && l == acc.back().inverse()) continue;
          moves.push_back({l, g_.edges[e].from});
        }
        if (moves.empty()) break;
        const Move& mv = moves[rng() % moves.size()];
        acc.push_back(mv.l);
        vtx = mv.next;
      }
      if (!acc.empty()) return Word::from_letters(std::move(acc));
    }
    return Word::from_letters({pos(params_.x)});
  }

 private:
  size_t largest_len(const Polynomial& p) const {
    size_t best = 0;
    for (const auto& [m, c] : p.terms()) best = std::max(best, m.size());
    return best;
  }

  // A (v^-1 - 1 - w) B with free cancellation at the junctions.
  Polynomial conj_tri(const Word& A, const Word& B) const {
    Polynomial p(kind_);
    p.add_term(1, Word::concat(Word::concat(A, vinv_), B));
    p.add_term(-1, Word::concat(A, B));
    p.add_term(-1, Word::concat(Word::concat(A, params_.w), B));
    return p;
  }

  void extend_from(const Word& host, size_t from, size_t vertex, size_t k, size_t& best) const {
    best = std::max(best, k);
    if (from + k == host.size()) return;
    const Letter& l = host.letter(from + k);
    for (size_t e : g_.out[vertex])
      if (g_.edges[e].label == l) extend_from(host, from, g_.edges[e].to, k + 1, best);
    for (size_t e : g_.in[vertex])
      if (g_.edges[e].label.inverse() == l) extend_from(host, from, g_.edges[e].from, k + 1, best);
  }

  void realize_from(const Word& c, size_t k, size_t vertex, size_t start, long long vw,
                    long long ww, std::vector<size_t>& visits,
                    std::vector<TrinRealization>& out) const {
    if (vertex == 0) visits.push_back(k);
    if (k == c.size()) {
      out.push_back({start, vertex, vw, ww, visits});
    } else {
      const Letter& l = c.letter(k);
      for (size_t e : g_.out[vertex])
        if (g_.edges[e].label == l)
          realize_from(c, k + 1, g_.edges[e].to, start, vw + (g_.edges[e].v_marker ? 1 : 0),
                       ww + (g_.edges[e].w_marker ? 1 : 0), visits, out);
      for (size_t e : g_.in[vertex])
        if (g_.edges[e].label.inverse() == l)
          realize_from(c, k + 1, g_.edges[e].from, start, vw - (g_.edges[e].v_marker ? 1 : 0),
                       ww - (g_.edges[e].w_marker ? 1 : 0), visits, out);
    }
    if (vertex == 0) visits.pop_back();
  }

  std::vector<TrinRealization> realizations(const Word& u) const {
    std::vector<TrinRealization> out;
    std::vector<size_t> visits;
    for (size_t s = 0; s < g_.vertices(); ++s) realize_from(u, 0, s, s, 0, 0, visits, out);
    return out;
  }

  // Bounded enumeration of reduced path words from start matching the target
  // endpoint and windings.  Wandering is cut by the winding deficit.
  void partner_search(size_t start, size_t target_end, long long tvw, long long tww,
                      size_t bound, size_t vertex, long long vw, long long ww,
                      std::vector<Letter>& acc, std::set<Word, DeglexLess>& out,
                      size_t& nodes) const {
    if (++nodes > kPartnerNodeCap) return;
    if (vertex == target_end && vw == tvw && ww == tww)
      out.insert(Word::from_letters(acc));
    if (acc.size() >= bound) return;
    size_t remaining = bound - acc.size();
    size_t dv = size_t(std::llabs(tvw - vw));
    size_t dw = size_t(std::llabs(tww - ww));
    size_t need = (dv > 0 ? (dv - 1) * v_.size() : 0) + (dw > 0 ? (dw - 1) * params_.w.size() : 0);
    if (need > remaining) return;
    for (size_t e : g_.out[vertex]) {
      Letter l = g_.edges[e].label;
      if (!acc.empty() && l == acc.back().inverse()) continue;
      acc.push_back(l);
      partner_search(start, target_end, tvw, tww, bound, g_.edges[e].to,
                     vw + (g_.edges[e].v_marker ? 1 : 0), ww + (g_.edges[e].w_marker ? 1 : 0),
                     acc, out, nodes);
      acc.pop_back();
    }
    for (size_t e : g_.in[vertex]) {
      Letter l = g_.edges[e].label.inverse();
      if (!acc.empty() && l == acc.back().inverse()) continue;
      acc.push_back(l);
      partner_search(start, target_end, tvw, tww, bound, g_.edges[e].from,
                     vw - (g_.edges[e].v_marker ? 1 : 0), ww - (g_.edges[e].w_marker ? 1 : 0),
                     acc, out, nodes);
      acc.pop_back();
    }
  }

  void gen_terms(size_t vertex, size_t max_len, size_t max_count, std::vector<Letter>& acc,
                 std::set<Word, DeglexLess>& out, bool& trunc) const {
    if (trunc) return;
    if (!acc.empty()) {
      Word wd = Word::from_letters(acc);
      if (!out.count(wd)) {
        if (out.size() >= max_count) {
          trunc = true;
          return;
        }
        out.insert(std::move(wd));
      }
    }
    if (acc.size() == max_len) return;
    for (size_t e : g_.out[vertex]) {
      Letter l = g_.edges[e].label;
      if (!acc.empty() && l == acc.back().inverse()) continue;
      acc.push_back(l);
      gen_terms(g_.edges[e].to, max_len, max_count, acc, out, trunc);
      acc.pop_back();
    }
    for (size_t e : g_.in[vertex]) {
      Letter l = g_.edges[e].label.inverse();
      if (!acc.empty() && l == acc.back().inverse()) continue;
      acc.push_back(l);
      gen_terms(g_.edges[e].from, max_len, max_count, acc, out, trunc);
      acc.pop_back();
    }
  }

  static constexpr size_t kPartnerNodeCap = 1u << 17;

  TrinomialParams params_;
  FieldKind kind_;
  Word v_;
  Word vinv_;
  TwoLoopGraph g_;
};

}  // namespace

RelationSystem make_trinomial_system(const TrinomialParams& params, FieldKind k) {
  const Alphabet& ab = params.alphabet;
  if (params.x < 0 || params.x >= ab.size() || params.y < 0 || params.y >= ab.size())
    throw PreconditionError("trinomial system: generator index out of range");
  if (params.x == params.y)
    throw PreconditionError("trinomial system: x and y must be distinct generators");
  const Word& w = params.w;
  if (w.empty()) throw PreconditionError("trinomial system: w must be nonempty");
  if (!cyclically_reduced(w))
    throw PreconditionError("trinomial system: w is not cyclically reduced");
  for (size_t d = 1; d < w.size(); ++d)
    if (w.size() % d == 0 && rotate(w, d) == w)
      throw PreconditionError("trinomial system: w must be primitive");
  auto touches = [&](const Letter& l) { return int(l.gen) == params.x || int(l.gen) == params.y; };
  if (touches(w.letter(0)) || touches(w.letter(w.size() - 1)))
    throw PreconditionError("trinomial system: boundary letters of w must avoid x and y");
  if (!(params.n1 > w.size()))
    throw PreconditionError("trinomial system: n1 must exceed |w|");
  if (params.n2 < params.n1 + 21)
    throw PreconditionError("trinomial system: n2 - n1 must be at least 21");
  auto fam = std::make_shared<TrinomialLoopFamily>(params, k);
  return RelationSystem(std::move(fam), 10,
                        MeasureMode::letter_count({pos(params.y), neg(params.y)}));
}

/******************************  demo presets  ******************************/

GroupPresentation demo_group_presentation() {
  Alphabet ab({"a", "b"});
  std::vector<Letter> ls;
  for (int i = 4; i <= 26; ++i) {
    for (int k = 0; k < i; ++k) ls.push_back(pos(0));
    ls.push_back(pos(1));
  }
  return group_presentation(std::move(ab), {Word::from_letters(std::move(ls))});
}

TrinomialParams demo_trinomial_params() {
  TrinomialParams p;
  p.alphabet = Alphabet({"x", "y", "z", "t"});
  p.x = 0;
  p.y = 1;
  p.w = Word::from_letters({pos(2), pos(3), pos(2)});
  p.n1 = 4;
  p.n2 = 25;
  return p;
}

}  // namespace scring
