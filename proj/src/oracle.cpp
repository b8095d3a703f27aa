#include "scring/oracle.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>

namespace scring {

bool verify_certificate(const Polynomial& p, const Certificate& cert) {
  Polynomial sum(p.field());
  for (const CertStep& s : cert.steps) {
    sum += expand_layout(s.layout).scaled(s.coeff);
  }
  return sum == p;
}

/******************************  membership  ********************************/

namespace {

// Sparse vector over discovered-word row ids, kept ordered for deterministic
// leading-entry selection.
using Vec = std::map<size_t, Rat>;

void axpy(FieldKind k, Vec& v, const Rat& f, const Vec& w) {
  for (const auto& [row, c] : w) {
    Rat add = f * c;
    if (v.count(row)) add += v[row];
    Rat nv = field_norm(k, add);
    if (nv == 0) {
      v.erase(row);
    } else {
      v[row] = nv;
    }
  }
}

struct ColumnSeed {
  Word host;
  size_t s = 0;
  size_t e = 0;
  Polynomial rel{FieldKind::rational};
  Word left, right, pivot;
};

}  // namespace

MembershipResult bounded_membership(const Polynomial& p, RelationSystem& sys, size_t len_bound,
                                    const OracleCaps& caps) {
  FieldKind k = p.field();
  MembershipResult res;
  if (p.is_zero()) {
    res.member = true;
    res.certificate = Certificate{};
    return res;
  }
  for (const auto& [w, c] : p.terms()) {
    if (w.size() >= len_bound) {
      throw PreconditionError("bounded_membership: bound too small for the input terms");
    }
  }

  // Discover words and placed relations reachable from the monomials of p
  // while every produced word stays under the length bound.
  std::unordered_map<Word, size_t, WordHash> row_of;
  std::vector<Word> row_words;
  std::deque<Word> queue;
  auto row_id = [&](const Word& w) -> std::optional<size_t> {
    auto it = row_of.find(w);
    if (it != row_of.end()) return it->second;
    if (row_words.size() >= caps.member_max_rows) {
      res.capped = true;
      return std::nullopt;
    }
    size_t id = row_words.size();
    row_of.emplace(w, id);
    row_words.push_back(w);
    queue.push_back(w);
    return id;
  };
  for (const auto& [w, c] : p.terms()) row_id(w);

  std::vector<ColumnSeed> columns;
  std::set<std::string> column_keys;
  const Alphabet& ab = sys.alphabet();

  while (!queue.empty() && !res.capped) {
    Word host = std::move(queue.front());
    queue.pop_front();
    size_t n = host.size();
    for (size_t s = 0; s < n && !res.capped; ++s) {
      for (size_t e = s + 1; e <= n && !res.capped; ++e) {
        Word c = host.subword(s, e - s);
        if (!sys.in_terms(c)) continue;
        Word left = host.subword(0, s);
        Word right = host.subword(e, n - e);
        for (const Polynomial& r : sys.family().relations_with_term(c, len_bound)) {
          if (r.coeff(c) == 0) continue;
          std::string key = format_word(ab, left) + '\x01' + format_poly(ab, r) + '\x01' +
                            format_word(ab, right);
          if (!column_keys.insert(key).second) continue;
          std::vector<Word> produced;
          bool fits = true;
          for (const auto& [aj, cj] : r.terms()) {
            Word t = Word::concat(Word::concat(left, aj), right);
            if (t.size() >= len_bound) {
              fits = false;
              break;
            }
            produced.push_back(std::move(t));
          }
          if (!fits) continue;
          if (columns.size() >= caps.member_max_cols) {
            res.capped = true;
            break;
          }
          bool rows_ok = true;
          for (const Word& t : produced) rows_ok = row_id(t).has_value() && rows_ok;
          if (!rows_ok) break;  // row cap; capped already set
          columns.push_back(ColumnSeed{host, s, e, r, left, right, c});
        }
      }
    }
  }

  std::stable_sort(columns.begin(), columns.end(), [](const ColumnSeed& a, const ColumnSeed& b) {
    if (!(a.host == b.host)) return deglex_less(a.host, b.host);
    if (a.s != b.s) return a.s < b.s;
    return a.e < b.e;
  });
  res.rows = row_words.size();
  res.cols = columns.size();

  // Exact elimination.  Basis vectors are monic; combos trace each back to
  // the original columns.
  struct BasisEntry {
    Vec vec;
    std::map<size_t, Rat> combo;
  };
  std::map<size_t, BasisEntry> basis;  // leading row id -> entry
  auto reduce = [&](Vec& v, std::map<size_t, Rat>& combo) {
    while (!v.empty()) {
      auto lead = v.begin();
      auto b = basis.find(lead->first);
      if (b == basis.end()) break;
      Rat f = field_norm(k, -lead->second);
      axpy(k, v, f, b->second.vec);
      for (const auto& [ci, cc] : b->second.combo) {
        Rat nv = field_norm(k, (combo.count(ci) ? combo[ci] : Rat(0)) + f * cc);
        if (nv == 0) {
          combo.erase(ci);
        } else {
          combo[ci] = nv;
        }
      }
    }
  };

  for (size_t i = 0; i < columns.size(); ++i) {
    Vec v;
    for (const auto& [aj, cj] : columns[i].rel.terms()) {
      Word t = Word::concat(Word::concat(columns[i].left, aj), columns[i].right);
      v[row_of.at(t)] = field_norm(k, cj);
    }
    std::map<size_t, Rat> combo{{i, Rat(1)}};
    reduce(v, combo);
    if (v.empty()) continue;
    Rat inv = field_inv(k, v.begin()->second);
    for (auto& [row, c] : v) c = field_norm(k, c * inv);
    for (auto& [ci, c] : combo) c = field_norm(k, c * inv);
    size_t lead = v.begin()->first;
    basis.emplace(lead, BasisEntry{std::move(v), std::move(combo)});
  }

  Vec pv;
  for (const auto& [w, c] : p.terms()) pv[row_of.at(w)] = field_norm(k, c);
  std::map<size_t, Rat> pcombo;
  reduce(pv, pcombo);
  if (!pv.empty()) return res;  // unknown within this bound

  // p == sum over basis reductions; pcombo holds the negated multiples, so
  // the certificate coefficients flip sign.
  Certificate cert;
  for (const auto& [ci, c] : pcombo) {
    Rat gamma = field_norm(k, -c);
    if (gamma == 0) continue;
    const ColumnSeed& col = columns[ci];
    cert.steps.push_back(CertStep{gamma, Layout{col.left, col.rel, col.right, col.pivot}});
  }
  if (!verify_certificate(p, cert)) return res;  // defensive; should not happen
  res.member = true;
  res.certificate = std::move(cert);
  return res;
}

/******************************  measure oracle  ****************************/

Lambda exhaustive_lambda(RelationSystem& sys, const Word& u, const OracleCaps& caps) {
  if (sys.measure_mode().count_letters) return sys.lambda(u);
  size_t n = u.size();
  if (n == 0) return 0;
  if (n > caps.lambda_max_letters) {
    throw PreconditionError("exhaustive_lambda: word longer than the enumeration cap");
  }
  // small[s][e-1]: u[s, e) is a small piece
  std::vector<std::vector<bool>> small(n, std::vector<bool>(n, false));
  for (size_t s = 0; s < n; ++s) {
    for (size_t e = s + 1; e <= n; ++e) {
      small[s][e - 1] = sys.is_small_piece(u.subword(s, e - s));
    }
  }
  Lambda best = kLambdaInf;
  uint64_t masks = uint64_t(1) << (n - 1);
  for (uint64_t mask = 0; mask < masks; ++mask) {
    size_t prev = 0;
    Lambda count = 0;
    bool ok = true;
    for (size_t i = 1; i <= n; ++i) {
      if (i == n || (mask >> (i - 1)) & 1) {
        if (!small[prev][i - 1]) {
          ok = false;
          break;
        }
        ++count;
        prev = i;
      }
    }
    if (ok && count < best) best = count;
  }
  return best;
}

/******************************  virtual oracle  ****************************/

namespace {

struct SeqKey {
  Word host;
  size_t bs = 0;
  size_t bl = 0;
  friend bool operator==(const SeqKey&, const SeqKey&) = default;
};

struct SeqKeyHash {
  size_t operator()(const SeqKey& k) const {
    size_t h = WordHash{}(k.host);
    h ^= k.bs * 0x9e3779b97f4a7c15ull + k.bl * 0xc2b2ae3d27d4eb4full;
    return h;
  }
};

}  // namespace

ExhaustiveVirtualResult exhaustive_virtual(RelationSystem& sys, const Chart& chart, size_t idx,
                                           size_t depth_cap, const OracleCaps& caps) {
  ExhaustiveVirtualResult res;
  const Occ& b0 = chart.occs.at(idx);
  if (sys.lambda(b0.word) < sys.tau() - 2) {
    res.answer = Ternary::no;
    return res;
  }
  if (sys.lambda(b0.word) >= sys.tau()) {
    res.answer = Ternary::yes;
    return res;
  }

  struct State {
    Word host;
    Occ b;
    size_t depth;
  };
  std::deque<State> queue;
  queue.push_back({chart.host, b0, 0});
  std::unordered_set<SeqKey, SeqKeyHash> seen{{chart.host, b0.start, b0.len}};
  bool cut = false;

  while (!queue.empty()) {
    State st = std::move(queue.front());
    queue.pop_front();
    if (++res.states > caps.virtual_max_states) {
      res.capped = true;
      cut = true;
      break;
    }
    Chart ch = compute_chart(sys, st.host);
    size_t bi = ch.occs.size();
    for (size_t j = 0; j < ch.occs.size(); ++j)
      if (ch.occs[j].start == st.b.start && ch.occs[j].len == st.b.len) bi = j;
    if (bi == ch.occs.size()) {
      cut = true;
      continue;
    }
    if (sys.lambda(ch.occs[bi].word) >= sys.tau()) {
      res.answer = Ternary::yes;
      return res;
    }

    std::vector<size_t> heavies;
    for (size_t ai = 0; ai < ch.occs.size(); ++ai)
      if (ai != bi && sys.lambda(ch.occs[ai].word) >= sys.tau() - 2) heavies.push_back(ai);
    if (heavies.empty()) continue;
    if (st.depth >= depth_cap) {
      cut = true;
      continue;
    }

    for (size_t ai : heavies) {
      const Occ& ah = ch.occs[ai];
      std::set<Word, DeglexLess> partners;
      for (const Polynomial& r : sys.family().relations_with_term(ah.word, caps.virtual_partner_len))
        for (const auto& [w, c] : r.terms())
          if (!w.empty() && w != ah.word) partners.insert(w);
      cut = true;  // partner lists are length-bounded; absence is not definite
      for (const Word& aj : partners) {
        try {
          if (!is_admissible(sys, ch, ai, aj)) continue;
          Replacement rep{ah, aj};
          Word nh = apply_replacement(ch.host, rep);
          Chart after = compute_chart(sys, nh);
          for (size_t im : images_of(sys, ch, bi, rep, after)) {
            const Occ& nb = after.occs[im];
            if (!seen.insert({nh, nb.start, nb.len}).second) continue;
            queue.push_back({nh, nb, st.depth + 1});
          }
        } catch (const PreconditionError&) {
          continue;
        }
      }
    }
  }
  res.answer = cut ? Ternary::undecided : Ternary::no;
  return res;
}

}  // namespace scring
