#include "scring/chart.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_set>

namespace scring {

Chart compute_chart(RelationSystem& sys, const Word& host) {
  Chart ch;
  ch.host = host;
  std::vector<std::pair<size_t, size_t>> cand;
  for (size_t i = 0; i < host.size(); ++i) {
    size_t len = sys.max_extension(host, i);
    if (len) cand.push_back({i, len});
  }
  for (auto [s, l] : cand) {
    bool dominated = false;
    for (auto [s2, l2] : cand) {
      if ((s2 != s || l2 != l) && s2 <= s && s2 + l2 >= s + l) {
        dominated = true;
        break;
      }
    }
    if (!dominated) ch.occs.push_back({s, l, host.subword(s, l)});
  }
  for (size_t j = 0; j + 1 < ch.occs.size(); ++j)
    if (ch.occs[j].end() >= ch.occs[j + 1].end())
      throw PreconditionError("chart occurrences are not linearly ordered");
  return ch;
}

bool fully_covered(const Chart& chart, size_t idx) {
  const Occ& o = chart.occs.at(idx);
  if (o.len == 0) return true;
  std::vector<bool> cover(o.len, false);
  for (size_t j = 0; j < chart.occs.size(); ++j) {
    if (j == idx) continue;
    const Occ& c = chart.occs[j];
    size_t lo = std::max(c.start, o.start), hi = std::min(c.end(), o.end());
    for (size_t p = lo; p < hi; ++p) cover[p - o.start] = true;
  }
  return std::all_of(cover.begin(), cover.end(), [](bool b) { return b; });
}

std::vector<size_t> covered_indices(const Chart& chart) {
  std::vector<size_t> out;
  for (size_t j = 0; j < chart.occs.size(); ++j)
    if (fully_covered(chart, j)) out.push_back(j);
  return out;
}

std::vector<size_t> non_covered_indices(const Chart& chart) {
  std::vector<size_t> out;
  for (size_t j = 0; j < chart.occs.size(); ++j)
    if (!fully_covered(chart, j)) out.push_back(j);
  return out;
}

std::vector<size_t> long_indices(RelationSystem& sys, const Chart& chart) {
  std::vector<size_t> out;
  for (size_t j = 0; j < chart.occs.size(); ++j)
    if (sys.lambda(chart.occs[j].word) >= 3) out.push_back(j);
  return out;
}

size_t minimal_covering(const Chart& chart) {
  size_t nu = 0;
  size_t k = chart.occs.size();
  size_t j = 0;
  while (j < k) {
    size_t e = j + 1;
    while (e < k && chart.occs[e].start <= chart.occs[e - 1].end()) ++e;
    size_t span_end = chart.occs[e - 1].end();
    size_t p = chart.occs[j].start;
    size_t i = j;
    while (p < span_end) {
      size_t far = p;
      while (i < e && chart.occs[i].start <= p) {
        far = std::max(far, chart.occs[i].end());
        ++i;
      }
      if (far == p) throw PreconditionError("gap inside a chart component");
      p = far;
      ++nu;
    }
    j = e;
  }
  return nu;
}

/****** replacements and images ******/

Word apply_replacement(const Word& host, const Replacement& r) {
  if (r.target.end() > host.size() ||
      host.subword(r.target.start, r.target.len) != r.target.word)
    throw PreconditionError("replacement target does not match the host");
  Word left = host.subword(0, r.target.start);
  Word right = host.subword(r.target.end(), host.size() - r.target.end());
  if (r.substitute.empty()) return Word::concat(left, right);
  auto ls = Word::concat_nocancel(left, r.substitute);
  if (!ls) throw PreconditionError("substitute cancels into the left context");
  auto full = Word::concat_nocancel(*ls, right);
  if (!full) throw PreconditionError("substitute cancels into the right context");
  return *full;
}

std::vector<size_t> images_of(RelationSystem& sys, const Chart& before, size_t idx,
                              const Replacement& r, const Chart& after) {
  (void)sys;
  const Occ& b = before.occs.at(idx);
  const Occ& ah = r.target;
  size_t left_len = ah.start;
  size_t right_len = before.host.size() - ah.end();

  size_t k = 0;
  size_t left_keep = left_len;        // length of the surviving left part
  size_t right_from = ah.end();       // first surviving position on the right
  if (r.substitute.empty()) {
    Word left = before.host.subword(0, left_len);
    Word right = before.host.subword(ah.end(), right_len);
    k = Word::cancellation(left, right);
    left_keep = left_len - k;
    right_from = ah.end() + k;
  }

  size_t ks = 0, ke = 0;
  if (b.start == ah.start && b.len == ah.len) {
    if (r.substitute.empty()) return {};
    ks = ah.start;
    ke = ah.start + r.substitute.size();
  } else if (b.start < ah.start) {
    if (b.start >= left_keep) return {};  // swallowed by the cancellation
    ks = b.start;
    ke = std::min(b.end(), left_keep);
  } else {
    if (b.end() <= right_from) return {};
    size_t s = std::max(b.start, right_from);
    if (r.substitute.empty()) {
      ks = s - ah.len - 2 * k;
      ke = b.end() - ah.len - 2 * k;
    } else {
      long shift = long(r.substitute.size()) - long(ah.len);
      ks = size_t(long(s) + shift);
      ke = size_t(long(b.end()) + shift);
    }
  }

  std::vector<size_t> out;
  for (size_t j = 0; j < after.occs.size(); ++j)
    if (after.occs[j].contains(ks, ke)) out.push_back(j);
  return out;
}

bool is_admissible(RelationSystem& sys, const Chart& before, size_t idx, const Word& substitute) {
  const Occ& ah = before.occs.at(idx);
  if (sys.lambda(ah.word) < sys.tau() - 2) return false;
  if (substitute.empty()) return false;
  Replacement r{ah, substitute};
  Word after_host;
  try {
    after_host = apply_replacement(before.host, r);
  } catch (const PreconditionError&) {
    return false;
  }
  Chart after = compute_chart(sys, after_host);
  size_t ss = ah.start, se = ah.start + substitute.size();
  std::vector<bool> cover(substitute.size(), false);
  for (size_t j : long_indices(sys, before)) {
    if (j == idx) continue;
    for (size_t im : images_of(sys, before, j, r, after)) {
      const Occ& o = after.occs[im];
      size_t lo = std::max(o.start, ss), hi = std::min(o.end(), se);
      for (size_t p = lo; p < hi; ++p) cover[p - ss] = true;
    }
  }
  return !std::all_of(cover.begin(), cover.end(), [](bool b) { return b; });
}

/****** neighbour subwords ******/

NeighbourSubwords neighbour_subwords(RelationSystem& sys, const Chart& chart, size_t idx) {
  const Occ& b = chart.occs.at(idx);
  if (sys.lambda(b.word) < 3) throw PreconditionError("neighbour subwords need measure >= 3");
  long long heavy = sys.tau() - 3;

  size_t t_start = b.start;
  for (size_t j = idx; j-- > 0;) {
    const Occ& c = chart.occs[j];
    if (c.end() < b.start) break;  // separated, and so is everything further left
    if (sys.lambda(c.word) >= heavy) t_start = std::max(t_start, c.end());
  }
  size_t i_end = b.end();
  for (size_t j = idx + 1; j < chart.occs.size(); ++j) {
    const Occ& c = chart.occs[j];
    if (c.start > b.end()) break;
    if (sys.lambda(c.word) >= heavy) i_end = std::min(i_end, c.start);
  }

  NeighbourSubwords ns;
  ns.t = {t_start, b.end() - t_start, chart.host.subword(t_start, b.end() - t_start)};
  ns.i = {b.start, i_end - b.start, chart.host.subword(b.start, i_end - b.start)};
  if (t_start < i_end)
    ns.m = {t_start, i_end - t_start, chart.host.subword(t_start, i_end - t_start)};
  else
    ns.m = {t_start, 0, Word{}};
  return ns;
}

/****** virtual members ******/

namespace {

struct SeqKey {
  Word host;
  size_t bs, bl;
  friend bool operator==(const SeqKey&, const SeqKey&) = default;
};

struct SeqKeyHash {
  size_t operator()(const SeqKey& k) const {
    return WordHash{}(k.host) ^ (k.bs * 1315423911u) ^ (k.bl * 2654435761u);
  }
};

}  // namespace

Ternary decide_virtual(RelationSystem& sys, const Chart& chart, size_t idx,
                       const VirtualOptions& opt) {
  const Occ& b0 = chart.occs.at(idx);
  if (sys.lambda(b0.word) < sys.tau() - 2) return Ternary::no;
  if (sys.lambda(b0.word) >= sys.tau()) return Ternary::yes;

  struct State {
    Word host;
    Occ b;
    size_t depth;
  };
  std::deque<State> queue;
  queue.push_back({chart.host, b0, 0});
  std::unordered_set<SeqKey, SeqKeyHash> seen;
  if (opt.dedup) seen.insert({chart.host, b0.start, b0.len});
  bool cut = false;
  size_t states = 0;

  while (!queue.empty()) {
    State st = std::move(queue.front());
    queue.pop_front();
    if (++states > opt.max_states) {
      cut = true;
      break;
    }
    Chart ch = compute_chart(sys, st.host);
    size_t bi = ch.occs.size();
    for (size_t j = 0; j < ch.occs.size(); ++j)
      if (ch.occs[j].start == st.b.start && ch.occs[j].len == st.b.len) bi = j;
    if (bi == ch.occs.size()) {
      cut = true;  // image bookkeeping mismatch; should not happen
      continue;
    }
    if (sys.lambda(ch.occs[bi].word) >= sys.tau()) return Ternary::yes;

    // the whole tail of the sequence keeps the middle part fixed, and the
    // reachable measure is at most its measure plus two small pieces
    if (opt.prune && sys.lambda(ch.occs[bi].word) >= 3) {
      NeighbourSubwords ns = neighbour_subwords(sys, ch, bi);
      Lambda lm = sys.lambda(ns.m.word);
      if (lm >= 3 && lm < sys.tau() - 2) continue;
    }

    std::vector<size_t> heavies;
    for (size_t ai = 0; ai < ch.occs.size(); ++ai)
      if (ai != bi && sys.lambda(ch.occs[ai].word) >= sys.tau() - 2) heavies.push_back(ai);
    if (heavies.empty()) continue;  // nothing can be replaced; branch exhausts
    if (st.depth >= opt.depth) {
      cut = true;
      continue;
    }

    for (size_t ai : heavies) {
      const Occ& ah = ch.occs[ai];
      std::set<Word, DeglexLess> partners;
      for (const Polynomial& r : sys.family().relations_with_term(ah.word, opt.partner_len))
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
            if (opt.dedup && !seen.insert({nh, nb.start, nb.len}).second) continue;
            queue.push_back({nh, nb, st.depth + 1});
          }
        } catch (const PreconditionError&) {
          continue;
        }
      }
    }
  }
  return cut ? Ternary::undecided : Ternary::no;
}

/****** characteristic and filtration ******/

bool fchar_less(const FChar& a, const FChar& b) {
  if (a.nu != b.nu) return a.nu < b.nu;
  return a.v < b.v;
}

ChartAnalysis analyze_chart(RelationSystem& sys, const Word& host, const VirtualOptions& opt) {
  ChartAnalysis out;
  out.chart = compute_chart(sys, host);
  out.nu = minimal_covering(out.chart);
  bool decided = true;
  size_t vcount = 0;
  for (size_t j = 0; j < out.chart.occs.size(); ++j) {
    Lambda l = sys.lambda(out.chart.occs[j].word);
    out.measure.push_back(l);
    out.member.push_back(l >= sys.tau());
    Ternary t = decide_virtual(sys, out.chart, j, opt);
    out.virt.push_back(t);
    if (t == Ternary::undecided) decided = false;
    if (t == Ternary::yes) ++vcount;
  }
  if (decided) out.f = FChar{out.nu, vcount};
  return out;
}

FChar f_char(RelationSystem& sys, const Word& host, const VirtualOptions& opt) {
  ChartAnalysis an = analyze_chart(sys, host, opt);
  if (!an.f) {
    for (size_t j = 0; j < an.virt.size(); ++j) {
      if (an.virt[j] == Ternary::undecided) {
        std::ostringstream os;
        os << "virtual flag undecided for occurrence at " << an.chart.occs[j].start << " in "
           << format_word(sys.alphabet(), host);
        throw PreconditionError(os.str());
      }
    }
  }
  return *an.f;
}

FChar filtration_value(size_t n) {
  size_t r = 0;
  while ((r + 1) * (r + 2) / 2 <= n) ++r;
  return {r, n - r * (r + 1) / 2};
}

size_t filtration_index(const FChar& f) {
  if (f.v > f.nu) throw PreconditionError("virtual count exceeds covering size");
  return f.nu * (f.nu + 1) / 2 + f.v;
}

/****** derived monomials ******/

DerivedSet derived_monomials(RelationSystem& sys, const Word& host, const DerivedBounds& bounds) {
  DerivedSet out;
  std::set<Word, DeglexLess> seen;
  std::deque<Word> queue;
  queue.push_back(host);
  seen.insert(host);
  while (!queue.empty()) {
    Word u = queue.front();
    queue.pop_front();
    ChartAnalysis an = analyze_chart(sys, u, bounds.virt);
    if (!an.f)
      throw PreconditionError("derived closure hit an undecided virtual flag in " +
                              format_word(sys.alphabet(), u));
    out.words.push_back({u, *an.f});
    if (out.words.size() >= bounds.max_words) {
      out.complete = false;
      break;
    }
    for (size_t j = 0; j < an.chart.occs.size(); ++j) {
      if (an.virt[j] != Ternary::yes) continue;
      const Occ& t = an.chart.occs[j];
      std::set<Word, DeglexLess> subs;
      for (const Polynomial& r : sys.family().relations_with_term(t.word, bounds.max_word_len))
        for (const auto& [w, c] : r.terms())
          if (w != t.word) subs.insert(w);
      for (const Word& s : subs) {
        try {
          Word next = apply_replacement(u, {t, s});
          if (next.size() > bounds.max_word_len) {
            out.complete = false;
            continue;
          }
          if (seen.insert(next).second) queue.push_back(next);
        } catch (const PreconditionError&) {
          out.complete = false;
        }
      }
    }
  }
  if (!queue.empty()) out.complete = false;
  return out;
}

}  // namespace scring
