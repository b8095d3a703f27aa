#include "scring/rewrite.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace scring {

namespace {

void check_target(const Word& host, const Occ& target, const char* who) {
  if (target.end() > host.size() || !(host.subword(target.start, target.len) == target.word)) {
    throw PreconditionError(std::string(who) + ": target does not match the host word");
  }
}

}  // namespace

Polynomial expand_layout(const Layout& l) {
  return l.relation.conjugated(l.left, l.right);
}

Layout layout_of(const Word& host, const Occ& target, const Polynomial& relation) {
  check_target(host, target, "layout_of");
  if (relation.coeff(target.word) == 0) {
    throw PreconditionError("layout_of: target word is not a monomial of the relation");
  }
  Layout l;
  l.left = host.subword(0, target.start);
  l.right = host.subword(target.end(), host.size() - target.end());
  l.relation = relation;
  l.pivot = target.word;
  return l;
}

Polynomial multi_turn(const Word& host, const Occ& target, const Polynomial& relation) {
  Layout l = layout_of(host, target, relation);
  FieldKind k = relation.field();
  Rat scale = field_norm(k, -field_inv(k, relation.coeff(l.pivot)));
  Polynomial rest = relation;
  rest.add_term(-relation.coeff(l.pivot), l.pivot);
  return rest.conjugated(l.left, l.right).scaled(scale);
}

/******************************  certificates  ******************************/

std::string format_certificate(const Alphabet& ab, const Certificate& c) {
  std::ostringstream out;
  for (const CertStep& s : c.steps) {
    out << format_coeff(s.layout.relation.field(), s.coeff) << " * "
        << format_word(ab, s.layout.left) << " * rel{"
        << format_poly(ab, s.layout.relation) << "} * "
        << format_word(ab, s.layout.right) << "\n";
  }
  return out.str();
}

Certificate parse_certificate(const Alphabet& ab, FieldKind k, std::string_view text) {
  Certificate cert;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    auto fail = [&](const char* what) -> ParseError {
      return ParseError("certificate line " + std::to_string(line_no) + ": " + what);
    };
    size_t sep1 = line.find(" * ");
    if (sep1 == std::string_view::npos) throw fail("missing coefficient separator");
    size_t sep2 = line.find(" * rel{", sep1 + 3);
    if (sep2 == std::string_view::npos) throw fail("missing rel{...} part");
    size_t close = line.rfind("} * ");
    if (close == std::string_view::npos || close < sep2 + 7) throw fail("missing closing of rel{...}");
    CertStep step;
    step.coeff = parse_coeff(k, line.substr(0, sep1));
    step.layout.left = parse_word(ab, line.substr(sep1 + 3, sep2 - sep1 - 3));
    step.layout.relation = parse_poly(ab, k, line.substr(sep2 + 7, close - sep2 - 7));
    step.layout.right = parse_word(ab, line.substr(close + 4));
    cert.steps.push_back(std::move(step));
  }
  return cert;
}

/******************************  monomial order  ****************************/

namespace {

bool measure_deglex_less(Lambda la, const Word& wa, Lambda lb, const Word& wb) {
  if (la != lb) return la < lb;
  return deglex_less(wa, wb);
}

// Incident monomials of u: nonempty monomials other than u of relations
// having u among their monomials.
std::vector<Word> incident_words(RelationSystem& sys, const Word& u, size_t partner_len) {
  std::set<Word, DeglexLess> seen;
  for (const Polynomial& t : sys.family().relations_with_term(u, partner_len)) {
    for (const auto& [w, c] : t.terms()) {
      if (!w.empty() && !(w == u)) seen.insert(w);
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace

Word class_representative(RelationSystem& sys, const Word& u, const CompareOptions& opt) {
  Word cur = u;
  for (size_t pass = 0; pass < opt.rep_passes; ++pass) {
    FChar f0 = f_char(sys, cur, opt.virt);
    ChartAnalysis an = analyze_chart(sys, cur, opt.virt);
    bool moved = false;
    for (size_t s = 0; s < an.chart.occs.size() && !moved; ++s) {
      if (an.virt[s] != Ternary::yes) continue;
      const Occ& b = an.chart.occs[s];
      std::vector<Word> cands = incident_words(sys, b.word, opt.partner_len);
      std::stable_sort(cands.begin(), cands.end(), [&](const Word& x, const Word& y) {
        return measure_deglex_less(sys.lambda(x), x, sys.lambda(y), y);
      });
      Lambda cur_l = an.measure[s];
      for (const Word& cand : cands) {
        if (!measure_deglex_less(sys.lambda(cand), cand, cur_l, b.word)) break;
        Word next;
        try {
          next = apply_replacement(cur, Replacement{b, cand});
        } catch (const PreconditionError&) {
          continue;  // junction cancellation
        }
        ChartAnalysis an2 = analyze_chart(sys, next, opt.virt);
        if (!an2.f || !(*an2.f == f0)) continue;
        std::vector<size_t> ims = images_of(sys, an.chart, s, Replacement{b, cand}, an2.chart);
        if (ims.size() != 1 || an2.virt[ims.front()] != Ternary::yes) continue;
        cur = next;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return cur;
}

int compare_f(RelationSystem& sys, const Word& u, const Word& v, const CompareOptions& opt) {
  if (u == v) return 0;
  FChar fu = f_char(sys, u, opt.virt);
  FChar fv = f_char(sys, v, opt.virt);
  if (!(fu == fv)) return fchar_less(fu, fv) ? -1 : 1;

  Word ru = class_representative(sys, u, opt);
  Word rv = class_representative(sys, v, opt);
  if (!(ru == rv)) return deglex_less(ru, rv) ? -1 : 1;

  ChartAnalysis au = analyze_chart(sys, u, opt.virt);
  ChartAnalysis av = analyze_chart(sys, v, opt.virt);
  std::vector<size_t> su, sv;
  for (size_t i = 0; i < au.chart.occs.size(); ++i)
    if (au.virt[i] == Ternary::yes) su.push_back(i);
  for (size_t i = 0; i < av.chart.occs.size(); ++i)
    if (av.virt[i] == Ternary::yes) sv.push_back(i);
  for (size_t i = 0; i < su.size() && i < sv.size(); ++i) {
    const Word& wa = au.chart.occs[su[i]].word;
    const Word& wb = av.chart.occs[sv[i]].word;
    if (wa == wb) continue;
    return measure_deglex_less(au.measure[su[i]], wa, av.measure[sv[i]], wb) ? -1 : 1;
  }
  if (su.size() != sv.size()) return su.size() < sv.size() ? -1 : 1;

  return deglex_less(u, v) ? -1 : 1;
}

/******************************  greedy descent  ****************************/

namespace {

// The highest monomial of p under compare_f.
const Word& highest_monomial(const Polynomial& p, RelationSystem& sys, const CompareOptions& opt) {
  const Word* best = nullptr;
  for (const auto& [w, c] : p.terms()) {
    if (!best || compare_f(sys, *best, w, opt) < 0) best = &w;
  }
  return *best;
}

}  // namespace

std::vector<GreedyCandidate> greedy_candidates(const Polynomial& p, RelationSystem& sys,
                                               const GreedyOptions& opt, bool first_only) {
  if (p.is_zero()) throw PreconditionError("greedy_candidates: zero polynomial");
  FieldKind k = p.field();
  const Word W = highest_monomial(p, sys, opt.cmp);
  Rat gamma = p.coeff(W);
  ChartAnalysis an = analyze_chart(sys, W, opt.cmp.virt);

  std::vector<GreedyCandidate> out;
  auto consider = [&](const Occ& b, const Polynomial& t) {
    Rat alpha = t.coeff(b.word);
    if (alpha == 0) return;
    Word left = W.subword(0, b.start);
    Word right = W.subword(b.end(), W.size() - b.end());
    for (const auto& [aj, cj] : t.terms()) {
      if (aj == b.word) continue;
      Word uj = Word::concat(Word::concat(left, aj), right);
      if (compare_f(sys, uj, W, opt.cmp) >= 0) return;
    }
    GreedyCandidate cand;
    cand.layout = Layout{left, t, right, b.word};
    cand.delta = field_norm(k, gamma * field_inv(k, alpha));
    cand.next = p - t.conjugated(left, right).scaled(cand.delta);
    for (const GreedyCandidate& prev : out) {
      if (prev.layout.left == cand.layout.left && prev.layout.pivot == cand.layout.pivot &&
          prev.layout.relation == cand.layout.relation) {
        return;
      }
    }
    out.push_back(std::move(cand));
  };

  for (size_t s = 0; s < an.chart.occs.size(); ++s) {
    if (an.virt[s] != Ternary::yes) continue;
    const Occ& b = an.chart.occs[s];
    std::vector<Polynomial> rels = sys.family().relations_with_term(b.word, opt.cmp.partner_len);
    for (const Polynomial& t : rels) {
      consider(b, t);
      if (first_only && !out.empty()) return out;
    }
    if (opt.pair_closures) {
      size_t pairs = 0;
      for (size_t i = 0; i < rels.size() && pairs < opt.pair_bound; ++i) {
        for (size_t j = i + 1; j < rels.size() && pairs < opt.pair_bound; ++j) {
          ++pairs;
          std::optional<Polynomial> comb = additive_closure_step(rels[i], rels[j], sys);
          if (!comb || comb->coeff(b.word) == 0) continue;
          consider(b, *comb);
          if (first_only && !out.empty()) return out;
        }
      }
    }
  }
  return out;
}

size_t default_step_budget(const Polynomial& p) {
  size_t n = p.term_count();
  for (const auto& [w, c] : p.terms()) n += w.size();
  return 10 * n * n;
}

ReduceResult greedy_reduce(const Polynomial& p, RelationSystem& sys, size_t max_steps,
                           const GreedyOptions& opt) {
  size_t budget = max_steps ? max_steps : default_step_budget(p);
  ReduceResult res;
  res.trace.start = p;
  res.trace.outcome = ReduceOutcome::zero;
  res.trace.remainder = Polynomial(p.field());
  Certificate cert;
  Polynomial cur = p;
  while (!cur.is_zero()) {
    if (res.trace.steps.size() >= budget) {
      res.trace.outcome = ReduceOutcome::budget;
      res.trace.remainder = cur;
      return res;
    }
    std::vector<GreedyCandidate> cands = greedy_candidates(cur, sys, opt, true);
    if (cands.empty()) {
      res.trace.outcome = ReduceOutcome::stuck;
      res.trace.remainder = cur;
      return res;
    }
    GreedyCandidate& c = cands.front();
    Word w = Word::concat(Word::concat(c.layout.left, c.layout.pivot), c.layout.right);
    res.trace.steps.push_back(TraceStep{std::move(w), c.layout.relation, c.next});
    cert.steps.push_back(CertStep{c.delta, c.layout});
    cur = std::move(c.next);
  }
  res.certificate = std::move(cert);
  return res;
}

BranchReport greedy_all_branches(const Polynomial& p, RelationSystem& sys, size_t max_total_steps,
                                 const GreedyOptions& opt) {
  size_t budget = max_total_steps ? max_total_steps : default_step_budget(p);
  BranchReport rep;
  std::vector<Polynomial> stack{p};
  while (!stack.empty()) {
    Polynomial cur = std::move(stack.back());
    stack.pop_back();
    if (cur.is_zero()) {
      ++rep.branches;
      ++rep.zero_branches;
      continue;
    }
    std::vector<GreedyCandidate> cands = greedy_candidates(cur, sys, opt, false);
    if (cands.empty()) {
      ++rep.branches;
      rep.stuck_hit = true;
      continue;
    }
    for (GreedyCandidate& c : cands) {
      if (rep.steps_used >= budget) {
        rep.budget_hit = true;
        break;
      }
      ++rep.steps_used;
      stack.push_back(std::move(c.next));
    }
    if (rep.budget_hit) break;
  }
  rep.all_zero = rep.branches > 0 && rep.zero_branches == rep.branches && !rep.budget_hit &&
                 !rep.stuck_hit;
  return rep;
}

}  // namespace scring
