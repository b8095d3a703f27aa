#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "scring/oracle.hpp"
#include "scring/presentation.hpp"

using nlohmann::json;
using namespace scring;

namespace {

struct Options {
  std::string pres;
  std::string word_text;
  std::string poly_text;
  std::string cert_path;
  std::string cert_out;
  std::string demo_name;
  std::string branches = "first";
  long long tau = -1;  // -1: from the presentation
  size_t depth = 3;
  size_t len_bound = 0;  // 0: per-command default
  size_t max_steps = 0;  // 0: default budget
  size_t n_cap = 0;      // 0: per-task defaults
  uint64_t seed = 0;
  bool json_out = false;
  bool auto_reduce = false;
};

// Writes the memo caches back when SCRING_CACHE_DIR is set.
struct CacheGuard {
  RelationSystem& sys;
  const char* dir;
  explicit CacheGuard(RelationSystem& s) : sys(s), dir(std::getenv("SCRING_CACHE_DIR")) {
    if (dir && *dir) sys.load_cache(dir);
  }
  ~CacheGuard() {
    if (dir && *dir) try {
        sys.save_cache(dir);
      } catch (...) {
      }
  }
};

RelationSystem make_system(const Options& o, PresentationFile* out_pf = nullptr) {
  PresentationFile pf = load_presentation(o.pres);
  if (out_pf) *out_pf = pf;
  std::optional<long long> tau;
  if (o.tau >= 0) tau = o.tau;
  size_t closure_cap = o.n_cap ? std::max<size_t>(o.n_cap, 64) : 4096;
  return build_system(pf, tau, closure_cap);
}

VirtualOptions virt_options(const Options& o) {
  VirtualOptions v;
  v.depth = o.depth;
  if (o.len_bound) v.partner_len = o.len_bound;
  if (o.n_cap) v.max_states = o.n_cap;
  return v;
}

// Greedy comparisons must see every monomial of the relations they pull, so
// the default partner bound scales with the polynomial at hand.
GreedyOptions greedy_options(const Options& o, const Polynomial& p) {
  GreedyOptions g;
  if (o.len_bound) {
    g.cmp.partner_len = o.len_bound;
  } else {
    size_t longest = 0;
    for (const auto& [w, c] : p.terms()) longest = std::max(longest, w.size());
    g.cmp.partner_len = std::max<size_t>(240, 2 * longest + 64);
  }
  g.cmp.virt.depth = o.depth;
  return g;
}

void emit(const Options& o, const json& doc, const std::string& text) {
  if (o.json_out)
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << text;
}

json lambda_json(Lambda v) {
  if (v == kLambdaInf) return json("inf");
  return json(v);
}

const char* ternary_text(Ternary t) {
  switch (t) {
    case Ternary::yes: return "yes";
    case Ternary::no: return "no";
    default: return "undecided";
  }
}

int cmd_check_axioms(const Options& o) {
  RelationSystem sys = make_system(o);
  CacheGuard cache(sys);
  size_t compat_len = o.len_bound ? o.len_bound : 420;
  size_t count = o.n_cap ? o.n_cap : 30;
  size_t iso_w = o.len_bound ? o.len_bound : 24;

  CheckReport compat = check_compatibility(sys, compat_len, count);
  CheckReport sc = check_small_cancellation(sys, count, o.seed);
  CheckReport iso = check_isolation(sys, iso_w, iso_w / 2);

  struct Row {
    const char* name;
    const CheckReport* rep;
    std::string bounds;
  };
  Row rows[] = {
      {"compatibility", &compat,
       "len<=" + std::to_string(compat_len) + " count<=" + std::to_string(count)},
      {"small-cancellation", &sc,
       "samples=" + std::to_string(count) + " seed=" + std::to_string(o.seed)},
      {"isolation", &iso,
       "witness<=" + std::to_string(iso_w) + " piece<=" + std::to_string(iso_w / 2)},
  };

  json doc{{"schema", 1}, {"command", "check-axioms"}, {"axioms", json::array()}};
  std::ostringstream text;
  bool all_ok = true;
  for (const Row& r : rows) {
    all_ok = all_ok && r.rep->ok;
    text << r.name << ": " << (r.rep->ok ? "pass" : "FAIL") << " (checked=" << r.rep->checked
         << " " << r.bounds << (r.rep->truncated ? " truncated" : "") << ")\n";
    for (const std::string& f : r.rep->failures) text << "  " << f << "\n";
    doc["axioms"].push_back({{"name", r.name},
                             {"ok", r.rep->ok},
                             {"checked", r.rep->checked},
                             {"truncated", r.rep->truncated},
                             {"bounds", r.bounds},
                             {"failures", r.rep->failures}});
  }
  emit(o, doc, text.str());
  return all_ok ? 0 : 1;
}

int cmd_small_piece(const Options& o) {
  PresentationFile pf;
  RelationSystem sys = make_system(o, &pf);
  CacheGuard cache(sys);
  Word w = parse_named_word(name_table(pf), o.word_text, o.auto_reduce);
  bool small = sys.is_small_piece(w);
  emit(o, json{{"schema", 1}, {"command", "small-piece"}, {"word", format_word(sys.alphabet(), w)},
               {"small_piece", small}},
       std::string("small piece: ") + (small ? "yes" : "no") + "\n");
  return small ? 0 : 1;
}

int cmd_lambda(const Options& o) {
  PresentationFile pf;
  RelationSystem sys = make_system(o, &pf);
  CacheGuard cache(sys);
  Word w = parse_named_word(name_table(pf), o.word_text, o.auto_reduce);
  Lambda v = sys.lambda(w);
  emit(o, json{{"schema", 1}, {"command", "lambda"}, {"word", format_word(sys.alphabet(), w)},
               {"lambda", lambda_json(v)}},
       "lambda: " + format_lambda(v) + "\n");
  return 0;
}

int cmd_chart(const Options& o) {
  PresentationFile pf;
  RelationSystem sys = make_system(o, &pf);
  CacheGuard cache(sys);
  Word w = parse_named_word(name_table(pf), o.word_text, o.auto_reduce);
  ChartAnalysis an = analyze_chart(sys, w, virt_options(o));

  json occs = json::array();
  std::ostringstream text;
  text << "host " << format_word(sys.alphabet(), w) << "\n";
  for (size_t i = 0; i < an.chart.occs.size(); ++i) {
    const Occ& b = an.chart.occs[i];
    std::string bw = format_word(sys.alphabet(), b.word);
    occs.push_back({{"start", b.start},
                    {"length", b.len},
                    {"word", bw},
                    {"lambda", lambda_json(an.measure[i])},
                    {"member", an.member[i]},
                    {"virtual", ternary_text(an.virt[i])}});
    text << "occ " << i << ": start=" << b.start << " length=" << b.len << " word=" << bw
         << " lambda=" << format_lambda(an.measure[i]) << " member=" << (an.member[i] ? "yes" : "no")
         << " virtual=" << ternary_text(an.virt[i]) << "\n";
  }
  text << "nu " << an.nu << "\n";
  json doc{{"schema", 1},
           {"command", "chart"},
           {"host", format_word(sys.alphabet(), w)},
           {"occurrences", occs},
           {"nu", an.nu}};
  if (an.f) {
    doc["f"] = {{"nu", an.f->nu}, {"v", an.f->v}};
    text << "f (" << an.f->nu << ", " << an.f->v << ")\n";
  } else {
    doc["f"] = nullptr;
    text << "f undecided\n";
  }
  emit(o, doc, text.str());
  return 0;
}

int cmd_fchar(const Options& o) {
  PresentationFile pf;
  RelationSystem sys = make_system(o, &pf);
  CacheGuard cache(sys);
  Word w = parse_named_word(name_table(pf), o.word_text, o.auto_reduce);
  FChar f = f_char(sys, w, virt_options(o));
  size_t idx = filtration_index(f);
  emit(o, json{{"schema", 1}, {"command", "fchar"}, {"host", format_word(sys.alphabet(), w)},
               {"nu", f.nu}, {"v", f.v}, {"filtration", idx}},
       "f (" + std::to_string(f.nu) + ", " + std::to_string(f.v) + ")\nfiltration " +
           std::to_string(idx) + "\n");
  return 0;
}

int cmd_reduce(const Options& o) {
  PresentationFile pf;
  RelationSystem sys = make_system(o, &pf);
  CacheGuard cache(sys);
  Polynomial p = parse_named_poly(name_table(pf), sys.field(), o.poly_text);
  GreedyOptions g = greedy_options(o, p);

  if (o.branches == "all") {
    BranchReport rep = greedy_all_branches(p, sys, o.max_steps, g);
    std::ostringstream text;
    text << "branches " << rep.branches << " zero " << rep.zero_branches
         << (rep.all_zero ? " (all reach zero)" : "")
         << (rep.budget_hit ? " budget-hit" : "") << "\n";
    emit(o, json{{"schema", 1}, {"command", "reduce"}, {"branches", rep.branches},
                 {"zero_branches", rep.zero_branches}, {"all_zero", rep.all_zero},
                 {"budget_hit", rep.budget_hit}, {"steps_used", rep.steps_used}},
         text.str());
    return rep.all_zero ? 0 : 1;
  }

  ReduceResult rr = greedy_reduce(p, sys, o.max_steps, g);
  json doc{{"schema", 1}, {"command", "reduce"}, {"steps", rr.trace.steps.size()}};
  std::ostringstream text;
  int rc = 1;
  if (rr.trace.outcome == ReduceOutcome::zero) {
    bool okay = verify_certificate(p, *rr.certificate);
    std::string cert = format_certificate(sys.alphabet(), *rr.certificate);
    doc["outcome"] = "member";
    doc["verified"] = okay;
    doc["certificate"] = cert;
    text << "member: certificate of " << rr.trace.steps.size() << " steps, "
         << (okay ? "verified" : "VERIFICATION FAILED") << "\n";
    if (!o.cert_out.empty()) {
      std::ofstream out(o.cert_out, std::ios::binary);
      if (!out) throw ParseError("cannot write certificate: " + o.cert_out);
      out << cert;
      text << "certificate written to " << o.cert_out << "\n";
    } else if (!o.json_out) {
      text << cert;
    }
    rc = okay ? 0 : 2;
  } else {
    bool proved = rr.trace.outcome == ReduceOutcome::stuck;
    doc["outcome"] = proved ? "stuck" : "stuck-within-bounds";
    doc["remainder"] = format_poly(sys.alphabet(), rr.trace.remainder);
    doc["highest"] = format_word(sys.alphabet(), rr.trace.remainder.leading_term());
    text << (proved ? "stuck: no relation descends from "
                    : "stuck-within-bounds: step budget exhausted at ")
         << format_word(sys.alphabet(), rr.trace.remainder.leading_term()) << "\n";
  }
  emit(o, doc, text.str());
  return rc;
}

int cmd_verify_cert(const Options& o) {
  PresentationFile pf;
  RelationSystem sys = make_system(o, &pf);
  CacheGuard cache(sys);
  Polynomial p = parse_named_poly(name_table(pf), sys.field(), o.poly_text);
  std::ifstream in(o.cert_path, std::ios::binary);
  if (!in) throw ParseError("cannot open certificate: " + o.cert_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  Certificate cert = parse_certificate(sys.alphabet(), sys.field(), buf.str());
  bool okay = verify_certificate(p, cert);
  emit(o, json{{"schema", 1}, {"command", "verify-cert"}, {"valid", okay},
               {"steps", cert.steps.size()}},
       std::string("certificate: ") + (okay ? "valid" : "INVALID") + "\n");
  return okay ? 0 : 1;
}

int cmd_dehn(const Options& o) {
  PresentationFile pf;
  RelationSystem sys = make_system(o, &pf);
  CacheGuard cache(sys);
  if (pf.group_relators.empty())
    throw PreconditionError("dehn requires a group family presentation");
  GroupPresentation pres = group_presentation(pf.alphabet, pf.group_relators);
  Word w = parse_named_word(name_table(pf), o.word_text, o.auto_reduce);
  Word r = dehn_reduce(w, pres);
  emit(o, json{{"schema", 1}, {"command", "dehn"}, {"word", format_word(pf.alphabet, w)},
               {"reduced", format_word(pf.alphabet, r)}, {"trivial", r.empty()}},
       "reduced: " + format_word(pf.alphabet, r) + "\n");
  return r.empty() ? 0 : 1;
}

int cmd_oracle_member(const Options& o) {
  PresentationFile pf;
  RelationSystem sys = make_system(o, &pf);
  CacheGuard cache(sys);
  Polynomial p = parse_named_poly(name_table(pf), sys.field(), o.poly_text);
  size_t longest = 0;
  for (const auto& [w, c] : p.terms()) longest = std::max(longest, w.size());
  size_t len_bound = o.len_bound ? o.len_bound : std::max<size_t>(16, 2 * (longest + 8));
  OracleCaps caps;
  if (o.n_cap) {
    caps.member_max_rows = o.n_cap;
    caps.member_max_cols = 2 * o.n_cap;
  }
  MembershipResult res = bounded_membership(p, sys, len_bound, caps);
  json doc{{"schema", 1}, {"command", "oracle-member"}, {"len_bound", len_bound},
           {"rows", res.rows}, {"cols", res.cols}, {"capped", res.capped}};
  std::ostringstream text;
  if (res.member) {
    bool okay = res.certificate && verify_certificate(p, *res.certificate);
    doc["outcome"] = "member";
    doc["verified"] = okay;
    text << "member: certificate of " << res.certificate->steps.size() << " steps, "
         << (okay ? "verified" : "VERIFICATION FAILED") << " (rows=" << res.rows
         << " cols=" << res.cols << ")\n";
    emit(o, doc, text.str());
    return okay ? 0 : 2;
  }
  doc["outcome"] = "unknown";
  text << "unknown within len bound " << len_bound << (res.capped ? " (capped)" : "")
       << " (rows=" << res.rows << " cols=" << res.cols << ")\n";
  emit(o, doc, text.str());
  return 1;
}

int cmd_demo(const Options& o) {
  if (o.demo_name.empty()) {
    json doc{{"schema", 1}, {"command", "demo"}, {"presets", json::array()}};
    std::ostringstream text;
    for (const std::string& name : preset_names()) {
      PresentationFile pf = load_presentation(name);
      RelationSystem sys = build_system(pf);
      text << name << ": " << sys.family().describe() << " tau=" << sys.tau() << "\n";
      doc["presets"].push_back(
          {{"name", name}, {"family", sys.family().describe()}, {"tau", sys.tau()}});
    }
    emit(o, doc, text.str());
    return 0;
  }
  std::string text = preset_presentation(o.demo_name);
  if (text.empty()) throw ParseError("unknown preset: " + o.demo_name);
  if (o.json_out)
    std::cout << json{{"schema", 1}, {"command", "demo"}, {"name", o.demo_name},
                      {"presentation", text}}
                     .dump(2)
              << "\n";
  else
    std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small-cancellation ring toolkit: measures, charts and ideal membership"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool with_word, bool with_poly) {
    sub->add_option("presentation", o.pres, "presentation file or preset name")->required();
    if (with_word) sub->add_option("word", o.word_text, "word in dot syntax")->required();
    if (with_poly)
      sub->add_option("polynomial", o.poly_text, "polynomial, e.g. \"1*x.y - 1*1\"")->required();
    sub->add_option("--tau", o.tau, "threshold override (>= 10)");
    sub->add_option("--depth", o.depth, "virtual replacement depth");
    sub->add_option("--len-bound", o.len_bound, "length bound (0: per-command default)");
    sub->add_option("--n-cap", o.n_cap, "enumeration/state cap (0: per-task defaults)");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_flag("--json", o.json_out, "machine-readable output");
    sub->add_flag("--auto-reduce", o.auto_reduce, "freely reduce word arguments");
    return sub;
  };

  CLI::App* axioms = add_common(app.add_subcommand("check-axioms", "verify the presentation axioms"),
                                false, false);
  CLI::App* small =
      add_common(app.add_subcommand("small-piece", "decide whether a word is a small piece"), true,
                 false);
  CLI::App* lam = add_common(app.add_subcommand("lambda", "measure of a word"), true, false);
  CLI::App* chart =
      add_common(app.add_subcommand("chart", "maximal occurrences with flags"), true, false);
  CLI::App* fch = add_common(app.add_subcommand("fchar", "characteristic and filtration index"),
                             true, false);
  CLI::App* red = add_common(app.add_subcommand("reduce", "greedy descent ideal membership"), false,
                             true);
  red->add_option("--max-steps", o.max_steps, "step budget (0: default)");
  red->add_option("--branches", o.branches, "first|all")
      ->check(CLI::IsMember({"first", "all"}));
  red->add_option("--cert-out", o.cert_out, "write the certificate to this file");
  CLI::App* ver = add_common(app.add_subcommand("verify-cert", "replay a certificate"), false,
                             true);
  ver->add_option("certificate", o.cert_path, "certificate file")->required();
  CLI::App* dehn =
      add_common(app.add_subcommand("dehn", "group Dehn reduction of a word"), true, false);
  CLI::App* orc = add_common(app.add_subcommand("oracle-member", "bounded linear membership search"),
                             false, true);
  CLI::App* demo = app.add_subcommand("demo", "list or print the built-in presets");
  demo->add_option("name", o.demo_name, "preset name");
  demo->add_flag("--json", o.json_out, "machine-readable output");
  (void)axioms;
  (void)small;
  (void)lam;
  (void)chart;
  (void)fch;
  (void)dehn;
  (void)orc;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("check-axioms")) return cmd_check_axioms(o);
    if (app.got_subcommand("small-piece")) return cmd_small_piece(o);
    if (app.got_subcommand("lambda")) return cmd_lambda(o);
    if (app.got_subcommand("chart")) return cmd_chart(o);
    if (app.got_subcommand("fchar")) return cmd_fchar(o);
    if (app.got_subcommand("reduce")) return cmd_reduce(o);
    if (app.got_subcommand("verify-cert")) return cmd_verify_cert(o);
    if (app.got_subcommand("dehn")) return cmd_dehn(o);
    if (app.got_subcommand("oracle-member")) return cmd_oracle_member(o);
    if (app.got_subcommand("demo")) return cmd_demo(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
