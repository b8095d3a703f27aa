#include "scring/presentation.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace scring {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> ts;
  std::string t;
  while (is >> t) ts.push_back(t);
  return ts;
}

[[noreturn]] void fail(size_t lineno, const std::string& msg) {
  throw ParseError("presentation line " + std::to_string(lineno) + ": " + msg);
}

size_t parse_nat(size_t lineno, const std::string& name, std::string_view text) {
  size_t value = 0;
  if (text.empty()) fail(lineno, name + " is empty");
  for (char ch : text) {
    if (ch < '0' || ch > '9') fail(lineno, name + " is not a natural number: " + std::string(text));
    value = value * 10 + size_t(ch - '0');
  }
  return value;
}

// The value part of `key=...`, or failure when the token has another key.
std::string_view keyed(size_t lineno, const std::string& tok, std::string_view key) {
  std::string_view tv = tok;
  if (tv.size() < key.size() + 1 || tv.substr(0, key.size()) != key || tv[key.size()] != '=')
    fail(lineno, "expected " + std::string(key) + "=..., got " + tok);
  return tv.substr(key.size() + 1);
}

}  // namespace

PresentationFile parse_presentation(std::string_view text) {
  PresentationFile pf;
  bool field_seen = false, generators_seen = false, tau_seen = false;
  std::istringstream lines{std::string(text)};
  std::string line;
  size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> ts = tokens_of(line);
    if (ts.empty() || ts[0][0] == '#') continue;
    const std::string& kw = ts[0];

    if (kw == "field") {
      if (field_seen) fail(lineno, "duplicate field line");
      if (!pf.relations.empty()) fail(lineno, "field must precede relation lines");
      if (ts.size() != 2) fail(lineno, "expected: field gf2|rational");
      if (ts[1] == "gf2")
        pf.field = FieldKind::gf2;
      else if (ts[1] == "rational")
        pf.field = FieldKind::rational;
      else
        fail(lineno, "unknown field: " + ts[1]);
      field_seen = true;
    } else if (kw == "generators") {
      if (generators_seen) fail(lineno, "duplicate generators line");
      if (ts.size() < 2) fail(lineno, "generators line needs at least one name");
      try {
        pf.alphabet = Alphabet(std::vector<std::string>(ts.begin() + 1, ts.end()));
      } catch (const ParseError& e) {
        fail(lineno, e.msg);
      } catch (const PreconditionError& e) {
        fail(lineno, e.msg);
      }
      generators_seen = true;
    } else if (kw == "tau") {
      if (tau_seen) fail(lineno, "duplicate tau line");
      if (ts.size() != 2) fail(lineno, "expected: tau <natural>");
      pf.tau = (long long)parse_nat(lineno, "tau", ts[1]);
      tau_seen = true;
    } else if (kw == "relation") {
      if (!generators_seen) fail(lineno, "relation before generators");
      if (!pf.group_relators.empty() || pf.trinomial)
        fail(lineno, "explicit relations cannot be mixed with a generated family");
      size_t at = line.find("relation");
      std::string rest = line.substr(at + 8);
      try {
        Polynomial p = parse_poly(pf.alphabet, pf.field, rest);
        if (p.is_zero()) fail(lineno, "relation is zero");
        pf.relations.push_back(std::move(p));
      } catch (const ParseError& e) {
        fail(lineno, e.msg);
      }
    } else if (kw == "family") {
      if (!generators_seen) fail(lineno, "family before generators");
      if (!pf.relations.empty())
        fail(lineno, "generated family cannot be mixed with explicit relations");
      if (ts.size() < 2) fail(lineno, "expected: family group|trinomial ...");
      if (ts[1] == "group") {
        if (pf.trinomial) fail(lineno, "group family cannot be mixed with a trinomial family");
        if (ts.size() != 3) fail(lineno, "expected: family group <relator-word>");
        try {
          pf.group_relators.push_back(parse_word(pf.alphabet, ts[2]));
        } catch (const ParseError& e) {
          fail(lineno, e.msg);
        }
      } else if (ts[1] == "trinomial") {
        if (pf.trinomial) fail(lineno, "duplicate trinomial family line");
        if (!pf.group_relators.empty())
          fail(lineno, "trinomial family cannot be mixed with a group family");
        if (ts.size() != 5) fail(lineno, "expected: family trinomial w=<word> n1=<nat> n2=<nat>");
        if (pf.alphabet.size() < 2) fail(lineno, "trinomial family needs at least two generators");
        TrinomialParams params;
        params.alphabet = pf.alphabet;
        params.x = 0;  // loop letters are the first two generators
        params.y = 1;
        try {
          params.w = parse_word(pf.alphabet, keyed(lineno, ts[2], "w"));
        } catch (const ParseError& e) {
          fail(lineno, e.msg);
        }
        params.n1 = parse_nat(lineno, "n1", keyed(lineno, ts[3], "n1"));
        params.n2 = parse_nat(lineno, "n2", keyed(lineno, ts[4], "n2"));
        pf.trinomial = std::move(params);
      } else {
        fail(lineno, "unknown family kind: " + ts[1]);
      }
    } else {
      fail(lineno, "unknown keyword: " + kw);
    }
  }
  if (!generators_seen) throw ParseError("presentation: no generators line");
  return pf;
}

std::string format_presentation(const PresentationFile& pf) {
  std::ostringstream os;
  os << "field " << (pf.field == FieldKind::gf2 ? "gf2" : "rational") << "\n";
  os << "generators";
  for (int i = 0; i < pf.alphabet.size(); ++i) os << " " << pf.alphabet.name(i);
  os << "\n";
  if (pf.tau) os << "tau " << *pf.tau << "\n";
  for (const Polynomial& p : pf.relations)
    os << "relation " << format_poly(pf.alphabet, p) << "\n";
  for (const Word& r : pf.group_relators)
    os << "family group " << format_word(pf.alphabet, r) << "\n";
  if (pf.trinomial)
    os << "family trinomial w=" << format_word(pf.alphabet, pf.trinomial->w)
       << " n1=" << pf.trinomial->n1 << " n2=" << pf.trinomial->n2 << "\n";
  return os.str();
}

RelationSystem build_system(const PresentationFile& pf, std::optional<long long> tau_override,
                            size_t closure_cap) {
  if (pf.trinomial) {
    TrinomialParams params = *pf.trinomial;
    params.alphabet = pf.alphabet;
    RelationSystem sys = make_trinomial_system(params, pf.field);
    long long tau = tau_override ? *tau_override : pf.tau.value_or(sys.tau());
    return tau == sys.tau() ? std::move(sys) : sys.with_tau(tau);
  }
  if (!pf.group_relators.empty()) {
    GroupPresentation pres = group_presentation(pf.alphabet, pf.group_relators);
    RelationSystem sys = make_group_system(pres, pf.field);
    long long tau = tau_override ? *tau_override : pf.tau.value_or(sys.tau());
    return tau == sys.tau() ? std::move(sys) : sys.with_tau(tau);
  }
  if (!tau_override && !pf.tau)
    throw PreconditionError("explicit presentation requires a tau line");
  long long tau = tau_override ? *tau_override : *pf.tau;
  auto fam = std::make_shared<ExplicitFamily>(pf.alphabet, pf.field, pf.relations, closure_cap);
  return RelationSystem(std::move(fam), tau, MeasureMode::pieces());
}

const Word* NameTable::find(std::string_view name) const {
  for (const auto& [n, w] : words)
    if (n == name) return &w;
  return nullptr;
}

NameTable name_table(const PresentationFile& pf) {
  NameTable t;
  t.alphabet = pf.alphabet;
  if (pf.trinomial) {
    TrinomialParams params = *pf.trinomial;
    params.alphabet = pf.alphabet;
    t.words.emplace_back("v", trinomial_v(params));
    t.words.emplace_back("w", params.w);
  }
  if (pf.group_relators.size() == 1) t.words.emplace_back("R", pf.group_relators[0]);
  for (size_t i = 0; i < pf.group_relators.size(); ++i)
    t.words.emplace_back("R" + std::to_string(i + 1), pf.group_relators[i]);
  std::erase_if(t.words, [&](const auto& e) { return t.alphabet.index(e.first).has_value(); });
  return t;
}

Word parse_named_word(const NameTable& t, std::string_view text, bool auto_reduce) {
  while (!text.empty() && std::isspace(uint8_t(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(uint8_t(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty word text");
  if (text == "1") return Word{};

  Word acc;
  bool seam_cancel = false;
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
      size_t used = 0;
      try {
        power = std::stoll(std::string(ps), &used);
      } catch (...) {
        used = 0;
      }
      if (used != ps.size() || power == 0)
        throw ParseError("bad exponent in '" + std::string(tok) + "'");
    }

    Word piece;
    if (auto idx = t.alphabet.index(name)) {
      Letter l{int16_t(*idx), int8_t(power > 0 ? 1 : -1)};
      piece = Word::from_letters(std::vector<Letter>(size_t(std::llabs(power)), l));
    } else if (const Word* named = t.find(name)) {
      Word base = power > 0 ? *named : named->inverse();
      for (long long i = 0; i < std::llabs(power); ++i) piece = Word::concat(piece, base);
    } else {
      throw ParseError("unknown generator '" + std::string(name) + "'");
    }
    if (Word::cancellation(acc, piece) > 0) seam_cancel = true;
    acc = Word::concat(acc, piece);

    if (dot == std::string_view::npos) break;
    pos = dot + 1;
    if (pos == text.size()) throw ParseError("word ends with '.'");
  }
  if (seam_cancel && !auto_reduce)
    throw ParseError("word is not freely reduced: '" + std::string(text) + "'");
  return acc;
}

Polynomial parse_named_poly(const NameTable& t, FieldKind k, std::string_view text) {
  while (!text.empty() && std::isspace(uint8_t(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(uint8_t(text.back()))) text.remove_suffix(1);
  if (text == "0") return Polynomial(k);
  Polynomial p(k);

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
    std::string_view part =
        text.substr(pos, (next == std::string_view::npos ? text.size() : next - 1) - pos);
    while (!part.empty() && std::isspace(uint8_t(part.back()))) part.remove_suffix(1);
    size_t star = part.find('*');
    if (star == std::string_view::npos)
      throw ParseError("term without '*': '" + std::string(part) + "'");
    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(uint8_t(s.front()))) s.remove_prefix(1);
      while (!s.empty() && std::isspace(uint8_t(s.back()))) s.remove_suffix(1);
      return s;
    };
    Rat c = parse_coeff(k, trim(part.substr(0, star)));
    Word w = parse_named_word(t, part.substr(star + 1));
    p.add_term(sign < 0 ? Rat(-c) : c, w);
    if (next == std::string_view::npos) break;
    pos = next + 1;
    sign = next_sign;
  }
  return p;
}

std::string preset_presentation(std::string_view name) {
  if (name == "demo-group") {
    static const std::string text = [] {
      GroupPresentation pres = demo_group_presentation();
      PresentationFile pf;
      pf.alphabet = pres.alphabet;
      pf.group_relators = pres.relators;
      return format_presentation(pf);
    }();
    return text;
  }
  if (name == "demo-trinomial") {
    static const std::string text = [] {
      TrinomialParams params = demo_trinomial_params();
      PresentationFile pf;
      pf.alphabet = params.alphabet;
      pf.trinomial = params;
      return format_presentation(pf);
    }();
    return text;
  }
  return {};
}

std::vector<std::string> preset_names() { return {"demo-group", "demo-trinomial"}; }

PresentationFile load_presentation(const std::string& name_or_path) {
  std::string preset = preset_presentation(name_or_path);
  if (!preset.empty()) return parse_presentation(preset);
  std::ifstream in(name_or_path, std::ios::binary);
  if (!in) throw ParseError("cannot open presentation: " + name_or_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_presentation(buf.str());
}

}  // namespace scring
