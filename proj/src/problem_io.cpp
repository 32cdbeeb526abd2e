#include "schematic/problem_io.hpp"

#include <cctype>
#include <cstdio>
#include <map>
#include <sstream>

namespace schematic {

std::optional<std::string> ParsedProblem::directive(const std::string& key) const {
  for (auto it = directives.rbegin(); it != directives.rend(); ++it)
    if (it->first == key) return it->second;
  return std::nullopt;
}

namespace {

enum class Tok { Ident, Num, Punct, Directive, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::string trim(std::string_view s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto adv = [&](size_t n) {
    for (size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    int l = line, cl = col;
    if (c == '#') {
      size_t e = src.find('\n', i);
      if (e == std::string_view::npos) e = src.size();
      std::string body(src.substr(i + 1, e - i - 1));
      adv(e - i);
      if (body.find('=') != std::string::npos) out.push_back({Tok::Directive, body, l, cl});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t e = i;
      while (e < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[e])) || src[e] == '_'))
        ++e;
      out.push_back({Tok::Ident, std::string(src.substr(i, e - i)), l, cl});
      adv(e - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t e = i;
      while (e < src.size() && std::isdigit(static_cast<unsigned char>(src[e]))) ++e;
      out.push_back({Tok::Num, std::string(src.substr(i, e - i)), l, cl});
      adv(e - i);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({Tok::Punct, "->", l, cl});
      adv(2);
      continue;
    }
    if (std::string_view("[](),;=:+-").find(c) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, c), l, cl});
      adv(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool is_sym(const std::string& s) { return std::isupper(static_cast<unsigned char>(s[0])); }
bool is_fun(const std::string& s) { return std::islower(static_cast<unsigned char>(s[0])); }

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ParsedProblem file(bool require_uniform) {
    ParsedProblem out;
    skip_directives(out);
    keyword("schema");
    punct(":");
    skip_directives(out);
    while (peek().kind == Tok::Ident && is_sym(peek().text)) {
      const Token& at = peek();
      auto [sym, base] = rule();
      if (out.problem.schema.contains(sym)) throw ParseError("duplicate rule for " + sym, at.line, at.col);
      out.problem.schema.add_rule(sym, base);
      skip_directives(out);
    }
    if (out.problem.schema.empty()) fail("expected at least one rule");
    keyword("problem");
    punct(":");
    skip_directives(out);
    while (peek().kind != Tok::End) {
      out.problem.equations.push_back(equation());
      skip_directives(out);
    }
    if (out.problem.equations.empty()) fail("expected at least one equation");

    if (require_uniform) {
      const Token& at = toks_.front();
      auto cls = classify(out.problem.schema);
      if (cls != SchemaClass::Uniform && cls != SchemaClass::Primitive)
        throw ParseError("schema is " + to_string(cls) + "; only uniform schemas are supported",
                         at.line, at.col);
      if (mutually_recursive(out.problem.schema))
        throw ParseError("schema is mutually recursive; not supported", at.line, at.col);
    }
    return out;
  }

  Term lone_term() {
    Term t = term(false);
    expect_end();
    return t;
  }

  Equation lone_equation() {
    Term l = term(false);
    punct("=");
    Term r = term(false);
    if (peek().kind == Tok::Punct && peek().text == ";") next();
    expect_end();
    return {l, r};
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", got " + got, t.line, t.col);
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail("unexpected trailing input");
  }

  void keyword(const std::string& kw) {
    if (peek().kind != Tok::Ident || peek().text != kw) fail("expected '" + kw + "'");
    next();
  }

  void punct(const std::string& p) {
    if (peek().kind != Tok::Punct || peek().text != p) fail("expected '" + p + "'");
    next();
  }

  void skip_directives(ParsedProblem& out) {
    while (peek().kind == Tok::Directive) {
      const Token& t = next();
      auto eq = t.text.find('=');
      std::string key = trim(std::string_view(t.text).substr(0, eq));
      std::string value = trim(std::string_view(t.text).substr(eq + 1));
      if (key.empty()) throw ParseError("directive without key", t.line, t.col);
      out.directives.emplace_back(key, value);
    }
  }

  std::pair<std::string, Term> rule() {
    std::string sym = next().text;
    punct("[");
    if (peek().kind != Tok::Ident || peek().text != "i") fail("rule index must be 'i'");
    next();
    punct("]");
    punct("->");
    Term base = term(true);
    punct(";");
    return {sym, base};
  }

  Equation equation() {
    Term l = term(false);
    punct("=");
    Term r = term(false);
    punct(";");
    return {l, r};
  }

  unsigned number() {
    if (peek().kind != Tok::Num) fail("expected a natural number");
    const Token& t = next();
    try {
      unsigned long v = std::stoul(t.text);
      if (v > 1000000) throw std::out_of_range("big");
      return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      throw ParseError("index out of range", t.line, t.col);
    }
  }

  unsigned index(bool in_rule) {
    if (in_rule) {
      if (peek().kind == Tok::Num) fail("rule variables use i or i+c");
      if (peek().kind != Tok::Ident || peek().text != "i") fail("expected 'i'");
      next();
      if (peek().kind == Tok::Punct && peek().text == "-") fail("negative offsets are not allowed");
      if (peek().kind == Tok::Punct && peek().text == "+") {
        next();
        return number();
      }
      return 0;
    }
    if (peek().kind == Tok::Ident && peek().text == "i") fail("problem variables need a concrete index");
    return number();
  }

  Term term(bool in_rule) {
    if (peek().kind != Tok::Ident) fail("expected a term");
    const Token t = next();
    if (is_sym(t.text)) {
      if (peek().kind != Tok::Punct || peek().text != "[") fail("variable " + t.text + " needs an index");
      next();
      unsigned idx = index(in_rule);
      punct("]");
      return Term::var(t.text, idx);
    }
    if (!is_fun(t.text)) throw ParseError("function symbols must start lowercase", t.line, t.col);
    std::vector<Term> args;
    if (peek().kind == Tok::Punct && peek().text == "(") {
      next();
      args.push_back(term(in_rule));
      while (peek().kind == Tok::Punct && peek().text == ",") {
        next();
        args.push_back(term(in_rule));
      }
      punct(")");
    } else if (peek().kind == Tok::Punct && peek().text == "[") {
      fail("function symbol " + t.text + " cannot take an index");
    }
    auto [it, fresh] = arity_.try_emplace(t.text, args.size());
    if (!fresh && it->second != args.size())
      throw ParseError("function " + t.text + " used with arity " + std::to_string(args.size()) +
                           " and " + std::to_string(it->second),
                       t.line, t.col);
    return Term::app(t.text, std::move(args));
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::map<std::string, size_t> arity_;
};

}  // namespace

ParsedProblem parse_problem(std::string_view text, bool require_uniform) {
  return Parser(lex(text)).file(require_uniform);
}

Term parse_term(std::string_view text) { return Parser(lex(text)).lone_term(); }

Equation parse_equation(std::string_view text) { return Parser(lex(text)).lone_equation(); }

std::string print_rule_term(const Term& t) {
  if (t.is_var()) {
    const Var& v = t.as_var();
    return v.sym + (v.idx ? "[i+" + std::to_string(v.idx) + "]" : "[i]");
  }
  std::string s = t.head();
  if (t.arity() == 0) return s;
  s += '(';
  for (size_t i = 0; i < t.arity(); ++i) {
    if (i) s += ", ";
    s += print_rule_term(t.args()[i]);
  }
  return s + ')';
}

std::string print_problem(const SchematicProblem& p,
                          const std::vector<std::pair<std::string, std::string>>& directives) {
  std::ostringstream os;
  os << "schema:\n";
  for (const auto& [sym, base] : p.schema.rules())
    os << "  " << sym << "[i] -> " << print_rule_term(base) << ";\n";
  os << "problem:\n";
  for (const auto& e : p.equations) os << "  " << to_string(e) << ";\n";
  for (const auto& [k, v] : directives) os << "# " << k << " = " << v << "\n";
  return os.str();
}

std::string format_ratio(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", r);
  std::string s = buf;
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

namespace {

std::string vars_string(const std::set<Var>& vs) {
  std::string out = "{";
  bool first = true;
  for (const auto& v : vs) {
    if (!first) out += ", ";
    first = false;
    out += to_string(v);
  }
  return out + "}";
}

void eq_block(std::ostringstream& os, const char* title, const EqSet& eqs) {
  os << title << ":";
  if (eqs.empty()) os << " {}";
  os << "\n";
  for (const auto& e : eqs) os << "    " << to_string(e) << "\n";
}

nlohmann::json eqs_json(const EqSet& eqs) {
  auto arr = nlohmann::json::array();
  for (const auto& e : eqs) arr.push_back(to_string(e));
  return arr;
}

nlohmann::json sub_json(const Substitution& s) {
  auto obj = nlohmann::json::object();
  for (const auto& [v, t] : s) obj[to_string(v)] = to_string(t);
  return obj;
}

nlohmann::json vars_json(const std::set<Var>& vs) {
  auto arr = nlohmann::json::array();
  for (const auto& v : vs) arr.push_back(to_string(v));
  return arr;
}

std::string outcome_line(const Outcome& o) {
  switch (o.kind) {
    case Outcome::Kind::Cycle:
      return "cycle i=" + std::to_string(o.i) + " j=" + std::to_string(o.j);
    case Outcome::Kind::NotUnifiable:
      return "not-unifiable instance=" + std::to_string(o.instance) + " cause=" + to_string(o.cause);
    case Outcome::Kind::StabilityViolation:
      return "stability-violation instance=" + std::to_string(o.instance);
    case Outcome::Kind::Exhausted:
      return "exhausted cap=" + std::to_string(o.cap);
  }
  return "?";
}

}  // namespace

std::string emit_trace(const SolveResult& r) {
  std::ostringstream os;
  if (r.stab_index) os << "stab_index: " << *r.stab_index << "\n";
  if (!r.sigma.empty()) os << "primitive renaming: " << to_string(r.sigma) << "\n";
  for (const auto& rec : r.records) {
    os << "== instance " << rec.i << "\n";
    os << "  metric: " << rec.metric << " (printed form " << rec.printed_metric << ")\n";
    if (rec.ratio || rec.printed_ratio) {
      os << "  stab ratio: " << (rec.ratio ? format_ratio(*rec.ratio) : "n/a") << " (printed form "
         << (rec.printed_ratio ? format_ratio(*rec.printed_ratio) : "n/a") << ")\n";
    }
    eq_block(os, "  store", rec.store);
    eq_block(os, "  irr", rec.irr);
    os << "  fr: " << vars_string(rec.fr) << "\n";
    os << "  sub: " << to_string(rec.eq_sub) << "\n";
    os << "  psi: " << to_string(rec.step_sub) << "\n";
  }
  const Outcome& o = r.outcome;
  if (o.kind == Outcome::Kind::Cycle) os << "mu: " << to_string(o.mapping) << "\n";
  if (o.culprit) os << "culprit: " << to_string(*o.culprit) << "\n";
  os << outcome_line(o) << "\n";
  return os.str();
}

nlohmann::json to_json(const OracleReport& o) {
  nlohmann::json j;
  j["checked_up_to"] = o.checked_up_to ? nlohmann::json(*o.checked_up_to) : nlohmann::json();
  if (o.first_failure)
    j["first_failure"] = {{"instance", o.first_failure->instance},
                          {"cause", to_string(o.first_failure->cause)}};
  else
    j["first_failure"] = nullptr;
  j["size_capped_at"] = o.size_capped_at ? nlohmann::json(*o.size_capped_at) : nlohmann::json();
  auto sizes = nlohmann::json::array();
  for (const auto& s : o.per_instance_sizes)
    sizes.push_back({{"nodes", s.nodes}, {"depth", s.depth}, {"vars", s.vars}});
  j["per_instance_sizes"] = sizes;
  return j;
}

nlohmann::json to_json(const SolveResult& r, const OracleReport* oracle) {
  const Outcome& o = r.outcome;
  nlohmann::json j;
  j["verdict"] = to_string(o.kind);
  bool cyc = o.kind == Outcome::Kind::Cycle;
  j["i"] = cyc ? nlohmann::json(o.i) : nlohmann::json();
  j["j"] = cyc ? nlohmann::json(o.j) : nlohmann::json();
  j["mapping"] = cyc ? sub_json(o.mapping) : nlohmann::json();
  j["stab_index"] = r.stab_index ? nlohmann::json(*r.stab_index) : nlohmann::json();
  if (o.kind == Outcome::Kind::NotUnifiable || o.kind == Outcome::Kind::StabilityViolation)
    j["instance"] = o.instance;
  if (o.kind == Outcome::Kind::NotUnifiable) j["cause"] = to_string(o.cause);
  if (o.culprit) j["culprit"] = to_string(*o.culprit);
  if (o.kind == Outcome::Kind::Exhausted) j["cap"] = o.cap;
  auto inst = nlohmann::json::array();
  for (const auto& rec : r.records) {
    nlohmann::json e;
    e["i"] = rec.i;
    e["store"] = eqs_json(rec.store);
    e["normalized_store"] = eqs_json(rec.collapsed);
    e["irr"] = eqs_json(rec.irr);
    e["irr_vars"] = vars_json(rec.irr_vars);
    e["fr"] = vars_json(rec.fr);
    e["eq_sub"] = sub_json(rec.eq_sub);
    e["step_sub"] = sub_json(rec.step_sub);
    e["metric"] = rec.metric;
    e["printed_metric"] = rec.printed_metric;
    e["ratio"] = rec.ratio ? nlohmann::json(*rec.ratio) : nlohmann::json();
    e["printed_ratio"] = rec.printed_ratio ? nlohmann::json(*rec.printed_ratio) : nlohmann::json();
    inst.push_back(e);
  }
  j["instances"] = inst;
  j["oracle"] = oracle ? to_json(*oracle) : nlohmann::json();
  return j;
}

int exit_code(const Outcome& o) {
  switch (o.kind) {
    case Outcome::Kind::Cycle: return 0;
    case Outcome::Kind::NotUnifiable: return 1;
    default: return 2;
  }
}

}  // namespace schematic
