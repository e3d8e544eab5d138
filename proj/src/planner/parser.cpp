#include "neurogate/planner/parser.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "neurogate/core/hash.hpp"

namespace neurogate::planner {

const PredicateDef* DomainDef::find_predicate(std::string_view n) const {
  for (const auto& p : predicates)
    if (p.name == n) return &p;
  return nullptr;
}

const ActionDef* DomainDef::find_action(std::string_view n) const {
  for (const auto& a : actions)
    if (a.name == n) return &a;
  return nullptr;
}

bool DomainDef::type_derives(std::string_view t, std::string_view ancestor) const {
  if (ancestor == "object" || t == ancestor) return true;
  std::string_view cur = t;
  for (std::size_t guard = 0; guard <= types.size(); ++guard) {
    const TypeDef* def = nullptr;
    for (const auto& td : types)
      if (td.name == cur) { def = &td; break; }
    if (!def) return false;
    if (def->parent == ancestor) return true;
    if (def->parent == "object") return false;
    cur = def->parent;
  }
  return false;
}

namespace {

struct Sexp {
  bool is_list{false};
  std::string atom;
  std::vector<Sexp> items;
  std::size_t line{0}, col{0};
};

struct Token {
  std::string text;
  std::size_t line, col;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  const auto advance = [&](char ch) {
    if (ch == '\n') { ++line; col = 1; } else { ++col; }
  };
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == ';') {
      while (i < text.size() && text[i] != '\n') { advance(text[i]); ++i; }
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(ch);
      ++i;
      continue;
    }
    if (ch == '(' || ch == ')') {
      out.push_back({std::string(1, ch), line, col});
      advance(ch);
      ++i;
      continue;
    }
    const std::size_t start_line = line, start_col = col;
    std::string atom;
    while (i < text.size()) {
      const char c2 = text[i];
      if (std::isspace(static_cast<unsigned char>(c2)) || c2 == '(' || c2 == ')' || c2 == ';')
        break;
      atom += c2;
      advance(c2);
      ++i;
    }
    out.push_back({std::move(atom), start_line, start_col});
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const std::string& text) : tokens_(tokenize(text)) {}

  Sexp read_all_single() {
    if (tokens_.empty()) throw ParseError(1, 1, "empty input");
    Sexp e = read();
    if (pos_ != tokens_.size()) {
      const auto& t = tokens_[pos_];
      throw ParseError(t.line, t.col, "trailing content after top-level form");
    }
    return e;
  }

 private:
  Sexp read() {
    if (pos_ >= tokens_.size()) {
      const auto& t = tokens_.back();
      throw ParseError(t.line, t.col, "unexpected end of input");
    }
    const Token& t = tokens_[pos_++];
    if (t.text == "(") {
      Sexp e;
      e.is_list = true;
      e.line = t.line;
      e.col = t.col;
      while (true) {
        if (pos_ >= tokens_.size())
          throw ParseError(t.line, t.col, "unterminated '('");
        if (tokens_[pos_].text == ")") {
          ++pos_;
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (t.text == ")") throw ParseError(t.line, t.col, "unmatched ')'");
    Sexp e;
    e.atom = t.text;
    e.line = t.line;
    e.col = t.col;
    return e;
  }

  std::vector<Token> tokens_;
  std::size_t pos_{0};
};

[[noreturn]] void err(const Sexp& at, const std::string& msg) {
  throw ParseError(at.line, at.col, msg);
}

const Sexp& expect_list(const Sexp& e, const std::string& what) {
  if (!e.is_list) err(e, "expected " + what);
  return e;
}

const std::string& expect_atom(const Sexp& e, const std::string& what) {
  if (e.is_list) err(e, "expected " + what);
  return e.atom;
}

bool head_is(const Sexp& e, std::string_view kw) {
  return e.is_list && !e.items.empty() && !e.items[0].is_list && e.items[0].atom == kw;
}

// "a b - t c d - u e" style typed name list; untyped names default to
// `fallback_type`.
std::vector<std::pair<std::string, std::string>> parse_typed_names(
    const std::vector<Sexp>& items, std::size_t from, const std::string& fallback_type) {
  std::vector<std::pair<std::string, std::string>> out;
  std::vector<std::size_t> pending;
  for (std::size_t i = from; i < items.size(); ++i) {
    const std::string& a = expect_atom(items[i], "name or '-'");
    if (a == "-") {
      if (pending.empty()) err(items[i], "dangling '-' without names");
      if (i + 1 >= items.size()) err(items[i], "'-' without a type name");
      const std::string& ty = expect_atom(items[i + 1], "type name");
      for (std::size_t k : pending) out.emplace_back(expect_atom(items[k], "name"), ty);
      pending.clear();
      ++i;
    } else {
      pending.push_back(i);
    }
  }
  for (std::size_t k : pending) out.emplace_back(items[k].atom, fallback_type);
  return out;
}

Literal parse_atom_literal(const Sexp& e) {
  expect_list(e, "an atom '(predicate args...)'");
  if (e.items.empty()) err(e, "empty atom");
  Literal lit;
  lit.predicate = expect_atom(e.items[0], "predicate name");
  for (std::size_t i = 1; i < e.items.size(); ++i)
    lit.args.push_back(expect_atom(e.items[i], "argument"));
  return lit;
}

struct LiteralSite {
  Literal lit;
  const Sexp* where;
};

std::vector<LiteralSite> parse_condition(const Sexp& e, bool allow_not,
                                         std::vector<LiteralSite>* negated) {
  std::vector<LiteralSite> out;
  const auto parse_one = [&](const Sexp& f) {
    if (head_is(f, "not")) {
      if (!allow_not)
        err(f, "negative preconditions are not supported");
      if (f.items.size() != 2) err(f, "'not' takes exactly one atom");
      negated->push_back({parse_atom_literal(f.items[1]), &f.items[1]});
      return;
    }
    out.push_back({parse_atom_literal(f), &f});
  };
  if (head_is(e, "and")) {
    for (std::size_t i = 1; i < e.items.size(); ++i) parse_one(e.items[i]);
  } else if (e.is_list && e.items.empty()) {
    // empty condition
  } else {
    parse_one(e);
  }
  return out;
}

void check_literal(const DomainDef& d, const ActionDef& a, const LiteralSite& site) {
  const Sexp& at = *site.where;
  const PredicateDef* pd = d.find_predicate(site.lit.predicate);
  if (!pd) err(at, "undeclared predicate '" + site.lit.predicate + "'");
  if (pd->arity() != site.lit.args.size())
    err(at, "predicate '" + pd->name + "' takes " + std::to_string(pd->arity()) +
                " arguments, got " + std::to_string(site.lit.args.size()));
  for (std::size_t i = 0; i < site.lit.args.size(); ++i) {
    const std::string& arg = site.lit.args[i];
    if (arg.empty() || arg[0] != '?')
      err(at, "constants in action literals are not supported ('" + arg + "')");
    const auto it = std::find(a.param_names.begin(), a.param_names.end(), arg);
    if (it == a.param_names.end())
      err(at, "variable '" + arg + "' is not a parameter of action '" + a.name + "'");
    const std::string& vt = a.param_types[std::size_t(it - a.param_names.begin())];
    if (!d.type_derives(vt, pd->param_types[i]))
      err(at, "variable '" + arg + "' of type '" + vt + "' does not match parameter " +
                  std::to_string(i + 1) + " of '" + pd->name + "' (wants '" +
                  pd->param_types[i] + "')");
  }
}

void check_type_known(const DomainDef& d, const Sexp& at, const std::string& ty) {
  if (ty == "object") return;
  for (const auto& td : d.types)
    if (td.name == ty) return;
  err(at, "unknown type '" + ty + "'");
}

}  // namespace

DomainDef parse_domain(const std::string& text) {
  Reader reader(text);
  const Sexp root = reader.read_all_single();
  expect_list(root, "'(define ...)'");
  if (root.items.empty() || expect_atom(root.items[0], "'define'") != "define")
    err(root, "expected '(define (domain ...) ...)'");
  if (root.items.size() < 2 || !head_is(root.items[1], "domain") ||
      root.items[1].items.size() != 2)
    err(root, "expected '(domain <name>)' after 'define'");

  DomainDef d;
  d.name = expect_atom(root.items[1].items[1], "domain name");

  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const Sexp& sec = expect_list(root.items[i], "a domain section");
    if (sec.items.empty()) err(sec, "empty domain section");
    const std::string& kw = expect_atom(sec.items[0], "section keyword");

    if (kw == ":requirements") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        const std::string& r = expect_atom(sec.items[k], "requirement");
        if (r != ":strips" && r != ":typing")
          err(sec.items[k], "unsupported requirement '" + r + "'");
        d.requirements.push_back(r);
      }
    } else if (kw == ":types") {
      for (auto& [n, t] : parse_typed_names(sec.items, 1, "object"))
        d.types.push_back({n, t});
    } else if (kw == ":predicates") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        const Sexp& pe = expect_list(sec.items[k], "a predicate declaration");
        if (pe.items.empty()) err(pe, "empty predicate declaration");
        PredicateDef pd;
        pd.name = expect_atom(pe.items[0], "predicate name");
        for (auto& [n, t] : parse_typed_names(pe.items, 1, "object")) {
          if (n.empty() || n[0] != '?') err(pe, "predicate parameters must be variables");
          check_type_known(d, pe, t);
          pd.param_names.push_back(n);
          pd.param_types.push_back(t);
        }
        if (d.find_predicate(pd.name)) err(pe, "duplicate predicate '" + pd.name + "'");
        d.predicates.push_back(std::move(pd));
      }
    } else if (kw == ":action") {
      if (sec.items.size() < 2) err(sec, "action needs a name");
      ActionDef a;
      a.name = expect_atom(sec.items[1], "action name");
      if (d.find_action(a.name)) err(sec.items[1], "duplicate action '" + a.name + "'");

      const Sexp* params = nullptr;
      const Sexp* precond = nullptr;
      const Sexp* effect = nullptr;
      for (std::size_t k = 2; k < sec.items.size(); k += 2) {
        const std::string& key = expect_atom(sec.items[k], "action keyword");
        if (k + 1 >= sec.items.size()) err(sec.items[k], "missing value for '" + key + "'");
        const Sexp& val = sec.items[k + 1];
        if (key == ":parameters") params = &val;
        else if (key == ":precondition") precond = &val;
        else if (key == ":effect") effect = &val;
        else err(sec.items[k], "unknown action keyword '" + key + "'");
      }
      if (!params) err(sec, "action '" + a.name + "' lacks :parameters");
      if (!effect) err(sec, "action '" + a.name + "' lacks :effect");

      for (auto& [n, t] : parse_typed_names(expect_list(*params, ":parameters list").items, 0,
                                            "object")) {
        if (n.empty() || n[0] != '?') err(*params, "parameters must be '?'-variables");
        check_type_known(d, *params, t);
        a.param_names.push_back(n);
        a.param_types.push_back(t);
      }

      if (precond) {
        for (auto& site : parse_condition(*precond, false, nullptr)) {
          check_literal(d, a, site);
          a.preconditions.push_back(site.lit);
        }
      }
      std::vector<LiteralSite> dels;
      for (auto& site : parse_condition(*effect, true, &dels)) {
        check_literal(d, a, site);
        a.add_effects.push_back(site.lit);
      }
      for (auto& site : dels) {
        check_literal(d, a, site);
        a.del_effects.push_back(site.lit);
      }
      d.actions.push_back(std::move(a));
    } else {
      err(sec.items[0], "unknown domain section '" + kw + "'");
    }
  }
  return d;
}

ProblemDef parse_problem(const std::string& text) {
  Reader reader(text);
  const Sexp root = reader.read_all_single();
  expect_list(root, "'(define ...)'");
  if (root.items.empty() || expect_atom(root.items[0], "'define'") != "define")
    err(root, "expected '(define (problem ...) ...)'");
  if (root.items.size() < 2 || !head_is(root.items[1], "problem") ||
      root.items[1].items.size() != 2)
    err(root, "expected '(problem <name>)' after 'define'");

  ProblemDef p;
  p.name = expect_atom(root.items[1].items[1], "problem name");

  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const Sexp& sec = expect_list(root.items[i], "a problem section");
    if (sec.items.empty()) err(sec, "empty problem section");
    const std::string& kw = expect_atom(sec.items[0], "section keyword");

    if (kw == ":domain") {
      if (sec.items.size() != 2) err(sec, "':domain' takes one name");
      p.domain_name = expect_atom(sec.items[1], "domain name");
    } else if (kw == ":objects") {
      p.objects = parse_typed_names(sec.items, 1, "object");
      for (auto& [n, t] : p.objects) {
        (void)t;
        if (!n.empty() && n[0] == '?') err(sec, "object names must not be variables");
      }
    } else if (kw == ":init") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        Literal lit = parse_atom_literal(sec.items[k]);
        for (const auto& arg : lit.args)
          if (!arg.empty() && arg[0] == '?')
            err(sec.items[k], "init atoms must be ground");
        p.init.push_back(std::move(lit));
      }
    } else if (kw == ":goal") {
      if (sec.items.size() != 2) err(sec, "':goal' takes one condition");
      for (auto& site : parse_condition(sec.items[1], false, nullptr)) {
        for (const auto& arg : site.lit.args)
          if (!arg.empty() && arg[0] == '?') err(*site.where, "goal atoms must be ground");
        p.goal.push_back(site.lit);
      }
    } else {
      err(sec.items[0], "unknown problem section '" + kw + "'");
    }
  }
  return p;
}

namespace {

std::string format_typed_names(const std::vector<std::string>& names,
                               const std::vector<std::string>& types) {
  std::string out;
  for (std::size_t i = 0; i < names.size();) {
    std::size_t j = i;
    while (j < names.size() && types[j] == types[i]) ++j;
    for (std::size_t k = i; k < j; ++k) {
      if (!out.empty()) out += ' ';
      out += names[k];
    }
    out += " - " + types[i];
    i = j;
  }
  return out;
}

std::string format_literal(const Literal& lit) {
  std::string out = "(" + lit.predicate;
  for (const auto& a : lit.args) out += " " + a;
  return out + ")";
}

}  // namespace

std::string print_domain(const DomainDef& d) {
  std::ostringstream out;
  out << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    out << "  (:requirements";
    for (const auto& r : d.requirements) out << " " << r;
    out << ")\n";
  }
  if (!d.types.empty()) {
    std::vector<std::string> names, parents;
    for (const auto& t : d.types) {
      names.push_back(t.name);
      parents.push_back(t.parent);
    }
    out << "  (:types\n    " << format_typed_names(names, parents) << "\n  )\n";
  }
  if (!d.predicates.empty()) {
    out << "  (:predicates\n";
    for (const auto& p : d.predicates) {
      out << "    (" << p.name;
      if (!p.param_names.empty()) out << " " << format_typed_names(p.param_names, p.param_types);
      out << ")\n";
    }
    out << "  )\n";
  }
  for (const auto& a : d.actions) {
    out << "  (:action " << a.name << "\n";
    out << "      :parameters (" << format_typed_names(a.param_names, a.param_types) << ")\n";
    out << "      :precondition (and\n";
    for (const auto& l : a.preconditions) out << "        " << format_literal(l) << "\n";
    out << "      )\n";
    out << "      :effect (and\n";
    for (const auto& l : a.add_effects) out << "        " << format_literal(l) << "\n";
    for (const auto& l : a.del_effects) out << "        (not " << format_literal(l) << ")\n";
    out << "      )\n";
    out << "  )\n";
  }
  out << ")\n";
  return out.str();
}

std::string print_problem(const ProblemDef& p) {
  std::ostringstream out;
  out << "(define (problem " << p.name << ")\n";
  out << "  (:domain " << p.domain_name << ")\n";
  if (!p.objects.empty()) {
    std::vector<std::string> names, types;
    for (const auto& [n, t] : p.objects) {
      names.push_back(n);
      types.push_back(t);
    }
    out << "  (:objects " << format_typed_names(names, types) << ")\n";
  }
  out << "  (:init\n";
  for (const auto& l : p.init) out << "    " << format_literal(l) << "\n";
  out << "  )\n";
  out << "  (:goal (and\n";
  for (const auto& l : p.goal) out << "    " << format_literal(l) << "\n";
  out << "  ))\n";
  out << ")\n";
  return out.str();
}

namespace {
std::string slurp(const std::string& path, const char* what) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(std::string("cannot open ") + what + ": " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}
}  // namespace

DomainDef load_domain(const std::string& path) { return parse_domain(slurp(path, "domain file")); }
ProblemDef load_problem(const std::string& path) { return parse_problem(slurp(path, "problem file")); }

std::uint64_t domain_hash(const DomainDef& d) { return core::fnv1a64(print_domain(d)); }

}  // namespace neurogate::planner
