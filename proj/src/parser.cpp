#include "omq/parser.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "omq/errors.hpp"

namespace omq {
namespace {

bool name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '@';
}
bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '@' ||
         c == '\'';
}

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;
  int line = 1, col = 1;

  explicit Cursor(const std::string& text) : s(text) {}

  bool eof() const { return pos >= s.size(); }
  char peek() const { return eof() ? '\0' : s[pos]; }

  void advance() {
    if (eof()) return;
    if (s[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    for (;;) {
      while (!eof() && std::isspace(static_cast<unsigned char>(peek())))
        advance();
      if (peek() == '#') {
        while (!eof() && peek() != '\n') advance();
        continue;
      }
      break;
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(line, col, msg);
  }

  bool try_consume(char c) {
    if (peek() != c) return false;
    advance();
    return true;
  }

  void expect(char c, const std::string& what) {
    if (!try_consume(c)) fail("expected '" + std::string(1, c) + "' " + what);
  }

  std::string name() {
    if (!name_start(peek())) fail("expected a name");
    std::string out;
    while (name_char(peek())) {
      out += peek();
      advance();
    }
    return out;
  }

  int integer() {
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      fail("expected an integer");
    long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      if (v > 1'000'000'000L) fail("integer out of range");
      advance();
    }
    return static_cast<int>(v);
  }

  // Bare s-expression token: everything up to whitespace or a parenthesis.
  std::string symbol() {
    std::string out;
    while (!eof() && !std::isspace(static_cast<unsigned char>(peek())) &&
           peek() != '(' && peek() != ')' && peek() != '#') {
      out += peek();
      advance();
    }
    if (out.empty()) fail("expected a token");
    return out;
  }

  struct State {
    std::size_t pos;
    int line, col;
  };
  State save() const { return {pos, line, col}; }
  void restore(const State& st) {
    pos = st.pos;
    line = st.line;
    col = st.col;
  }
};

// ---------------------------------------------------------------------------
// DL concepts

Role parse_role(Cursor& cur) {
  std::string n = cur.name();
  bool inv = cur.try_consume('-');
  return Role(std::move(n), inv);
}

Concept parse_concept(Cursor& cur);

// After "<r>." a '[' can open either the agreement form "[A1,...,An]=" or a
// value restriction "[s].C"; try the agreement form first and backtrack.
std::optional<std::vector<std::string>> try_parse_eq_list(Cursor& cur) {
  auto st = cur.save();
  if (!cur.try_consume('[')) return std::nullopt;
  std::vector<std::string> names;
  cur.skip_ws();
  if (!cur.try_consume(']')) {
    for (;;) {
      cur.skip_ws();
      if (!name_start(cur.peek())) {
        cur.restore(st);
        return std::nullopt;
      }
      names.push_back(cur.name());
      cur.skip_ws();
      if (cur.try_consume(',')) continue;
      if (cur.try_consume(']')) break;
      cur.restore(st);
      return std::nullopt;
    }
  }
  if (!cur.try_consume('=')) {
    cur.restore(st);
    return std::nullopt;
  }
  return names;
}

Concept parse_concept(Cursor& cur) {
  cur.skip_ws();
  char c = cur.peek();
  if (c == '~') {
    cur.advance();
    return c_not(parse_concept(cur));
  }
  if (c == '<') {
    cur.advance();
    Role r = parse_role(cur);
    cur.expect('>', "to close the role of an existential restriction");
    cur.expect('.', "after '<role>'");
    cur.skip_ws();
    if (cur.peek() == '[') {
      if (auto names = try_parse_eq_list(cur))
        return c_exists_eq(r, std::move(*names));
    }
    return c_exists(r, parse_concept(cur));
  }
  if (c == '[') {
    cur.advance();
    Role r = parse_role(cur);
    cur.expect(']', "to close the role of a value restriction");
    cur.expect('.', "after '[role]'");
    return c_forall(r, parse_concept(cur));
  }
  if (c == '(') {
    cur.advance();
    std::vector<Concept> ks;
    ks.push_back(parse_concept(cur));
    cur.skip_ws();
    char op = 0;
    while (!cur.try_consume(')')) {
      char here = cur.peek();
      if (here != '&' && here != '|')
        cur.fail("expected '&', '|' or ')' in a compound concept");
      if (op == 0)
        op = here;
      else if (op != here)
        cur.fail("cannot mix '&' and '|' without parentheses");
      cur.advance();
      ks.push_back(parse_concept(cur));
      cur.skip_ws();
    }
    if (ks.size() == 1) return ks[0];
    return op == '&' ? c_and(std::move(ks)) : c_or(std::move(ks));
  }
  if (name_start(c)) {
    std::string n = cur.name();
    if (n == "top") return c_top();
    if (n == "bot") return c_bot();
    return c_name(n);
  }
  cur.fail("expected a concept");
}

// ---------------------------------------------------------------------------
// GF2 s-expressions

Var parse_var_token(Cursor& cur, const std::string& tok) {
  if (tok == "x") return Var::X;
  if (tok == "y") return Var::Y;
  cur.fail("variables must be named 'x' or 'y', got '" + tok + "'");
}

std::uint8_t gf2_vars_of_guard(const Gf2& g) {
  std::uint8_t m = 0;
  for (Var v : g->args) m |= std::uint8_t(1) << static_cast<int>(v);
  return m;
}

Gf2 parse_gf2(Cursor& cur) {
  cur.skip_ws();
  if (!cur.try_consume('(')) cur.fail("expected '(' to open a formula");
  cur.skip_ws();
  std::string op = cur.symbol();

  auto parse_args = [&](std::size_t lo, std::size_t hi) {
    std::vector<Gf2> ks;
    for (;;) {
      cur.skip_ws();
      if (cur.try_consume(')')) break;
      ks.push_back(parse_gf2(cur));
    }
    if (ks.size() < lo || ks.size() > hi)
      cur.fail("operator '" + op + "' got " + std::to_string(ks.size()) +
               " arguments");
    return ks;
  };

  if (op == "forall" || op == "exists") {
    cur.skip_ws();
    if (!cur.try_consume('(')) cur.fail("expected a variable list");
    std::uint8_t qv = 0;
    for (;;) {
      cur.skip_ws();
      if (cur.try_consume(')')) break;
      Var v = parse_var_token(cur, cur.symbol());
      std::uint8_t bit = std::uint8_t(1) << static_cast<int>(v);
      if (qv & bit) cur.fail("variable quantified twice");
      qv |= bit;
    }
    if (qv == 0) cur.fail("empty variable list");
    int gline = cur.line, gcol = cur.col;
    Gf2 inner = parse_gf2(cur);
    cur.skip_ws();
    if (!cur.try_consume(')')) cur.fail("expected ')' to close the quantifier");
    // Guarded shape: forall takes (-> guard body), exists takes
    // (and guard body...).
    bool is_forall = op == "forall";
    const char* want = is_forall ? "(-> guard body)" : "(and guard body)";
    // g_imp desugars to (or (not g) b); detect that shape for forall.
    Gf2 guard, body;
    if (is_forall) {
      if (inner->tag == GTag::Or && inner->kids.size() == 2 &&
          inner->kids[0]->tag == GTag::Not) {
        guard = inner->kids[0]->kids[0];
        body = inner->kids[1];
      }
    } else {
      if (inner->tag == GTag::And && inner->kids.size() >= 2) {
        guard = inner->kids[0];
        if (inner->kids.size() == 2)
          body = inner->kids[1];
        else
          body = g_and({inner->kids.begin() + 1, inner->kids.end()});
      }
    }
    if (!guard)
      throw ParseError(gline, gcol,
                       std::string("unguarded quantifier: body must be ") +
                           want);
    if (guard->tag != GTag::Atom && guard->tag != GTag::Eq)
      throw ParseError(gline, gcol,
                       "guard must be an atom or an equality");
    std::uint8_t gm = guard->tag == GTag::Eq
                          ? guard->free_mask()
                          : gf2_vars_of_guard(guard);
    if ((body->free_mask() & ~gm) != 0)
      throw ParseError(gline, gcol,
                       "unguarded quantifier: guard must contain every free "
                       "variable of the body");
    return is_forall ? g_forall(qv, guard, body) : g_exists(qv, guard, body);
  }
  if (op == "and") return g_and(parse_args(2, 1000));
  if (op == "or") return g_or(parse_args(2, 1000));
  if (op == "not") {
    auto ks = parse_args(1, 1);
    return g_not(ks[0]);
  }
  if (op == "->") {
    auto ks = parse_args(2, 2);
    return g_imp(ks[0], ks[1]);
  }
  if (op == "<->") {
    auto ks = parse_args(2, 2);
    return g_iff(ks[0], ks[1]);
  }
  if (op == "=") {
    cur.skip_ws();
    Var a = parse_var_token(cur, cur.symbol());
    cur.skip_ws();
    Var b = parse_var_token(cur, cur.symbol());
    cur.skip_ws();
    if (!cur.try_consume(')')) cur.fail("expected ')' after equality");
    return g_eq(a, b);
  }
  // Atom: (P v) or (r v w).
  std::vector<Var> args;
  for (;;) {
    cur.skip_ws();
    if (cur.try_consume(')')) break;
    args.push_back(parse_var_token(cur, cur.symbol()));
  }
  if (args.empty() || args.size() > 2)
    cur.fail("atoms take one or two variables");
  return g_atom(op, std::move(args));
}

}  // namespace

// ---------------------------------------------------------------------------

Ontology parse_ontology(const std::string& text) {
  Ontology o;
  bool dl_mode = text.find("<=") != std::string::npos;
  Cursor cur(text);
  cur.skip_ws();
  if (cur.eof()) {
    o.dialect = Dialect::ALC;
    return o;  // the empty ontology
  }
  if (!dl_mode && cur.peek() != '(')
    cur.fail("an ontology is a list of 'C <= D' lines or of s-expressions");

  if (dl_mode) {
    while (!cur.eof()) {
      Concept lhs = parse_concept(cur);
      cur.skip_ws();
      if (!(cur.try_consume('<') && cur.try_consume('=')))
        cur.fail("expected '<=' between the sides of an inclusion");
      Concept rhs = parse_concept(cur);
      o.cis.push_back({lhs, rhs});
      cur.skip_ws();
    }
    bool inv = false;
    for (auto& ci : o.cis)
      inv = inv || concept_uses_inverse(ci.lhs) || concept_uses_inverse(ci.rhs);
    o.dialect = inv ? Dialect::ALCI : Dialect::ALC;
    return o;
  }

  o.dialect = Dialect::GF2;
  while (!cur.eof()) {
    int line = cur.line, col = cur.col;
    Gf2 f = parse_gf2(cur);
    if (f->free_mask() != 0)
      throw ParseError(line, col, "ontology sentences must be closed formulas");
    o.sentences.push_back(std::move(f));
    cur.skip_ws();
  }
  return o;
}

Database parse_database(const std::string& text) {
  Database db;
  Cursor cur(text);
  for (;;) {
    cur.skip_ws();
    if (cur.eof()) break;
    std::string pred = cur.name();
    cur.skip_ws();
    cur.expect('(', "after a predicate name");
    cur.skip_ws();
    std::string a = cur.name();
    cur.skip_ws();
    std::string b;
    bool binary = cur.try_consume(',');
    if (binary) {
      cur.skip_ws();
      b = cur.name();
      cur.skip_ws();
    }
    cur.expect(')', "to close a fact");

    if (binary) {
      db.add_fact(pred, a, b);
      continue;
    }
    int lbl = 0;
    if (pred == "top") {
      db.add_const(a);
    } else if (is_label_pred(pred, &lbl)) {
      std::size_t c = db.add_const(a);
      if (db.label(c) != 0 && db.label(c) != lbl)
        cur.fail("constant '" + a + "' carries two labels");
      db.set_label(c, lbl);
    } else {
      db.add_fact(pred, a);
    }
  }
  return db;
}

UCQ parse_query(const std::string& text) {
  UCQ q;
  Cursor cur(text);
  bool first = true;
  int arity = 0;
  for (;;) {
    cur.skip_ws();
    if (cur.eof()) break;
    int hline = cur.line, hcol = cur.col;
    std::string head = cur.name();
    std::vector<std::string> head_vars;
    cur.skip_ws();
    if (cur.try_consume('(')) {
      cur.skip_ws();
      if (!cur.try_consume(')')) {
        for (;;) {
          cur.skip_ws();
          head_vars.push_back(cur.name());
          cur.skip_ws();
          if (cur.try_consume(',')) continue;
          cur.expect(')', "to close the answer-variable list");
          break;
        }
      }
    }
    cur.skip_ws();
    if (!(cur.try_consume(':') && cur.try_consume('=')))
      cur.fail("expected ':=' after the query head");

    if (first) {
      q.head = head;
      arity = static_cast<int>(head_vars.size());
      first = false;
    } else if (head != q.head ||
               static_cast<int>(head_vars.size()) != arity) {
      throw ParseError(hline, hcol,
                       "all disjuncts of a query must share the same head");
    }

    CQ cq;
    std::map<std::string, int> vid;
    auto var = [&](const std::string& v) {
      auto it = vid.find(v);
      if (it != vid.end()) return it->second;
      int id = static_cast<int>(cq.var_names.size());
      cq.var_names.push_back(v);
      vid.emplace(v, id);
      return id;
    };
    for (auto& v : head_vars) {
      for (auto& w : head_vars)
        if (&v != &w && v == w)
          throw ParseError(hline, hcol, "repeated answer variable '" + v + "'");
      cq.answer_vars.push_back(var(v));
    }

    for (;;) {
      cur.skip_ws();
      std::string pred = cur.name();
      cur.skip_ws();
      cur.expect('(', "after an atom's predicate");
      cur.skip_ws();
      int va = var(cur.name());
      cur.skip_ws();
      int vb = -1;
      if (cur.try_consume(',')) {
        cur.skip_ws();
        vb = var(cur.name());
        cur.skip_ws();
      }
      cur.expect(')', "to close an atom");
      cq.atoms.push_back({pred, va, vb});
      cur.skip_ws();
      if (!cur.try_consume(',')) break;
    }
    
    for (std::size_t i = 0; i < head_vars.size(); ++i) {
      bool used = false;
      for (auto& at : cq.atoms)
        used = used || at.a == static_cast<int>(i) ||
               at.b == static_cast<int>(i);
      if (!used)
        throw ParseError(hline, hcol,
                         "answer variable '" + head_vars[i] +
                             "' does not occur in the body");
    }
    std::sort(cq.atoms.begin(), cq.atoms.end());
    cq.atoms.erase(std::unique(cq.atoms.begin(), cq.atoms.end()),
                   cq.atoms.end());
    q.cqs.push_back(std::move(cq));
  }
  if (q.cqs.empty()) throw ParseError(1, 1, "empty query");
  return q;
}

KExpr parse_kexpr(const std::string& text) {
  KExpr kx;
  Cursor cur(text);

  struct Frame {
    KNode::Kind kind;
    int label = 0, label2 = 0;
    std::string role, constant;
    std::vector<std::string> upreds, loops;
    std::vector<int> kids;
    int line, col;
  };
  std::vector<Frame> st;
  std::vector<int> roots;

  for (;;) {
    cur.skip_ws();
    if (cur.eof()) break;
    if (cur.try_consume('(')) {
      cur.skip_ws();
      if (!st.empty() && st.back().kind == KNode::Intro) {
        // Payload fact of the enclosing intro: (P c) or (r c c).
        Frame& f = st.back();
        std::string pred = cur.symbol();
        std::vector<std::string> args;
        for (;;) {
          cur.skip_ws();
          if (cur.try_consume(')')) break;
          args.push_back(cur.symbol());
        }
        for (auto& a : args)
          if (a != f.constant)
            cur.fail("payload facts may only mention the introduced constant '" +
                     f.constant + "'");
        if (args.size() == 1)
          f.upreds.push_back(pred);
        else if (args.size() == 2)
          f.loops.push_back(pred);
        else
          cur.fail("payload facts are unary or binary");
        continue;
      }
      Frame f;
      f.line = cur.line;
      f.col = cur.col;
      std::string op = cur.symbol();
      cur.skip_ws();
      if (op == "intro") {
        f.kind = KNode::Intro;
        f.label = cur.integer();
        cur.skip_ws();
        f.constant = cur.symbol();
      } else if (op == "union") {
        f.kind = KNode::Union;
      } else if (op == "add") {
        f.kind = KNode::Add;
        f.role = cur.symbol();
        cur.skip_ws();
        f.label = cur.integer();
        cur.skip_ws();
        f.label2 = cur.integer();
      } else if (op == "relabel") {
        f.kind = KNode::Relabel;
        f.label = cur.integer();
        cur.skip_ws();
        f.label2 = cur.integer();
      } else {
        cur.fail("unknown operator '" + op +
                 "' (expected intro, union, add or relabel)");
      }
      st.push_back(std::move(f));
      continue;
    }
    if (cur.try_consume(')')) {
      if (st.empty()) cur.fail("unmatched ')'");
      Frame f = std::move(st.back());
      st.pop_back();
      auto arity = [&](std::size_t want) {
        if (f.kids.size() != want)
          throw ParseError(f.line, f.col,
                           "operator expects " + std::to_string(want) +
                               " subexpression(s), got " +
                               std::to_string(f.kids.size()));
      };
      int idx = -1;
      switch (f.kind) {
        case KNode::Intro:
          arity(0);
          idx = kx.intro(f.label, f.constant, std::move(f.upreds),
                         std::move(f.loops));
          break;
        case KNode::Union:
          arity(2);
          idx = kx.join(f.kids[0], f.kids[1]);
          break;
        case KNode::Add:
          arity(1);
          idx = kx.add(f.role, f.label, f.label2, f.kids[0]);
          break;
        case KNode::Relabel:
          arity(1);
          idx = kx.relabel(f.label, f.label2, f.kids[0]);
          break;
      }
      if (st.empty())
        roots.push_back(idx);
      else
        st.back().kids.push_back(idx);
      continue;
    }
    cur.fail("expected '(' or ')'");
  }
  if (!st.empty())
    throw ParseError(st.back().line, st.back().col, "unclosed '('");
  if (roots.empty()) throw ParseError(1, 1, "empty expression");
  if (roots.size() > 1)
    throw ParseError(1, 1, "a file must contain exactly one expression");
  kx.root = roots[0];
  return kx;
}

TdFile parse_td(const std::string& text) {
  TdFile td;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::map<int, int> seen;
  while (std::getline(in, raw)) {
    ++lineno;
    std::istringstream ls(raw);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "c" || tag == "s" || tag[0] == '#') continue;
    if (tag == "b") {
      int id;
      if (!(ls >> id) || id <= 0)
        throw ParseError(lineno, 1, "bag line needs a positive id");
      if (!seen.emplace(id, 1).second)
        throw ParseError(lineno, 1, "bag " + std::to_string(id) +
                                        " declared twice");
      std::vector<std::string> consts;
      std::string c;
      while (ls >> c) consts.push_back(c);
      td.bags.emplace_back(id, std::move(consts));
    } else if (tag == "e") {
      int u, v;
      if (!(ls >> u >> v) || u <= 0 || v <= 0)
        throw ParseError(lineno, 1, "edge line needs two positive ids");
      td.edges.emplace_back(u, v);
    } else if (tag == "r") {
      int id;
      if (!(ls >> id) || id <= 0)
        throw ParseError(lineno, 1, "root line needs a positive id");
      td.root = id;
    } else {
      throw ParseError(lineno, 1, "unknown line tag '" + tag + "'");
    }
  }
  return td;
}

// ---------------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << content;
}

namespace {

std::string concept_to_dl(const Concept& c) {
  switch (c->tag) {
    case CTag::Top:
      return "top";
    case CTag::Bot:
      return "bot";
    case CTag::Name:
      return c->name;
    case CTag::Not:
      return "~" + concept_to_dl(c->kids[0]);
    case CTag::And:
    case CTag::Or: {
      std::string sep = c->tag == CTag::And ? " & " : " | ";
      std::string out = "(";
      for (std::size_t i = 0; i < c->kids.size(); ++i) {
        if (i) out += sep;
        out += concept_to_dl(c->kids[i]);
      }
      return out + ")";
    }
    case CTag::Exists:
      return "<" + c->role.to_string() + ">." + concept_to_dl(c->kids[0]);
    case CTag::Forall:
      return "[" + c->role.to_string() + "]." + concept_to_dl(c->kids[0]);
    case CTag::ExistsEq: {
      std::string out = "<" + c->role.to_string() + ">.[";
      for (std::size_t i = 0; i < c->eq_names.size(); ++i) {
        if (i) out += ",";
        out += c->eq_names[i];
      }
      return out + "]=";
    }
  }
  return "?";
}

}  // namespace

std::string ontology_to_string(const Ontology& o) {
  std::string out;
  if (o.dialect == Dialect::GF2) {
    for (auto& s : o.sentences) out += gf2_to_string(s) + "\n";
    return out;
  }
  for (auto& ci : o.cis)
    out += concept_to_dl(ci.lhs) + " <= " + concept_to_dl(ci.rhs) + "\n";
  return out;
}

std::string database_to_string(const Database& db) {
  std::string out;
  for (auto& l : db.fact_lines(true)) out += l + "\n";
  return out;
}

}  // namespace omq
