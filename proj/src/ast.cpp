#include "omq/ast.hpp"

#include <algorithm>
#include <set>

namespace omq {

static Concept mk(ConceptNode n) {
  return std::make_shared<const ConceptNode>(std::move(n));
}

Concept c_top() {
  static Concept t = mk({CTag::Top});
  return t;
}
Concept c_bot() {
  static Concept b = mk({CTag::Bot});
  return b;
}
Concept c_name(const std::string& n) {
  ConceptNode cn{CTag::Name};
  cn.name = n;
  return mk(std::move(cn));
}
Concept c_not(Concept c) {
  ConceptNode cn{CTag::Not};
  cn.kids = {std::move(c)};
  return mk(std::move(cn));
}
Concept c_and(std::vector<Concept> ks) {
  assert(!ks.empty());
  if (ks.size() == 1) return ks[0];
  ConceptNode cn{CTag::And};
  cn.kids = std::move(ks);
  return mk(std::move(cn));
}
Concept c_or(std::vector<Concept> ks) {
  assert(!ks.empty());
  if (ks.size() == 1) return ks[0];
  ConceptNode cn{CTag::Or};
  cn.kids = std::move(ks);
  return mk(std::move(cn));
}
Concept c_and(Concept a, Concept b) { return c_and(std::vector<Concept>{a, b}); }
Concept c_or(Concept a, Concept b) { return c_or(std::vector<Concept>{a, b}); }
Concept c_exists(Role r, Concept c) {
  ConceptNode cn{CTag::Exists};
  cn.role = std::move(r);
  cn.kids = {std::move(c)};
  return mk(std::move(cn));
}
Concept c_forall(Role r, Concept c) {
  ConceptNode cn{CTag::Forall};
  cn.role = std::move(r);
  cn.kids = {std::move(c)};
  return mk(std::move(cn));
}
Concept c_exists_eq(Role r, std::vector<std::string> names) {
  ConceptNode cn{CTag::ExistsEq};
  cn.role = std::move(r);
  cn.eq_names = std::move(names);
  return mk(std::move(cn));
}

const std::string& ConceptNode::key() const {
  if (!key_cache.empty()) return key_cache;
  std::string s;
  switch (tag) {
    case CTag::Top: s = "top"; break;
    case CTag::Bot: s = "bot"; break;
    case CTag::Name: s = name; break;
    case CTag::Not: s = "~" + kids[0]->key(); break;
    case CTag::And:
    case CTag::Or: {
      s = tag == CTag::And ? "(&" : "(|";
      for (auto& k : kids) {
        s += ' ';
        s += k->key();
      }
      s += ')';
      break;
    }
    case CTag::Exists:
      s = "<" + role.to_string() + ">." + kids[0]->key();
      break;
    case CTag::Forall:
      s = "[" + role.to_string() + "]." + kids[0]->key();
      break;
    case CTag::ExistsEq: {
      s = "<" + role.to_string() + ">.[";
      for (std::size_t i = 0; i < eq_names.size(); ++i) {
        if (i) s += ',';
        s += eq_names[i];
      }
      s += "]=";
      break;
    }
  }
  key_cache = std::move(s);
  return key_cache;
}

bool concept_eq(const Concept& a, const Concept& b) {
  if (a.get() == b.get()) return true;
  return a->key() == b->key();
}

std::string concept_to_string(const Concept& c) {
  switch (c->tag) {
    case CTag::Top: return "top";
    case CTag::Bot: return "bot";
    case CTag::Name: return c->name;
    case CTag::Not: return "~" + concept_to_string(c->kids[0]);
    case CTag::And:
    case CTag::Or: {
      std::string sep = c->tag == CTag::And ? " & " : " | ";
      std::string s = "(";
      for (std::size_t i = 0; i < c->kids.size(); ++i) {
        if (i) s += sep;
        s += concept_to_string(c->kids[i]);
      }
      return s + ")";
    }
    case CTag::Exists:
      return "<" + c->role.to_string() + ">." + concept_to_string(c->kids[0]);
    case CTag::Forall:
      return "[" + c->role.to_string() + "]." + concept_to_string(c->kids[0]);
    case CTag::ExistsEq: {
      std::string s = "<" + c->role.to_string() + ">.[";
      for (std::size_t i = 0; i < c->eq_names.size(); ++i) {
        if (i) s += ',';
        s += c->eq_names[i];
      }
      return s + "]=";
    }
  }
  return "?";
}

Concept nnf(const Concept& c) {
  switch (c->tag) {
    case CTag::Top:
    case CTag::Bot:
    case CTag::Name:
      return c;
    case CTag::Not:
      return nnf_not(c->kids[0]);
    case CTag::And:
    case CTag::Or: {
      std::vector<Concept> ks;
      ks.reserve(c->kids.size());
      for (auto& k : c->kids) ks.push_back(nnf(k));
      return c->tag == CTag::And ? c_and(std::move(ks)) : c_or(std::move(ks));
    }
    case CTag::Exists:
      return c_exists(c->role, nnf(c->kids[0]));
    case CTag::Forall:
      return c_forall(c->role, nnf(c->kids[0]));
    case CTag::ExistsEq:
      return c;
  }
  return c;
}

Concept nnf_not(const Concept& c) {
  switch (c->tag) {
    case CTag::Top: return c_bot();
    case CTag::Bot: return c_top();
    case CTag::Name: return c_not(c);
    case CTag::Not: return nnf(c->kids[0]);
    case CTag::And:
    case CTag::Or: {
      std::vector<Concept> ks;
      ks.reserve(c->kids.size());
      for (auto& k : c->kids) ks.push_back(nnf_not(k));
      return c->tag == CTag::And ? c_or(std::move(ks)) : c_and(std::move(ks));
    }
    case CTag::Exists:
      return c_forall(c->role, nnf_not(c->kids[0]));
    case CTag::Forall:
      return c_exists(c->role, nnf_not(c->kids[0]));
    case CTag::ExistsEq:
      assert(false && "negate after expand_alc_eq");
      return c;
  }
  return c;
}

void concept_subconcepts(const Concept& c, std::vector<Concept>& out) {
  out.push_back(c);
  for (auto& k : c->kids) concept_subconcepts(k, out);
}

std::size_t concept_size(const Concept& c) {
  std::size_t n = 1;
  for (auto& k : c->kids) n += concept_size(k);
  if (c->tag == CTag::ExistsEq) n += c->eq_names.size();
  return n;
}

void concept_collect_names(const Concept& c, std::vector<std::string>& names,
                           std::vector<std::string>& roles) {
  if (c->tag == CTag::Name) names.push_back(c->name);
  if (c->tag == CTag::Exists || c->tag == CTag::Forall ||
      c->tag == CTag::ExistsEq)
    roles.push_back(c->role.name);
  for (auto& n : c->eq_names) names.push_back(n);
  for (auto& k : c->kids) concept_collect_names(k, names, roles);
}

bool concept_uses_inverse(const Concept& c) {
  if ((c->tag == CTag::Exists || c->tag == CTag::Forall ||
       c->tag == CTag::ExistsEq) &&
      c->role.inverse)
    return true;
  for (auto& k : c->kids)
    if (concept_uses_inverse(k)) return true;
  return false;
}

bool concept_uses_eq(const Concept& c) {
  if (c->tag == CTag::ExistsEq) return true;
  for (auto& k : c->kids)
    if (concept_uses_eq(k)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// GF2

static Gf2 gmk(Gf2Node n) { return std::make_shared<const Gf2Node>(std::move(n)); }

Gf2 g_atom(std::string pred, std::vector<Var> args) {
  Gf2Node n{GTag::Atom};
  n.pred = std::move(pred);
  n.args = std::move(args);
  return gmk(std::move(n));
}
Gf2 g_eq(Var a, Var b) {
  Gf2Node n{GTag::Eq};
  n.args = {a, b};
  return gmk(std::move(n));
}
Gf2 g_not(Gf2 f) {
  Gf2Node n{GTag::Not};
  n.kids = {std::move(f)};
  return gmk(std::move(n));
}
Gf2 g_and(std::vector<Gf2> ks) {
  assert(!ks.empty());
  if (ks.size() == 1) return ks[0];
  Gf2Node n{GTag::And};
  n.kids = std::move(ks);
  return gmk(std::move(n));
}
Gf2 g_or(std::vector<Gf2> ks) {
  assert(!ks.empty());
  if (ks.size() == 1) return ks[0];
  Gf2Node n{GTag::Or};
  n.kids = std::move(ks);
  return gmk(std::move(n));
}
Gf2 g_and(Gf2 a, Gf2 b) { return g_and(std::vector<Gf2>{a, b}); }
Gf2 g_or(Gf2 a, Gf2 b) { return g_or(std::vector<Gf2>{a, b}); }
Gf2 g_imp(Gf2 a, Gf2 b) { return g_or(g_not(std::move(a)), std::move(b)); }
Gf2 g_iff(Gf2 a, Gf2 b) {
  return g_and(g_or(g_not(a), b), g_or(g_not(b), a));
}
Gf2 g_forall(std::uint8_t qvars, Gf2 guard, Gf2 body) {
  assert(qvars != 0);
  Gf2Node n{GTag::Forall};
  n.kids = {std::move(guard), std::move(body)};
  n.qvars = qvars;
  return gmk(std::move(n));
}
Gf2 g_exists(std::uint8_t qvars, Gf2 guard, Gf2 body) {
  assert(qvars != 0);
  Gf2Node n{GTag::Exists};
  n.kids = {std::move(guard), std::move(body)};
  n.qvars = qvars;
  return gmk(std::move(n));
}

std::uint8_t Gf2Node::free_mask() const {
  switch (tag) {
    case GTag::Atom:
    case GTag::Eq: {
      std::uint8_t m = 0;
      for (auto v : args) m |= (v == Var::X ? 1 : 2);
      return m;
    }
    case GTag::Not:
      return kids[0]->free_mask();
    case GTag::And:
    case GTag::Or: {
      std::uint8_t m = 0;
      for (auto& k : kids) m |= k->free_mask();
      return m;
    }
    case GTag::Forall:
    case GTag::Exists: {
      std::uint8_t m = kids[0]->free_mask() | kids[1]->free_mask();
      return m & ~qvars;
    }
  }
  return 0;
}

const std::string& Gf2Node::key() const {
  if (!key_cache.empty()) return key_cache;
  key_cache = gf2_to_string(std::make_shared<const Gf2Node>(*this));
  return key_cache;
}

bool gf2_eq(const Gf2& a, const Gf2& b) {
  if (a.get() == b.get()) return true;
  return gf2_to_string(a) == gf2_to_string(b);
}

std::string gf2_to_string(const Gf2& f) {
  switch (f->tag) {
    case GTag::Atom: {
      std::string s = "(" + f->pred;
      for (auto v : f->args) {
        s += ' ';
        s += var_name(v);
      }
      return s + ")";
    }
    case GTag::Eq:
      return std::string("(= ") + var_name(f->args[0]) + " " +
             var_name(f->args[1]) + ")";
    case GTag::Not:
      return "(not " + gf2_to_string(f->kids[0]) + ")";
    case GTag::And:
    case GTag::Or: {
      std::string s = f->tag == GTag::And ? "(and" : "(or";
      for (auto& k : f->kids) s += " " + gf2_to_string(k);
      return s + ")";
    }
    case GTag::Forall:
    case GTag::Exists: {
      std::string q = f->tag == GTag::Forall ? "forall" : "exists";
      std::string vars;
      if (f->qvars & 1) vars += "x";
      if (f->qvars & 2) {
        if (!vars.empty()) vars += " ";
        vars += "y";
      }
      std::string inner;
      if (f->tag == GTag::Forall)
        inner = "(-> " + gf2_to_string(f->kids[0]) + " " +
                gf2_to_string(f->kids[1]) + ")";
      else
        inner = "(and " + gf2_to_string(f->kids[0]) + " " +
                gf2_to_string(f->kids[1]) + ")";
      return "(" + q + " (" + vars + ") " + inner + ")";
    }
  }
  return "?";
}

Gf2 gf2_swap(const Gf2& f) {
  switch (f->tag) {
    case GTag::Atom: {
      std::vector<Var> args;
      for (auto v : f->args) args.push_back(other(v));
      return g_atom(f->pred, std::move(args));
    }
    case GTag::Eq:
      return g_eq(other(f->args[0]), other(f->args[1]));
    case GTag::Not:
      return g_not(gf2_swap(f->kids[0]));
    case GTag::And:
    case GTag::Or: {
      std::vector<Gf2> ks;
      for (auto& k : f->kids) ks.push_back(gf2_swap(k));
      return f->tag == GTag::And ? g_and(std::move(ks)) : g_or(std::move(ks));
    }
    case GTag::Forall:
    case GTag::Exists: {
      std::uint8_t q = 0;
      if (f->qvars & 1) q |= 2;
      if (f->qvars & 2) q |= 1;
      Gf2 guard = gf2_swap(f->kids[0]);
      Gf2 body = gf2_swap(f->kids[1]);
      return f->tag == GTag::Forall ? g_forall(q, guard, body)
                                    : g_exists(q, guard, body);
    }
  }
  return f;
}

void gf2_collect_sig(const Gf2& f, std::vector<std::string>& unary,
                     std::vector<std::string>& binary) {
  if (f->tag == GTag::Atom) {
    if (f->args.size() == 1)
      unary.push_back(f->pred);
    else
      binary.push_back(f->pred);
  }
  for (auto& k : f->kids) gf2_collect_sig(k, unary, binary);
}

std::size_t gf2_size(const Gf2& f) {
  std::size_t n = 1;
  for (auto& k : f->kids) n += gf2_size(k);
  return n;
}

}  // namespace omq
