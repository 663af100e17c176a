#include "omq/ontology.hpp"

#include <algorithm>
#include <set>

#include "omq/errors.hpp"

namespace omq {

std::size_t Ontology::size() const {
  std::size_t n = 0;
  if (dialect == Dialect::GF2) {
    for (auto& s : sentences) n += gf2_size(s);
  } else {
    for (auto& ci : cis) n += concept_size(ci.lhs) + concept_size(ci.rhs);
  }
  return n;
}

const Concept& Ontology::c_o() const {
  assert(normalized && cis.size() == 1);
  return cis[0].rhs;
}

Concept expand_eq_concept(const Concept& c) {
  switch (c->tag) {
    case CTag::Top:
    case CTag::Bot:
    case CTag::Name:
      return c;
    case CTag::Not:
      return c_not(expand_eq_concept(c->kids[0]));
    case CTag::And:
    case CTag::Or: {
      std::vector<Concept> ks;
      for (auto& k : c->kids) ks.push_back(expand_eq_concept(k));
      return c->tag == CTag::And ? c_and(std::move(ks)) : c_or(std::move(ks));
    }
    case CTag::Exists:
      return c_exists(c->role, expand_eq_concept(c->kids[0]));
    case CTag::Forall:
      return c_forall(c->role, expand_eq_concept(c->kids[0]));
    case CTag::ExistsEq: {
      // <r>.[A1,...,An]= expands to the disjunction over all sign vectors
      // of (L1 & ... & Ln & <r>.(L1 & ... & Ln)) with Li in {Ai, ~Ai}.
      std::size_t n = c->eq_names.size();
      if (n == 0) return c_exists(c->role, c_top());
      std::vector<Concept> disjuncts;
      for (std::uint64_t sign = 0; sign < (1ull << n); ++sign) {
        std::vector<Concept> lits;
        for (std::size_t i = 0; i < n; ++i) {
          Concept a = c_name(c->eq_names[i]);
          lits.push_back((sign >> i) & 1 ? c_not(a) : a);
        }
        Concept conj = c_and(lits);
        std::vector<Concept> all = lits;
        all.push_back(c_exists(c->role, conj));
        disjuncts.push_back(c_and(std::move(all)));
      }
      return c_or(std::move(disjuncts));
    }
  }
  return c;
}

Ontology expand_alc_eq(const Ontology& o) {
  Ontology out = o;
  for (auto& ci : out.cis) {
    ci.lhs = expand_eq_concept(ci.lhs);
    ci.rhs = expand_eq_concept(ci.rhs);
  }
  return out;
}

Ontology normalize(const Ontology& o) {
  if (o.dialect == Dialect::GF2)
    throw ValidationError("normalize applies to DL ontologies only");
  Ontology in = expand_alc_eq(o);
  Ontology out;
  out.dialect = in.dialect;
  out.normalized = true;
  std::vector<Concept> conjuncts;
  for (auto& ci : in.cis)
    conjuncts.push_back(nnf(c_or(nnf_not(ci.lhs), nnf(ci.rhs))));
  Concept co = conjuncts.empty() ? c_top() : c_and(std::move(conjuncts));
  out.cis.push_back({c_top(), co});
  return out;
}

ClosureAlci closure_alci(const Ontology& o) {
  assert(o.normalized);
  ClosureAlci cx;
  auto add = [&](const Concept& c) {
    if (cx.index.count(c->key())) return;
    cx.index.emplace(c->key(), static_cast<int>(cx.cl.size()));
    cx.cl.push_back(c);
  };
  std::vector<Concept> subs;
  concept_subconcepts(o.c_o(), subs);
  subs.push_back(c_top());
  subs.push_back(c_bot());
  for (auto& s : subs) add(s);
  // Close under single (NNF) negation.
  for (std::size_t i = 0; i < cx.cl.size(); ++i) {
    Concept n = nnf_not(cx.cl[i]);
    std::vector<Concept> nsubs;
    concept_subconcepts(n, nsubs);
    for (auto& s : nsubs) add(s);
  }
  cx.neg.resize(cx.cl.size());
  for (std::size_t i = 0; i < cx.cl.size(); ++i)
    cx.neg[i] = cx.index.at(nnf_not(cx.cl[i])->key());

  cx.star_pos_of.assign(cx.cl.size(), -1);
  cx.forall_pos_of.assign(cx.cl.size(), -1);
  std::set<int> star_set;
  for (std::size_t i = 0; i < cx.cl.size(); ++i) {
    if (cx.cl[i]->tag == CTag::Forall) {
      cx.forall_pos_of[i] = static_cast<int>(cx.cl_forall.size());
      cx.cl_forall.push_back(static_cast<int>(i));
      int body = cx.index.at(cx.cl[i]->kids[0]->key());
      cx.forall_body.push_back(body);
      star_set.insert(body);
    }
  }
  for (int s : star_set) {
    cx.star_pos_of[s] = static_cast<int>(cx.cl_star.size());
    cx.cl_star.push_back(s);
  }
  std::vector<std::string> names, roles;
  concept_collect_names(o.c_o(), names, roles);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  std::sort(roles.begin(), roles.end());
  roles.erase(std::unique(roles.begin(), roles.end()), roles.end());
  cx.concept_names = std::move(names);
  cx.role_names = std::move(roles);
  cx.c_o_idx = cx.index.at(o.c_o()->key());
  return cx;
}

Gf2 concept_to_gf2(const Concept& c, Var v) {
  switch (c->tag) {
    case CTag::Top:
      return g_or(g_atom("@top", {v}), g_not(g_atom("@top", {v})));
    case CTag::Bot:
      return g_and(g_atom("@top", {v}), g_not(g_atom("@top", {v})));
    case CTag::Name:
      return g_atom(c->name, {v});
    case CTag::Not:
      return g_not(concept_to_gf2(c->kids[0], v));
    case CTag::And:
    case CTag::Or: {
      std::vector<Gf2> ks;
      for (auto& k : c->kids) ks.push_back(concept_to_gf2(k, v));
      return c->tag == CTag::And ? g_and(std::move(ks)) : g_or(std::move(ks));
    }
    case CTag::Exists:
    case CTag::Forall: {
      Var w = other(v);
      Gf2 guard = c->role.inverse ? g_atom(c->role.name, {w, v})
                                  : g_atom(c->role.name, {v, w});
      Gf2 body = concept_to_gf2(c->kids[0], w);
      std::uint8_t q = w == Var::X ? 1 : 2;
      return c->tag == CTag::Exists ? g_exists(q, guard, body)
                                    : g_forall(q, guard, body);
    }
    case CTag::ExistsEq:
      throw ValidationError("expand_alc_eq before translating to GF2");
  }
  return nullptr;
}

Ontology alci_to_gf2(const Ontology& o) {
  Ontology in = o.normalized ? o : normalize(o);
  Ontology out;
  out.dialect = Dialect::GF2;
  Gf2 body = concept_to_gf2(in.c_o(), Var::X);
  out.sentences.push_back(g_forall(1, g_eq(Var::X, Var::X), body));
  return out;
}

}  // namespace omq
