#pragma once

#include <map>
#include <string>
#include <vector>

#include "omq/ast.hpp"
#include "omq/bits.hpp"

namespace omq {

enum class Dialect { ALC, ALCI, GF2 };

inline const char* dialect_name(Dialect d) {
  switch (d) {
    case Dialect::ALC: return "alc";
    case Dialect::ALCI: return "alci";
    case Dialect::GF2: return "gf2";
  }
  return "?";
}

struct CI {
  Concept lhs, rhs;
};

struct Ontology {
  Dialect dialect = Dialect::ALC;
  std::vector<CI> cis;          // DL dialects
  std::vector<Gf2> sentences;   // GF2
  bool normalized = false;      // DL: single CI top <= C_O, C_O in NNF

  std::size_t size() const;
  const Concept& c_o() const;   // requires normalized DL ontology
};

// Rewrites every set-agreement constructor away; result is plain ALC/ALCI.
Ontology expand_alc_eq(const Ontology& o);
Concept expand_eq_concept(const Concept& c);

// DL only: fold all CIs into the single normal form top <= C_O with C_O in
// NNF. Inclusion C <= D contributes nnf(~C | D).
Ontology normalize(const Ontology& o);

// Subconcept closure of a normalized DL ontology plus index structure reused
// by the type system and the DPs.
struct ClosureAlci {
  std::vector<Concept> cl;                    // cl(O), deduplicated
  std::map<std::string, int> index;           // concept key -> index in cl
  std::vector<int> neg;                       // index of nnf(~C)
  std::vector<int> cl_forall;                 // indices of forall-concepts
  std::vector<int> cl_star;                   // indices of C with [rho].C in cl
  std::vector<int> forall_body;               // per cl_forall: index of body
  std::vector<int> star_pos_of;               // cl index -> pos in cl_star or -1
  std::vector<int> forall_pos_of;             // cl index -> pos in cl_forall or -1
  std::vector<std::string> concept_names;     // names occurring
  std::vector<std::string> role_names;        // role names occurring
  int c_o_idx = -1;

  int idx(const Concept& c) const {
    auto it = index.find(c->key());
    return it == index.end() ? -1 : it->second;
  }
  std::size_t size() const { return cl.size(); }
};

ClosureAlci closure_alci(const Ontology& o);

// Standard translation into GF2; concept names become unary predicates and
// roles binary ones. Inclusions turn into equality-guarded sentences.
Ontology alci_to_gf2(const Ontology& o);
Gf2 concept_to_gf2(const Concept& c, Var v);

}  // namespace omq
