#pragma once

#include <cassert>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace omq {

// ---------------------------------------------------------------------------
// Roles

struct Role {
  std::string name;
  bool inverse = false;

  Role() = default;
  Role(std::string n, bool inv = false) : name(std::move(n)), inverse(inv) {}

  Role inv() const { return Role(name, !inverse); }

  bool operator==(const Role& o) const {
    return name == o.name && inverse == o.inverse;
  }
  bool operator!=(const Role& o) const { return !(*this == o); }
  bool operator<(const Role& o) const {
    if (name != o.name) return name < o.name;
    return inverse < o.inverse;
  }
  std::string to_string() const { return inverse ? name + "-" : name; }
};

// ---------------------------------------------------------------------------
// ALCI concepts (plus the set-agreement constructor of ALC=)

enum class CTag {
  Top,
  Bot,
  Name,
  Not,
  And,
  Or,
  Exists,
  Forall,
  ExistsEq,  // <r>.[A1,...,An]=
};

struct ConceptNode;
using Concept = std::shared_ptr<const ConceptNode>;

struct ConceptNode {
  CTag tag;
  std::string name;            // Name
  Role role;                   // Exists / Forall / ExistsEq
  std::vector<Concept> kids;   // Not(1), And/Or(>=2), Exists/Forall(1)
  std::vector<std::string> eq_names;  // ExistsEq

  mutable std::string key_cache;
  const std::string& key() const;
};

Concept c_top();
Concept c_bot();
Concept c_name(const std::string& n);
Concept c_not(Concept c);
Concept c_and(std::vector<Concept> ks);
Concept c_or(std::vector<Concept> ks);
Concept c_and(Concept a, Concept b);
Concept c_or(Concept a, Concept b);
Concept c_exists(Role r, Concept c);
Concept c_forall(Role r, Concept c);
Concept c_exists_eq(Role r, std::vector<std::string> names);

bool concept_eq(const Concept& a, const Concept& b);
std::string concept_to_string(const Concept& c);

// Negation normal form; negation pushed to concept names, Top/Bot folded.
Concept nnf(const Concept& c);
Concept nnf_not(const Concept& c);

// Structural traversal helpers.
void concept_subconcepts(const Concept& c, std::vector<Concept>& out);
std::size_t concept_size(const Concept& c);
void concept_collect_names(const Concept& c, std::vector<std::string>& names,
                           std::vector<std::string>& roles);
bool concept_uses_inverse(const Concept& c);
bool concept_uses_eq(const Concept& c);

// ---------------------------------------------------------------------------
// GF2 formulas over variables x, y

enum class Var : std::uint8_t { X = 0, Y = 1 };

inline Var other(Var v) { return v == Var::X ? Var::Y : Var::X; }
inline const char* var_name(Var v) { return v == Var::X ? "x" : "y"; }

enum class GTag {
  Atom,     // P(v) or r(v,w)
  Eq,       // v = w
  Not,
  And,
  Or,
  Forall,   // guarded: forall qvars (guard -> body)
  Exists,   // guarded: exists qvars (guard and body)
};

struct Gf2Node;
using Gf2 = std::shared_ptr<const Gf2Node>;

struct Gf2Node {
  GTag tag;
  std::string pred;          // Atom
  std::vector<Var> args;     // Atom (1 or 2), Eq (2)
  std::vector<Gf2> kids;     // Not(1), And/Or(>=2), quantifier: {guard, body}
  std::uint8_t qvars = 0;    // quantifier: bitmask, bit0 = x, bit1 = y

  mutable std::string key_cache;
  const std::string& key() const;

  // Free-variable mask, bit0 = x, bit1 = y.
  std::uint8_t free_mask() const;
};

Gf2 g_atom(std::string pred, std::vector<Var> args);
Gf2 g_eq(Var a, Var b);
Gf2 g_not(Gf2 f);
Gf2 g_and(std::vector<Gf2> ks);
Gf2 g_or(std::vector<Gf2> ks);
Gf2 g_and(Gf2 a, Gf2 b);
Gf2 g_or(Gf2 a, Gf2 b);
Gf2 g_imp(Gf2 a, Gf2 b);                 // sugar: not a or b
Gf2 g_iff(Gf2 a, Gf2 b);                 // sugar
Gf2 g_forall(std::uint8_t qvars, Gf2 guard, Gf2 body);
Gf2 g_exists(std::uint8_t qvars, Gf2 guard, Gf2 body);

bool gf2_eq(const Gf2& a, const Gf2& b);
std::string gf2_to_string(const Gf2& f);

// Swap x and y throughout (free occurrences; bound structure is renamed
// consistently so the result is well-formed).
Gf2 gf2_swap(const Gf2& f);

void gf2_collect_sig(const Gf2& f, std::vector<std::string>& unary,
                     std::vector<std::string>& binary);
std::size_t gf2_size(const Gf2& f);

}  // namespace omq
