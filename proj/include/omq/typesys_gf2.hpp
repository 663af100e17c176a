#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "omq/ast.hpp"
#include "omq/bits.hpp"
#include "omq/database.hpp"
#include "omq/ontology.hpp"

namespace omq {

// Subformula closure of a two-variable ontology, shared by the type tables
// and the DPs.
//
// Formulas are stored as representatives: a representative is never
// negation-topped, and membership of a negated formula is read off the
// representative with flipped polarity (the closure is thereby closed under
// single negation). Representatives are deduplicated by structural key and
// ordered kids-first (ascending size), so bit vectors over the spaces below
// evaluate bottom-up in position order.
//
// Closure contents: all subformulas of the ontology sentences; the x/y swap
// of every subformula with at least one free variable (swaps of sentences
// are alpha-variants and canonicalize to the original); both orientations
// r(x,y), r(y,x) of every role of the target database signature. On top of
// that, the one-type space is extended with a self-loop atom r(x,x) per
// role, so that an element's own loops are part of its type; extension
// atoms that are not subformulas stay out of the two-type space.
struct ClosureGf2 {
  std::vector<Gf2> reps;             // representatives, kids-first order
  std::map<std::string, int> index;  // representative key -> index

  std::vector<std::uint8_t> free_mask;  // bit0 = x free, bit1 = y free
  std::vector<int> swap_of;             // index of the x<->y swapped rep
  // Dereferenced kids of Boolean and quantified representatives:
  // (rep index, polarity); quantifiers store {guard, body}.
  std::vector<std::vector<std::pair<int, bool>>> kids;
  std::vector<bool> in_cl;  // false only for pure self-loop extension atoms

  // One-type space: [sentences | other x-formulas | extension atoms].
  // Two-type space: [one-type core prefix | y-formulas | x,y-formulas].
  int n0 = 0;      // sentence prefix length
  int n1core = 0;  // closure part of the one-type space
  int n1 = 0;      // full one-type space incl. extension atoms
  int n2 = 0;      // two-type space
  std::vector<int> one_order, two_order;  // position -> rep
  std::vector<int> one_pos, two_pos;      // rep -> position or -1

  std::vector<int> pair_atom_reps;           // binary atoms with distinct args
  std::map<std::string, int> selfloop_rep;   // role -> rep of r(x,x)
  std::vector<std::string> unary_preds;      // signature, sorted
  std::vector<std::string> role_names;       // ontology plus database roles
  std::vector<std::pair<int, bool>> forced;  // ontology sentences: rep, value
  bool forced_conflict = false;  // two sentences demand opposite values

  int idx(const Gf2& f) const {
    auto it = index.find(f->key());
    return it == index.end() ? -1 : it->second;
  }
  // Strip negations, canonicalize alpha-variant sentences; (-1, _) if the
  // formula is foreign to the closure.
  std::pair<int, bool> deref(const Gf2& f) const;

  std::size_t size() const { return reps.size(); }
};

ClosureGf2 closure_gf2(const Ontology& o,
                       const std::vector<std::string>& db_roles);

// Joint table of surviving one- and two-types.
//
// A one-type is a bit vector over the one-type space: the element's truth
// assignment to every x-formula of the closure plus its self-loop atoms. A
// two-type is a bit vector over the two-type space: the truth assignment of
// an ordered pair of distinct elements, x-formulas read on the first
// element and y-formulas on the second. Every two-type determines a
// sentence part and two one-type cores (its element projections); the
// compatibility relation t1 ~t~ t2 holds when t's projections equal the
// closure parts of t1 and t2.
//
// gf2_types returns the joint elimination fixpoint: a one-type survives iff
// each of its existential requirements is witnessed by its own loops or by
// a surviving two-type whose first projection matches; a two-type survives
// iff it satisfies every universally guarded implication of the closure at
// the pair and both projections survive; a sentence stratum survives iff
// its sentence-level existential requirements are witnessed by a surviving
// type of the same stratum. Survivors are exactly the assignments realized
// in some model of the ontology.
struct Gf2TypeTable {
  ClosureGf2 cx;

  std::vector<Bits> tp1;      // surviving one-types (one-type space)
  std::vector<int> tp1_core;  // per tp1 entry: index into cores
  std::vector<Bits> cores;    // distinct closure parts of tp1, deduplicated
  std::vector<int> core_zero;  // per core: index into zeros
  std::vector<Bits> zeros;     // distinct sentence parts

  std::vector<Bits> tp2;                  // surviving two-types
  std::vector<int> tp2_xcore, tp2_ycore;  // per tp2: projection core indices
  Bits pair_atom_mask;                    // two-space mask of binary atoms
  std::map<std::pair<int, int>, std::vector<int>> tp2_by_cores;

  bool satisfiable() const { return !tp1.empty(); }

  bool compatible(int t1, int t, int t2) const {
    return tp1_core[t1] == tp2_xcore[t] && tp1_core[t2] == tp2_ycore[t];
  }

  // Is there a surviving two-type with the given projection cores whose
  // binary atoms include all of required (a two-space mask)?
  bool edge_supertype_exists(int core1, int core2, const Bits& required) const;

  // Two-space position of the atom r(x,y) (inv=false) or r(y,x) (inv=true);
  // -1 for roles unknown to the closure.
  int pair_atom_pos(const std::string& role, bool inv) const;
};

// db_roles: binary signature of the target database; its atoms join the
// closure so that types can describe edges of every database role.
Gf2TypeTable gf2_types(const Ontology& o,
                       const std::vector<std::string>& db_roles);

// Can an element of (extended) one-type t carry an intro-node payload?
// Requires every payload concept name known to the closure and every
// payload self-loop's atom to be present in t. Facts outside the closure
// never disqualify: models may satisfy more than the type records. Label
// predicates and top facts are ignored.
bool type_realizes_leaf(const ClosureGf2& cx, const Bits& t,
                        const std::vector<std::string>& upreds,
                        const std::vector<std::string>& loop_roles);
bool type_realizes_leaf(const ClosureGf2& cx, const Bits& t,
                        const Database& leaf);

// Sorted printable forms (diagnostic dump) of a one- or two-type.
std::vector<std::string> type1_formula_strings(const ClosureGf2& cx,
                                               const Bits& t);
std::vector<std::string> type2_formula_strings(const ClosureGf2& cx,
                                               const Bits& t);

}  // namespace omq
