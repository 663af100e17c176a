#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "omq/bits.hpp"
#include "omq/database.hpp"
#include "omq/kexpr.hpp"
#include "omq/ontology.hpp"
#include "omq/rewrite.hpp"
#include "omq/typesys_alci.hpp"

namespace omq {

// Input/output assignment: one row pair per label 1..k. in(i) collects the
// guarantees every i-labeled constant gives (concepts from cl^* all of them
// satisfy, encoded over cl^* positions); out(i) collects the universal
// constraints some i-labeled constant emits (concepts from cl^∀, encoded
// over cl^∀ positions). Labels without constants carry the neutral rows
// in = everything, out = nothing.
struct IOA {
  std::vector<Bits> in;   // [k] rows over cl_star positions
  std::vector<Bits> out;  // [k] rows over cl_forall positions

  bool operator==(const IOA& o) const { return in == o.in && out == o.out; }
  bool operator<(const IOA& o) const {
    if (in != o.in) return in < o.in;
    return out < o.out;
  }
};

// Neutral IOA over k labels (no constants anywhere).
IOA ioa_neutral(const ClosureAlci& cx, int k);

// IOA a one-constant leaf of type t at `label` projects to.
IOA ioa_of_leaf_type(const ClosureAlci& cx, int k, int label, const Bits& t);

// Bottom-up abstraction sets, one per arena node (children precede parents,
// so per_node is directly indexed by KExpr node ids). Each set is sorted
// and duplicate-free.
struct ThetaAlci {
  int k = 0;
  std::vector<std::vector<IOA>> per_node;

  const std::vector<IOA>& root(const KExpr& s) const {
    return per_node[static_cast<std::size_t>(s.root)];
  }
  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> out;
    out.reserve(per_node.size());
    for (auto& v : per_node) out.push_back(v.size());
    return out;
  }
};

// The satisfiability/atomic-query dynamic program: computes for every
// subexpression the exact set of IOAs induced by models of its database and
// the ontology. Leaf: one IOA per surviving type compatible with the
// payload. Union: pointwise in-intersection / out-union of child pairs.
// Role addition alpha^r_{i,j}: keeps IOAs where every forall r.C emitted by
// i is accepted by j (C in in(j)) and every forall r^-.C emitted by j is
// accepted by i. Relabel i->j: row j becomes the combination of rows i and
// j, row i resets to neutral.
// Throws ValidationError when the expression fails structural validation.
ThetaAlci theta_aq(const KExpr& s, const ClosureAlci& cx,
                   const TypeTableAlci& table);

// D satisfiable w.r.t. o, decided through theta_aq over s. Requires s to
// generate D (label-stripped fact equality); throws ValidationError
// otherwise.
bool sat_alci(const Ontology& o, const Database& D, const KExpr& s);

// D,o |= A(c) for a concept-name atomic query, decided as unsatisfiability
// of D + @notA(c) w.r.t. o + {@notA == ~A}. The marker fact is pushed into
// the intro leaf of c, so the expression stays a valid k-expression for the
// extended database. Throws ValidationError when c is not in adom(D) or s
// does not generate D.
bool eval_aq_alci(const Ontology& o, const std::string& A,
                  const std::string& c, const Database& D, const KExpr& s);

// A realized mapping of one subquery into the labeled part: the subquery id
// paired with the label (1..k) each of its variables lands on, values
// aligned with SubQuery::vars.
using SubQueryMap = std::pair<int, std::vector<std::uint8_t>>;

// IOA decorated with the set of subquery mappings a model realizes over the
// current constants; the decoration is what lets the root decide whether
// every model already satisfies some full disjunct of the split query.
struct DecoratedIOA {
  IOA ioa;
  std::set<SubQueryMap> pairs;

  bool operator==(const DecoratedIOA& o) const {
    return ioa == o.ioa && pairs == o.pairs;
  }
  bool operator<(const DecoratedIOA& o) const {
    if (!(ioa == o.ioa)) return ioa < o.ioa;
    return pairs < o.pairs;
  }
};

struct ThetaUcqAlci {
  int k = 0;
  std::vector<std::vector<DecoratedIOA>> per_node;

  const std::vector<DecoratedIOA>& root(const KExpr& s) const {
    return per_node[static_cast<std::size_t>(s.root)];
  }
  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> out;
    out.reserve(per_node.size());
    for (auto& v : per_node) out.push_back(v.size());
    return out;
  }
};

// The decorated dynamic program over the split query bundle. cx/table must
// come from the bundle's extended ontology. Leaf: for each surviving type,
// the leaf IOA plus every subquery whose variables can all map onto the one
// constant (concept atoms present in the type, role atoms present as
// payload self-loops). Union: rowwise combination plus joins of
// variable-disjoint mappings whose atom union is again a subquery. Role
// addition: the alpha filter, then closure of the mapping set under adding
// role atoms across the new edges. Relabel: rows merge and mapped labels
// are renamed. Throws ValidationError on invalid expressions or when the
// work outgrows the configured budget.
ThetaUcqAlci theta_ucq(const KExpr& s, const RewriteBundle& b,
                       const ClosureAlci& cx, const TypeTableAlci& table);

// Certain-answer evaluation of a UCQ: D,o |= q(cand). Booleanization
// markers are pushed into the intro leaves of the candidate constants, the
// query is split through its rewriting, and entailment holds iff every
// root abstraction contains a full-disjunct mapping. Throws
// ValidationError when s does not generate D or on dialect mismatch.
bool eval_ucq_alci(const Ontology& o, const UCQ& q,
                   const std::vector<std::string>& cand, const Database& D,
                   const KExpr& s);

}  // namespace omq
