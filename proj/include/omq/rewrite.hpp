#pragma once

#include <map>
#include <string>
#include <vector>

#include "omq/ast.hpp"
#include "omq/ontology.hpp"
#include "omq/query.hpp"

namespace omq {

// Two disciplines for the tree-shaped subqueries used by query rewriting:
//
//  - Simple: role atoms connect distinct variables, there is at most one
//    role atom per unordered variable pair, and the variable graph is a
//    tree.  This is exactly what the concept translation needs, where every
//    edge becomes a single exists-restriction.
//  - Loops: self-loops and parallel role atoms are allowed; the variable
//    graph ignoring self-loops must be a tree.  This is the discipline of
//    the two-variable formula translation, which can conjoin several atoms
//    under one guarded quantifier.
enum class TreeVariant { Simple, Loops };

// A tree-shaped boolean or rooted conjunctive query. The root, when
// present, doubles as the (single) answer variable of cq.
struct TreeCQ {
  CQ cq;
  int root = -1;  // variable id, -1 for boolean trees
  bool rooted() const { return root >= 0; }
};

// Serialization of a CQ exactly as given: sorted atoms plus the answer
// variable list. Two CQs have equal keys iff they are syntactically equal
// up to atom order.
std::string cq_key(const CQ& q);

// Canonical renaming: the variable permutation minimizing cq_key is
// applied, so isomorphic CQs (respecting answer variables) get identical
// forms. Limited to nine variables.
CQ cq_canonical_form(const CQ& q);
std::string cq_canonical_key(const CQ& q);

bool is_tree_cq(const CQ& q, TreeVariant v);

// The tree-shaped parts the split form of q refers to: for every
// identification of variables of every disjunct and every admissible set S
// of kept variables, the connected parts hanging off S, rooted at the kept
// variable they touch (boolean when they touch none). Only parts of fully
// admissible splits are kept, so the collection is exactly the class
// vocabulary of build_qhat. Results are canonical, deduplicated and sorted
// by key.
std::vector<TreeCQ> enumerate_trees(const UCQ& q, TreeVariant v);

// Rooted tree to concept: concept atoms at the root become names, every
// edge becomes one exists-restriction (with the inverse role when the atom
// points at the root). Requires the Simple discipline.
Concept concept_of(const TreeCQ& t);

// Tree to a two-variable formula; the two variables alternate with the
// depth. Rooted trees yield a formula with free variable x; boolean trees
// are closed via exists x (x = x and ...) over the tree rooted at variable
// 0. Requires the Loops discipline (Simple trees satisfy it too).
Gf2 formula_of(const TreeCQ& t);

// One entry per deduplicated tree: the fresh class predicate standing for
// it plus, for boolean trees under the Simple variant, a fresh role linking
// a class member to a witness of the tree. form holds the concept
// translation (boolean trees: rooted at their variable 0) under Simple;
// formula holds the two-variable translation under Loops.
struct TreeClass {
  TreeCQ tree;
  std::string cls;   // "@treeN"
  std::string role;  // "@linkN" for boolean trees under Simple, else empty
  Concept form;      // Simple variant
  Gf2 formula;       // Loops variant
};

struct TreeIndex {
  TreeVariant variant = TreeVariant::Simple;
  std::vector<TreeClass> classes;
  std::map<std::string, int> by_key;  // canonical key -> index

  // Index of the class for a canonical (cq, root) pair, -1 if absent.
  int find(const CQ& canonical_cq) const;
};

TreeIndex index_trees(const UCQ& q, TreeVariant v);

// The split form of q: for every identification of variables of every
// disjunct and every admissible set S of kept variables, the atoms among
// kept variables stay and every other connected part is replaced by one
// class atom - on the kept variable the part touches, or on a fresh
// variable when it touches none. A part is admissible if it touches at
// most one kept variable and is a tree of the index variant. Disjuncts are
// canonical and deduplicated.
UCQ build_qhat(const UCQ& q, const TreeIndex& ix);

// Extended ontology for the Simple variant: the input inclusions plus, per
// rooted tree, class = concept in both directions; per boolean tree, class
// <= exists link.concept, concept <= class (at the tree rooted at its
// variable 0) and propagation exists rho.class <= class for every role rho
// (in both directions) of the ontology, the query and the fresh links.
// A fresh name marking every element (top <= name) is included; the query
// handed in should already carry that marker on every variable.
Ontology build_omega_q(const Ontology& o, const UCQ& q_marked,
                       const TreeIndex& ix, const std::string& top_name);

// Biconditional layer for the Loops variant: per tree a sentence tying the
// class predicate to the formula translation. Abbreviation predicates for
// the closure of this layer are added by the treewidth engine, which owns
// the closure computation.
Ontology build_omega_prime(const Ontology& o, const UCQ& q_marked,
                           const TreeIndex& ix, const std::string& top_name);

// Subquery universe over the split form: every nonempty atom subset of
// every disjunct, deduplicated syntactically (variable ids are the
// canonical ids of the owning disjuncts, so shared subsets coincide).
struct SubQuery {
  std::vector<QAtom> atoms;  // sorted
  std::vector<int> vars;     // sorted variable ids occurring in atoms
  bool full = false;         // equals a whole disjunct
};

struct RewriteBundle {
  TreeVariant variant = TreeVariant::Simple;
  std::string top_name;  // marker concept, "@top"
  UCQ q_marked;          // input with the marker atom added to every variable
  TreeIndex trees;
  Ontology omega;  // Simple: DL inclusions; Loops: biconditional sentences
  UCQ qhat;
  std::vector<SubQuery> subqueries;
  std::map<std::string, int> subquery_index;  // atom-list key -> id

  // Id of the subquery with exactly these (sorted) atoms, -1 if absent.
  int subquery_find(const std::vector<QAtom>& sorted_atoms) const;
};

std::string subquery_key(const std::vector<QAtom>& sorted_atoms);

// Full pipeline for a boolean UCQ: mark every variable, index the trees,
// build the extended ontology and the split form, then close the split
// form under atom subsets. Throws std::invalid_argument when q is not
// boolean or the ontology dialect does not fit the variant (DL dialects
// for Simple, GF2 for Loops).
RewriteBundle build_rewrite_bundle(const Ontology& o, const UCQ& q,
                                   TreeVariant v);

// Evaluates the split form under the cheapest extension of a plain model I
// (over the original signature, first nadom elements being the database
// constants) to a model of the extended ontology: rooted classes hold at a
// constant iff the concept does, boolean classes hold iff some element in
// the same connected component of I satisfies the rooted concept (class
// membership floods freely along any edge), and the top marker holds
// everywhere. The split form is then matched against the constants only.
// Monotone in the facts of I. Simple variant only.
bool qhat_holds_expanded(const RewriteBundle& b, const Interp& I,
                         std::size_t nadom);

}  // namespace omq
