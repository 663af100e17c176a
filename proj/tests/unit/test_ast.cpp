#include <doctest.h>

#include "omq/ast.hpp"
#include "omq/ontology.hpp"

using namespace omq;

TEST_CASE("nnf pushes negation to names and folds constants") {
  auto a = c_name("A"), b = c_name("B");
  Role r("r");
  auto c = c_not(c_and(a, c_exists(r, b)));
  auto n = nnf(c);
  CHECK(n->key() == c_or(c_not(a), c_forall(r, c_not(b)))->key());

  CHECK(nnf(c_not(c_top()))->tag == CTag::Bot);
  CHECK(nnf(c_not(c_not(a)))->key() == a->key());
  // Double negation through a value restriction.
  auto vn = nnf(c_not(c_forall(r, c_not(a))));
  CHECK(vn->key() == c_exists(r, a)->key());
}

TEST_CASE("nnf is idempotent and preserves inverse roles") {
  Role rinv("r", true);
  auto c = c_not(c_or(c_name("A"), c_exists(rinv, c_name("B"))));
  auto n = nnf(c);
  CHECK(nnf(n)->key() == n->key());
  CHECK(concept_uses_inverse(n));
}

TEST_CASE("closure contains every subconcept and its negation") {
  Ontology o;
  o.dialect = Dialect::ALCI;
  Role r("r");
  o.cis.push_back({c_name("A"), c_exists(r, c_name("B"))});
  o = normalize(o);
  auto cl = closure_alci(o);
  // Every member's NNF-negation is present.
  for (std::size_t i = 0; i < cl.size(); ++i) {
    CHECK(cl.neg[cl.neg[i]] == i);
    CHECK(cl.index.count(nnf_not(cl.cl[i])->key()) == 1);
  }
  // cl_forall collects exactly the value restrictions.
  for (std::size_t i : cl.cl_forall) CHECK(cl.cl[i]->tag == CTag::Forall);
  // C_O itself is in the closure.
  CHECK(cl.index.count(o.c_o()->key()) == 1);
}

TEST_CASE("set-agreement constructor expands to a disjunction over sign vectors") {
  Role r("r");
  auto e = c_exists_eq(r, {"A"});
  auto x = expand_eq_concept(e);
  // <r>.[A]= == (A & <r>.A) | (~A & <r>.~A)
  CHECK(x->tag == CTag::Or);
  CHECK(x->kids.size() == 2);
  // n = 0 degenerates to <r>.top.
  auto z = expand_eq_concept(c_exists_eq(r, {}));
  CHECK(z->key() == c_exists(r, c_top())->key());
}

TEST_CASE("gf2 printing and swap") {
  auto g = g_forall(
      0b11, g_atom("r", {Var::X, Var::Y}),
      g_imp(g_atom("A", {Var::X}), g_atom("B", {Var::Y})));
  CHECK(gf2_to_string(g) ==
        "(forall (x y) (-> (r x y) (or (not (A x)) (B y))))");
  CHECK(g->free_mask() == 0);

  auto a = g_atom("r", {Var::X, Var::Y});
  auto s = gf2_swap(a);
  CHECK(gf2_to_string(s) == "(r y x)");
  CHECK(gf2_eq(gf2_swap(s), a));
}

TEST_CASE("alci ontologies translate into guarded two-variable sentences") {
  Ontology o;
  o.dialect = Dialect::ALCI;
  Role r("r");
  o.cis.push_back({c_name("A"), c_exists(r.inv(), c_name("B"))});
  Ontology g = alci_to_gf2(o);
  CHECK(g.dialect == Dialect::GF2);
  REQUIRE(g.sentences.size() == 1);
  auto s = gf2_to_string(g.sentences[0]);
  // The inverse role flips the atom's argument order.
  CHECK(s.find("(r y x)") != std::string::npos);
  CHECK(s.find("(forall (x)") == 0);
}
