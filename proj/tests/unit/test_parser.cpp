#include <doctest.h>

#include "omq/errors.hpp"
#include "omq/parser.hpp"

using namespace omq;

TEST_CASE("dl ontology round-trips through print and parse") {
  std::string text =
      "A <= <r>.(B & ~C)\n"
      "top <= [s-].(A | bot)\n"
      "D <= <r>.[A,B]=\n";
  Ontology o = parse_ontology(text);
  CHECK(o.dialect == Dialect::ALCI);
  REQUIRE(o.cis.size() == 3);
  Ontology o2 = parse_ontology(ontology_to_string(o));
  CHECK(ontology_to_string(o2) == ontology_to_string(o));
  CHECK(o2.cis[2].rhs->tag == CTag::ExistsEq);
}

TEST_CASE("plain alc is recognised when no inverse occurs") {
  Ontology o = parse_ontology("A <= [r].B\n# comment\nB <= <s>.top\n");
  CHECK(o.dialect == Dialect::ALC);
}

TEST_CASE("value restriction after an existential is not the agreement form") {
  Ontology o = parse_ontology("A <= <r>.[s].B\n");
  REQUIRE(o.cis.size() == 1);
  CHECK(o.cis[0].rhs->tag == CTag::Exists);
  CHECK(o.cis[0].rhs->kids[0]->tag == CTag::Forall);
}

TEST_CASE("gf2 ontology parses guarded sentences") {
  std::string text =
      "(forall (x) (-> (= x x) (or (A x) (B x))))\n"
      "(forall (x y) (-> (r x y) (exists (y) (and (s x y) (A y)))))\n";
  Ontology o = parse_ontology(text);
  CHECK(o.dialect == Dialect::GF2);
  CHECK(o.sentences.size() == 2);
  Ontology o2 = parse_ontology(ontology_to_string(o));
  CHECK(ontology_to_string(o2) == ontology_to_string(o));
}

TEST_CASE("unguarded quantifiers are rejected") {
  CHECK_THROWS_AS(parse_ontology("(forall (x) (A x))"), ParseError);
  // Guard must cover the body's free variables.
  CHECK_THROWS_AS(
      parse_ontology("(forall (x y) (-> (A x) (B y)))"), ParseError);
  // Open formulas are not sentences.
  CHECK_THROWS_AS(
      parse_ontology("(exists (y) (and (r x y) (A y)))"), ParseError);
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_ontology("A <= (B &\n| C)\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("databases parse facts, labels and bare constants") {
  Database db = parse_database("A(c) r(c,d) L2(d) top(e)\n");
  CHECK(db.size() == 3);
  CHECK(db.has_fact("A", "c"));
  CHECK(db.has_fact("r", "c", "d"));
  CHECK(db.label(db.cid("d")) == 2);
  CHECK(db.has_const("e"));
  // Printed form round-trips, including the isolated constant.
  Database db2 = parse_database(database_to_string(db));
  CHECK(db2.size() == 3);
  CHECK(database_to_string(db2) == database_to_string(db));
}

TEST_CASE("conflicting labels are a parse error") {
  CHECK_THROWS_AS(parse_database("L1(c) L2(c)"), ParseError);
}

TEST_CASE("queries parse as unions of conjunctive queries") {
  UCQ q = parse_query(
      "q(x,y) := A(x), r(x,y), B(y)\n"
      "q(u,v) := s(u,v)\n");
  CHECK(q.arity() == 2);
  CHECK(q.cqs.size() == 2);
  CHECK(q.natoms() == 3);
  CHECK(!q.is_aq());
  CHECK(q.cqs[0].answer_vars.size() == 2);

  UCQ aq = parse_query("q(x) := A(x)");
  CHECK(aq.is_aq());

  UCQ b = parse_query("q() := r(x,x), B(x)");
  CHECK(b.arity() == 0);
  CHECK(b.cqs[0].boolean());
}

TEST_CASE("query heads must be consistent and safe") {
  CHECK_THROWS_AS(parse_query("q(x) := A(x)\nq(x,y) := r(x,y)"), ParseError);
  CHECK_THROWS_AS(parse_query("q(x) := A(y)"), ParseError);
  CHECK_THROWS_AS(parse_query(""), ParseError);
}

TEST_CASE("tree decompositions parse pace-style lines") {
  TdFile td = parse_td(
      "c a comment\n"
      "s td 2 1 3\n"
      "b 1 c d\n"
      "b 2 d e\n"
      "e 1 2\n"
      "r 1\n");
  CHECK(td.bags.size() == 2);
  CHECK(td.edges.size() == 1);
  CHECK(td.root == 1);
  CHECK_THROWS_AS(parse_td("b 1 c\nb 1 d\n"), ParseError);
}
