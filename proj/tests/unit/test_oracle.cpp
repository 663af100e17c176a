#include <random>

#include "doctest.h"
#include "omq/errors.hpp"
#include "omq/oracle.hpp"
#include "omq/parser.hpp"

using namespace omq;

namespace {

OracleOutcome run(const std::string& onto, const std::string& db,
                  const std::string& query,
                  const std::vector<std::string>& cand, int extra = 2) {
  OracleOptions opts;
  opts.extra = extra;
  return finite_model_oracle(parse_ontology(onto), parse_database(db),
                             parse_query(query), cand, opts);
}

}  // namespace

TEST_CASE("subsumption makes the answer certain") {
  auto out = run("A <= B\n", "A(c)\n", "q(x) := B(x)\n", {"c"});
  CHECK(out.entailed);
}

TEST_CASE("unrelated predicate admits a countermodel without anon elements") {
  auto out = run("", "A(c)\n", "q(x) := B(x)\n", {"c"}, 0);
  CHECK_FALSE(out.entailed);
  CHECK(out.countermodel_extra == 0);
  REQUIRE(out.countermodel.has_value());
  CHECK(out.countermodel->has_u("A", 0));
  CHECK_FALSE(out.countermodel->has_u("B", 0));
}

TEST_CASE("existential obligation entails a Boolean query") {
  auto out = run("B <= <r>.A\n", "B(c)\n", "q() := A(x)\n", {}, 1);
  CHECK(out.entailed);
}

TEST_CASE("database facts alone answer positive role queries") {
  CHECK(run("", "r(a,b)\n", "q(x) := r(x,y)\n", {"a"}).entailed);
  CHECK_FALSE(run("", "r(a,b)\n", "q(x) := r(x,y)\n", {"b"}).entailed);
}

TEST_CASE("guarded sentence propagates along database edges") {
  std::string o = "(forall (x y) (-> (r x y) (A y)))\n";
  CHECK(run(o, "r(a,b)\n", "q(x) := A(x)\n", {"b"}).entailed);
  CHECK_FALSE(run(o, "r(a,b)\n", "q(x) := A(x)\n", {"a"}).entailed);
}

TEST_CASE("union of queries captures disjunctive ontologies") {
  std::string o = "top <= (A | B)\n";
  CHECK_FALSE(run(o, "top(c)\n", "q() := A(x)\n", {}).entailed);
  CHECK_FALSE(run(o, "top(c)\n", "q() := B(x)\n", {}).entailed);
  CHECK(run(o, "top(c)\n", "q() := A(x)\nq() := B(x)\n", {}).entailed);
}

TEST_CASE("countermodel may need an anonymous witness element") {
  auto out = run("A <= <r>.B\n", "A(c)\n", "q(x) := B(x)\n", {"c"});
  CHECK_FALSE(out.entailed);
  CHECK(out.countermodel_extra == 1);
}

TEST_CASE("unsatisfiable ontology entails everything vacuously") {
  CHECK(run("top <= bot\n", "A(c)\n", "q(x) := B(x)\n", {"c"}).entailed);
}

TEST_CASE("marker reduction to Boolean queries preserves verdicts") {
  struct Case {
    const char* onto;
    const char* db;
    const char* query;
    std::vector<std::string> cand;
  } cases[] = {
      {"A <= B\n", "A(c)\nr(c,d)\n", "q(x) := B(x)\n", {"c"}},
      {"", "r(c,d)\n", "q(x,y) := r(x,y)\n", {"c", "d"}},
      {"", "r(c,d)\n", "q(x,y) := r(x,y)\n", {"c", "c"}},
      {"", "r(c,c)\n", "q(x,y) := r(x,y)\n", {"c", "c"}},
      {"A <= <r>.B\n", "A(c)\n", "q(x) := r(x,y), B(y)\n", {"c"}},
  };
  for (auto& tc : cases) {
    CAPTURE(tc.query);
    Ontology o = parse_ontology(tc.onto);
    Database d = parse_database(tc.db);
    UCQ q = parse_query(tc.query);
    auto direct = finite_model_oracle(o, d, q, tc.cand);
    Booleanized bq = booleanize(q, tc.cand, d);
    auto reduced = finite_model_oracle(o, bq.db, bq.query, {});
    CHECK(direct.entailed == reduced.entailed);
  }
}

TEST_CASE("standard translation preserves certain answers") {
  struct Case {
    const char* onto;
    const char* db;
    const char* query;
    std::vector<std::string> cand;
  } cases[] = {
      {"A <= B\n", "A(c)\n", "q(x) := B(x)\n", {"c"}},
      {"A <= <r>.B\n", "A(c)\n", "q() := B(x)\n", {}},
      {"A <= [r-].B\n", "A(b)\nr(a,b)\n", "q(x) := B(x)\n", {"a"}},
      {"A <= [r].B\nB <= C\n", "A(a)\nr(a,b)\n", "q(x) := C(x)\n", {"b"}},
      {"top <= (A | B)\n", "top(c)\n", "q() := A(x)\nq() := B(x)\n", {}},
  };
  for (auto& tc : cases) {
    CAPTURE(tc.query);
    Ontology o = parse_ontology(tc.onto);
    Database d = parse_database(tc.db);
    UCQ q = parse_query(tc.query);
    auto dl = finite_model_oracle(o, d, q, tc.cand);
    auto gf = finite_model_oracle(alci_to_gf2(o), d, q, tc.cand);
    CHECK(dl.entailed == gf.entailed);
  }
}

TEST_CASE("node budget is enforced") {
  OracleOptions opts;
  opts.node_budget = 5;
  Ontology o = parse_ontology("A <= (B | <r>.A)\n");
  Database d = parse_database("A(c)\nA(d)\nr(c,d)\n");
  UCQ q = parse_query("q(x) := B(x)\n");
  CHECK_THROWS_AS(finite_model_oracle(o, d, q, {"c"}, opts), BudgetError);
}

TEST_CASE("candidate validation") {
  Ontology o = parse_ontology("");
  Database d = parse_database("A(c)\n");
  UCQ q = parse_query("q(x) := A(x)\n");
  CHECK_THROWS_AS(finite_model_oracle(o, d, q, {"zz"}, {}), ValidationError);
  CHECK_THROWS_AS(finite_model_oracle(o, d, q, {"c", "c"}, {}),
                  ValidationError);
}

TEST_CASE("random small instances terminate and are deterministic") {
  std::mt19937 rng(20240817);
  const char* shapes[] = {
      "A <= B\n",
      "A <= <r>.B\n",
      "B <= [r].A\n",
      "top <= (A | B)\n",
      "A <= <r->.B\nB <= A\n",
  };
  for (int i = 0; i < 12; ++i) {
    std::string onto = shapes[rng() % 5];
    if (rng() % 2) onto += shapes[rng() % 5];
    Database d;
    const char* cs[] = {"c0", "c1", "c2"};
    for (int f = 0; f < 3; ++f) {
      int kind = rng() % 3;
      if (kind == 0)
        d.add_fact("A", cs[rng() % 3]);
      else if (kind == 1)
        d.add_fact("B", cs[rng() % 3]);
      else
        d.add_fact("r", cs[rng() % 3], cs[rng() % 3]);
    }
    UCQ q = parse_query(rng() % 2 ? "q(x) := A(x)\n" : "q(x) := B(x), r(x,y)\n");
    std::string cand = cs[rng() % 3];
    if (!d.has_const(cand)) d.add_const(cand);
    Ontology o = parse_ontology(onto);
    auto a = finite_model_oracle(o, d, q, {cand});
    auto b = finite_model_oracle(o, d, q, {cand});
    CHECK(a.entailed == b.entailed);
  }
}
