#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "omq/errors.hpp"
#include "omq/interp.hpp"
#include "omq/parser.hpp"
#include "omq/typesys_alci.hpp"

using namespace omq;

namespace {

ClosureAlci close(const std::string& onto_text) {
  Ontology o = parse_ontology(onto_text);
  return closure_alci(normalize(o));
}

Bits tp_of(const ClosureAlci& cx, const Interp& I, std::size_t e) {
  Bits t(cx.size());
  for (std::size_t i = 0; i < cx.size(); ++i)
    t.set(i, eval_concept(I, cx.cl[i], e));
  return t;
}

// Types realized by some element of some model of O, enumerating every
// interpretation over at most max_n elements and the closure's signature.
std::set<Bits> realized_types(const ClosureAlci& cx, std::size_t max_n) {
  std::set<Bits> out;
  const auto& names = cx.concept_names;
  const auto& roles = cx.role_names;
  for (std::size_t n = 1; n <= max_n; ++n) {
    std::size_t ubits = names.size() * n;
    std::size_t bbits = roles.size() * n * n;
    REQUIRE(ubits + bbits <= 22);
    for (std::uint64_t m = 0; m < (1ull << (ubits + bbits)); ++m) {
      Interp I(n);
      std::uint64_t v = m;
      for (auto& p : names)
        for (std::size_t e = 0; e < n; ++e, v >>= 1)
          if (v & 1) I.upred(p).set(e);
      for (auto& r : roles)
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b, v >>= 1)
            if (v & 1) I.bpred(r).set(a * n + b);
      bool model = true;
      for (std::size_t e = 0; e < n && model; ++e)
        model = eval_concept(I, cx.cl[cx.c_o_idx], e);
      if (!model) continue;
      for (std::size_t e = 0; e < n; ++e) out.insert(tp_of(cx, I, e));
    }
  }
  return out;
}

bool contains(const ClosureAlci& cx, const Bits& t, const Concept& c) {
  int i = cx.idx(nnf(c));
  REQUIRE(i >= 0);
  return t.get(i);
}

}  // namespace

TEST_CASE("unsatisfiable ontology has no types") {
  ClosureAlci cx = close("top <= bot\n");
  CHECK(alci_type_candidates(cx).empty());
  CHECK(alci_types(cx).empty());
  AlciTypeOracle oracle(cx);
  CHECK_FALSE(oracle.sat_extend({}, {}));
}

TEST_CASE("forced concept name appears in every type") {
  ClosureAlci cx = close("top <= A\n");
  auto types = alci_types(cx);
  REQUIRE(types.size() == 1);
  CHECK(contains(cx, types[0], c_name("A")));
  CHECK_FALSE(contains(cx, types[0], c_not(c_name("A"))));
  auto real = realized_types(cx, 2);
  CHECK(types == std::vector<Bits>(real.begin(), real.end()));
}

TEST_CASE("existential obligations prune candidate types") {
  // Every element satisfies ~A or has an r-successor in A.
  ClosureAlci cx = close("top <= (~A | <r>.A)\n");
  auto types = alci_types(cx);
  REQUIRE(types.size() == 3);
  for (auto& t : types) {
    bool a = contains(cx, t, c_name("A"));
    bool e = contains(cx, t, c_exists(Role("r"), c_name("A")));
    CHECK((!a || e));  // A forces the witness obligation
  }
  auto real = realized_types(cx, 3);
  CHECK(std::set<Bits>(types.begin(), types.end()) == real);
}

TEST_CASE("universal constraints across inverse roles eliminate types") {
  // A-elements need a B-successor; B implies C; C forces all r-predecessors
  // into D. Hence any surviving type with A also carries D.
  ClosureAlci cx = close(
      "A <= <r>.B\n"
      "B <= C\n"
      "C <= [r-].D\n");
  auto types = alci_types(cx);
  REQUIRE(!types.empty());
  int with_a = 0;
  for (auto& t : types) {
    if (contains(cx, t, c_name("A"))) {
      ++with_a;
      CHECK(contains(cx, t, c_name("D")));
    }
  }
  CHECK(with_a > 0);
}

TEST_CASE("cyclic witnessing is accepted") {
  ClosureAlci cx = close("A <= <r>.A\n");
  auto types = alci_types(cx);
  bool some_a = false;
  for (auto& t : types) some_a = some_a || contains(cx, t, c_name("A"));
  CHECK(some_a);
  AlciTypeOracle oracle(cx);
  CHECK(oracle.sat_extend({cx.idx(c_name("A"))}, {}));
}

TEST_CASE("unsatisfiable witness body kills the requiring type") {
  ClosureAlci cx = close("A <= <r>.(A & ~A)\n");
  auto types = alci_types(cx);
  REQUIRE(!types.empty());
  for (auto& t : types) CHECK_FALSE(contains(cx, t, c_name("A")));
  AlciTypeOracle oracle(cx);
  CHECK_FALSE(oracle.sat_extend({cx.idx(c_name("A"))}, {}));
  CHECK(oracle.sat_extend({}, {}));
}

TEST_CASE("lazy oracle agrees with materialized elimination") {
  const char* ontologies[] = {
      "top <= bot\n",
      "top <= A\n",
      "top <= (~A | <r>.A)\n",
      "A <= <r>.B\nB <= C\nC <= [r-].D\n",
      "A <= <r>.A\n",
      "A <= <r>.(A & ~A)\n",
      "A <= [r].B\nB <= [r-].~A\ntop <= (A | B)\n",
  };
  for (const char* text : ontologies) {
    CAPTURE(text);
    ClosureAlci cx = close(text);
    auto cands = alci_type_candidates(cx);
    auto types = alci_types(cx);
    std::set<Bits> surviving(types.begin(), types.end());
    AlciTypeOracle oracle(cx);
    for (auto& c : cands) {
      CAPTURE(type_concept_strings(cx, c));
      CHECK(oracle.realizable(c) == (surviving.count(c) > 0));
    }
    CHECK(oracle.sat_extend({}, {}) == !types.empty());
  }
}

TEST_CASE("constrained satisfiability honors positive and negative bits") {
  ClosureAlci cx = close("top <= (~A | <r>.A)\n");
  AlciTypeOracle oracle(cx);
  int a = cx.idx(c_name("A"));
  int e = cx.idx(c_exists(Role("r"), c_name("A")));
  REQUIRE(a >= 0);
  REQUIRE(e >= 0);
  CHECK(oracle.sat_extend({a}, {}));
  CHECK(oracle.sat_extend({}, {a}));
  CHECK_FALSE(oracle.sat_extend({a}, {e}));
  CHECK(oracle.sat_extend({e}, {a}));
}

TEST_CASE("candidate validity rejects broken bit patterns") {
  ClosureAlci cx = close("top <= (~A | <r>.A)\n");
  auto cands = alci_type_candidates(cx);
  REQUIRE(!cands.empty());
  for (auto& c : cands) CHECK(type_candidate_valid(cx, c));
  Bits broken = cands[0];
  int a = cx.idx(c_name("A"));
  int na = cx.neg[a];
  broken.set(a, broken.get(na));  // both poles equal
  CHECK_FALSE(type_candidate_valid(cx, broken));
  AlciTypeOracle oracle(cx);
  CHECK_FALSE(oracle.realizable(broken));
}

TEST_CASE("leaf payload checks follow the type") {
  ClosureAlci cx = close("top <= ([r].B | B)\n");
  auto types = alci_types(cx);
  REQUIRE(!types.empty());
  auto pick = [&](bool want_b, bool want_all) -> Bits {
    for (auto& t : types)
      if (contains(cx, t, c_name("B")) == want_b &&
          contains(cx, t, c_forall(Role("r"), c_name("B"))) == want_all)
        return t;
    REQUIRE(false);
    return Bits();
  };
  Bits t_b = pick(true, false);     // B holds, no universal constraint
  Bits t_all = pick(false, true);   // [r].B holds, B does not

  // Missing payload concept name.
  CHECK_FALSE(type_realizes_leaf(cx, t_all, {"B"}, {}));
  CHECK(type_realizes_leaf(cx, t_b, {"B"}, {}));
  // Self-loop feeding a universal constraint whose body the type lacks.
  CHECK_FALSE(type_realizes_leaf(cx, t_all, {}, {"r"}));
  CHECK(type_realizes_leaf(cx, t_b, {}, {"r"}));
  // Names outside the closure never disqualify; neither do top or labels.
  CHECK(type_realizes_leaf(cx, t_all, {"Zebra", "top", "L1"}, {}));
  CHECK(type_realizes_leaf(cx, t_all, {}, {"s"}));

  Database leaf;
  leaf.add_fact("B", "c");
  leaf.add_fact("r", "c", "c");
  CHECK_FALSE(type_realizes_leaf(cx, t_all, leaf));

  Database two;
  two.add_fact("B", "c");
  two.add_fact("B", "d");
  CHECK_THROWS_AS(type_realizes_leaf(cx, t_b, two), ValidationError);
}

TEST_CASE("inverse universal constraint applies to self-loops") {
  ClosureAlci cx = close("top <= ([r-].B | B)\n");
  auto types = alci_types(cx);
  for (auto& t : types) {
    if (contains(cx, t, c_forall(Role("r", true), c_name("B"))) &&
        !contains(cx, t, c_name("B")))
      CHECK_FALSE(type_realizes_leaf(cx, t, {}, {"r"}));
  }
}

TEST_CASE("type dump is sorted and round-trips membership") {
  ClosureAlci cx = close("top <= A\n");
  auto types = alci_types(cx);
  REQUIRE(types.size() == 1);
  auto strs = type_concept_strings(cx, types[0]);
  CHECK(std::is_sorted(strs.begin(), strs.end()));
  CHECK(std::find(strs.begin(), strs.end(), "A") != strs.end());
  CHECK(std::find(strs.begin(), strs.end(), "top") != strs.end());
  CHECK(std::find(strs.begin(), strs.end(), "~A") == strs.end());
}

TEST_CASE("small model enumeration matches elimination exactly") {
  // Mutual obligations across a role and its inverse.
  ClosureAlci cx = close(
      "A <= <r>.B\n"
      "B <= <r->.A\n");
  auto types = alci_types(cx);
  auto real = realized_types(cx, 3);
  CHECK(std::set<Bits>(types.begin(), types.end()) == real);
}
