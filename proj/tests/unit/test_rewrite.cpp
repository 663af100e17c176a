#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "omq/oracle.hpp"
#include "omq/parser.hpp"
#include "omq/rewrite.hpp"

using namespace omq;

namespace {

CQ make_cq(int nvars, std::vector<QAtom> atoms, std::vector<int> ans = {}) {
  CQ q;
  for (int i = 0; i < nvars; ++i) q.var_names.push_back("x" + std::to_string(i));
  q.atoms = std::move(atoms);
  q.answer_vars = std::move(ans);
  return q;
}

std::set<std::string> key_set(const std::vector<TreeCQ>& ts) {
  std::set<std::string> out;
  for (const TreeCQ& t : ts) out.insert(cq_key(t.cq));
  return out;
}

Interp restrict_interp(const Interp& I, std::size_t m) {
  Interp J(m);
  for (const auto& [p, bits] : I.unary) {
    for (std::size_t e = 0; e < m; ++e)
      if (bits.get(e)) J.upred(p).set(e);
  }
  for (const auto& [p, bits] : I.binary) {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        if (bits.get(a * I.n + b)) J.bpred(p).set(a * m + b);
  }
  return J;
}

}  // namespace

TEST_CASE("rooted tree concept translation matches the worked example") {
  // p(x) = {A(x), r(y,x), s(y,z), B(z), r(y,z'), A(z')} rooted at x
  // translates to A and some r-.(some s.B and some r.A).
  TreeCQ t;
  t.cq = make_cq(4, {{"A", 0, -1},
                     {"r", 1, 0},
                     {"s", 1, 2},
                     {"B", 2, -1},
                     {"r", 1, 3},
                     {"A", 3, -1}},
                 {0});
  t.root = 0;
  Concept got = concept_of(t);
  Concept expect = c_and(
      c_name("A"),
      c_exists(Role("r", true),
               c_and(c_exists(Role("s"), c_name("B")),
                     c_exists(Role("r"), c_name("A")))));
  CHECK(concept_eq(got, expect));
}

TEST_CASE("tree formula translation matches the worked example") {
  // p(x) = {r(x,x), r(x,y), s(y,x), r(y,z), A(z)} translates to
  // r(x,x) and exists y (r(x,y) and s(y,x) and exists x (r(y,x) and A(x))).
  TreeCQ t;
  t.cq = make_cq(3, {{"r", 0, 0},
                     {"r", 0, 1},
                     {"s", 1, 0},
                     {"r", 1, 2},
                     {"A", 2, -1}},
                 {0});
  t.root = 0;
  Gf2 got = formula_of(t);
  Gf2 inner = g_exists(1, g_atom("r", {Var::Y, Var::X}),
                       g_atom("A", {Var::X}));
  Gf2 expect = g_and(
      g_atom("r", {Var::X, Var::X}),
      g_exists(2, g_atom("r", {Var::X, Var::Y}),
               g_and(g_atom("s", {Var::Y, Var::X}), inner)));
  CHECK(gf2_eq(got, expect));
  CHECK(got->free_mask() == 1);

  TreeCQ boolean = t;
  boolean.cq.answer_vars.clear();
  boolean.root = -1;
  Gf2 closed = formula_of(boolean);
  CHECK(closed->free_mask() == 0);
  CHECK(gf2_eq(closed, g_exists(1, g_eq(Var::X, Var::X), expect)));
}

TEST_CASE("tree discipline checks") {
  CQ loop = make_cq(1, {{"r", 0, 0}});
  CHECK(!is_tree_cq(loop, TreeVariant::Simple));
  CHECK(is_tree_cq(loop, TreeVariant::Loops));

  CQ parallel = make_cq(2, {{"r", 0, 1}, {"s", 0, 1}});
  CHECK(!is_tree_cq(parallel, TreeVariant::Simple));
  CHECK(is_tree_cq(parallel, TreeVariant::Loops));

  CQ both_ways = make_cq(2, {{"r", 0, 1}, {"r", 1, 0}});
  CHECK(!is_tree_cq(both_ways, TreeVariant::Simple));
  CHECK(is_tree_cq(both_ways, TreeVariant::Loops));

  CQ path = make_cq(3, {{"r", 0, 1}, {"r", 1, 2}});
  CHECK(is_tree_cq(path, TreeVariant::Simple));
  CQ cycle = make_cq(3, {{"r", 0, 1}, {"r", 1, 2}, {"r", 2, 0}});
  CHECK(!is_tree_cq(cycle, TreeVariant::Simple));
  CHECK(!is_tree_cq(cycle, TreeVariant::Loops));

  CQ single = make_cq(1, {{"A", 0, -1}});
  CHECK(is_tree_cq(single, TreeVariant::Simple));
  CQ disconnected = make_cq(2, {{"A", 0, -1}, {"B", 1, -1}});
  CHECK(!is_tree_cq(disconnected, TreeVariant::Simple));
}

TEST_CASE("edge query trees") {
  UCQ q = parse_query("q() := r(x,y)");
  auto simple = enumerate_trees(q, TreeVariant::Simple);
  // The edge rooted at the source, at the target, and boolean (keeping
  // nothing); the self-loop contraction never hangs off a kept variable.
  CHECK(simple.size() == 3);
  auto loops = enumerate_trees(q, TreeVariant::Loops);
  // Additionally the boolean self-loop part from the contraction with an
  // empty kept set.
  CHECK(loops.size() == 4);
  CQ loop_cq = make_cq(1, {{"r", 0, 0}});
  CHECK(key_set(loops).count(cq_key(cq_canonical_form(loop_cq))));
  CHECK(!key_set(simple).count(cq_key(cq_canonical_form(loop_cq))));
}

TEST_CASE("parallel atoms only pass the loops discipline") {
  UCQ q = parse_query("q() := r(x,y), s(x,y)");
  auto simple = enumerate_trees(q, TreeVariant::Simple);
  // Every part containing only one of the two atoms would drop the other
  // one between the same variables, so no split with a hanging part is
  // admissible under the simple discipline.
  CHECK(simple.size() == 0);
  auto loops = enumerate_trees(q, TreeVariant::Loops);
  // Both atoms as one part: two roots plus boolean, plus the boolean
  // double self-loop from the contraction.
  CHECK(loops.size() == 4);
}

TEST_CASE("path query trees deduplicate the shared edge") {
  UCQ q = parse_query("q() := r(x,y), r(y,z)");
  auto simple = enumerate_trees(q, TreeVariant::Simple);
  // Single edge rooted at its source and at its target (hanging off either
  // end of the path), the full path rooted at each variable, and the full
  // path boolean.
  CHECK(simple.size() == 6);
}

TEST_CASE("split form of the path query") {
  UCQ q = parse_query("q() := r(x,y), r(y,z)");
  TreeIndex ix = index_trees(q, TreeVariant::Simple);
  UCQ qh = build_qhat(q, ix);

  std::set<std::string> keys;
  for (const CQ& cq : qh.cqs) keys.insert(cq_key(cq));

  // The query itself survives via the identity contraction with all
  // variables kept.
  CQ path = make_cq(3, {{"r", 0, 1}, {"r", 1, 2}});
  CHECK(keys.count(cq_key(cq_canonical_form(path))));

  // Keeping only the middle variable folds the whole path into a single
  // class atom for the middle-rooted tree.
  CQ mid = make_cq(3, {{"r", 0, 1}, {"r", 1, 2}}, {1});
  int mid_cls = ix.find(cq_canonical_form(mid));
  REQUIRE(mid_cls >= 0);
  CQ folded = make_cq(1, {{ix.classes[mid_cls].cls, 0, -1}});
  CHECK(keys.count(cq_key(cq_canonical_form(folded))));

  // Keeping nothing folds the path into the boolean class on a fresh
  // variable.
  CQ path_bool = make_cq(3, {{"r", 0, 1}, {"r", 1, 2}});
  int bool_cls = ix.find(cq_canonical_form(path_bool));
  REQUIRE(bool_cls >= 0);
  CQ all_folded = make_cq(1, {{ix.classes[bool_cls].cls, 0, -1}});
  CHECK(keys.count(cq_key(cq_canonical_form(all_folded))));

  // Identifying the endpoints yields the disjunct asking for both edge
  // directions inside the database.
  CQ both = make_cq(2, {{"r", 0, 1}, {"r", 1, 0}});
  CHECK(keys.count(cq_key(cq_canonical_form(both))));

  // Hand count over all contractions and kept sets.
  CHECK(qh.cqs.size() == 13);
}

TEST_CASE("split form matches a direct generator on random queries") {
  std::mt19937 rng(20240821u);
  const std::vector<std::string> roles = {"r", "s"};
  const std::vector<std::string> names = {"A", "B"};
  for (int iter = 0; iter < 40; ++iter) {
    int nv = 2 + static_cast<int>(rng() % 2);
    int na = 1 + static_cast<int>(rng() % 3);
    CQ cq;
    for (int i = 0; i < nv; ++i)
      cq.var_names.push_back("x" + std::to_string(i));
    for (int i = 0; i < na; ++i) {
      if (rng() % 3 == 0) {
        cq.atoms.push_back(
            {names[rng() % names.size()], static_cast<int>(rng() % nv), -1});
      } else {
        cq.atoms.push_back({roles[rng() % roles.size()],
                            static_cast<int>(rng() % nv),
                            static_cast<int>(rng() % nv)});
      }
    }
    std::sort(cq.atoms.begin(), cq.atoms.end());
    cq.atoms.erase(std::unique(cq.atoms.begin(), cq.atoms.end()),
                   cq.atoms.end());
    UCQ q;
    q.cqs.push_back(cq);
    TreeVariant v = iter % 2 ? TreeVariant::Loops : TreeVariant::Simple;
    TreeIndex ix = index_trees(q, v);
    UCQ qh = build_qhat(q, ix);
    std::set<std::string> got;
    for (const CQ& d : qh.cqs) got.insert(cq_key(d));

    // Direct generator: every total map of variables, every kept subset,
    // components grown by brute-force closure.
    std::set<std::string> want;
    int n = static_cast<int>(cq.nvars());
    std::vector<int> f(n, 0);
    while (true) {
      // normalize the map image to block ids
      std::vector<int> to(n, -1);
      int nb = 0;
      std::vector<int> m2(n);
      for (int i = 0; i < n; ++i) {
        if (to[f[i]] < 0) to[f[i]] = nb++;
        m2[i] = to[f[i]];
      }
      CQ p;
      for (int i = 0; i < nb; ++i)
        p.var_names.push_back("x" + std::to_string(i));
      for (const QAtom& at : cq.atoms) {
        QAtom b{at.pred, m2[at.a], at.unary() ? -1 : m2[at.b]};
        p.atoms.push_back(b);
      }
      std::sort(p.atoms.begin(), p.atoms.end());
      p.atoms.erase(std::unique(p.atoms.begin(), p.atoms.end()),
                    p.atoms.end());
      for (std::uint32_t smask = 0; smask < (1u << nb); ++smask) {
        auto in_s = [&](int x) { return (smask >> x & 1u) != 0; };
        // components: repeated closure over surviving role atoms
        std::vector<int> comp(nb);
        for (int i = 0; i < nb; ++i) comp[i] = i;
        bool changed = true;
        while (changed) {
          changed = false;
          for (const QAtom& at : p.atoms) {
            if (at.unary() || (in_s(at.a) && in_s(at.b))) continue;
            int lo = std::min(comp[at.a], comp[at.b]);
            if (comp[at.a] != lo || comp[at.b] != lo) {
              for (int i = 0; i < nb; ++i)
                if (comp[i] == comp[at.a] || comp[i] == comp[at.b])
                  comp[i] = lo;
              changed = true;
            }
          }
        }
        bool ok = true;
        std::vector<QAtom> out_atoms;
        for (const QAtom& at : p.atoms) {
          if (at.unary() ? in_s(at.a) : (in_s(at.a) && in_s(at.b)))
            out_atoms.push_back(at);
        }
        int fresh = nb;  // fresh variable ids beyond the kept ones
        for (int c = 0; c < nb && ok; ++c) {
          std::vector<int> vs;
          for (int i = 0; i < nb; ++i)
            if (comp[i] == c) vs.push_back(i);
          if (vs.empty()) continue;
          int kept = -1, nkept = 0, nout = 0;
          for (int x : vs) {
            if (in_s(x)) {
              ++nkept;
              kept = x;
            } else {
              ++nout;
            }
          }
          if (nout == 0) continue;
          if (nkept > 1) {
            ok = false;
            break;
          }
          std::vector<int> local(nb, -1);
          int ln = 0;
          for (int x : vs) local[x] = ln++;
          CQ part;
          for (int i = 0; i < ln; ++i)
            part.var_names.push_back("x" + std::to_string(i));
          for (const QAtom& at : p.atoms) {
            if (at.unary()) {
              if (local[at.a] >= 0)
                part.atoms.push_back({at.pred, local[at.a], -1});
            } else if (!(in_s(at.a) && in_s(at.b)) && local[at.a] >= 0 &&
                       local[at.b] >= 0) {
              part.atoms.push_back({at.pred, local[at.a], local[at.b]});
            }
          }
          if (!is_tree_cq(part, v)) {
            ok = false;
            break;
          }
          if (kept >= 0) part.answer_vars = {local[kept]};
          int cls = ix.find(cq_canonical_form(part));
          REQUIRE(cls >= 0);
          out_atoms.push_back(
              {ix.classes[cls].cls, kept >= 0 ? kept : fresh++, -1});
        }
        if (!ok) continue;
        // compress variable ids
        std::vector<int> newid(fresh, -1);
        int nn = 0;
        for (QAtom& at : out_atoms) {
          if (newid[at.a] < 0) newid[at.a] = nn++;
          if (!at.unary() && newid[at.b] < 0) newid[at.b] = nn++;
        }
        CQ out;
        for (int i = 0; i < nn; ++i)
          out.var_names.push_back("x" + std::to_string(i));
        for (const QAtom& at : out_atoms)
          out.atoms.push_back(
              {at.pred, newid[at.a], at.unary() ? -1 : newid[at.b]});
        want.insert(cq_key(cq_canonical_form(out)));
      }
      int i = n - 1;
      for (; i >= 0; --i) {
        if (f[i] + 1 < n) {
          ++f[i];
          std::fill(f.begin() + i + 1, f.end(), 0);
          break;
        }
      }
      if (i < 0) break;
    }
    CAPTURE(iter);
    CAPTURE(cq.to_string());
    CHECK(got == want);
  }
}

TEST_CASE("the marked query survives in its split form") {
  std::mt19937 rng(20240822u);
  for (int iter = 0; iter < 10; ++iter) {
    int nv = 1 + static_cast<int>(rng() % 3);
    CQ cq;
    for (int i = 0; i < nv; ++i)
      cq.var_names.push_back("x" + std::to_string(i));
    int na = 1 + static_cast<int>(rng() % 2);
    for (int i = 0; i < na; ++i) {
      if (rng() % 2) {
        cq.atoms.push_back({"A", static_cast<int>(rng() % nv), -1});
      } else {
        cq.atoms.push_back({"r", static_cast<int>(rng() % nv),
                            static_cast<int>(rng() % nv)});
      }
    }
    std::sort(cq.atoms.begin(), cq.atoms.end());
    cq.atoms.erase(std::unique(cq.atoms.begin(), cq.atoms.end()),
                   cq.atoms.end());
    UCQ q;
    q.cqs.push_back(cq);
    Ontology o;
    RewriteBundle b = build_rewrite_bundle(o, q, TreeVariant::Simple);
    std::set<std::string> keys;
    for (const CQ& d : b.qhat.cqs) keys.insert(cq_key(d));
    for (const CQ& m : b.q_marked.cqs) {
      CAPTURE(m.to_string());
      CHECK(keys.count(cq_canonical_key(m)));
    }
  }
}

TEST_CASE("extended ontology ties classes to their concepts") {
  Ontology o = parse_ontology("A <= [r].B\n");
  UCQ q = parse_query("q() := A(x)");
  RewriteBundle b = build_rewrite_bundle(o, q, TreeVariant::Simple);

  // Marker inclusion top <= @top.
  bool top_ci = false;
  for (const CI& ci : b.omega.cis)
    if (ci.lhs->tag == CTag::Top && concept_eq(ci.rhs, c_name(b.top_name)))
      top_ci = true;
  CHECK(top_ci);

  // The only class is the boolean marked singleton {@top(x), A(x)}: the
  // split keeping nothing folds it, while keeping x leaves no hanging
  // part. It gets a witness role, the backward inclusion and propagation.
  REQUIRE(b.trees.classes.size() == 1);
  CQ single_bool = make_cq(1, {{b.top_name, 0, -1}, {"A", 0, -1}});
  int bcls = b.trees.find(cq_canonical_form(single_bool));
  REQUIRE(bcls >= 0);
  const TreeClass& tb = b.trees.classes[bcls];
  REQUIRE(!tb.role.empty());
  Concept bname = c_name(tb.cls);
  Concept cform = c_and({c_name(b.top_name), c_name("A")});
  bool witness = false, back = false, prop_r = false, prop_link = false;
  for (const CI& ci : b.omega.cis) {
    if (concept_eq(ci.lhs, bname) &&
        concept_eq(ci.rhs, c_exists(Role(tb.role), cform)))
      witness = true;
    if (concept_eq(ci.lhs, cform) && concept_eq(ci.rhs, bname)) back = true;
    if (concept_eq(ci.rhs, bname) && ci.lhs->tag == CTag::Exists &&
        concept_eq(ci.lhs->kids[0], bname)) {
      if (ci.lhs->role == Role("r")) prop_r = true;
      if (ci.lhs->role == Role(tb.role)) prop_link = true;
    }
  }
  CHECK(witness);
  CHECK(back);
  CHECK(prop_r);
  CHECK(prop_link);

  // A query with an edge also produces rooted classes, tied to their
  // concepts by inclusions in both directions.
  UCQ q2 = parse_query("q() := A(x), r(x,y)");
  RewriteBundle b2 = build_rewrite_bundle(o, q2, TreeVariant::Simple);
  CQ rooted = make_cq(2,
                      {{b2.top_name, 0, -1},
                       {"A", 0, -1},
                       {"r", 0, 1},
                       {b2.top_name, 1, -1}},
                      {0});
  int rcls = b2.trees.find(cq_canonical_form(rooted));
  REQUIRE(rcls >= 0);
  Concept rname = c_name(b2.trees.classes[rcls].cls);
  Concept rform = c_and({c_name(b2.top_name), c_name("A"),
                         c_exists(Role("r"), c_name(b2.top_name))});
  bool fwd = false, bwd = false;
  for (const CI& ci : b2.omega.cis) {
    if (concept_eq(ci.lhs, rname) && concept_eq(ci.rhs, rform)) fwd = true;
    if (concept_eq(ci.lhs, rform) && concept_eq(ci.rhs, rname)) bwd = true;
  }
  CHECK(fwd);
  CHECK(bwd);
}

TEST_CASE("sizes stay within the envelopes") {
  std::mt19937 rng(20240823u);
  const std::vector<std::string> roles = {"r", "s", "t"};
  const std::vector<std::string> names = {"A", "B"};
  Ontology o = parse_ontology("A <= <r>.B\nB <= (A | ~A)\n");
  double osz = static_cast<double>(o.size());
  for (int iter = 0; iter < 12; ++iter) {
    int nv = 2 + static_cast<int>(rng() % 3);
    int na = 1 + static_cast<int>(rng() % 5);
    CQ cq;
    for (int i = 0; i < nv; ++i)
      cq.var_names.push_back("x" + std::to_string(i));
    for (int i = 0; i < na; ++i) {
      if (rng() % 4 == 0) {
        cq.atoms.push_back(
            {names[rng() % names.size()], static_cast<int>(rng() % nv), -1});
      } else {
        cq.atoms.push_back({roles[rng() % roles.size()],
                            static_cast<int>(rng() % nv),
                            static_cast<int>(rng() % nv)});
      }
    }
    std::sort(cq.atoms.begin(), cq.atoms.end());
    cq.atoms.erase(std::unique(cq.atoms.begin(), cq.atoms.end()),
                   cq.atoms.end());
    UCQ q;
    q.cqs.push_back(cq);
    RewriteBundle b = build_rewrite_bundle(o, q, TreeVariant::Simple);

    double nq = 0, max_atoms = 0;
    for (const CQ& d : b.q_marked.cqs) {
      nq += static_cast<double>(d.atoms.size());
      max_atoms = std::max(max_atoms, static_cast<double>(d.atoms.size()));
    }
    CAPTURE(iter);
    CAPTURE(cq.to_string());

    // Disjunct count of the split form: at most |q| * |q|^|q| * 2^|q|.
    double bound = nq * std::pow(nq, nq) * std::pow(2.0, nq);
    CHECK(static_cast<double>(b.qhat.cqs.size()) <= bound);

    // Every disjunct stays within the atom count of its source.
    for (const CQ& d : b.qhat.cqs)
      CHECK(static_cast<double>(d.atoms.size()) <= max_atoms);

    // Ontology size envelope |O| * 2^(c * |q| log |q|).
    double envelope =
        std::max(osz, 1.0) *
        std::pow(2.0, 10.0 * nq * std::log2(std::max(nq, 2.0)));
    CHECK(static_cast<double>(b.omega.size()) <= envelope);
  }
}

TEST_CASE("bundles are deterministic") {
  Ontology o = parse_ontology("A <= <r>.B\n");
  UCQ q = parse_query("q() := A(x), r(x,y)");
  RewriteBundle b1 = build_rewrite_bundle(o, q, TreeVariant::Simple);
  RewriteBundle b2 = build_rewrite_bundle(o, q, TreeVariant::Simple);
  REQUIRE(b1.trees.classes.size() == b2.trees.classes.size());
  for (std::size_t i = 0; i < b1.trees.classes.size(); ++i) {
    CHECK(b1.trees.classes[i].cls == b2.trees.classes[i].cls);
    CHECK(cq_key(b1.trees.classes[i].tree.cq) ==
          cq_key(b2.trees.classes[i].tree.cq));
  }
  CHECK(b1.omega.size() == b2.omega.size());
  REQUIRE(b1.qhat.cqs.size() == b2.qhat.cqs.size());
  for (std::size_t i = 0; i < b1.qhat.cqs.size(); ++i)
    CHECK(cq_key(b1.qhat.cqs[i]) == cq_key(b2.qhat.cqs[i]));
  CHECK(b1.subqueries.size() == b2.subqueries.size());
}

TEST_CASE("subquery universe covers disjuncts and their unions") {
  Ontology o;
  UCQ q = parse_query("q() := A(x), r(x,y)");
  RewriteBundle b = build_rewrite_bundle(o, q, TreeVariant::Simple);
  REQUIRE(!b.subqueries.empty());
  // Every full disjunct appears and is marked full.
  for (const CQ& d : b.qhat.cqs) {
    std::vector<QAtom> atoms = d.atoms;
    std::sort(atoms.begin(), atoms.end());
    int id = b.subquery_find(atoms);
    REQUIRE(id >= 0);
    CHECK(b.subqueries[id].full);
  }
  // Unions of variable-disjoint subqueries of one disjunct are present.
  int checked = 0;
  for (std::size_t i = 0; i < b.subqueries.size(); ++i) {
    for (std::size_t j = i + 1; j < b.subqueries.size(); ++j) {
      const SubQuery& s1 = b.subqueries[i];
      const SubQuery& s2 = b.subqueries[j];
      std::vector<int> inter;
      std::set_intersection(s1.vars.begin(), s1.vars.end(), s2.vars.begin(),
                            s2.vars.end(), std::back_inserter(inter));
      if (!inter.empty()) continue;
      std::vector<QAtom> u = s1.atoms;
      u.insert(u.end(), s2.atoms.begin(), s2.atoms.end());
      std::sort(u.begin(), u.end());
      u.erase(std::unique(u.begin(), u.end()), u.end());
      // The union need not be a subquery in general; when both parts come
      // from the same disjunct it must be.
      for (const CQ& d : b.qhat.cqs) {
        std::vector<QAtom> atoms = d.atoms;
        std::sort(atoms.begin(), atoms.end());
        if (std::includes(atoms.begin(), atoms.end(), u.begin(), u.end())) {
          CHECK(b.subquery_find(u) >= 0);
          ++checked;
          break;
        }
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("rewriting preserves entailment on small instances") {
  struct Sample {
    const char* onto;
    const char* query;
    const char* db;
  };
  const std::vector<Sample> samples = {
      {"", "q() := A(x)", "A(c)\n"},
      {"", "q() := A(x)", "B(c)\n"},
      {"A <= B\n", "q() := B(x)", "A(c)\n"},
      {"A <= <r>.B\n", "q() := r(x,y)", "A(c)\n"},
      {"A <= <r>.B\n", "q() := B(x)", "A(c)\n"},
      {"A <= <r>.B\n", "q() := A(x), r(x,y)", "A(c)\n"},
      {"A <= <r>.A\n", "q() := r(x,y), r(y,z)", "A(c)\n"},
      {"", "q() := r(x,y), r(y,z)", "r(c,d)\nr(d,e)\n"},
      {"", "q() := r(x,y), r(y,z)", "r(c,d)\n"},
      {"A <= <r->.B\n", "q() := B(x), r(x,y)", "A(c)\n"},
      {"A <= B\nB <= A\n", "q() := A(x), B(x)", "B(c)\n"},
      {"", "q() := A(x)\nq() := B(x)", "B(c)\n"},
      {"A <= <r>.B\n", "q() := A(x)\nq() := B(x)", "A(c)\nr(c,c)\n"},
  };
  for (std::size_t i = 0; i < samples.size(); ++i) {
    Ontology o = parse_ontology(samples[i].onto);
    UCQ q = parse_query(samples[i].query);
    Database d = parse_database(samples[i].db);
    OracleOptions opts;
    opts.extra = 2;
    OracleOutcome direct = finite_model_oracle(o, d, q, {}, opts);

    RewriteBundle b = build_rewrite_bundle(o, q, TreeVariant::Simple);
    std::size_t nadom = d.size();
    std::vector<std::string> qu, qr;
    for (const CQ& cq : q.cqs)
      for (const QAtom& at : cq.atoms)
        (at.unary() ? qu : qr).push_back(at.pred);

    // Countermodels of the plain ontology, with the split form evaluated
    // under the cheapest class extension of each candidate model.
    auto expanded = [&](const Interp& I) {
      return qhat_holds_expanded(b, I, nadom);
    };
    OracleOutcome split = countermodel_search(o, d, expanded, qu, qr, opts);
    CAPTURE(i);
    CAPTURE(samples[i].onto);
    CAPTURE(samples[i].query);
    CHECK(direct.entailed == split.entailed);

    // On the light samples, additionally search models of the extended
    // ontology directly; the three routes must agree.
    if (b.omega.size() <= 400) {
      auto restricted = [&](const Interp& I) {
        Interp J = restrict_interp(I, nadom);
        return ucq_holds(b.qhat, J, {});
      };
      OracleOutcome full =
          countermodel_search(b.omega, d, restricted, qu, qr, opts);
      CHECK(direct.entailed == full.entailed);
    }
  }
}
