#include "omq/cw_alci.hpp"

#include <algorithm>
#include <set>

#include "omq/errors.hpp"
#include "omq/query.hpp"

namespace omq {

IOA ioa_neutral(const ClosureAlci& cx, int k) {
  IOA g;
  g.in.assign(static_cast<std::size_t>(k), Bits(cx.cl_star.size(), true));
  g.out.assign(static_cast<std::size_t>(k), Bits(cx.cl_forall.size()));
  return g;
}

IOA ioa_of_leaf_type(const ClosureAlci& cx, int k, int label, const Bits& t) {
  IOA g = ioa_neutral(cx, k);
  Bits in(cx.cl_star.size()), out(cx.cl_forall.size());
  for (std::size_t p = 0; p < cx.cl_star.size(); ++p)
    if (t.get(static_cast<std::size_t>(cx.cl_star[p]))) in.set(p);
  for (std::size_t f = 0; f < cx.cl_forall.size(); ++f)
    if (t.get(static_cast<std::size_t>(cx.cl_forall[f]))) out.set(f);
  g.in[static_cast<std::size_t>(label - 1)] = std::move(in);
  g.out[static_cast<std::size_t>(label - 1)] = std::move(out);
  return g;
}

namespace {

// alpha^r_{i,j} acceptance: every universal constraint emitted across the
// new edges lands in the receiving label's guarantees. `fwd` selects the
// plain-role direction (emitter i, receiver j); the inverse direction runs
// with emitter j, receiver i.
bool alpha_ok(const ClosureAlci& cx, const IOA& g, const std::string& role,
              int emitter, int receiver, bool inverse) {
  const Bits& out = g.out[static_cast<std::size_t>(emitter - 1)];
  const Bits& in = g.in[static_cast<std::size_t>(receiver - 1)];
  for (std::size_t f = 0; f < cx.cl_forall.size(); ++f) {
    if (!out.get(f)) continue;
    const Concept& fc = cx.cl[static_cast<std::size_t>(cx.cl_forall[f])];
    if (fc->role.name != role || fc->role.inverse != inverse) continue;
    int body = cx.forall_body[f];
    int pos = cx.star_pos_of[static_cast<std::size_t>(body)];
    if (pos < 0 || !in.get(static_cast<std::size_t>(pos))) return false;
  }
  return true;
}

}  // namespace

ThetaAlci theta_aq(const KExpr& s, const ClosureAlci& cx,
                   const TypeTableAlci& table) {
  KValidation v = kexpr_validate(s);
  if (!v.ok)
    throw ValidationError("invalid k-expression: " +
                          (v.violations.empty() ? std::string("unknown")
                                                : v.violations[0].message));
  int k = v.width;

  ThetaAlci th;
  th.k = k;
  th.per_node.resize(s.nodes.size());

  // Work-per-subexpression guard: no set may outgrow the count of
  // syntactically possible IOAs for this k and closure.
  double log2cap = static_cast<double>(k) *
                   static_cast<double>(cx.cl_star.size() +
                                       cx.cl_forall.size());
  std::size_t cap = log2cap >= 62.0
                        ? static_cast<std::size_t>(-1)
                        : (static_cast<std::size_t>(1)
                           << static_cast<unsigned>(log2cap));

  for (std::size_t idx = 0; idx < s.nodes.size(); ++idx) {
    const KNode& nd = s.nodes[idx];
    std::set<IOA> acc;
    switch (nd.kind) {
      case KNode::Intro: {
        for (const Bits& t : table.types)
          if (type_realizes_leaf(cx, t, nd.upreds, nd.loops))
            acc.insert(ioa_of_leaf_type(cx, k, nd.label, t));
        break;
      }
      case KNode::Union: {
        const auto& A = th.per_node[static_cast<std::size_t>(nd.a)];
        const auto& B = th.per_node[static_cast<std::size_t>(nd.b)];
        for (const IOA& g1 : A)
          for (const IOA& g2 : B) {
            IOA g = g1;
            for (int i = 0; i < k; ++i) {
              g.in[static_cast<std::size_t>(i)] &=
                  g2.in[static_cast<std::size_t>(i)];
              g.out[static_cast<std::size_t>(i)] |=
                  g2.out[static_cast<std::size_t>(i)];
            }
            acc.insert(std::move(g));
          }
        break;
      }
      case KNode::Add: {
        for (const IOA& g : th.per_node[static_cast<std::size_t>(nd.a)])
          if (alpha_ok(cx, g, nd.role, nd.label, nd.label2, false) &&
              alpha_ok(cx, g, nd.role, nd.label2, nd.label, true))
            acc.insert(g);
        break;
      }
      case KNode::Relabel: {
        std::size_t i = static_cast<std::size_t>(nd.label - 1);
        std::size_t j = static_cast<std::size_t>(nd.label2 - 1);
        for (const IOA& gh : th.per_node[static_cast<std::size_t>(nd.a)]) {
          IOA g = gh;
          g.in[j] &= gh.in[i];
          g.out[j] |= gh.out[i];
          g.in[i] = Bits(cx.cl_star.size(), true);
          g.out[i] = Bits(cx.cl_forall.size());
          acc.insert(std::move(g));
        }
        break;
      }
    }
    if (acc.size() > cap)
      throw ValidationError("abstraction set exceeds the syntactic bound");
    th.per_node[idx].assign(acc.begin(), acc.end());
  }
  return th;
}

bool sat_alci(const Ontology& o, const Database& D, const KExpr& s) {
  if (!kexpr_matches(s, D))
    throw ValidationError("k-expression does not generate the database");
  Ontology on = o.dialect == Dialect::GF2
                    ? throw ValidationError(
                          "sat_alci expects a description-logic ontology")
                    : (o.normalized ? o : normalize(o));
  TypeTableAlci table = alci_types(on);
  if (!table.satisfiable()) return false;
  ThetaAlci th = theta_aq(s, table.cx, table);
  return !th.root(s).empty();
}

bool eval_aq_alci(const Ontology& o, const std::string& A,
                  const std::string& c, const Database& D, const KExpr& s) {
  if (!D.has_const(c))
    throw ValidationError("query constant not in the database: " + c);
  const std::string marker = "@not_" + A;
  Ontology on = o;
  on.normalized = false;
  on.cis.push_back({c_name(marker), c_not(c_name(A))});
  on.cis.push_back({c_not(c_name(A)), c_name(marker)});
  Database d2 = D;
  d2.add_fact(marker, c);
  KExpr s2 = kexpr_with_extra_unary(s, c, marker);
  return !sat_alci(on, d2, s2);
}

namespace {

// Can every variable of sq sit on the leaf constant? Concept atoms must be
// in the type, role atoms must be payload self-loops.
bool subquery_fits_leaf(const ClosureAlci& cx, const Bits& t,
                        const SubQuery& sq,
                        const std::vector<std::string>& loops) {
  for (const QAtom& a : sq.atoms) {
    if (a.unary()) {
      int ci = cx.idx(c_name(a.pred));
      if (ci < 0 || !t.get(static_cast<std::size_t>(ci))) return false;
    } else {
      if (std::find(loops.begin(), loops.end(), a.pred) == loops.end())
        return false;
    }
  }
  return true;
}

// Joins two variable-disjoint mappings; false when the variable sets
// intersect. Outputs the merged sorted atom list and the merged label
// vector aligned with the sorted variable union.
bool join_maps(const SubQuery& s1, const std::vector<std::uint8_t>& f1,
               const SubQuery& s2, const std::vector<std::uint8_t>& f2,
               std::vector<QAtom>& atoms_out,
               std::vector<std::uint8_t>& f_out) {
  std::size_t i = 0, j = 0;
  f_out.clear();
  while (i < s1.vars.size() && j < s2.vars.size()) {
    if (s1.vars[i] == s2.vars[j]) return false;
    if (s1.vars[i] < s2.vars[j])
      f_out.push_back(f1[i++]);
    else
      f_out.push_back(f2[j++]);
  }
  while (i < s1.vars.size()) f_out.push_back(f1[i++]);
  while (j < s2.vars.size()) f_out.push_back(f2[j++]);
  atoms_out.clear();
  std::merge(s1.atoms.begin(), s1.atoms.end(), s2.atoms.begin(),
             s2.atoms.end(), std::back_inserter(atoms_out));
  return true;
}

}  // namespace

ThetaUcqAlci theta_ucq(const KExpr& s, const RewriteBundle& b,
                       const ClosureAlci& cx, const TypeTableAlci& table) {
  KValidation v = kexpr_validate(s);
  if (!v.ok)
    throw ValidationError("invalid k-expression: " +
                          (v.violations.empty() ? std::string("unknown")
                                                : v.violations[0].message));
  int k = v.width;

  ThetaUcqAlci th;
  th.k = k;
  th.per_node.resize(s.nodes.size());

  // Syntactic ceiling: 2^(k rows) IOAs times 2^(mapping universe), where
  // the mapping universe counts k^{|vars|} label choices per subquery.
  double log2cap = static_cast<double>(k) *
                   static_cast<double>(cx.cl_star.size() +
                                       cx.cl_forall.size());
  for (const SubQuery& sq : b.subqueries) {
    double maps = 1.0;
    for (std::size_t t = 0; t < sq.vars.size() && maps < 1e18; ++t)
      maps *= static_cast<double>(k);
    log2cap += maps;
    if (log2cap >= 62.0) break;
  }
  std::size_t cap = log2cap >= 62.0
                        ? static_cast<std::size_t>(-1)
                        : (static_cast<std::size_t>(1)
                           << static_cast<unsigned>(log2cap));
  // Absolute work budget across join and closure loops.
  const std::uint64_t op_budget = 1ull << 28;
  std::uint64_t ops = 0;

  for (std::size_t idx = 0; idx < s.nodes.size(); ++idx) {
    const KNode& nd = s.nodes[idx];
    std::set<DecoratedIOA> acc;
    switch (nd.kind) {
      case KNode::Intro: {
        for (const Bits& t : table.types) {
          if (!type_realizes_leaf(cx, t, nd.upreds, nd.loops)) continue;
          DecoratedIOA g;
          g.ioa = ioa_of_leaf_type(cx, k, nd.label, t);
          for (std::size_t q = 0; q < b.subqueries.size(); ++q) {
            const SubQuery& sq = b.subqueries[q];
            if (!subquery_fits_leaf(cx, t, sq, nd.loops)) continue;
            g.pairs.insert({static_cast<int>(q),
                            std::vector<std::uint8_t>(
                                sq.vars.size(),
                                static_cast<std::uint8_t>(nd.label))});
          }
          acc.insert(std::move(g));
        }
        break;
      }
      case KNode::Union: {
        const auto& A = th.per_node[static_cast<std::size_t>(nd.a)];
        const auto& B = th.per_node[static_cast<std::size_t>(nd.b)];
        std::vector<QAtom> atoms_u;
        std::vector<std::uint8_t> f_u;
        for (const DecoratedIOA& g1 : A)
          for (const DecoratedIOA& g2 : B) {
            DecoratedIOA g = g1;
            for (int i = 0; i < k; ++i) {
              g.ioa.in[static_cast<std::size_t>(i)] &=
                  g2.ioa.in[static_cast<std::size_t>(i)];
              g.ioa.out[static_cast<std::size_t>(i)] |=
                  g2.ioa.out[static_cast<std::size_t>(i)];
            }
            g.pairs.insert(g2.pairs.begin(), g2.pairs.end());
            for (const SubQueryMap& m1 : g1.pairs)
              for (const SubQueryMap& m2 : g2.pairs) {
                if ((ops += 1) > op_budget)
                  throw ValidationError(
                      "decorated abstraction work exceeds the budget");
                const SubQuery& s1 =
                    b.subqueries[static_cast<std::size_t>(m1.first)];
                const SubQuery& s2 =
                    b.subqueries[static_cast<std::size_t>(m2.first)];
                if (!join_maps(s1, m1.second, s2, m2.second, atoms_u, f_u))
                  continue;
                int mid = b.subquery_find(atoms_u);
                if (mid < 0) continue;
                g.pairs.insert({mid, f_u});
              }
            acc.insert(std::move(g));
          }
        break;
      }
      case KNode::Add: {
        for (const DecoratedIOA& gh :
             th.per_node[static_cast<std::size_t>(nd.a)]) {
          if (!alpha_ok(cx, gh.ioa, nd.role, nd.label, nd.label2, false) ||
              !alpha_ok(cx, gh.ioa, nd.role, nd.label2, nd.label, true))
            continue;
          DecoratedIOA g = gh;
          // Close the mapping set under adding nd.role atoms between a
          // variable on label i and one on label j: those pairs sit on the
          // freshly connected constants, so the extra atom is realized.
          std::vector<SubQueryMap> work(g.pairs.begin(), g.pairs.end());
          const std::uint8_t li = static_cast<std::uint8_t>(nd.label);
          const std::uint8_t lj = static_cast<std::uint8_t>(nd.label2);
          while (!work.empty()) {
            SubQueryMap m = std::move(work.back());
            work.pop_back();
            const SubQuery& sq =
                b.subqueries[static_cast<std::size_t>(m.first)];
            for (std::size_t xi = 0; xi < sq.vars.size(); ++xi) {
              if (m.second[xi] != li) continue;
              for (std::size_t yj = 0; yj < sq.vars.size(); ++yj) {
                if (m.second[yj] != lj) continue;
                if ((ops += 1) > op_budget)
                  throw ValidationError(
                      "decorated abstraction work exceeds the budget");
                QAtom na{nd.role, sq.vars[xi], sq.vars[yj]};
                if (std::binary_search(sq.atoms.begin(), sq.atoms.end(), na))
                  continue;
                std::vector<QAtom> atoms2 = sq.atoms;
                atoms2.insert(std::upper_bound(atoms2.begin(), atoms2.end(),
                                               na),
                              na);
                int id2 = b.subquery_find(atoms2);
                if (id2 < 0) continue;
                SubQueryMap m2{id2, m.second};
                if (g.pairs.insert(m2).second) work.push_back(std::move(m2));
              }
            }
          }
          acc.insert(std::move(g));
        }
        break;
      }
      case KNode::Relabel: {
        std::size_t i = static_cast<std::size_t>(nd.label - 1);
        std::size_t j = static_cast<std::size_t>(nd.label2 - 1);
        const std::uint8_t li = static_cast<std::uint8_t>(nd.label);
        const std::uint8_t lj = static_cast<std::uint8_t>(nd.label2);
        for (const DecoratedIOA& gh :
             th.per_node[static_cast<std::size_t>(nd.a)]) {
          DecoratedIOA g;
          g.ioa = gh.ioa;
          g.ioa.in[j] &= gh.ioa.in[i];
          g.ioa.out[j] |= gh.ioa.out[i];
          g.ioa.in[i] = Bits(cx.cl_star.size(), true);
          g.ioa.out[i] = Bits(cx.cl_forall.size());
          for (const SubQueryMap& m : gh.pairs) {
            SubQueryMap m2 = m;
            for (std::uint8_t& x : m2.second)
              if (x == li) x = lj;
            g.pairs.insert(std::move(m2));
          }
          acc.insert(std::move(g));
        }
        break;
      }
    }
    if (acc.size() > cap)
      throw ValidationError("abstraction set exceeds the syntactic bound");
    th.per_node[idx].assign(acc.begin(), acc.end());
  }
  return th;
}

bool eval_ucq_alci(const Ontology& o, const UCQ& q,
                   const std::vector<std::string>& cand, const Database& D,
                   const KExpr& s) {
  if (o.dialect == Dialect::GF2)
    throw ValidationError("eval_ucq_alci expects a description-logic ontology");
  if (!kexpr_matches(s, D))
    throw ValidationError("k-expression does not generate the database");
  Booleanized bb = booleanize(q, cand, D);
  KExpr s2 = s;
  for (std::size_t i = 0; i < bb.markers.size(); ++i)
    s2 = kexpr_with_extra_unary(s2, cand[i], bb.markers[i]);
  RewriteBundle b = build_rewrite_bundle(o, bb.query, TreeVariant::Simple);
  TypeTableAlci table = alci_types(b.omega);
  if (!table.satisfiable()) return true;  // inconsistent: all answers certain
  ThetaUcqAlci th = theta_ucq(s2, b, table.cx, table);
  for (const DecoratedIOA& g : th.root(s2)) {
    bool has_full = false;
    for (const SubQueryMap& m : g.pairs)
      if (b.subqueries[static_cast<std::size_t>(m.first)].full) {
        has_full = true;
        break;
      }
    if (!has_full) return false;
  }
  return true;
}

}  // namespace omq
