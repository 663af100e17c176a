#include "omq/rewrite.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace omq {

namespace {

// ---------------------------------------------------------------------------
// Canonicalization helpers

std::string atom_str(const QAtom& at) {
  std::string s = at.pred;
  s += '(';
  s += std::to_string(at.a);
  if (!at.unary()) {
    s += ',';
    s += std::to_string(at.b);
  }
  s += ')';
  return s;
}

bool atoms_less(const std::vector<QAtom>& x, const std::vector<QAtom>& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const QAtom& a = x[i];
    const QAtom& b = y[i];
    if (a.a != b.a) return a.a < b.a;
    if (a.b != b.b) return a.b < b.b;
    if (a.pred != b.pred) return a.pred < b.pred;
  }
  return false;
}

bool atoms_equal(const std::vector<QAtom>& x, const std::vector<QAtom>& y) {
  return !atoms_less(x, y) && !atoms_less(y, x);
}

// Apply a variable renaming and return the sorted, deduplicated atom list.
std::vector<QAtom> map_atoms(const std::vector<QAtom>& atoms,
                             const std::vector<int>& m) {
  std::vector<QAtom> out;
  out.reserve(atoms.size());
  for (const QAtom& at : atoms) {
    QAtom q;
    q.pred = at.pred;
    q.a = m[at.a];
    q.b = at.unary() ? -1 : m[at.b];
    out.push_back(q);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> generic_names(int n) {
  std::vector<std::string> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) v.push_back("x" + std::to_string(i));
  return v;
}

// Enumeration of set partitions of {0..n-1} as restricted growth strings.
// visit receives the block id per element and the number of blocks.
template <typename F>
void for_each_partition(int n, F visit) {
  if (n <= 0) return;
  std::vector<int> a(n, 0);
  while (true) {
    int nb = *std::max_element(a.begin(), a.end()) + 1;
    visit(a, nb);
    int i = n - 1;
    for (; i > 0; --i) {
      int mx = 0;
      for (int j = 0; j < i; ++j) mx = std::max(mx, a[j]);
      if (a[i] <= mx) {
        ++a[i];
        std::fill(a.begin() + i + 1, a.end(), 0);
        break;
      }
      a[i] = 0;
    }
    if (i == 0) break;
  }
}

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

std::string cq_key(const CQ& q) {
  std::vector<QAtom> atoms = q.atoms;
  std::sort(atoms.begin(), atoms.end());
  std::string s;
  for (const QAtom& at : atoms) {
    s += atom_str(at);
    s += ';';
  }
  s += '|';
  for (std::size_t i = 0; i < q.answer_vars.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(q.answer_vars[i]);
  }
  return s;
}

CQ cq_canonical_form(const CQ& q) {
  int n = static_cast<int>(q.nvars());
  if (n > 9)
    throw std::invalid_argument(
        "canonical form is limited to nine variables, got " +
        std::to_string(n));
  CQ out;
  out.var_names = generic_names(n);
  if (n == 0) {
    out.atoms = q.atoms;
    std::sort(out.atoms.begin(), out.atoms.end());
    out.atoms.erase(std::unique(out.atoms.begin(), out.atoms.end()),
                    out.atoms.end());
    return out;
  }
  std::vector<int> m(n);
  std::iota(m.begin(), m.end(), 0);
  std::vector<QAtom> best_atoms;
  std::vector<int> best_ans;
  bool first = true;
  do {
    std::vector<QAtom> atoms = map_atoms(q.atoms, m);
    std::vector<int> ans;
    ans.reserve(q.answer_vars.size());
    for (int v : q.answer_vars) ans.push_back(m[v]);
    bool better = first;
    if (!first) {
      if (atoms_less(atoms, best_atoms))
        better = true;
      else if (atoms_equal(atoms, best_atoms) && ans < best_ans)
        better = true;
    }
    if (better) {
      best_atoms = std::move(atoms);
      best_ans = std::move(ans);
      first = false;
    }
  } while (std::next_permutation(m.begin(), m.end()));
  out.atoms = std::move(best_atoms);
  out.answer_vars = std::move(best_ans);
  return out;
}

std::string cq_canonical_key(const CQ& q) { return cq_key(cq_canonical_form(q)); }

bool is_tree_cq(const CQ& q, TreeVariant v) {
  int n = static_cast<int>(q.nvars());
  if (n == 0) return false;
  std::vector<char> occurs(n, 0);
  std::set<std::pair<int, int>> pairs;
  Dsu dsu(n);
  int edges = 0;
  for (const QAtom& at : q.atoms) {
    if (at.a < 0 || at.a >= n) return false;
    occurs[at.a] = 1;
    if (at.unary()) continue;
    if (at.b < 0 || at.b >= n) return false;
    occurs[at.b] = 1;
    if (at.a == at.b) {
      if (v == TreeVariant::Simple) return false;
      continue;
    }
    std::pair<int, int> pr{std::min(at.a, at.b), std::max(at.a, at.b)};
    if (!pairs.insert(pr).second) {
      if (v == TreeVariant::Simple) return false;
      continue;
    }
    ++edges;
    dsu.unite(at.a, at.b);
  }
  for (int i = 0; i < n; ++i)
    if (!occurs[i]) return false;
  if (edges != n - 1) return false;
  int root = dsu.find(0);
  for (int i = 1; i < n; ++i)
    if (dsu.find(i) != root) return false;
  return true;
}

namespace {

// A connected part hanging off the kept variables of one split.
struct SplitPart {
  CQ part;       // local ids; answer_vars = {local kept var} when rooted
  int kept_var;  // id in the contracted disjunct, -1 when none
};

// Scans every identification of variables of one disjunct and every
// admissible kept-variable set S: the role atoms among kept variables are
// set aside, the remaining connected parts must each touch at most one
// kept variable and pass the variant's tree discipline. visit receives the
// contracted disjunct, the S mask, and the parts (rooted at the kept
// variable they touch, boolean otherwise).
template <typename F>
void for_each_split(const CQ& cq0, TreeVariant variant, F visit) {
  const int nv0 = static_cast<int>(cq0.nvars());
  for_each_partition(nv0, [&](const std::vector<int>& block, int nb) {
    std::vector<int> m2(block.begin(), block.end());
    CQ p;
    p.var_names = generic_names(nb);
    p.atoms = map_atoms(cq0.atoms, m2);
    for (std::uint32_t smask = 0; smask < (1u << nb); ++smask) {
      auto in_s = [&](int v) { return (smask >> v & 1u) != 0; };
      // Connected parts once the role atoms among kept variables are
      // removed (they stay in the kept portion of the disjunct).
      Dsu dsu(nb);
      for (const QAtom& at : p.atoms) {
        if (at.unary()) continue;
        if (in_s(at.a) && in_s(at.b)) continue;
        dsu.unite(at.a, at.b);
      }
      std::vector<std::vector<int>> comp(nb);
      for (int v = 0; v < nb; ++v) comp[dsu.find(v)].push_back(v);

      bool ok = true;
      std::vector<SplitPart> parts;
      for (int r = 0; r < nb && ok; ++r) {
        if (comp[r].empty()) continue;
        const std::vector<int>& vs = comp[r];
        int kept_count = 0, kept_var = -1, outside = 0;
        for (int v : vs) {
          if (in_s(v)) {
            ++kept_count;
            kept_var = v;
          } else {
            ++outside;
          }
        }
        if (outside == 0) continue;  // atoms live in the kept portion
        if (kept_count > 1) {
          ok = false;
          break;
        }
        // The part as its own CQ: the surviving role atoms inside it plus
        // every concept atom on its variables.
        std::vector<int> local(nb, -1);
        int ln = 0;
        for (int v : vs) local[v] = ln++;
        CQ part;
        part.var_names = generic_names(ln);
        for (const QAtom& at : p.atoms) {
          if (at.unary()) {
            if (local[at.a] >= 0)
              part.atoms.push_back({at.pred, local[at.a], -1});
            continue;
          }
          if (in_s(at.a) && in_s(at.b)) continue;
          if (local[at.a] >= 0 && local[at.b] >= 0)
            part.atoms.push_back({at.pred, local[at.a], local[at.b]});
        }
        if (!is_tree_cq(part, variant)) {
          ok = false;
          break;
        }
        if (kept_var >= 0) part.answer_vars = {local[kept_var]};
        parts.push_back({std::move(part), kept_var});
      }
      if (ok) visit(p, smask, parts);
    }
  });
}

}  // namespace

std::vector<TreeCQ> enumerate_trees(const UCQ& q, TreeVariant v) {
  std::map<std::string, TreeCQ> found;
  auto record = [&](const CQ& cq) {
    CQ canon = cq_canonical_form(cq);
    std::string key = cq_key(canon);
    if (found.count(key)) return;
    TreeCQ t;
    t.root = canon.answer_vars.empty() ? -1 : canon.answer_vars[0];
    t.cq = std::move(canon);
    found.emplace(std::move(key), std::move(t));
  };
  for (const CQ& cq0 : q.cqs) {
    if (cq0.atoms.size() > 20)
      throw std::invalid_argument("tree enumeration supports up to 20 atoms");
    for_each_split(cq0, v,
                   [&](const CQ&, std::uint32_t,
                       const std::vector<SplitPart>& parts) {
                     for (const SplitPart& sp : parts) record(sp.part);
                   });
  }
  std::vector<TreeCQ> out;
  out.reserve(found.size());
  for (auto& kv : found) out.push_back(std::move(kv.second));
  return out;
}

namespace {

Concept concept_of_rec(const CQ& cq, int at, int parent) {
  std::vector<Concept> conj;
  for (const QAtom& a : cq.atoms) {
    if (a.unary()) {
      if (a.a == at) conj.push_back(c_name(a.pred));
      continue;
    }
    int other = a.a == at ? a.b : a.b == at ? a.a : -1;
    if (other < 0 || other == parent) continue;
    // Edge away from the root keeps the role; an atom pointing at the
    // current node is traversed along the inverse.
    Role rho(a.pred, a.b == at);
    conj.push_back(c_exists(rho, concept_of_rec(cq, other, at)));
  }
  if (conj.empty()) return c_top();
  if (conj.size() == 1) return conj[0];
  return c_and(std::move(conj));
}

}  // namespace

Concept concept_of(const TreeCQ& t) {
  if (!t.rooted())
    throw std::invalid_argument("concept translation needs a rooted tree");
  if (!is_tree_cq(t.cq, TreeVariant::Simple))
    throw std::invalid_argument(
        "concept translation needs the simple tree discipline");
  return concept_of_rec(t.cq, t.root, -1);
}

namespace {

constexpr std::uint8_t var_bit(Var v) { return v == Var::X ? 1 : 2; }

Gf2 formula_of_rec(const CQ& cq, int at, int parent, Var v) {
  std::vector<Gf2> conj;
  std::vector<int> kids;
  for (const QAtom& a : cq.atoms) {
    if (a.unary()) {
      if (a.a == at) conj.push_back(g_atom(a.pred, {v}));
      continue;
    }
    if (a.a == at && a.b == at) {
      conj.push_back(g_atom(a.pred, {v, v}));
      continue;
    }
    int other = a.a == at ? a.b : a.b == at ? a.a : -1;
    if (other < 0 || other == parent) continue;
    if (std::find(kids.begin(), kids.end(), other) == kids.end())
      kids.push_back(other);
  }
  Var w = other(v);
  for (int child : kids) {
    // All atoms between the node and this child share one guarded
    // quantifier; the first one serves as the guard.
    Gf2 guard;
    std::vector<Gf2> body;
    for (const QAtom& a : cq.atoms) {
      if (a.unary() || a.a == a.b) continue;
      bool down = a.a == at && a.b == child;
      bool up = a.a == child && a.b == at;
      if (!down && !up) continue;
      Gf2 atom = down ? g_atom(a.pred, {v, w}) : g_atom(a.pred, {w, v});
      if (!guard)
        guard = atom;
      else
        body.push_back(atom);
    }
    Gf2 below = formula_of_rec(cq, child, at, w);
    if (below) body.push_back(below);
    Gf2 inner = body.empty() ? g_eq(w, w)
                : body.size() == 1 ? body[0]
                                   : g_and(std::move(body));
    conj.push_back(g_exists(var_bit(w), guard, inner));
  }
  if (conj.empty()) return nullptr;
  if (conj.size() == 1) return conj[0];
  return g_and(std::move(conj));
}

}  // namespace

Gf2 formula_of(const TreeCQ& t) {
  if (!is_tree_cq(t.cq, TreeVariant::Loops))
    throw std::invalid_argument("formula translation needs a tree");
  int root = t.rooted() ? t.root : 0;
  Gf2 f = formula_of_rec(t.cq, root, -1, Var::X);
  if (!f) f = g_eq(Var::X, Var::X);
  if (t.rooted()) return f;
  return g_exists(var_bit(Var::X), g_eq(Var::X, Var::X), f);
}

int TreeIndex::find(const CQ& canonical_cq) const {
  auto it = by_key.find(cq_key(canonical_cq));
  return it == by_key.end() ? -1 : it->second;
}

TreeIndex index_trees(const UCQ& q, TreeVariant v) {
  TreeIndex ix;
  ix.variant = v;
  std::vector<TreeCQ> trees = enumerate_trees(q, v);
  ix.classes.reserve(trees.size());
  for (std::size_t i = 0; i < trees.size(); ++i) {
    TreeClass tc;
    tc.tree = std::move(trees[i]);
    tc.cls = "@tree" + std::to_string(i);
    if (v == TreeVariant::Simple) {
      if (!tc.tree.rooted()) {
        tc.role = "@link" + std::to_string(i);
        TreeCQ rooted;
        rooted.cq = tc.tree.cq;
        rooted.cq.answer_vars = {0};
        rooted.root = 0;
        tc.form = concept_of(rooted);
      } else {
        tc.form = concept_of(tc.tree);
      }
    } else {
      tc.formula = formula_of(tc.tree);
    }
    ix.by_key.emplace(cq_key(tc.tree.cq), static_cast<int>(i));
    ix.classes.push_back(std::move(tc));
  }
  return ix;
}

UCQ build_qhat(const UCQ& q, const TreeIndex& ix) {
  std::map<std::string, CQ> disjuncts;
  for (const CQ& cq0 : q.cqs) {
    for_each_split(cq0, ix.variant, [&](const CQ& p, std::uint32_t smask,
                                        const std::vector<SplitPart>& parts) {
      auto in_s = [&](int v) { return (smask >> v & 1u) != 0; };
      const int nb = static_cast<int>(p.nvars());

      // Class atoms to add: (class index, kept variable or -1).
      std::vector<std::pair<int, int>> added;
      for (const SplitPart& sp : parts) {
        int cls = ix.find(cq_canonical_form(sp.part));
        if (cls < 0)
          throw std::logic_error(
              "tree index is missing a part of the split form");
        added.emplace_back(cls, sp.kept_var);
      }

      // Assemble: kept atoms, then class atoms, over fresh ids.
      std::vector<int> newid(nb, -1);
      int nn = 0;
      for (int v = 0; v < nb; ++v)
        if (in_s(v)) newid[v] = nn++;
      CQ out;
      for (const QAtom& at : p.atoms) {
        if (at.unary()) {
          if (in_s(at.a)) out.atoms.push_back({at.pred, newid[at.a], -1});
        } else if (in_s(at.a) && in_s(at.b)) {
          out.atoms.push_back({at.pred, newid[at.a], newid[at.b]});
        }
      }
      for (const auto& [cls, kept_var] : added) {
        int v = kept_var >= 0 ? newid[kept_var] : nn++;
        out.atoms.push_back({ix.classes[cls].cls, v, -1});
      }
      out.var_names = generic_names(nn);
      CQ canon = cq_canonical_form(out);
      std::string key = cq_key(canon);
      disjuncts.emplace(std::move(key), std::move(canon));
    });
  }
  UCQ out;
  out.head = q.head;
  out.cqs.reserve(disjuncts.size());
  for (auto& kv : disjuncts) out.cqs.push_back(std::move(kv.second));
  return out;
}

namespace {

void collect_ontology_roles(const Ontology& o, std::set<std::string>& roles) {
  std::vector<std::string> names, rs;
  if (o.dialect == Dialect::GF2) {
    for (const Gf2& s : o.sentences) gf2_collect_sig(s, names, rs);
  } else {
    for (const CI& ci : o.cis) {
      concept_collect_names(ci.lhs, names, rs);
      concept_collect_names(ci.rhs, names, rs);
    }
  }
  roles.insert(rs.begin(), rs.end());
}

}  // namespace

Ontology build_omega_q(const Ontology& o, const UCQ& q_marked,
                       const TreeIndex& ix, const std::string& top_name) {
  if (o.dialect == Dialect::GF2)
    throw std::invalid_argument(
        "the concept-based rewriting needs a DL ontology");
  if (ix.variant != TreeVariant::Simple)
    throw std::invalid_argument(
        "the concept-based rewriting needs a simple-variant tree index");
  Ontology w;
  w.dialect = Dialect::ALCI;
  w.cis = o.cis;
  w.normalized = false;
  w.cis.push_back({c_top(), c_name(top_name)});

  std::set<std::string> roles;
  collect_ontology_roles(o, roles);
  for (const CQ& cq : q_marked.cqs)
    for (const QAtom& at : cq.atoms)
      if (!at.unary()) roles.insert(at.pred);
  for (const TreeClass& tc : ix.classes)
    if (!tc.role.empty()) roles.insert(tc.role);

  for (const TreeClass& tc : ix.classes) {
    Concept cls = c_name(tc.cls);
    if (tc.tree.rooted()) {
      w.cis.push_back({cls, tc.form});
      w.cis.push_back({tc.form, cls});
    } else {
      w.cis.push_back({cls, c_exists(Role(tc.role), tc.form)});
      w.cis.push_back({tc.form, cls});
      for (const std::string& r : roles) {
        w.cis.push_back({c_exists(Role(r), cls), cls});
        w.cis.push_back({c_exists(Role(r, true), cls), cls});
      }
    }
  }
  return w;
}

Ontology build_omega_prime(const Ontology& o, const UCQ& q_marked,
                           const TreeIndex& ix, const std::string& top_name) {
  if (o.dialect != Dialect::GF2)
    throw std::invalid_argument(
        "the formula-based rewriting needs a GF2 ontology");
  if (ix.variant != TreeVariant::Loops)
    throw std::invalid_argument(
        "the formula-based rewriting needs a loops-variant tree index");
  (void)q_marked;
  Ontology w;
  w.dialect = Dialect::GF2;
  w.sentences = o.sentences;
  Gf2 guard = g_eq(Var::X, Var::X);
  w.sentences.push_back(g_forall(1, guard, g_atom(top_name, {Var::X})));
  for (const TreeClass& tc : ix.classes) {
    Gf2 cls = g_atom(tc.cls, {Var::X});
    w.sentences.push_back(g_forall(1, guard, g_iff(cls, formula_of(tc.tree))));
  }
  return w;
}

std::string subquery_key(const std::vector<QAtom>& sorted_atoms) {
  std::string s;
  for (const QAtom& at : sorted_atoms) {
    s += atom_str(at);
    s += ';';
  }
  return s;
}

int RewriteBundle::subquery_find(const std::vector<QAtom>& sorted_atoms) const {
  auto it = subquery_index.find(subquery_key(sorted_atoms));
  return it == subquery_index.end() ? -1 : it->second;
}

RewriteBundle build_rewrite_bundle(const Ontology& o, const UCQ& q,
                                   TreeVariant v) {
  for (const CQ& cq : q.cqs)
    if (!cq.answer_vars.empty())
      throw std::invalid_argument("rewriting expects a boolean query");
  RewriteBundle b;
  b.variant = v;
  b.top_name = "@top";

  b.q_marked = q;
  for (CQ& cq : b.q_marked.cqs) {
    std::set<int> marked;
    for (const QAtom& at : cq.atoms)
      if (at.unary() && at.pred == b.top_name) marked.insert(at.a);
    for (int x = 0; x < static_cast<int>(cq.nvars()); ++x)
      if (!marked.count(x)) cq.atoms.push_back({b.top_name, x, -1});
    std::sort(cq.atoms.begin(), cq.atoms.end());
  }

  b.trees = index_trees(b.q_marked, v);
  b.omega = v == TreeVariant::Simple
                ? build_omega_q(o, b.q_marked, b.trees, b.top_name)
                : build_omega_prime(o, b.q_marked, b.trees, b.top_name);
  b.qhat = build_qhat(b.q_marked, b.trees);

  for (const CQ& cq : b.qhat.cqs) {
    const std::size_t m = cq.atoms.size();
    if (m > 20)
      throw std::logic_error("split form disjunct exceeds 20 atoms");
    for (std::uint32_t sub = 1; sub < (1u << m); ++sub) {
      SubQuery s;
      for (std::size_t i = 0; i < m; ++i)
        if (sub >> i & 1u) s.atoms.push_back(cq.atoms[i]);
      std::sort(s.atoms.begin(), s.atoms.end());
      s.atoms.erase(std::unique(s.atoms.begin(), s.atoms.end()),
                    s.atoms.end());
      for (const QAtom& at : s.atoms) {
        s.vars.push_back(at.a);
        if (!at.unary()) s.vars.push_back(at.b);
      }
      std::sort(s.vars.begin(), s.vars.end());
      s.vars.erase(std::unique(s.vars.begin(), s.vars.end()), s.vars.end());
      s.full = sub + 1 == (1u << m);
      std::string key = subquery_key(s.atoms);
      auto it = b.subquery_index.find(key);
      if (it == b.subquery_index.end()) {
        b.subquery_index.emplace(std::move(key),
                                 static_cast<int>(b.subqueries.size()));
        b.subqueries.push_back(std::move(s));
      } else if (s.full) {
        b.subqueries[it->second].full = true;
      }
    }
  }
  return b;
}

bool qhat_holds_expanded(const RewriteBundle& b, const Interp& I,
                         std::size_t nadom) {
  if (b.variant != TreeVariant::Simple)
    throw std::invalid_argument(
        "the expansion evaluation is defined for the simple variant");
  // Connected components of I, edges taken from every binary predicate.
  Dsu dsu(static_cast<int>(I.n));
  for (const auto& [pred, bits] : I.binary) {
    (void)pred;
    for (std::size_t a = 0; a < I.n; ++a)
      for (std::size_t c = 0; c < I.n; ++c)
        if (bits.get(a * I.n + c))
          dsu.unite(static_cast<int>(a), static_cast<int>(c));
  }

  // The marker concept holds everywhere; tree concepts mention it.
  Interp IM = I;
  {
    Bits& top = IM.upred(b.top_name);
    for (std::size_t e = 0; e < IM.n; ++e) top.set(e);
  }

  Interp A(nadom);
  for (const auto& [pred, bits] : I.unary)
    for (std::size_t e = 0; e < nadom; ++e)
      if (bits.get(e)) A.upred(pred).set(e);
  for (const auto& [pred, bits] : I.binary)
    for (std::size_t x = 0; x < nadom; ++x)
      for (std::size_t y = 0; y < nadom; ++y)
        if (bits.get(x * I.n + y)) A.bpred(pred).set(x * nadom + y);
  for (std::size_t e = 0; e < nadom; ++e) A.upred(b.top_name).set(e);

  for (const TreeClass& tc : b.trees.classes) {
    Bits& cls = A.upred(tc.cls);
    if (tc.tree.rooted()) {
      for (std::size_t e = 0; e < nadom; ++e)
        if (eval_concept(IM, tc.form, e)) cls.set(e);
    } else {
      // The boolean class floods through the component of any witness.
      std::vector<char> region(I.n, 0);
      for (std::size_t e = 0; e < I.n; ++e)
        if (eval_concept(IM, tc.form, e))
          region[dsu.find(static_cast<int>(e))] = 1;
      for (std::size_t e = 0; e < nadom; ++e)
        if (region[dsu.find(static_cast<int>(e))]) cls.set(e);
    }
  }
  return ucq_holds(b.qhat, A, {});
}

}  // namespace omq
