#include "omq/typesys_gf2.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "omq/errors.hpp"

namespace omq {

namespace {

// Representatives are never negation-topped; a chain of negations above a
// subformula is carried as polarity.
void collect_subformulas(const Gf2& f, std::vector<Gf2>& pool,
                         std::set<std::string>& seen) {
  if (f->tag == GTag::Not) {
    collect_subformulas(f->kids[0], pool, seen);
    return;
  }
  if (!seen.insert(f->key()).second) return;
  pool.push_back(f);
  for (const Gf2& k : f->kids) collect_subformulas(k, pool, seen);
}

}  // namespace

std::pair<int, bool> ClosureGf2::deref(const Gf2& f) const {
  const Gf2* cur = &f;
  bool pol = true;
  while ((*cur)->tag == GTag::Not) {
    cur = &(*cur)->kids[0];
    pol = !pol;
  }
  auto it = index.find((*cur)->key());
  if (it == index.end() && (*cur)->free_mask() == 0) {
    // A sentence reached through a swapped parent is an alpha-variant of
    // the collected original; swapping back recovers it.
    it = index.find(gf2_swap(*cur)->key());
  }
  if (it == index.end()) return {-1, pol};
  return {it->second, pol};
}

ClosureGf2 closure_gf2(const Ontology& o,
                       const std::vector<std::string>& db_roles) {
  if (o.dialect != Dialect::GF2)
    throw ValidationError("closure_gf2 expects a two-variable ontology");
  ClosureGf2 cx;

  std::vector<Gf2> pool;
  std::set<std::string> seen;
  for (const Gf2& s : o.sentences) collect_subformulas(s, pool, seen);

  // Swaps of everything with a free variable. Kids of a swapped formula are
  // swaps of the original kids, so the pool stays kids-complete; swapped
  // sentences are alpha-variants and are not added (deref canonicalizes).
  std::size_t base = pool.size();
  for (std::size_t i = 0; i < base; ++i) {
    if (pool[i]->free_mask() == 0) continue;
    Gf2 sw = gf2_swap(pool[i]);
    if (seen.insert(sw->key()).second) pool.push_back(sw);
  }

  // Signature: ontology predicates plus the database's binary predicates.
  {
    std::vector<std::string> un, bin;
    for (const Gf2& s : o.sentences) gf2_collect_sig(s, un, bin);
    std::sort(un.begin(), un.end());
    un.erase(std::unique(un.begin(), un.end()), un.end());
    cx.unary_preds = un;
    bin.insert(bin.end(), db_roles.begin(), db_roles.end());
    std::sort(bin.begin(), bin.end());
    bin.erase(std::unique(bin.begin(), bin.end()), bin.end());
    cx.role_names = bin;
  }

  // Both edge orientations for database roles.
  for (const std::string& r : db_roles) {
    for (bool inv : {false, true}) {
      Gf2 a = g_atom(r, inv ? std::vector<Var>{Var::Y, Var::X}
                            : std::vector<Var>{Var::X, Var::Y});
      if (seen.insert(a->key()).second) pool.push_back(a);
    }
  }

  // Self-loop atoms for every role; the ones that are not closure members
  // extend the one-type space only.
  std::set<std::string> in_closure = seen;
  for (const std::string& r : cx.role_names) {
    Gf2 a = g_atom(r, {Var::X, Var::X});
    if (seen.insert(a->key()).second) pool.push_back(a);
  }

  std::stable_sort(pool.begin(), pool.end(),
                   [](const Gf2& a, const Gf2& b) {
                     std::size_t sa = gf2_size(a), sb = gf2_size(b);
                     if (sa != sb) return sa < sb;
                     return a->key() < b->key();
                   });
  cx.reps = std::move(pool);
  for (std::size_t i = 0; i < cx.reps.size(); ++i)
    cx.index.emplace(cx.reps[i]->key(), static_cast<int>(i));

  int n = static_cast<int>(cx.reps.size());
  cx.free_mask.resize(n);
  cx.swap_of.assign(n, -1);
  cx.kids.resize(n);
  cx.in_cl.resize(n);
  for (int i = 0; i < n; ++i) {
    const Gf2& f = cx.reps[i];
    if ((f->tag == GTag::Forall || f->tag == GTag::Exists) && f->qvars == 0)
      throw ValidationError("quantifier binds no variable");
    cx.free_mask[i] = f->free_mask();
    cx.in_cl[i] = in_closure.count(f->key()) > 0;
    if (cx.free_mask[i] == 0) {
      cx.swap_of[i] = i;
    } else {
      auto it = cx.index.find(gf2_swap(f)->key());
      cx.swap_of[i] = it == cx.index.end() ? i : it->second;
    }
    for (const Gf2& k : f->kids) {
      auto d = cx.deref(k);
      if (d.first < 0)
        throw ValidationError("closure is missing a subformula");
      cx.kids[i].push_back(d);
    }
  }

  cx.one_pos.assign(n, -1);
  cx.two_pos.assign(n, -1);
  auto push_one = [&cx](int rep) {
    cx.one_pos[rep] = static_cast<int>(cx.one_order.size());
    cx.one_order.push_back(rep);
  };
  for (int i = 0; i < n; ++i)
    if (cx.in_cl[i] && cx.free_mask[i] == 0) push_one(i);
  cx.n0 = static_cast<int>(cx.one_order.size());
  for (int i = 0; i < n; ++i)
    if (cx.in_cl[i] && cx.free_mask[i] == 1) push_one(i);
  cx.n1core = static_cast<int>(cx.one_order.size());
  for (int i = 0; i < n; ++i)
    if (!cx.in_cl[i]) push_one(i);
  cx.n1 = static_cast<int>(cx.one_order.size());

  auto push_two = [&cx](int rep) {
    cx.two_pos[rep] = static_cast<int>(cx.two_order.size());
    cx.two_order.push_back(rep);
  };
  for (int p = 0; p < cx.n1core; ++p) push_two(cx.one_order[p]);
  for (int i = 0; i < n; ++i)
    if (cx.in_cl[i] && cx.free_mask[i] == 2) push_two(i);
  for (int i = 0; i < n; ++i)
    if (cx.in_cl[i] && cx.free_mask[i] == 3) push_two(i);
  cx.n2 = static_cast<int>(cx.two_order.size());

  for (int i = 0; i < n; ++i) {
    const Gf2& f = cx.reps[i];
    if (f->tag != GTag::Atom || f->args.size() != 2) continue;
    if (f->args[0] == f->args[1]) {
      if (f->args[0] == Var::X) cx.selfloop_rep[f->pred] = i;
    } else if (cx.in_cl[i]) {
      cx.pair_atom_reps.push_back(i);
    }
  }

  std::map<int, bool> fmap;
  for (const Gf2& s : o.sentences) {
    auto d = cx.deref(s);
    auto it = fmap.find(d.first);
    if (it != fmap.end() && it->second != d.second) cx.forced_conflict = true;
    fmap[d.first] = d.second;
  }
  cx.forced.assign(fmap.begin(), fmap.end());
  return cx;
}

namespace {

// Truth of closure members over a one-type candidate, including the
// substitution that maps both variables to the element itself (diag), which
// turns binary atoms into self-loop bits and equalities into truths.
struct OneEval {
  const ClosureGf2& cx;
  const Bits& t;

  bool at(int rep) const { return t.get(cx.one_pos[rep]); }
  bool val(std::pair<int, bool> d) const {
    bool b = at(d.first);
    return d.second ? b : !b;
  }
  bool yval(std::pair<int, bool> d) const {
    bool b = at(cx.swap_of[d.first]);
    return d.second ? b : !b;
  }
  bool diag(int rep) const {
    const Gf2& f = cx.reps[rep];
    switch (f->tag) {
      case GTag::Atom:
        if (f->args.size() == 2) return at(cx.selfloop_rep.at(f->pred));
        return f->args[0] == Var::X ? at(rep) : at(cx.swap_of[rep]);
      case GTag::Eq:
        return true;
      case GTag::And:
        for (const auto& d : cx.kids[rep])
          if (!diagv(d)) return false;
        return true;
      case GTag::Or:
        for (const auto& d : cx.kids[rep])
          if (diagv(d)) return true;
        return false;
      case GTag::Forall:
      case GTag::Exists:
        return (cx.free_mask[rep] & 2) ? at(cx.swap_of[rep]) : at(rep);
      case GTag::Not:
        break;  // representatives are never negation-topped
    }
    return false;
  }
  bool diagv(std::pair<int, bool> d) const {
    bool b = diag(d.first);
    return d.second ? b : !b;
  }
};

// Local consistency of a one-type candidate: a universal that holds must
// hold at the element's own loops, and an existential the element itself
// witnesses must hold.
bool one_coherent(const ClosureGf2& cx, const Bits& t) {
  OneEval ev{cx, t};
  for (int p = 0; p < cx.n1core; ++p) {
    int rep = cx.one_order[p];
    const Gf2& f = cx.reps[rep];
    if (f->tag != GTag::Forall && f->tag != GTag::Exists) continue;
    bool v = t.get(static_cast<std::size_t>(p));
    bool g = ev.diagv(cx.kids[rep][0]);
    bool b = ev.diagv(cx.kids[rep][1]);
    if (f->tag == GTag::Forall && v && g && !b) return false;
    if (f->tag == GTag::Exists && !v && g && b) return false;
  }
  return true;
}

std::vector<Bits> one_candidates(const ClosureGf2& cx) {
  std::vector<Bits> out;
  if (cx.forced_conflict) return out;

  std::vector<int> forced_of_rep(cx.reps.size(), -1);
  for (const auto& fv : cx.forced)
    forced_of_rep[static_cast<std::size_t>(fv.first)] = fv.second ? 1 : 0;

  std::vector<int> freepos;
  std::vector<std::pair<int, bool>> preset;
  for (int p = 0; p < cx.n1; ++p) {
    int rep = cx.one_order[p];
    GTag tag = cx.reps[rep]->tag;
    bool is_free = tag == GTag::Atom || tag == GTag::Forall ||
                   tag == GTag::Exists;
    if (!is_free) continue;
    if (forced_of_rep[rep] >= 0)
      preset.emplace_back(p, forced_of_rep[rep] == 1);
    else
      freepos.push_back(p);
  }
  if (freepos.size() >= 25)
    throw ValidationError("one-type candidate space exceeds the budget");

  for (std::uint64_t m = 0; m < (1ull << freepos.size()); ++m) {
    Bits t(static_cast<std::size_t>(cx.n1));
    for (std::size_t i = 0; i < freepos.size(); ++i)
      if ((m >> i) & 1) t.set(static_cast<std::size_t>(freepos[i]));
    for (const auto& pv : preset)
      t.set(static_cast<std::size_t>(pv.first), pv.second);

    for (int p = 0; p < cx.n1; ++p) {
      int rep = cx.one_order[p];
      const Gf2& f = cx.reps[rep];
      if (f->tag == GTag::Eq) {
        t.set(static_cast<std::size_t>(p), true);
      } else if (f->tag == GTag::And || f->tag == GTag::Or) {
        bool v = f->tag == GTag::And;
        for (const auto& d : cx.kids[rep]) {
          bool kb = t.get(static_cast<std::size_t>(cx.one_pos[d.first]));
          bool kv = d.second ? kb : !kb;
          if (f->tag == GTag::And ? !kv : kv) {
            v = !v;
            break;
          }
        }
        t.set(static_cast<std::size_t>(p), v);
      }
    }

    bool ok = true;
    for (const auto& fv : cx.forced)
      if (t.get(static_cast<std::size_t>(cx.one_pos[fv.first])) != fv.second) {
        ok = false;
        break;
      }
    if (ok && one_coherent(cx, t)) out.push_back(t);
  }
  return out;
}

// Truth of every two-space member at an ordered pair, from the elements'
// closure parts and an assignment of the binary atoms.
Bits derive_two(const ClosureGf2& cx, const Bits& core1, const Bits& core2,
                const std::vector<int>& pair_pos, const Bits& pair_bits) {
  Bits t(static_cast<std::size_t>(cx.n2));
  for (int p = 0; p < cx.n1core; ++p)
    t.set(static_cast<std::size_t>(p), core1.get(static_cast<std::size_t>(p)));
  for (int p = cx.n1core; p < cx.n2; ++p) {
    int rep = cx.two_order[p];
    const Gf2& f = cx.reps[rep];
    bool v = false;
    if (cx.free_mask[rep] == 2) {
      v = core2.get(static_cast<std::size_t>(cx.one_pos[cx.swap_of[rep]]));
    } else {
      switch (f->tag) {
        case GTag::Atom:
          v = pair_bits.get(static_cast<std::size_t>(pair_pos[rep]));
          break;
        case GTag::Eq:
          v = false;  // the pair is an ordered pair of distinct elements
          break;
        case GTag::And:
        case GTag::Or: {
          v = f->tag == GTag::And;
          for (const auto& d : cx.kids[rep]) {
            bool kb = t.get(static_cast<std::size_t>(cx.two_pos[d.first]));
            bool kv = d.second ? kb : !kb;
            if (f->tag == GTag::And ? !kv : kv) {
              v = !v;
              break;
            }
          }
          break;
        }
        case GTag::Forall:
        case GTag::Exists:
        case GTag::Not:
          // quantified members carry at most one free variable and sit in
          // the earlier groups; representatives are never negation-topped
          break;
      }
    }
    t.set(static_cast<std::size_t>(p), v);
  }
  return t;
}

// Universally guarded implications of the closure, instantiated at the
// pair: formulas with one free variable instantiate their bound variable
// with the partner element, sentences binding both variables instantiate
// both orientations. Sentences binding a single variable are element-local
// and already enforced on the cores.
bool two_coherent(const ClosureGf2& cx, const Bits& t) {
  auto val = [&cx, &t](std::pair<int, bool> d) {
    bool b = t.get(static_cast<std::size_t>(cx.two_pos[d.first]));
    return d.second ? b : !b;
  };
  for (int p = 0; p < cx.n2; ++p) {
    int rep = cx.two_order[p];
    const Gf2& f = cx.reps[rep];
    if (f->tag != GTag::Forall && f->tag != GTag::Exists) continue;
    bool v = t.get(static_cast<std::size_t>(p));
    auto gd = cx.kids[rep][0];
    auto bd = cx.kids[rep][1];
    auto bad = [&](bool g, bool b) {
      if (f->tag == GTag::Forall) return v && g && !b;
      return !v && g && b;
    };
    if (cx.free_mask[rep] != 0) {
      if (bad(val(gd), val(bd))) return false;
    } else if (f->qvars == 3) {
      if (bad(val(gd), val(bd))) return false;
      std::pair<int, bool> sg{cx.swap_of[gd.first], gd.second};
      std::pair<int, bool> sb{cx.swap_of[bd.first], bd.second};
      if (bad(val(sg), val(sb))) return false;
    }
  }
  return true;
}

}  // namespace

Gf2TypeTable gf2_types(const Ontology& o,
                       const std::vector<std::string>& db_roles) {
  Gf2TypeTable tt;
  tt.cx = closure_gf2(o, db_roles);
  const ClosureGf2& cx = tt.cx;

  std::vector<Bits> cand1 = one_candidates(cx);

  // Initial cores (closure parts) and sentence strata.
  std::vector<Bits> cores, zeros;
  std::map<Bits, int> core_id, zero_id;
  std::vector<int> cand_core(cand1.size()), core_zero;
  auto prefix = [](const Bits& b, int len) {
    Bits out(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i)
      out.set(static_cast<std::size_t>(i), b.get(static_cast<std::size_t>(i)));
    return out;
  };
  for (std::size_t e = 0; e < cand1.size(); ++e) {
    Bits core = prefix(cand1[e], cx.n1core);
    auto it = core_id.find(core);
    if (it == core_id.end()) {
      it = core_id.emplace(core, static_cast<int>(cores.size())).first;
      cores.push_back(core);
      Bits z = prefix(core, cx.n0);
      auto zt = zero_id.find(z);
      if (zt == zero_id.end()) {
        zt = zero_id.emplace(z, static_cast<int>(zeros.size())).first;
        zeros.push_back(z);
      }
      core_zero.push_back(zt->second);
    }
    cand_core[e] = it->second;
  }

  // Requirement universe. Element-level requirements are the non-sentence
  // x-formulas with a quantifier; sentence-level requirements are the
  // quantified sentences. For each, "pos" demands guard and body, "neg"
  // demands guard and negated body (a falsified universal).
  std::vector<int> req_reps, sreq_reps;
  std::vector<int> rep_req(cx.reps.size(), -1), rep_sreq(cx.reps.size(), -1);
  for (int p = 0; p < cx.n1core; ++p) {
    int rep = cx.one_order[p];
    GTag tag = cx.reps[rep]->tag;
    if (tag != GTag::Forall && tag != GTag::Exists) continue;
    if (cx.free_mask[rep] == 1) {
      rep_req[rep] = static_cast<int>(req_reps.size());
      req_reps.push_back(rep);
    } else if (cx.free_mask[rep] == 0) {
      rep_sreq[rep] = static_cast<int>(sreq_reps.size());
      sreq_reps.push_back(rep);
    }
  }

  std::size_t nreq = req_reps.size(), nsreq = sreq_reps.size();

  // Per candidate: pending element requirements (no self-witness) and
  // sentence-requirement service flags.
  struct ExtInfo {
    std::vector<std::pair<int, bool>> pending;  // (req index, need_b)
    Bits sserve_pos, sserve_neg;
  };
  std::vector<ExtInfo> einfo(cand1.size());
  for (std::size_t e = 0; e < cand1.size(); ++e) {
    OneEval ev{cx, cand1[e]};
    ExtInfo& in = einfo[e];
    in.sserve_pos = Bits(nsreq);
    in.sserve_neg = Bits(nsreq);
    for (std::size_t q = 0; q < nreq; ++q) {
      int rep = req_reps[q];
      bool v = cand1[e].get(static_cast<std::size_t>(cx.one_pos[rep]));
      bool need_b;
      if (cx.reps[rep]->tag == GTag::Exists && v)
        need_b = true;
      else if (cx.reps[rep]->tag == GTag::Forall && !v)
        need_b = false;
      else
        continue;
      bool g = ev.diagv(cx.kids[rep][0]);
      bool b = ev.diagv(cx.kids[rep][1]);
      if (g && b == need_b) continue;  // witnessed by the element itself
      in.pending.emplace_back(static_cast<int>(q), need_b);
    }
    for (std::size_t s = 0; s < nsreq; ++s) {
      int rep = sreq_reps[s];
      const Gf2& f = cx.reps[rep];
      bool g, b;
      if (f->qvars == 3) {
        g = ev.diagv(cx.kids[rep][0]);
        b = ev.diagv(cx.kids[rep][1]);
      } else if (f->qvars == 1) {
        g = ev.val(cx.kids[rep][0]);
        b = ev.val(cx.kids[rep][1]);
      } else {
        g = ev.yval(cx.kids[rep][0]);
        b = ev.yval(cx.kids[rep][1]);
      }
      if (g && b) in.sserve_pos.set(s);
      if (g && !b) in.sserve_neg.set(s);
    }
  }

  // Pending sentence requirements per stratum.
  std::vector<std::vector<std::pair<int, bool>>> zpending(zeros.size());
  for (std::size_t z = 0; z < zeros.size(); ++z) {
    for (std::size_t s = 0; s < nsreq; ++s) {
      int rep = sreq_reps[s];
      bool v = zeros[z].get(static_cast<std::size_t>(cx.one_pos[rep]));
      if (cx.reps[rep]->tag == GTag::Exists && v)
        zpending[z].emplace_back(static_cast<int>(s), true);
      else if (cx.reps[rep]->tag == GTag::Forall && !v)
        zpending[z].emplace_back(static_cast<int>(s), false);
    }
  }

  // Two-type candidates: ordered core pairs of one stratum, one assignment
  // of the binary atoms each.
  std::vector<int> pair_pos(cx.reps.size(), -1);
  for (std::size_t i = 0; i < cx.pair_atom_reps.size(); ++i)
    pair_pos[cx.pair_atom_reps[i]] = static_cast<int>(i);
  std::size_t npa = cx.pair_atom_reps.size();

  struct Triple {
    int c1, c2;
    Bits bits;
    Bits serve_pos, serve_neg;    // element requirements served
    Bits sserve_pos, sserve_neg;  // sentence requirements served
  };
  std::vector<Triple> triples;
  {
    std::vector<std::vector<int>> by_zero(zeros.size());
    for (std::size_t c = 0; c < cores.size(); ++c)
      by_zero[static_cast<std::size_t>(core_zero[c])].push_back(
          static_cast<int>(c));
    std::uint64_t work = 0;
    for (const auto& grp : by_zero)
      work += static_cast<std::uint64_t>(grp.size()) * grp.size()
              << (npa > 40 ? 40 : npa);
    if (npa >= 25 || work > (1ull << 26))
      throw ValidationError("two-type candidate space exceeds the budget");

    for (const auto& grp : by_zero) {
      for (int c1 : grp) {
        for (int c2 : grp) {
          for (std::uint64_t m = 0; m < (1ull << npa); ++m) {
            Bits pb(npa);
            for (std::size_t i = 0; i < npa; ++i)
              if ((m >> i) & 1) pb.set(i);
            Bits t2 = derive_two(cx, cores[static_cast<std::size_t>(c1)],
                                 cores[static_cast<std::size_t>(c2)],
                                 pair_pos, pb);
            if (!two_coherent(cx, t2)) continue;
            Triple tr;
            tr.c1 = c1;
            tr.c2 = c2;
            tr.serve_pos = Bits(nreq);
            tr.serve_neg = Bits(nreq);
            tr.sserve_pos = Bits(nsreq);
            tr.sserve_neg = Bits(nsreq);
            auto val = [&cx, &t2](std::pair<int, bool> d) {
              bool b = t2.get(static_cast<std::size_t>(cx.two_pos[d.first]));
              return d.second ? b : !b;
            };
            for (std::size_t q = 0; q < nreq; ++q) {
              int rep = req_reps[q];
              bool g = val(cx.kids[rep][0]);
              bool b = val(cx.kids[rep][1]);
              if (g && b) tr.serve_pos.set(q);
              if (g && !b) tr.serve_neg.set(q);
            }
            for (std::size_t s = 0; s < nsreq; ++s) {
              int rep = sreq_reps[s];
              if (cx.reps[rep]->qvars != 3) continue;
              bool g = val(cx.kids[rep][0]);
              bool b = val(cx.kids[rep][1]);
              if (g && b) tr.sserve_pos.set(s);
              if (g && !b) tr.sserve_neg.set(s);
            }
            tr.bits = std::move(t2);
            triples.push_back(std::move(tr));
          }
        }
      }
    }
  }

  // Joint elimination.
  std::vector<char> alive1(cand1.size(), 1);
  std::vector<char> alive2(triples.size(), 1);
  std::vector<char> alivez(zeros.size(), 1);
  std::vector<std::vector<int>> triples_by_c1(cores.size());
  for (std::size_t i = 0; i < triples.size(); ++i)
    triples_by_c1[static_cast<std::size_t>(triples[i].c1)].push_back(
        static_cast<int>(i));

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<char> core_alive(cores.size(), 0);
    for (std::size_t e = 0; e < cand1.size(); ++e)
      if (alive1[e]) core_alive[static_cast<std::size_t>(cand_core[e])] = 1;

    for (std::size_t z = 0; z < zeros.size(); ++z) {
      if (!alivez[z]) continue;
      for (const auto& [s, need] : zpending[z]) {
        bool served = false;
        for (std::size_t e = 0; e < cand1.size() && !served; ++e) {
          if (!alive1[e]) continue;
          if (core_zero[static_cast<std::size_t>(cand_core[e])] !=
              static_cast<int>(z))
            continue;
          const Bits& f =
              need ? einfo[e].sserve_pos : einfo[e].sserve_neg;
          served = f.get(static_cast<std::size_t>(s));
        }
        for (std::size_t i = 0; i < triples.size() && !served; ++i) {
          if (!alive2[i]) continue;
          if (core_zero[static_cast<std::size_t>(triples[i].c1)] !=
              static_cast<int>(z))
            continue;
          const Bits& f =
              need ? triples[i].sserve_pos : triples[i].sserve_neg;
          served = f.get(static_cast<std::size_t>(s));
        }
        if (!served) {
          alivez[z] = 0;
          changed = true;
          break;
        }
      }
    }

    for (std::size_t e = 0; e < cand1.size(); ++e) {
      if (!alive1[e]) continue;
      int z = core_zero[static_cast<std::size_t>(cand_core[e])];
      bool keep = alivez[static_cast<std::size_t>(z)];
      for (const auto& [q, need] : einfo[e].pending) {
        if (!keep) break;
        bool served = false;
        for (int i : triples_by_c1[static_cast<std::size_t>(cand_core[e])]) {
          if (!alive2[static_cast<std::size_t>(i)]) continue;
          const Bits& f = need ? triples[static_cast<std::size_t>(i)].serve_pos
                               : triples[static_cast<std::size_t>(i)].serve_neg;
          if (f.get(static_cast<std::size_t>(q))) {
            served = true;
            break;
          }
        }
        keep = served;
      }
      if (!keep) {
        alive1[e] = 0;
        changed = true;
      }
    }

    for (std::size_t i = 0; i < triples.size(); ++i) {
      if (!alive2[i]) continue;
      const Triple& tr = triples[i];
      bool keep = core_alive[static_cast<std::size_t>(tr.c1)] &&
                  core_alive[static_cast<std::size_t>(tr.c2)] &&
                  alivez[static_cast<std::size_t>(
                      core_zero[static_cast<std::size_t>(tr.c1)])];
      if (!keep) {
        alive2[i] = 0;
        changed = true;
      }
    }
  }

  // Assemble the survivors with final core and stratum numbering.
  std::map<Bits, int> fcore_id, fzero_id;
  for (std::size_t e = 0; e < cand1.size(); ++e) {
    if (!alive1[e]) continue;
    const Bits& core = cores[static_cast<std::size_t>(cand_core[e])];
    auto it = fcore_id.find(core);
    if (it == fcore_id.end()) {
      it = fcore_id.emplace(core, static_cast<int>(tt.cores.size())).first;
      tt.cores.push_back(core);
      Bits z = prefix(core, cx.n0);
      auto zt = fzero_id.find(z);
      if (zt == fzero_id.end()) {
        zt = fzero_id.emplace(z, static_cast<int>(tt.zeros.size())).first;
        tt.zeros.push_back(z);
      }
      tt.core_zero.push_back(zt->second);
    }
    tt.tp1.push_back(cand1[e]);
    tt.tp1_core.push_back(it->second);
  }
  for (std::size_t i = 0; i < triples.size(); ++i) {
    if (!alive2[i]) continue;
    const Triple& tr = triples[i];
    int c1 = fcore_id.at(cores[static_cast<std::size_t>(tr.c1)]);
    int c2 = fcore_id.at(cores[static_cast<std::size_t>(tr.c2)]);
    tt.tp2_by_cores[{c1, c2}].push_back(static_cast<int>(tt.tp2.size()));
    tt.tp2.push_back(tr.bits);
    tt.tp2_xcore.push_back(c1);
    tt.tp2_ycore.push_back(c2);
  }
  tt.pair_atom_mask = Bits(static_cast<std::size_t>(cx.n2));
  for (int rep : cx.pair_atom_reps)
    tt.pair_atom_mask.set(static_cast<std::size_t>(cx.two_pos[rep]));
  return tt;
}

bool Gf2TypeTable::edge_supertype_exists(int core1, int core2,
                                         const Bits& required) const {
  auto it = tp2_by_cores.find({core1, core2});
  if (it == tp2_by_cores.end()) return false;
  for (int i : it->second)
    if (required.subset_of(tp2[static_cast<std::size_t>(i)])) return true;
  return false;
}

int Gf2TypeTable::pair_atom_pos(const std::string& role, bool inv) const {
  Gf2 a = g_atom(role, inv ? std::vector<Var>{Var::Y, Var::X}
                           : std::vector<Var>{Var::X, Var::Y});
  int i = cx.idx(a);
  return i < 0 ? -1 : cx.two_pos[static_cast<std::size_t>(i)];
}

bool type_realizes_leaf(const ClosureGf2& cx, const Bits& t,
                        const std::vector<std::string>& upreds,
                        const std::vector<std::string>& loop_roles) {
  for (const std::string& p : upreds) {
    if (p == "top" || is_label_pred(p)) continue;
    int i = cx.idx(g_atom(p, {Var::X}));
    if (i < 0 || cx.one_pos[static_cast<std::size_t>(i)] < 0) continue;
    if (!t.get(static_cast<std::size_t>(cx.one_pos[static_cast<std::size_t>(i)])))
      return false;
  }
  for (const std::string& r : loop_roles) {
    auto it = cx.selfloop_rep.find(r);
    if (it == cx.selfloop_rep.end()) continue;
    if (!t.get(static_cast<std::size_t>(
            cx.one_pos[static_cast<std::size_t>(it->second)])))
      return false;
  }
  return true;
}

bool type_realizes_leaf(const ClosureGf2& cx, const Bits& t,
                        const Database& leaf) {
  if (leaf.size() != 1)
    throw ValidationError("leaf check expects a one-constant database");
  std::vector<std::string> loops;
  for (const auto& e : leaf.edges()) loops.push_back(e.pred);
  return type_realizes_leaf(cx, t, leaf.unaries(0), loops);
}

namespace {

std::vector<std::string> space_strings(const ClosureGf2& cx, const Bits& t,
                                       const std::vector<int>& order) {
  std::vector<std::string> out;
  for (std::size_t p = 0; p < order.size(); ++p) {
    const Gf2& f = cx.reps[static_cast<std::size_t>(order[p])];
    out.push_back(t.get(p) ? gf2_to_string(f) : gf2_to_string(g_not(f)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<std::string> type1_formula_strings(const ClosureGf2& cx,
                                               const Bits& t) {
  return space_strings(cx, t, cx.one_order);
}

std::vector<std::string> type2_formula_strings(const ClosureGf2& cx,
                                               const Bits& t) {
  std::vector<int> order(cx.two_order.begin(), cx.two_order.end());
  return space_strings(cx, t, order);
}

}  // namespace omq
