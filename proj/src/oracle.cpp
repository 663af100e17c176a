#include "omq/oracle.hpp"

#include <algorithm>
#include <set>

#include "omq/errors.hpp"

namespace omq {

std::int8_t eval3_concept(const Interp& tru, const Interp& fls,
                          const Concept& c, std::size_t e) {
  switch (c->tag) {
    case CTag::Top:
      return kTrue3;
    case CTag::Bot:
      return kFalse3;
    case CTag::Name:
      if (tru.has_u(c->name, e)) return kTrue3;
      if (fls.has_u(c->name, e)) return kFalse3;
      return kUnknown3;
    case CTag::Not:
      return not3(eval3_concept(tru, fls, c->kids[0], e));
    case CTag::And: {
      std::int8_t r = kTrue3;
      for (auto& k : c->kids) {
        std::int8_t v = eval3_concept(tru, fls, k, e);
        if (v == kFalse3) return kFalse3;
        if (v == kUnknown3) r = kUnknown3;
      }
      return r;
    }
    case CTag::Or: {
      std::int8_t r = kFalse3;
      for (auto& k : c->kids) {
        std::int8_t v = eval3_concept(tru, fls, k, e);
        if (v == kTrue3) return kTrue3;
        if (v == kUnknown3) r = kUnknown3;
      }
      return r;
    }
    case CTag::Exists:
    case CTag::Forall: {
      bool want_exists = c->tag == CTag::Exists;
      // Exists: true if some certainly-connected successor certainly
      // satisfies the body; false only if every possible successor
      // certainly fails. Forall dually.
      std::int8_t r = want_exists ? kFalse3 : kTrue3;
      for (std::size_t d = 0; d < tru.n; ++d) {
        std::size_t a = c->role.inverse ? d : e;
        std::size_t b = c->role.inverse ? e : d;
        std::int8_t edge = tru.has_b(c->role.name, a, b)  ? kTrue3
                           : fls.has_b(c->role.name, a, b) ? kFalse3
                                                           : kUnknown3;
        if (edge == kFalse3) continue;
        std::int8_t v = eval3_concept(tru, fls, c->kids[0], d);
        if (want_exists) {
          if (edge == kTrue3 && v == kTrue3) return kTrue3;
          if (v != kFalse3) r = kUnknown3;
        } else {
          if (edge == kTrue3 && v == kFalse3) return kFalse3;
          if (v != kTrue3) r = kUnknown3;
        }
      }
      return r;
    }
    case CTag::ExistsEq:
      throw ValidationError("set-agreement concept reached the oracle");
  }
  return kUnknown3;
}

std::int8_t eval3_gf2(const Interp& tru, const Interp& fls, const Gf2& f,
                      std::size_t x, std::size_t y) {
  switch (f->tag) {
    case GTag::Atom: {
      if (f->args.size() == 1) {
        std::size_t e = f->args[0] == Var::X ? x : y;
        if (tru.has_u(f->pred, e)) return kTrue3;
        if (fls.has_u(f->pred, e)) return kFalse3;
        return kUnknown3;
      }
      std::size_t a = f->args[0] == Var::X ? x : y;
      std::size_t b = f->args[1] == Var::X ? x : y;
      if (tru.has_b(f->pred, a, b)) return kTrue3;
      if (fls.has_b(f->pred, a, b)) return kFalse3;
      return kUnknown3;
    }
    case GTag::Eq: {
      std::size_t a = f->args[0] == Var::X ? x : y;
      std::size_t b = f->args[1] == Var::X ? x : y;
      return a == b ? kTrue3 : kFalse3;
    }
    case GTag::Not:
      return not3(eval3_gf2(tru, fls, f->kids[0], x, y));
    case GTag::And: {
      std::int8_t r = kTrue3;
      for (auto& k : f->kids) {
        std::int8_t v = eval3_gf2(tru, fls, k, x, y);
        if (v == kFalse3) return kFalse3;
        if (v == kUnknown3) r = kUnknown3;
      }
      return r;
    }
    case GTag::Or: {
      std::int8_t r = kFalse3;
      for (auto& k : f->kids) {
        std::int8_t v = eval3_gf2(tru, fls, k, x, y);
        if (v == kTrue3) return kTrue3;
        if (v == kUnknown3) r = kUnknown3;
      }
      return r;
    }
    case GTag::Forall:
    case GTag::Exists: {
      bool want_exists = f->tag == GTag::Exists;
      bool qx = f->qvars & 1, qy = f->qvars & 2;
      std::size_t x0 = qx ? 0 : x, x1 = qx ? tru.n - 1 : x;
      std::size_t y0 = qy ? 0 : y, y1 = qy ? tru.n - 1 : y;
      if (tru.n == 0) return want_exists ? kFalse3 : kTrue3;
      std::int8_t r = want_exists ? kFalse3 : kTrue3;
      for (std::size_t xi = x0; xi <= x1; ++xi)
        for (std::size_t yi = y0; yi <= y1; ++yi) {
          std::int8_t g = eval3_gf2(tru, fls, f->kids[0], xi, yi);
          if (g == kFalse3) continue;
          std::int8_t b = eval3_gf2(tru, fls, f->kids[1], xi, yi);
          if (want_exists) {
            if (g == kTrue3 && b == kTrue3) return kTrue3;
            if (b != kFalse3) r = kUnknown3;
          } else {
            if (g == kTrue3 && b == kFalse3) return kFalse3;
            if (b != kTrue3) r = kUnknown3;
          }
        }
      return r;
    }
  }
  return kUnknown3;
}

namespace {

struct Sig {
  std::vector<std::string> u, r;
};

void add_pred(std::set<std::string>& dst, const std::string& p) {
  if (p == "top" || p == "bot" || is_label_pred(p)) return;
  dst.insert(p);
}

Sig joint_signature(const Ontology& o, const Database& D,
                    const std::vector<std::string>& extra_unary,
                    const std::vector<std::string>& extra_roles) {
  std::set<std::string> u, r;
  if (o.dialect == Dialect::GF2) {
    for (auto& s : o.sentences) {
      std::vector<std::string> su, sr;
      gf2_collect_sig(s, su, sr);
      for (auto& p : su) add_pred(u, p);
      for (auto& p : sr) add_pred(r, p);
    }
  } else {
    std::vector<std::string> names, roles;
    for (auto& ci : o.cis) {
      concept_collect_names(ci.lhs, names, roles);
      concept_collect_names(ci.rhs, names, roles);
    }
    for (auto& p : names) add_pred(u, p);
    for (auto& p : roles) add_pred(r, p);
  }
  for (auto& p : D.unary_pred_names()) add_pred(u, p);
  for (auto& p : D.role_names()) add_pred(r, p);
  for (auto& p : extra_unary) add_pred(u, p);
  for (auto& p : extra_roles) add_pred(r, p);
  return {std::vector<std::string>(u.begin(), u.end()),
          std::vector<std::string>(r.begin(), r.end())};
}

struct Search {
  const Ontology& on;  // DL normalized, or GF2
  const std::function<bool(const Interp&)>& query_holds;
  const Sig& sig;
  std::size_t n;
  std::size_t ubits, nbits;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  std::optional<Interp> found;
  // Only bits of predicates the ontology mentions are ever branched: once
  // the ontology constraint is certainly true everywhere, completing all
  // remaining open bits with false yields a model, and the query - being
  // monotone - is false on it iff it is false on the true-bits.
  std::vector<std::size_t> branch_bits;

  struct State {
    std::vector<std::int8_t> val;
    Interp tru, fls;
  };

  Search(const Ontology& o, const std::function<bool(const Interp&)>& qh,
         const Sig& s, std::size_t n_, std::uint64_t b,
         const std::vector<std::string>& query_unary,
         const std::vector<std::string>& query_roles,
         const std::vector<std::size_t>& focus)
      : on(o), query_holds(qh), sig(s), n(n_), budget(b) {
    ubits = sig.u.size() * n;
    nbits = ubits + sig.r.size() * n * n;
    umark.assign(n, 0);
    std::set<std::string> ou, orr;
    if (on.dialect == Dialect::GF2) {
      for (auto& f : on.sentences) {
        std::vector<std::string> su, sr;
        gf2_collect_sig(f, su, sr);
        ou.insert(su.begin(), su.end());
        orr.insert(sr.begin(), sr.end());
      }
    } else {
      std::vector<std::string> names, roles;
      concept_collect_names(on.c_o(), names, roles);
      ou.insert(names.begin(), names.end());
      orr.insert(roles.begin(), roles.end());
    }
    // Branch query-relevant predicates first, and among those the bits at
    // the focus elements: whether the query can still be avoided is usually
    // decided right there, so conflicts with the ontology surface near the
    // top of the search tree instead of being rediscovered in every subtree.
    std::set<std::string> qu(query_unary.begin(), query_unary.end());
    std::set<std::string> qr(query_roles.begin(), query_roles.end());
    std::vector<char> in_focus(n, 0);
    for (std::size_t e : focus)
      if (e < n) in_focus[e] = 1;
    auto tier_u = [&](std::size_t p, std::size_t e) {
      if (!qu.count(sig.u[p])) return 2;
      return in_focus[e] ? 0 : 1;
    };
    auto tier_r = [&](std::size_t p, std::size_t a, std::size_t bb) {
      if (!qr.count(sig.r[p])) return 2;
      return (in_focus[a] || in_focus[bb]) ? 0 : 1;
    };
    for (int tier = 0; tier < 3; ++tier) {
      for (std::size_t p = 0; p < sig.u.size(); ++p)
        if (ou.count(sig.u[p]))
          for (std::size_t e = 0; e < n; ++e)
            if (tier_u(p, e) == tier) branch_bits.push_back(p * n + e);
      for (std::size_t p = 0; p < sig.r.size(); ++p)
        if (orr.count(sig.r[p]))
          for (std::size_t a = 0; a < n; ++a)
            for (std::size_t bb = 0; bb < n; ++bb)
              if (tier_r(p, a, bb) == tier)
                branch_bits.push_back(ubits + p * n * n + a * n + bb);
    }
  }

  void set_bit(State& s, std::size_t bit, std::int8_t v) {
    s.val[bit] = v;
    Interp& I = v == kTrue3 ? s.tru : s.fls;
    if (bit < ubits)
      I.upred(sig.u[bit / n]).set(bit % n);
    else {
      std::size_t rb = bit - ubits;
      I.bpred(sig.r[rb / (n * n)]).set(rb % (n * n));
    }
  }

  void unset_bit(State& s, std::size_t bit) {
    s.val[bit] = kUnknown3;
    if (bit < ubits) {
      s.tru.upred(sig.u[bit / n]).set(bit % n, false);
      s.fls.upred(sig.u[bit / n]).set(bit % n, false);
    } else {
      std::size_t rb = bit - ubits;
      s.tru.bpred(sig.r[rb / (n * n)]).set(rb % (n * n), false);
      s.fls.bpred(sig.r[rb / (n * n)]).set(rb % (n * n), false);
    }
  }

  // Scratch: elements where the ontology constraint was last seen unknown.
  std::vector<char> umark;

  // kFalse3: some constraint certainly violated - no completion repairs it.
  // kTrue3: every constraint certainly satisfied - every completion models it.
  // kUnknown3: open either way. With `mark`, record which elements the
  // verdict is still open at (for the description-logic dialect this is
  // per-element; the two-variable dialect's sentences are global, so every
  // element is marked).
  std::int8_t onto_status(const State& s, bool mark = false) {
    if (++nodes > budget) throw BudgetError("oracle node budget exceeded");
    if (mark) std::fill(umark.begin(), umark.end(), 0);
    std::int8_t res = kTrue3;
    if (on.dialect == Dialect::GF2) {
      for (auto& f : on.sentences) {
        std::int8_t v = eval3_gf2(s.tru, s.fls, f, 0, 0);
        if (v == kFalse3) return kFalse3;
        if (v == kUnknown3) res = kUnknown3;
      }
      if (mark && res == kUnknown3) std::fill(umark.begin(), umark.end(), 1);
    } else {
      const Concept& co = on.c_o();
      for (std::size_t e = 0; e < n; ++e) {
        std::int8_t v = eval3_concept(s.tru, s.fls, co, e);
        if (v == kFalse3) return kFalse3;
        if (v == kUnknown3) {
          res = kUnknown3;
          if (mark) umark[e] = 1;
        }
      }
    }
    return res;
  }

  bool touches_marked(std::size_t b) const {
    if (b < ubits) return umark[b % n] != 0;
    std::size_t pr = (b - ubits) % (n * n);
    return umark[pr / n] != 0 || umark[pr % n] != 0;
  }

  // Failed-literal propagation over the ontology constraints. Trials are
  // restricted to bits touching an element whose constraint verdict is still
  // open; other bits cannot flip a crisp verdict with one literal, so
  // skipping them only weakens (never falsifies) the inference.
  bool propagate(State& s) {
    if (onto_status(s, true) == kFalse3) return false;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t b : branch_bits) {
        if (s.val[b] != kUnknown3 || !touches_marked(b)) continue;
        set_bit(s, b, kFalse3);
        bool ok0 = onto_status(s) != kFalse3;
        unset_bit(s, b);
        set_bit(s, b, kTrue3);
        bool ok1 = onto_status(s) != kFalse3;
        if (!ok0 && !ok1) {
          unset_bit(s, b);
          return false;
        }
        if (!ok0) {
          changed = true;  // keep the true assignment
        } else if (!ok1) {
          unset_bit(s, b);
          set_bit(s, b, kFalse3);
          changed = true;
        } else {
          unset_bit(s, b);
        }
      }
      if (changed && onto_status(s, true) == kFalse3) return false;
    }
    return true;
  }

  bool dfs(State s) {
    if (!propagate(s)) return false;
    if (query_holds(s.tru)) return false;  // monotone: stays true below
    std::int8_t st = onto_status(s, true);
    if (st == kFalse3) return false;
    if (st == kTrue3) {
      // Completing every open bit with false keeps all constraints satisfied
      // and adds no query-visible fact, so the true-bits are a countermodel.
      found = s.tru;
      return true;
    }
    // Prefer a bit that can still swing an open verdict; fall back to any
    // open bit (nested quantifiers can hide the responsible bit behind a
    // crisp element).
    std::size_t first_open = nbits, pick = nbits;
    for (std::size_t b : branch_bits) {
      if (s.val[b] != kUnknown3) continue;
      if (first_open == nbits) first_open = b;
      if (touches_marked(b)) {
        pick = b;
        break;
      }
    }
    if (pick == nbits) pick = first_open;
    if (pick == nbits) {
      // All constrainable bits are decided; residual unknowns come from
      // predicates outside the model signature, which no model interprets.
      found = s.tru;
      return true;
    }
    for (std::int8_t v : {kFalse3, kTrue3}) {
      State s2 = s;
      set_bit(s2, pick, v);
      if (dfs(std::move(s2))) return true;
    }
    return false;
  }
};

}  // namespace

OracleOutcome countermodel_search(
    const Ontology& o, const Database& D,
    const std::function<bool(const Interp&)>& query_holds,
    const std::vector<std::string>& extra_unary,
    const std::vector<std::string>& extra_roles, const OracleOptions& opts,
    const std::vector<std::size_t>& focus_elements) {
  Ontology on = o;
  if (o.dialect != Dialect::GF2 && !o.normalized) on = normalize(o);
  Sig sig = joint_signature(on, D, extra_unary, extra_roles);

  OracleOutcome out;
  for (int e = 0; e <= opts.extra; ++e) {
    std::size_t n = D.size() + static_cast<std::size_t>(e);
    if (n == 0) continue;
    Search srch(on, query_holds, sig, n,
                opts.node_budget - std::min<std::uint64_t>(out.nodes,
                                                           opts.node_budget),
                extra_unary, extra_roles, focus_elements);
    Search::State root{std::vector<std::int8_t>(srch.nbits, kUnknown3),
                       Interp(n), Interp(n)};
    for (std::size_t c = 0; c < D.size(); ++c)
      for (auto& p : D.unaries(c))
        if (p != "top" && !is_label_pred(p)) {
          auto it = std::lower_bound(sig.u.begin(), sig.u.end(), p);
          srch.set_bit(root, (it - sig.u.begin()) * n + c, kTrue3);
        }
    for (auto& f : D.edges()) {
      auto it = std::lower_bound(sig.r.begin(), sig.r.end(), f.pred);
      srch.set_bit(root,
                   srch.ubits + (it - sig.r.begin()) * n * n + f.src * n +
                       f.dst,
                   kTrue3);
    }
    bool hit;
    try {
      hit = srch.dfs(std::move(root));
    } catch (const BudgetError&) {
      out.nodes += srch.nodes;
      throw BudgetError("oracle node budget exceeded after " +
                        std::to_string(out.nodes) + " checks");
    }
    out.nodes += srch.nodes;
    if (hit) {
      out.entailed = false;
      out.countermodel = std::move(srch.found);
      out.countermodel_extra = e;
      return out;
    }
  }
  out.entailed = true;
  return out;
}

OracleOutcome finite_model_oracle(const Ontology& o, const Database& D,
                                  const UCQ& q,
                                  const std::vector<std::string>& candidate,
                                  const OracleOptions& opts) {
  if (candidate.size() != q.arity())
    throw ValidationError("candidate arity does not match the query");
  std::vector<int> cand;
  for (auto& c : candidate) {
    if (!D.has_const(c))
      throw ValidationError("candidate constant not in database: " + c);
    cand.push_back(static_cast<int>(D.cid(c)));
  }
  std::vector<std::string> qu, qr;
  for (auto& cq : q.cqs)
    for (auto& at : cq.atoms)
      (at.unary() ? qu : qr).push_back(at.pred);
  auto holds = [&](const Interp& I) { return ucq_holds(q, I, cand); };
  std::vector<std::size_t> focus(cand.begin(), cand.end());
  return countermodel_search(o, D, holds, qu, qr, opts, focus);
}

}  // namespace omq
