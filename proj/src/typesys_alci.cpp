#include "omq/typesys_alci.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

#include "omq/errors.hpp"

namespace omq {

TypeSpace::TypeSpace(const ClosureAlci& c) : cx(&c) {
  std::size_t n = c.size();
  rep.assign(n, -1);
  freepos.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    CTag tg = c.cl[i]->tag;
    if (tg == CTag::Name || tg == CTag::Not || tg == CTag::Exists ||
        tg == CTag::Forall) {
      assert(c.neg[i] != static_cast<int>(i));
      rep[i] = std::min(static_cast<int>(i), c.neg[i]);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (rep[i] == static_cast<int>(i)) freebits.push_back(static_cast<int>(i));
  for (std::size_t p = 0; p < freebits.size(); ++p)
    freepos[freebits[p]] = static_cast<int>(p);
}

std::int8_t TypeSpace::eval3(int i, const std::vector<std::int8_t>& a,
                             std::vector<std::int8_t>& memo) const {
  if (memo[i] != -1) return memo[i];
  const ConceptNode* nd = cx->cl[i].get();
  std::int8_t r = kUnknown3;
  switch (nd->tag) {
    case CTag::Top:
      r = kTrue3;
      break;
    case CTag::Bot:
      r = kFalse3;
      break;
    case CTag::Name:
    case CTag::Not:
    case CTag::Exists:
    case CTag::Forall: {
      int rp = rep[i];
      std::int8_t v = a[freepos[rp]];
      if (i == rp)
        r = v;
      else
        r = v == kUnknown3 ? kUnknown3 : (v == kTrue3 ? kFalse3 : kTrue3);
      break;
    }
    case CTag::And: {
      r = kTrue3;
      for (auto& k : nd->kids) {
        std::int8_t kv = eval3(cx->idx(k), a, memo);
        if (kv == kFalse3) {
          r = kFalse3;
          break;
        }
        if (kv == kUnknown3) r = kUnknown3;
      }
      break;
    }
    case CTag::Or: {
      r = kFalse3;
      for (auto& k : nd->kids) {
        std::int8_t kv = eval3(cx->idx(k), a, memo);
        if (kv == kTrue3) {
          r = kTrue3;
          break;
        }
        if (kv == kUnknown3) r = kUnknown3;
      }
      break;
    }
    case CTag::ExistsEq:
      throw ValidationError("set-agreement concept inside a closure");
  }
  memo[i] = r;
  return r;
}

Bits TypeSpace::complete(const std::vector<std::int8_t>& a) const {
  Bits t(cx->size());
  std::vector<std::int8_t> memo(cx->size(), -1);
  for (std::size_t i = 0; i < cx->size(); ++i) {
    std::int8_t v = eval3(static_cast<int>(i), a, memo);
    assert(v != kUnknown3);
    t.set(i, v == kTrue3);
  }
  return t;
}

std::vector<Bits> alci_type_candidates(const ClosureAlci& cx,
                                       std::uint64_t max_candidates) {
  TypeSpace ts(cx);
  std::vector<Bits> out;
  std::vector<std::int8_t> assign(ts.freebits.size(), kUnknown3);
  std::vector<std::int8_t> memo;
  std::function<void(std::size_t)> go = [&](std::size_t pos) {
    memo.assign(cx.size(), -1);
    if (ts.eval3(cx.c_o_idx, assign, memo) == kFalse3) return;
    if (pos == assign.size()) {
      if (out.size() >= max_candidates)
        throw BudgetError("type candidate budget exceeded");
      out.push_back(ts.complete(assign));
      return;
    }
    for (std::int8_t v : {kFalse3, kTrue3}) {
      assign[pos] = v;
      go(pos + 1);
    }
    assign[pos] = kUnknown3;
  };
  go(0);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Union of the bodies of all universal constraints of t along role r.
Bits forall_bodies(const ClosureAlci& cx, const Bits& t, const Role& r) {
  Bits out(cx.size());
  for (std::size_t fi = 0; fi < cx.cl_forall.size(); ++fi) {
    int f = cx.cl_forall[fi];
    if (t.get(f) && cx.cl[f]->role == r) out.set(cx.forall_body[fi]);
  }
  return out;
}

}  // namespace

std::vector<Bits> alci_types(const ClosureAlci& cx,
                             std::uint64_t max_candidates) {
  std::vector<Bits> cands = alci_type_candidates(cx, max_candidates);
  struct Req {
    int exists_idx;
    int body;
  };
  std::vector<Req> reqs;
  for (std::size_t i = 0; i < cx.size(); ++i)
    if (cx.cl[i]->tag == CTag::Exists)
      reqs.push_back(
          {static_cast<int>(i), cx.idx(cx.cl[i]->kids[0])});
  std::vector<char> alive(cands.size(), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t ti = 0; ti < cands.size(); ++ti) {
      if (!alive[ti]) continue;
      const Bits& t = cands[ti];
      for (auto& rq : reqs) {
        if (!t.get(rq.exists_idx)) continue;
        const Role& role = cx.cl[rq.exists_idx]->role;
        Bits need = forall_bodies(cx, t, role);
        need.set(rq.body);
        bool found = false;
        for (std::size_t tj = 0; tj < cands.size() && !found; ++tj) {
          if (!alive[tj]) continue;
          if (need.subset_of(cands[tj]) &&
              forall_bodies(cx, cands[tj], role.inv()).subset_of(t))
            found = true;
        }
        if (!found) {
          alive[ti] = 0;
          changed = true;
          break;
        }
      }
    }
  }
  std::vector<Bits> out;
  for (std::size_t ti = 0; ti < cands.size(); ++ti)
    if (alive[ti]) out.push_back(cands[ti]);
  return out;
}

TypeTableAlci alci_types(const Ontology& o) {
  TypeTableAlci tt;
  tt.cx = closure_alci(o.normalized ? o : normalize(o));
  tt.types = alci_types(tt.cx);
  return tt;
}

bool type_candidate_valid(const ClosureAlci& cx, const Bits& t) {
  if (t.size() != cx.size()) return false;
  if (!t.get(cx.c_o_idx)) return false;
  for (std::size_t i = 0; i < cx.size(); ++i) {
    const ConceptNode* nd = cx.cl[i].get();
    switch (nd->tag) {
      case CTag::Top:
        if (!t.get(i)) return false;
        break;
      case CTag::Bot:
        if (t.get(i)) return false;
        break;
      case CTag::Name:
      case CTag::Not:
      case CTag::Exists:
      case CTag::Forall:
        if (t.get(i) == t.get(cx.neg[i])) return false;
        break;
      case CTag::And: {
        bool v = true;
        for (auto& k : nd->kids) v = v && t.get(cx.idx(k));
        if (t.get(i) != v) return false;
        break;
      }
      case CTag::Or: {
        bool v = false;
        for (auto& k : nd->kids) v = v || t.get(cx.idx(k));
        if (t.get(i) != v) return false;
        break;
      }
      case CTag::ExistsEq:
        return false;
    }
  }
  return true;
}

bool type_realizes_leaf(const ClosureAlci& cx, const Bits& t,
                        const std::vector<std::string>& upreds,
                        const std::vector<std::string>& loop_roles) {
  for (auto& p : upreds) {
    if (p == "top" || is_label_pred(p)) continue;
    int i = cx.idx(c_name(p));
    if (i >= 0 && !t.get(i)) return false;
  }
  for (auto& r : loop_roles) {
    for (std::size_t fi = 0; fi < cx.cl_forall.size(); ++fi) {
      int f = cx.cl_forall[fi];
      // A self-loop makes the element its own role successor and
      // predecessor, so universal constraints along both directions apply.
      if (t.get(f) && cx.cl[f]->role.name == r &&
          !t.get(cx.forall_body[fi]))
        return false;
    }
  }
  return true;
}

bool type_realizes_leaf(const ClosureAlci& cx, const Bits& t,
                        const Database& leaf) {
  if (leaf.size() != 1)
    throw ValidationError("leaf check expects a one-constant database");
  std::vector<std::string> loops;
  for (auto& e : leaf.edges()) loops.push_back(e.pred);
  return type_realizes_leaf(cx, t, leaf.unaries(0), loops);
}

std::vector<std::string> type_concept_strings(const ClosureAlci& cx,
                                              const Bits& t) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < cx.size(); ++i)
    if (t.get(i)) out.push_back(concept_to_string(cx.cl[i]));
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Lazy realizability oracle

AlciTypeOracle::AlciTypeOracle(const ClosureAlci& cx,
                               std::uint64_t node_budget)
    : cx_(cx), ts_(cx), budget_(node_budget) {
  for (std::size_t i = 0; i < cx.size(); ++i)
    if (cx.cl[i]->tag == CTag::Exists) {
      exists_idx_.push_back(static_cast<int>(i));
      exists_body_.push_back(cx.idx(cx.cl[i]->kids[0]));
    }
}

bool AlciTypeOracle::consistent(const std::vector<std::int8_t>& assign,
                                const std::vector<Lit>& checks) {
  if (++nodes_ > budget_) throw BudgetError("type search budget exceeded");
  memo_.assign(cx_.size(), -1);
  for (auto& l : checks) {
    std::int8_t v = ts_.eval3(l.cl_idx, assign, memo_);
    if (l.value && v == kFalse3) return false;
    if (!l.value && v == kTrue3) return false;
  }
  return true;
}

bool AlciTypeOracle::propagate(std::vector<std::int8_t>& assign,
                               const std::vector<Lit>& checks) {
  if (!consistent(assign, checks)) return false;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t p = 0; p < assign.size(); ++p) {
      if (assign[p] != kUnknown3) continue;
      assign[p] = kFalse3;
      bool ok0 = consistent(assign, checks);
      assign[p] = kTrue3;
      bool ok1 = consistent(assign, checks);
      if (!ok0 && !ok1) return false;
      if (!ok0) {
        changed = true;  // keep kTrue3
      } else if (!ok1) {
        assign[p] = kFalse3;
        changed = true;
      } else {
        assign[p] = kUnknown3;
      }
    }
  }
  return true;
}

std::pair<bool, int> AlciTypeOracle::search_rec(
    std::vector<std::int8_t> assign, const std::vector<Lit>& checks,
    int depth) {
  if (!propagate(assign, checks)) return {false, kInfDepth};
  int branch = -1;
  for (std::size_t p = 0; p < assign.size(); ++p)
    if (assign[p] == kUnknown3) {
      branch = static_cast<int>(p);
      break;
    }
  if (branch < 0) {
    Bits t = ts_.complete(assign);
    if (def_dead_.count(t)) return {false, kInfDepth};
    return real_rec(t, depth);
  }
  for (std::int8_t v : {kFalse3, kTrue3}) {
    auto a2 = assign;
    a2[branch] = v;
    auto res = search_rec(std::move(a2), checks, depth);
    if (res.first) return res;
  }
  return {false, kInfDepth};
}

std::pair<bool, int> AlciTypeOracle::real_rec(const Bits& t, int depth) {
  if (def_sat_.count(t)) return {true, kInfDepth};
  if (def_dead_.count(t)) return {false, kInfDepth};
  if (auto it = path_.find(t); it != path_.end()) return {true, it->second};
  if (++nodes_ > budget_) throw BudgetError("type search budget exceeded");

  std::size_t tmark = tstack_.size();
  path_.emplace(t, depth);
  int mylow = kInfDepth;
  bool ok = true;
  for (std::size_t e = 0; e < exists_idx_.size() && ok; ++e) {
    if (!t.get(exists_idx_[e])) continue;
    const Role& role = cx_.cl[exists_idx_[e]]->role;
    Role back = role.inv();
    std::vector<Lit> checks{{cx_.c_o_idx, true}, {exists_body_[e], true}};
    for (std::size_t fi = 0; fi < cx_.cl_forall.size(); ++fi) {
      int f = cx_.cl_forall[fi];
      if (cx_.cl[f]->role == role && t.get(f))
        checks.push_back({cx_.forall_body[fi], true});
      if (cx_.cl[f]->role == back && !t.get(cx_.forall_body[fi]))
        checks.push_back({f, false});
    }
    std::vector<std::int8_t> assign(ts_.freebits.size(), kUnknown3);
    auto res = search_rec(std::move(assign), checks, depth + 1);
    if (!res.first)
      ok = false;
    else
      mylow = std::min(mylow, res.second);
  }
  path_.erase(t);
  if (!ok) {
    tstack_.resize(tmark);
    def_dead_.insert(t);
    return {false, kInfDepth};
  }
  if (mylow >= depth) {
    // Support is closed at this frame: everything tentatively accepted in
    // the subtree leaned only on frames at or below this one.
    for (std::size_t i = tmark; i < tstack_.size(); ++i)
      def_sat_.insert(tstack_[i]);
    tstack_.resize(tmark);
    def_sat_.insert(t);
    return {true, kInfDepth};
  }
  tstack_.push_back(t);
  return {true, mylow};
}

bool AlciTypeOracle::sat_extend(std::vector<int> pos, std::vector<int> neg) {
  std::sort(pos.begin(), pos.end());
  pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
  std::sort(neg.begin(), neg.end());
  neg.erase(std::unique(neg.begin(), neg.end()), neg.end());
  auto key = std::make_pair(pos, neg);
  if (auto it = query_cache_.find(key); it != query_cache_.end())
    return it->second;
  std::vector<Lit> checks{{cx_.c_o_idx, true}};
  for (int i : pos) checks.push_back({i, true});
  for (int i : neg) checks.push_back({i, false});
  std::vector<std::int8_t> assign(ts_.freebits.size(), kUnknown3);
  auto res = search_rec(std::move(assign), checks, 0);
  assert(path_.empty() && tstack_.empty());
  query_cache_.emplace(std::move(key), res.first);
  return res.first;
}

bool AlciTypeOracle::realizable(const Bits& t) {
  if (!type_candidate_valid(cx_, t)) return false;
  if (def_sat_.count(t)) return true;
  if (def_dead_.count(t)) return false;
  auto res = real_rec(t, 0);
  assert(path_.empty() && tstack_.empty());
  return res.first;
}

}  // namespace omq
