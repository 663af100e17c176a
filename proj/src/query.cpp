#include "omq/query.hpp"

#include <algorithm>

#include "omq/errors.hpp"

namespace omq {

std::string CQ::to_string(const std::string& head) const {
  std::string s = head + "(";
  for (std::size_t i = 0; i < answer_vars.size(); ++i) {
    if (i) s += ",";
    s += var_names[answer_vars[i]];
  }
  s += ") := ";
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) s += ", ";
    auto& a = atoms[i];
    s += a.pred + "(" + var_names[a.a];
    if (!a.unary()) s += "," + var_names[a.b];
    s += ")";
  }
  return s;
}

std::string UCQ::to_string() const {
  std::string s;
  for (auto& c : cqs) {
    if (!s.empty()) s += "\n";
    s += c.to_string(head);
  }
  return s;
}

static bool atom_ok(const QAtom& at, const Interp& I, const std::vector<int>& b) {
  if (b[at.a] < 0) return true;
  if (at.unary()) return at.pred == "top" || I.has_u(at.pred, b[at.a]);
  if (b[at.b] < 0) return true;
  return I.has_b(at.pred, b[at.a], b[at.b]);
}

static bool hom_rec(const CQ& p, const Interp& I, std::vector<int>& b,
                    std::size_t v) {
  while (v < b.size() && b[v] >= 0) ++v;
  if (v >= b.size()) return true;
  for (std::size_t e = 0; e < I.n; ++e) {
    b[v] = static_cast<int>(e);
    bool ok = true;
    for (auto& at : p.atoms)
      if ((at.a == static_cast<int>(v) || at.b == static_cast<int>(v)) &&
          !atom_ok(at, I, b)) {
        ok = false;
        break;
      }
    if (ok && hom_rec(p, I, b, v + 1)) return true;
  }
  b[v] = -1;
  return false;
}

std::optional<std::vector<int>> hom_check(const CQ& p, const Interp& I,
                                          const std::vector<int>& binding) {
  std::vector<int> b = binding;
  b.resize(p.nvars(), -1);
  for (auto& at : p.atoms)
    if (!atom_ok(at, I, b)) return std::nullopt;
  if (hom_rec(p, I, b, 0)) return b;
  return std::nullopt;
}

std::optional<std::vector<int>> hom_check(const CQ& p, const Interp& I) {
  return hom_check(p, I, std::vector<int>(p.nvars(), -1));
}

bool ucq_holds(const UCQ& q, const Interp& I, const std::vector<int>& cand) {
  for (auto& c : q.cqs) {
    std::vector<int> b(c.nvars(), -1);
    for (std::size_t i = 0; i < cand.size() && i < c.answer_vars.size(); ++i)
      b[c.answer_vars[i]] = cand[i];
    if (hom_check(c, I, b)) return true;
  }
  return false;
}

Booleanized booleanize(const UCQ& q, const std::vector<std::string>& cand,
                       const Database& db) {
  if (q.arity() != cand.size())
    throw ValidationError("candidate arity does not match query arity");
  Booleanized out;
  out.db = db;
  out.query.head = q.head;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    std::string m = "@ans" + std::to_string(i + 1);
    out.markers.push_back(m);
    if (!out.db.has_const(cand[i]))
      throw ValidationError("candidate constant not in database: " + cand[i]);
    out.db.add_unary(out.db.cid(cand[i]), m);
  }
  for (auto& c : q.cqs) {
    CQ b = c;
    for (std::size_t i = 0; i < c.answer_vars.size(); ++i)
      b.atoms.push_back({out.markers[i], c.answer_vars[i], -1});
    b.answer_vars.clear();
    std::sort(b.atoms.begin(), b.atoms.end());
    b.atoms.erase(std::unique(b.atoms.begin(), b.atoms.end()), b.atoms.end());
    out.query.cqs.push_back(std::move(b));
  }
  return out;
}

}  // namespace omq
