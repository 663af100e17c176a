#pragma once

#include <optional>
#include <string>
#include <vector>

#include "omq/database.hpp"
#include "omq/interp.hpp"

namespace omq {

struct QAtom {
  std::string pred;
  int a = 0;   // variable id
  int b = -1;  // second variable id, -1 for unary atoms

  bool unary() const { return b < 0; }
  bool operator==(const QAtom& o) const {
    return pred == o.pred && a == o.a && b == o.b;
  }
  bool operator<(const QAtom& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return pred < o.pred;
  }
};

struct CQ {
  std::vector<std::string> var_names;  // id -> display name
  std::vector<QAtom> atoms;
  std::vector<int> answer_vars;        // ids, ordered as in the head

  std::size_t nvars() const { return var_names.size(); }
  std::string to_string(const std::string& head = "q") const;
  bool boolean() const { return answer_vars.empty(); }
};

struct UCQ {
  std::string head = "q";
  std::vector<CQ> cqs;  // all share the same answer arity

  std::size_t arity() const { return cqs.empty() ? 0 : cqs[0].answer_vars.size(); }
  std::size_t natoms() const {
    std::size_t n = 0;
    for (auto& c : cqs) n = std::max(n, c.atoms.size());
    return n;
  }
  bool is_aq() const {
    return cqs.size() == 1 && cqs[0].atoms.size() == 1 &&
           cqs[0].atoms[0].unary() && cqs[0].answer_vars.size() == 1;
  }
  std::string to_string() const;
};

// Backtracking homomorphism search; binding may pre-assign variables
// (element ids, -1 for free). Returns a total extension if one exists.
std::optional<std::vector<int>> hom_check(const CQ& p, const Interp& I,
                                          const std::vector<int>& binding);
std::optional<std::vector<int>> hom_check(const CQ& p, const Interp& I);

// Entailment-free evaluation: does q(cand) hold in I directly?
bool ucq_holds(const UCQ& q, const Interp& I, const std::vector<int>& cand);

// Marker-based reduction of answer-variable queries to Boolean ones: fresh
// @ans-i names mark the candidate constants, the database gains the marker
// facts and every CQ the marker atoms.
struct Booleanized {
  UCQ query;                        // Boolean
  Database db;                      // extended
  std::vector<std::string> markers; // fresh names, one per answer position
};

Booleanized booleanize(const UCQ& q, const std::vector<std::string>& cand,
                       const Database& db);

}  // namespace omq
