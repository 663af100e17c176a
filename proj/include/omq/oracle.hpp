#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "omq/database.hpp"
#include "omq/interp.hpp"
#include "omq/ontology.hpp"
#include "omq/query.hpp"
#include "omq/tri.hpp"

namespace omq {

struct OracleOptions {
  int extra = 2;  // anonymous elements to try, from 0 up to this many
  std::uint64_t node_budget = 5'000'000;
};

struct OracleOutcome {
  bool entailed = true;
  std::optional<Interp> countermodel;
  int countermodel_extra = 0;  // anonymous elements in the countermodel
  std::uint64_t nodes = 0;     // consistency checks spent
};

// Three-valued evaluation on a partially determined interpretation: tru
// holds the known-true bits, fls the known-false ones, anything else is
// open. Result kTrue3/kFalse3 means every completion agrees.
std::int8_t eval3_concept(const Interp& tru, const Interp& fls,
                          const Concept& c, std::size_t e);
std::int8_t eval3_gf2(const Interp& tru, const Interp& fls, const Gf2& f,
                      std::size_t x, std::size_t y);

// Exhaustive countermodel search: find a model of (o, D) over adom(D) plus
// up to opts.extra anonymous elements in which query_holds is false. Models
// are fact supersets of D over the joint signature of o, D and the listed
// extra predicates. query_holds must be monotone in the positive facts:
// once true on a partial model it stays true in every extension (this is
// what makes pruning sound). Entailed means no countermodel exists within
// the element budget. focus_elements (database element ids the query is
// anchored at, e.g. the candidate answer) only steer the branching order:
// bits at those elements usually decide whether the query can still be
// avoided, so they are explored first.
OracleOutcome countermodel_search(
    const Ontology& o, const Database& D,
    const std::function<bool(const Interp&)>& query_holds,
    const std::vector<std::string>& extra_unary,
    const std::vector<std::string>& extra_roles,
    const OracleOptions& opts = {},
    const std::vector<std::size_t>& focus_elements = {});

// Certain-answer check for q(candidate) over (o, D): entailed iff the
// answer holds in every model within the element budget.
OracleOutcome finite_model_oracle(const Ontology& o, const Database& D,
                                  const UCQ& q,
                                  const std::vector<std::string>& candidate,
                                  const OracleOptions& opts = {});

}  // namespace omq
