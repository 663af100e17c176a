#pragma once

#include <cstdint>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "omq/bits.hpp"
#include "omq/database.hpp"
#include "omq/ontology.hpp"
#include "omq/tri.hpp"

namespace omq {

// Splits cl(O) into free complementary bit pairs (concept names and
// quantified concepts, each paired with its NNF negation) and derived
// entries (top, bot, conjunctions, disjunctions). A complete assignment of
// the free bits determines exactly one Boolean-closed candidate type.
struct TypeSpace {
  const ClosureAlci* cx;
  std::vector<int> rep;       // cl index -> pair representative, -1 if derived
  std::vector<int> freebits;  // pair representatives, ascending
  std::vector<int> freepos;   // cl index -> position in freebits, -1 otherwise

  explicit TypeSpace(const ClosureAlci& c);

  // a holds one entry per freebits position; memo is caller scratch of size
  // cl, pre-filled with -1 (shared across calls with the same assignment).
  std::int8_t eval3(int i, const std::vector<std::int8_t>& a,
                    std::vector<std::int8_t>& memo) const;

  // Complete assignment -> full bit vector over cl.
  Bits complete(const std::vector<std::int8_t>& a) const;
};

// All Boolean-closed candidates containing C_O, before elimination.
std::vector<Bits> alci_type_candidates(const ClosureAlci& cx,
                                       std::uint64_t max_candidates = 1u
                                                                      << 20);

// Type elimination: keeps exactly the candidates realized in some model of
// the ontology. A candidate dies when one of its existential constraints
// has no surviving witness compatible with the universal constraints on
// both ends of the connecting role (inverses included).
std::vector<Bits> alci_types(const ClosureAlci& cx,
                             std::uint64_t max_candidates = 1u << 20);

struct TypeTableAlci {
  ClosureAlci cx;
  std::vector<Bits> types;
  bool satisfiable() const { return !types.empty(); }
};

TypeTableAlci alci_types(const Ontology& o);

// Structural sanity of a complete candidate: Boolean closure, complementary
// pairs, top/bot polarity, and C_O membership.
bool type_candidate_valid(const ClosureAlci& cx, const Bits& t);

// Can an element of type t carry the facts of an intro-node payload?
// False iff a payload concept name belonging to cl is missing from t, or a
// payload self-loop feeds a universal constraint of t whose body t lacks.
// Facts outside cl never disqualify: models may satisfy more than the type
// records. Label predicates and top facts are ignored.
bool type_realizes_leaf(const ClosureAlci& cx, const Bits& t,
                        const std::vector<std::string>& upreds,
                        const std::vector<std::string>& loop_roles);
// Same check reading the facts off a one-constant database.
bool type_realizes_leaf(const ClosureAlci& cx, const Bits& t,
                        const Database& leaf);

// Sorted printable form of a type (diagnostic dump).
std::vector<std::string> type_concept_strings(const ClosureAlci& cx,
                                              const Bits& t);

// Lazy realizability oracle over the same candidate space. Decides whether
// some realizable complete type extends a partial constraint, without ever
// materializing the candidate set - needed when cl is too large for
// alci_types. Realizability is coinductive: a candidate is accepted when
// every existential constraint has an accepted witness, and a cycle back
// into a candidate still under examination counts as success (such cycles
// unfold into infinite or looping models).
//
// Caching discipline: a failed candidate is cached unconditionally (cycle
// assumptions only ever help, so failing despite them is conclusive). A
// successful candidate is cached only once the search proves its support
// closed, i.e. when the success does not lean on candidates opened earlier
// in the recursion; the tentative stack tracks successes whose fate is
// still tied to an enclosing frame.
class AlciTypeOracle {
 public:
  explicit AlciTypeOracle(const ClosureAlci& cx,
                          std::uint64_t node_budget = 10'000'000);

  // Is there a realizable type with all pos indices present and all neg
  // indices absent? Indices refer to cx.cl.
  bool sat_extend(std::vector<int> pos, std::vector<int> neg);

  // Realizability of one complete candidate (false for malformed input).
  bool realizable(const Bits& t);

  std::uint64_t nodes_used() const { return nodes_; }
  void set_budget(std::uint64_t b) { budget_ = b; }
  const TypeSpace& space() const { return ts_; }

 private:
  struct Lit {
    int cl_idx;
    bool value;
  };
  static constexpr int kInfDepth = 1 << 30;

  std::pair<bool, int> real_rec(const Bits& t, int depth);
  std::pair<bool, int> search_rec(std::vector<std::int8_t> assign,
                                  const std::vector<Lit>& checks, int depth);
  bool consistent(const std::vector<std::int8_t>& assign,
                  const std::vector<Lit>& checks);
  bool propagate(std::vector<std::int8_t>& assign,
                 const std::vector<Lit>& checks);

  const ClosureAlci& cx_;
  TypeSpace ts_;
  std::vector<int> exists_idx_;   // cl indices of existential concepts
  std::vector<int> exists_body_;  // parallel: cl index of the body
  std::unordered_set<Bits, BitsHash> def_sat_, def_dead_;
  std::unordered_map<Bits, int, BitsHash> path_;
  std::vector<Bits> tstack_;
  std::map<std::pair<std::vector<int>, std::vector<int>>, bool> query_cache_;
  std::vector<std::int8_t> memo_;
  std::uint64_t nodes_ = 0;
  std::uint64_t budget_;
};

}  // namespace omq
