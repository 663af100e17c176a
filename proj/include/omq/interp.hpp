#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "omq/ast.hpp"
#include "omq/bits.hpp"
#include "omq/database.hpp"

namespace omq {

// Finite interpretation with domain {0,...,n-1}. The first |adom| elements
// are the database constants (standard names).
struct Interp {
  std::size_t n = 0;
  std::map<std::string, Bits> unary;   // pred -> element bits
  std::map<std::string, Bits> binary;  // pred -> n*n bits, row-major (src,dst)

  explicit Interp(std::size_t n_ = 0) : n(n_) {}

  Bits& upred(const std::string& p) {
    auto it = unary.find(p);
    if (it == unary.end()) it = unary.emplace(p, Bits(n)).first;
    return it->second;
  }
  Bits& bpred(const std::string& p) {
    auto it = binary.find(p);
    if (it == binary.end()) it = binary.emplace(p, Bits(n * n)).first;
    return it->second;
  }
  bool has_u(const std::string& p, std::size_t e) const {
    auto it = unary.find(p);
    return it != unary.end() && it->second.get(e);
  }
  bool has_b(const std::string& p, std::size_t a, std::size_t b) const {
    auto it = binary.find(p);
    return it != binary.end() && it->second.get(a * n + b);
  }
};

// Interpretation that realizes exactly the database facts (labels dropped,
// top-facts dropped).
Interp interp_of_database(const Database& db);

bool eval_concept(const Interp& I, const Concept& c, std::size_t e);
bool eval_gf2(const Interp& I, const Gf2& f, std::size_t x, std::size_t y);
bool eval_gf2_sentence(const Interp& I, const Gf2& f);

}  // namespace omq
