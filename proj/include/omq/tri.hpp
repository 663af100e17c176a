#pragma once

#include <cstdint>

namespace omq {

// Three-valued truth used wherever a structure is only partially decided.
enum : std::int8_t { kFalse3 = 0, kTrue3 = 1, kUnknown3 = 2 };

inline std::int8_t not3(std::int8_t v) {
  return v == kUnknown3 ? kUnknown3 : (v == kTrue3 ? kFalse3 : kTrue3);
}

}  // namespace omq
