#pragma once

#include <stdexcept>
#include <string>

namespace omq {

// Exit code 2.
struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int l, int c, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(l) + ":" +
                           std::to_string(c) + ": " + msg),
        line(l),
        col(c) {}
};

// Exit code 3.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exit code 4.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace omq
