#include "omq/database.hpp"

#include <algorithm>
#include <set>

namespace omq {

std::vector<std::string> Database::fact_lines(bool with_labels) const {
  std::set<std::string> lines;
  for (std::size_t c = 0; c < size(); ++c) {
    for (auto& p : upreds_[c]) lines.insert(p + "(" + consts_[c] + ")");
    if (with_labels && labels_[c] > 0)
      lines.insert("L" + std::to_string(labels_[c]) + "(" + consts_[c] + ")");
    // Constants carrying no facts still belong to the active domain; emit a
    // top() membership line so that the printed form round-trips.
    if (upreds_[c].empty() && out_[c].empty() && in_[c].empty() &&
        !(with_labels && labels_[c] > 0))
      lines.insert("top(" + consts_[c] + ")");
  }
  for (auto& e : edges_)
    lines.insert(e.pred + "(" + consts_[e.src] + "," + consts_[e.dst] + ")");
  return {lines.begin(), lines.end()};
}

bool Database::same_facts_no_labels(const Database& o) const {
  return fact_lines(false) == o.fact_lines(false);
}

std::vector<std::string> Database::unary_pred_names() const {
  std::set<std::string> s;
  for (auto& ps : upreds_)
    for (auto& p : ps) s.insert(p);
  return {s.begin(), s.end()};
}

std::vector<std::string> Database::role_names() const {
  std::set<std::string> s;
  for (auto& e : edges_) s.insert(e.pred);
  return {s.begin(), s.end()};
}

}  // namespace omq
