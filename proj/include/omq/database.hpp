#pragma once

#include <cstdint>
#include <string>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace omq {

// Label predicates live in the reserved namespace L1, L2, ... and are kept
// out of the ordinary unary-fact store.
inline bool is_label_pred(const std::string& p, int* num = nullptr) {
  if (p.size() < 2 || p[0] != 'L') return false;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (!isdigit(static_cast<unsigned char>(p[i]))) return false;
  int n = std::stoi(p.substr(1));
  if (n <= 0) return false;
  if (num) *num = n;
  return true;
}

struct BinFact {
  std::string pred;
  std::uint32_t src = 0, dst = 0;
  bool operator==(const BinFact& o) const {
    return pred == o.pred && src == o.src && dst == o.dst;
  }
  bool operator<(const BinFact& o) const {
    if (src != o.src) return src < o.src;
    if (dst != o.dst) return dst < o.dst;
    return pred < o.pred;
  }
};

class Database {
 public:
  std::size_t size() const { return consts_.size(); }
  const std::vector<std::string>& consts() const { return consts_; }
  const std::string& cname(std::size_t i) const { return consts_[i]; }

  bool has_const(const std::string& c) const { return cid_.count(c) > 0; }
  std::size_t cid(const std::string& c) const { return cid_.at(c); }
  std::size_t add_const(const std::string& c) {
    auto it = cid_.find(c);
    if (it != cid_.end()) return it->second;
    std::size_t id = consts_.size();
    cid_.emplace(c, id);
    consts_.push_back(c);
    labels_.push_back(0);
    upreds_.emplace_back();
    out_.emplace_back();
    in_.emplace_back();
    return id;
  }

  int label(std::size_t c) const { return labels_[c]; }
  void set_label(std::size_t c, int l) { labels_[c] = l; }

  void add_unary(std::size_t c, const std::string& pred) {
    auto& v = upreds_[c];
    for (auto& p : v)
      if (p == pred) return;
    v.push_back(pred);
  }
  bool has_unary(std::size_t c, const std::string& pred) const {
    for (auto& p : upreds_[c])
      if (p == pred) return true;
    return false;
  }
  const std::vector<std::string>& unaries(std::size_t c) const {
    return upreds_[c];
  }

  // Name-based conveniences, written in fact order: pred first.
  void add_fact(const std::string& pred, const std::string& c) {
    add_unary(add_const(c), pred);
  }
  void add_fact(const std::string& pred, const std::string& a,
                const std::string& b) {
    add_edge(pred, add_const(a), add_const(b));
  }
  bool has_fact(const std::string& pred, const std::string& c) const {
    return has_const(c) && has_unary(cid(c), pred);
  }
  bool has_fact(const std::string& pred, const std::string& a,
                const std::string& b) const {
    return has_const(a) && has_const(b) && has_edge(pred, cid(a), cid(b));
  }

  void add_edge(const std::string& pred, std::size_t a, std::size_t b) {
    if (!eset_.insert(edge_key(pred_id(pred), a, b)).second) return;
    std::uint32_t idx = static_cast<std::uint32_t>(edges_.size());
    edges_.push_back({pred, static_cast<std::uint32_t>(a),
                      static_cast<std::uint32_t>(b)});
    out_[a].push_back(idx);
    in_[b].push_back(idx);
  }
  bool has_edge(const std::string& pred, std::size_t a, std::size_t b) const {
    auto it = pred_ids_.find(pred);
    if (it == pred_ids_.end()) return false;
    return eset_.count(edge_key(it->second, a, b)) > 0;
  }
  const std::vector<BinFact>& edges() const { return edges_; }
  const std::vector<std::uint32_t>& out_edges(std::size_t c) const {
    return out_[c];
  }
  const std::vector<std::uint32_t>& in_edges(std::size_t c) const {
    return in_[c];
  }
  const BinFact& edge(std::uint32_t idx) const { return edges_[idx]; }

  // All facts as printable lines, sorted; labels included unless stripped.
  std::vector<std::string> fact_lines(bool with_labels) const;

  // Equality of fact sets ignoring label predicates.
  bool same_facts_no_labels(const Database& o) const;

  std::vector<std::string> unary_pred_names() const;
  std::vector<std::string> role_names() const;

 private:
  // Packed membership key: 16 bits of predicate id, 24 of source and target
  // each. Large enough for every workload here; growth past that traps.
  static std::uint64_t edge_key(std::size_t pid, std::size_t a,
                                std::size_t b) {
    return (std::uint64_t(pid) << 48) | (std::uint64_t(a) << 24) |
           std::uint64_t(b);
  }
  std::size_t pred_id(const std::string& pred) {
    auto it = pred_ids_.find(pred);
    if (it != pred_ids_.end()) return it->second;
    std::size_t id = pred_ids_.size();
    if (id >= (1u << 16) || consts_.size() >= (1u << 24))
      throw std::length_error("database too large for the edge index");
    pred_ids_.emplace(pred, id);
    return id;
  }

  std::vector<std::string> consts_;
  std::unordered_map<std::string, std::size_t> cid_;
  std::vector<int> labels_;
  std::vector<std::vector<std::string>> upreds_;
  std::vector<BinFact> edges_;
  std::vector<std::vector<std::uint32_t>> out_, in_;
  std::unordered_map<std::string, std::size_t> pred_ids_;
  std::unordered_set<std::uint64_t> eset_;
};

}  // namespace omq
