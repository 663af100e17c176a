#pragma once

#include <string>
#include <vector>

#include "omq/database.hpp"

namespace omq {

// k-expressions are stored as a flat arena; children precede parents, so a
// forward sweep is a valid post-order evaluation and no recursion is needed.
struct KNode {
  enum Kind { Intro, Union, Add, Relabel } kind = Intro;
  int label = 0, label2 = 0;    // Intro: label; Add/Relabel: i, j
  std::string role;             // Add
  std::string constant;         // Intro
  std::vector<std::string> upreds;  // Intro: extra unary facts
  std::vector<std::string> loops;   // Intro: self-loop roles
  int a = -1, b = -1;           // children
};

struct KExpr {
  std::vector<KNode> nodes;
  int root = -1;

  int max_label() const;
  std::size_t subexpr_count() const { return nodes.size(); }

  int intro(int label, const std::string& c,
            std::vector<std::string> upreds = {},
            std::vector<std::string> loops = {}) {
    KNode n;
    n.kind = KNode::Intro;
    n.label = label;
    n.constant = c;
    n.upreds = std::move(upreds);
    n.loops = std::move(loops);
    nodes.push_back(std::move(n));
    return root = static_cast<int>(nodes.size()) - 1;
  }
  int join(int a, int b) {
    KNode n;
    n.kind = KNode::Union;
    n.a = a;
    n.b = b;
    nodes.push_back(std::move(n));
    return root = static_cast<int>(nodes.size()) - 1;
  }
  int add(const std::string& role, int i, int j, int child) {
    KNode n;
    n.kind = KNode::Add;
    n.role = role;
    n.label = i;
    n.label2 = j;
    n.a = child;
    nodes.push_back(std::move(n));
    return root = static_cast<int>(nodes.size()) - 1;
  }
  int relabel(int i, int j, int child) {
    KNode n;
    n.kind = KNode::Relabel;
    n.label = i;
    n.label2 = j;
    n.a = child;
    nodes.push_back(std::move(n));
    return root = static_cast<int>(nodes.size()) - 1;
  }

  // Append a copy of other's nodes; returns the shifted index of other.root.
  int splice(const KExpr& other);
};

struct KViolation {
  int node;  // arena index
  std::string message;
};

struct KValidation {
  bool ok = true;
  int width = 0;  // highest label used
  std::size_t subexprs = 0;
  std::vector<KViolation> violations;
};

// Structural validation: payload shape, label bounds against k (0 = infer),
// operator label distinctness, disjointness of unions, one label per
// constant at every stage.
KValidation kexpr_validate(const KExpr& s, int k = 0);

// Bottom-up evaluation to the generated database (root labels kept).
// Throws ValidationError on disjointness/payload violations.
Database kexpr_eval(const KExpr& s);

// Label-stripped fact-set equality between eval(s) and db.
bool kexpr_matches(const KExpr& s, const Database& db);

// Locates the intro leaf of a constant and extends its payload with a unary
// fact; used to push marker facts into an existing expression.
KExpr kexpr_with_extra_unary(const KExpr& s, const std::string& constant,
                             const std::string& pred);

std::string kexpr_to_string(const KExpr& s);

}  // namespace omq
