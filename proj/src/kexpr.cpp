#include "omq/kexpr.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "omq/errors.hpp"

namespace omq {

int KExpr::max_label() const {
  int m = 0;
  for (auto& n : nodes) {
    m = std::max(m, n.label);
    m = std::max(m, n.label2);
  }
  return m;
}

int KExpr::splice(const KExpr& other) {
  int shift = static_cast<int>(nodes.size());
  for (auto n : other.nodes) {
    if (n.a >= 0) n.a += shift;
    if (n.b >= 0) n.b += shift;
    nodes.push_back(std::move(n));
  }
  return other.root + shift;
}

namespace {

// Evaluation state per subexpression: constants grouped by current label.
struct LabelState {
  std::map<int, std::vector<std::size_t>> classes;
  std::size_t count = 0;
};

}  // namespace

static Database eval_impl(const KExpr& s, KValidation* report, int k) {
  Database db;
  std::vector<LabelState> st(s.nodes.size());
  auto complain = [&](int node, const std::string& msg) {
    if (report) {
      report->ok = false;
      report->violations.push_back({node, msg});
    } else {
      throw ValidationError("k-expression node " + std::to_string(node) + ": " +
                            msg);
    }
  };

  for (std::size_t idx = 0; idx < s.nodes.size(); ++idx) {
    const KNode& n = s.nodes[idx];
    LabelState& me = st[idx];
    switch (n.kind) {
      case KNode::Intro: {
        if (n.label <= 0) complain(idx, "intro label must be positive");
        if (k > 0 && n.label > k)
          complain(idx, "intro label exceeds k=" + std::to_string(k));
        if (db.has_const(n.constant)) {
          complain(idx, "constant introduced twice: " + n.constant);
          me.classes[n.label].push_back(db.cid(n.constant));
          me.count = 1;
          break;
        }
        std::size_t c = db.add_const(n.constant);
        db.set_label(c, n.label);
        for (auto& p : n.upreds) {
          int lnum;
          if (is_label_pred(p, &lnum))
            complain(idx, "payload label fact outside the intro label: " + p);
          else
            db.add_unary(c, p);
        }
        for (auto& r : n.loops) db.add_edge(r, c, c);
        me.classes[n.label].push_back(c);
        me.count = 1;
        break;
      }
      case KNode::Union: {
        LabelState& A = st[n.a];
        LabelState& B = st[n.b];
        // Disjointness is guaranteed by the fresh-constant check at intro;
        // merge the smaller side into the larger.
        if (A.count < B.count) std::swap(A, B);
        for (auto& [lab, v] : B.classes) {
          auto& dst = A.classes[lab];
          dst.insert(dst.end(), v.begin(), v.end());
        }
        A.count += B.count;
        me = std::move(A);
        st[n.a] = LabelState{};
        st[n.b] = LabelState{};
        break;
      }
      case KNode::Add: {
        if (n.label == n.label2)
          complain(idx, "role insertion needs two distinct labels");
        if (k > 0 && (n.label > k || n.label2 > k))
          complain(idx, "label exceeds k=" + std::to_string(k));
        me = std::move(st[n.a]);
        st[n.a] = LabelState{};
        auto it = me.classes.find(n.label);
        auto jt = me.classes.find(n.label2);
        if (it != me.classes.end() && jt != me.classes.end())
          for (auto a : it->second)
            for (auto b : jt->second) db.add_edge(n.role, a, b);
        break;
      }
      case KNode::Relabel: {
        if (n.label == n.label2)
          complain(idx, "relabel needs two distinct labels");
        if (k > 0 && (n.label > k || n.label2 > k))
          complain(idx, "label exceeds k=" + std::to_string(k));
        me = std::move(st[n.a]);
        st[n.a] = LabelState{};
        auto it = me.classes.find(n.label);
        if (it != me.classes.end()) {
          for (auto c : it->second) db.set_label(c, n.label2);
          auto& dst = me.classes[n.label2];
          dst.insert(dst.end(), it->second.begin(), it->second.end());
          me.classes.erase(n.label);
        }
        break;
      }
    }
  }
  return db;
}

KValidation kexpr_validate(const KExpr& s, int k) {
  KValidation rep;
  rep.subexprs = s.nodes.size();
  if (s.root != static_cast<int>(s.nodes.size()) - 1 || s.nodes.empty()) {
    rep.ok = false;
    rep.violations.push_back({s.root, "root must be the last arena node"});
    return rep;
  }
  // Child indices must precede parents and be used exactly once.
  std::vector<int> uses(s.nodes.size(), 0);
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const KNode& n = s.nodes[i];
    for (int c : {n.a, n.b}) {
      if (c < 0) continue;
      if (c >= static_cast<int>(i)) {
        rep.ok = false;
        rep.violations.push_back({static_cast<int>(i), "child after parent"});
        return rep;
      }
      uses[c]++;
    }
  }
  for (std::size_t i = 0; i + 1 < s.nodes.size(); ++i)
    if (uses[i] != 1) {
      rep.ok = false;
      rep.violations.push_back(
          {static_cast<int>(i), "subexpression must feed exactly one parent"});
      return rep;
    }
  eval_impl(s, &rep, k);
  rep.width = const_cast<KExpr&>(s).max_label();
  return rep;
}

Database kexpr_eval(const KExpr& s) { return eval_impl(s, nullptr, 0); }

bool kexpr_matches(const KExpr& s, const Database& db) {
  return kexpr_eval(s).same_facts_no_labels(db);
}

KExpr kexpr_with_extra_unary(const KExpr& s, const std::string& constant,
                             const std::string& pred) {
  KExpr out = s;
  for (auto& n : out.nodes)
    if (n.kind == KNode::Intro && n.constant == constant) {
      n.upreds.push_back(pred);
      return out;
    }
  throw ValidationError("no intro leaf for constant " + constant);
}

std::string kexpr_to_string(const KExpr& s) {
  // Explicit stack; expressions can be very deep.
  std::string out;
  struct Frame {
    int node;
    int stage;
  };
  std::vector<Frame> stack{{s.root, 0}};
  while (!stack.empty()) {
    auto [idx, stage] = stack.back();
    stack.pop_back();
    const KNode& n = s.nodes[idx];
    if (stage == 0) {
      switch (n.kind) {
        case KNode::Intro: {
          out += "(intro " + std::to_string(n.label) + " " + n.constant;
          for (auto& p : n.upreds) out += " (" + p + " " + n.constant + ")";
          for (auto& r : n.loops)
            out += " (" + r + " " + n.constant + " " + n.constant + ")";
          out += ")";
          break;
        }
        case KNode::Union:
          out += "(union ";
          stack.push_back({idx, 2});
          stack.push_back({n.b, 0});
          stack.push_back({idx, 1});
          stack.push_back({n.a, 0});
          break;
        case KNode::Add:
          out += "(add " + n.role + " " + std::to_string(n.label) + " " +
                 std::to_string(n.label2) + " ";
          stack.push_back({idx, 2});
          stack.push_back({n.a, 0});
          break;
        case KNode::Relabel:
          out += "(relabel " + std::to_string(n.label) + " " +
                 std::to_string(n.label2) + " ";
          stack.push_back({idx, 2});
          stack.push_back({n.a, 0});
          break;
      }
    } else if (stage == 1) {
      out += " ";
    } else {
      out += ")";
    }
  }
  return out;
}

}  // namespace omq
