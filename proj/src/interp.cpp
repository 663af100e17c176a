#include "omq/interp.hpp"

namespace omq {

Interp interp_of_database(const Database& db) {
  Interp I(db.size());
  for (std::size_t c = 0; c < db.size(); ++c)
    for (auto& p : db.unaries(c))
      if (p != "top") I.upred(p).set(c);
  for (auto& e : db.edges()) I.bpred(e.pred).set(e.src * I.n + e.dst);
  return I;
}

bool eval_concept(const Interp& I, const Concept& c, std::size_t e) {
  switch (c->tag) {
    case CTag::Top: return true;
    case CTag::Bot: return false;
    case CTag::Name: return I.has_u(c->name, e);
    case CTag::Not: return !eval_concept(I, c->kids[0], e);
    case CTag::And:
      for (auto& k : c->kids)
        if (!eval_concept(I, k, e)) return false;
      return true;
    case CTag::Or:
      for (auto& k : c->kids)
        if (eval_concept(I, k, e)) return true;
      return false;
    case CTag::Exists:
    case CTag::Forall: {
      bool want_exists = c->tag == CTag::Exists;
      for (std::size_t d = 0; d < I.n; ++d) {
        bool edge = c->role.inverse ? I.has_b(c->role.name, d, e)
                                    : I.has_b(c->role.name, e, d);
        if (!edge) continue;
        bool v = eval_concept(I, c->kids[0], d);
        if (want_exists && v) return true;
        if (!want_exists && !v) return false;
      }
      return !want_exists;
    }
    case CTag::ExistsEq: {
      for (std::size_t d = 0; d < I.n; ++d) {
        bool edge = c->role.inverse ? I.has_b(c->role.name, d, e)
                                    : I.has_b(c->role.name, e, d);
        if (!edge) continue;
        bool agree = true;
        for (auto& a : c->eq_names)
          if (I.has_u(a, e) != I.has_u(a, d)) {
            agree = false;
            break;
          }
        if (agree) return true;
      }
      return false;
    }
  }
  return false;
}

bool eval_gf2(const Interp& I, const Gf2& f, std::size_t x, std::size_t y) {
  switch (f->tag) {
    case GTag::Atom: {
      if (f->args.size() == 1)
        return I.has_u(f->pred, f->args[0] == Var::X ? x : y);
      std::size_t a = f->args[0] == Var::X ? x : y;
      std::size_t b = f->args[1] == Var::X ? x : y;
      return I.has_b(f->pred, a, b);
    }
    case GTag::Eq: {
      std::size_t a = f->args[0] == Var::X ? x : y;
      std::size_t b = f->args[1] == Var::X ? x : y;
      return a == b;
    }
    case GTag::Not:
      return !eval_gf2(I, f->kids[0], x, y);
    case GTag::And:
      for (auto& k : f->kids)
        if (!eval_gf2(I, k, x, y)) return false;
      return true;
    case GTag::Or:
      for (auto& k : f->kids)
        if (eval_gf2(I, k, x, y)) return true;
      return false;
    case GTag::Forall:
    case GTag::Exists: {
      bool want_exists = f->tag == GTag::Exists;
      bool qx = f->qvars & 1, qy = f->qvars & 2;
      std::size_t x0 = qx ? 0 : x, x1 = qx ? I.n - 1 : x;
      std::size_t y0 = qy ? 0 : y, y1 = qy ? I.n - 1 : y;
      if (I.n == 0) return !want_exists;
      for (std::size_t xi = x0; xi <= x1; ++xi)
        for (std::size_t yi = y0; yi <= y1; ++yi) {
          bool g = eval_gf2(I, f->kids[0], xi, yi);
          if (!g) continue;
          bool b = eval_gf2(I, f->kids[1], xi, yi);
          if (want_exists && b) return true;
          if (!want_exists && !b) return false;
        }
      return !want_exists;
    }
  }
  return false;
}

bool eval_gf2_sentence(const Interp& I, const Gf2& f) {
  return eval_gf2(I, f, 0, 0);
}

}  // namespace omq
