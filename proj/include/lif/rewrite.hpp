#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "lif/analysis.hpp"
#include "lif/syntax.hpp"

namespace lif {

// Issues variable names guaranteed distinct from the base universe and from
// every name issued before.  Issued names contain '#', which the expression
// parser rejects, so they can never collide with parsed input.
class FreshVarSupply {
 public:
  explicit FreshVarSupply(std::set<std::string> base) : used_(std::move(base)) {}

  std::string fresh(const std::string& base) {
    for (;;) {
      std::string candidate = base + "#" + std::to_string(counter_++);
      if (used_.insert(candidate).second) {
        issued_.push_back(candidate);
        return candidate;
      }
    }
  }

  const std::vector<std::string>& issued() const { return issued_; }

 private:
  std::set<std::string> used_;
  std::vector<std::string> issued_;
  std::uint64_t counter_ = 0;
};

// Equivalent forms of the operators that are expressible in terms of the
// others.  Each builder returns the right-hand side shape for one operator
// application; they are also the single steps used by expand_redundant.

inline ExprPtr intersect_via_difference(const ExprPtr& a, const ExprPtr& b) {
  return mk_diff(a, mk_diff(a, b));
}

inline ExprPtr cyl_l_via_converse(const std::vector<std::string>& vars, const ExprPtr& a) {
  return mk_converse(mk_cyl_r(vars, mk_converse(a)));
}

inline ExprPtr cyl_r_via_converse(const std::vector<std::string>& vars, const ExprPtr& a) {
  return mk_converse(mk_cyl_l(vars, mk_converse(a)));
}

// sel_r{x=y}(A) = A & cyl_l{x}(sel_lr{(x,x)=(y,x)}(cyl_l{x}(A)))
inline ExprPtr sel_r_via_lr(const std::string& x, const std::string& y, const ExprPtr& a) {
  ExprPtr inner = mk_cyl_l({x}, a);
  inner = mk_sel_lr(x, x, inner);
  inner = mk_sel_lr(x, y, inner);
  return mk_intersect(a, mk_cyl_l({x}, inner));
}

// sel_l{x=y}(A) = A & cyl_r{x}(sel_lr{(y,x)=(x,x)}(cyl_r{x}(A)))
inline ExprPtr sel_l_via_lr(const std::string& x, const std::string& y, const ExprPtr& a) {
  ExprPtr inner = mk_cyl_r({x}, a);
  inner = mk_sel_lr(x, x, inner);
  inner = mk_sel_lr(y, x, inner);
  return mk_intersect(a, mk_cyl_r({x}, inner));
}

inline ExprPtr sel_l_via_converse(const std::string& x, const std::string& y, const ExprPtr& a) {
  return mk_converse(mk_sel_r(x, y, mk_converse(a)));
}

inline ExprPtr sel_r_via_converse(const std::string& x, const std::string& y, const ExprPtr& a) {
  return mk_converse(mk_sel_l(x, y, mk_converse(a)));
}

// Rewrites to the core operators: id, atoms, union, difference,
// composition, converse, left cylindrification and left-right selection.
// Intersection, right cylindrification and the one-sided selections are
// expanded away; sel_l{x=x} and sel_r{x=x} vanish.
inline ExprPtr expand_redundant(const ExprPtr& e) {
  switch (e->op) {
    case Op::Id:
    case Op::Atom:
      return e;
    case Op::Union:
    case Op::Diff:
    case Op::Compose: {
      ExprPtr a = expand_redundant(e->a), b = expand_redundant(e->b);
      if (a == e->a && b == e->b) return e;
      return mk_binary(e->op, a, b);
    }
    case Op::Intersect: {
      ExprPtr a = expand_redundant(e->a), b = expand_redundant(e->b);
      return mk_diff(a, mk_diff(a, b));
    }
    case Op::Converse: {
      ExprPtr a = expand_redundant(e->a);
      if (a == e->a) return e;
      return mk_converse(a);
    }
    case Op::CylL: {
      ExprPtr a = expand_redundant(e->a);
      if (a == e->a) return e;
      return mk_cyl_l(e->vars, a);
    }
    case Op::CylR:
      return mk_converse(mk_cyl_l(e->vars, mk_converse(expand_redundant(e->a))));
    case Op::SelLR: {
      ExprPtr a = expand_redundant(e->a);
      if (a == e->a) return e;
      return mk_sel_lr(e->x, e->y, a);
    }
    case Op::SelR: {
      ExprPtr a = expand_redundant(e->a);
      if (e->x == e->y) return a;
      ExprPtr inner = mk_cyl_l({e->x}, a);
      inner = mk_sel_lr(e->x, e->x, inner);
      inner = mk_sel_lr(e->x, e->y, inner);
      ExprPtr cyl = mk_cyl_l({e->x}, inner);
      return mk_diff(a, mk_diff(a, cyl));
    }
    case Op::SelL: {
      ExprPtr a = expand_redundant(e->a);
      if (e->x == e->y) return a;
      ExprPtr flipped = mk_converse(a);
      ExprPtr inner = mk_cyl_l({e->x}, flipped);
      inner = mk_sel_lr(e->x, e->x, inner);
      inner = mk_sel_lr(e->x, e->y, inner);
      ExprPtr cyl = mk_cyl_l({e->x}, inner);
      return mk_converse(mk_diff(flipped, mk_diff(flipped, cyl)));
    }
  }
  throw Error("unreachable operator in expand_redundant");
}

// alpha ; beta  ==  cyl_r{O(beta)}(alpha) & cyl_l{O(alpha)}(beta),
// valid when beta's syntactic inputs and outputs are disjoint.
inline ExprPtr compose_io_disjoint(const ExprPtr& alpha, const ExprPtr& beta) {
  if (!is_io_disjoint(beta))
    throw Error("right operand of composition has overlapping inputs and outputs");
  IOReport a_io = syn_io(alpha), b_io = syn_io(beta);
  std::vector<std::string> o_alpha(a_io.outputs.begin(), a_io.outputs.end());
  std::vector<std::string> o_beta(b_io.outputs.begin(), b_io.outputs.end());
  return mk_intersect(mk_cyl_r(o_beta, alpha), mk_cyl_l(o_alpha, beta));
}

// Right move of xs onto ys:
//   sel_lr{xs=xs}(cyl_r{xs}(sel_r{xs=ys}(cyl_r{ys}(B))))
// with tuple selections nested first pair outermost.  The result leaves xs
// unchanged on the right and exposes the old right values of xs on ys.
inline ExprPtr build_move(const std::vector<std::string>& xs, const std::vector<std::string>& ys,
                          const ExprPtr& b) {
  if (xs.size() != ys.size()) throw Error("move tuples must have the same length");
  std::set<std::string> seen;
  for (const auto& v : xs)
    if (!seen.insert(v).second) throw Error("move tuple variables must be distinct");
  for (const auto& v : ys)
    if (!seen.insert(v).second) throw Error("move tuple variables must be distinct");
  if (xs.empty()) return b;

  ExprPtr e = mk_cyl_r(ys, b);
  for (std::size_t i = xs.size(); i-- > 0;) e = mk_sel_r(xs[i], ys[i], e);
  e = mk_cyl_r(xs, e);
  for (std::size_t i = xs.size(); i-- > 0;) e = mk_sel_lr(xs[i], xs[i], e);
  return e;
}

struct ElimResult {
  ExprPtr expr;
  std::vector<std::string> fresh;
};

namespace detail {

inline ExprPtr eliminate_rec(const ExprPtr& e, FreshVarSupply& supply) {
  switch (e->op) {
    case Op::Id:
    case Op::Atom:
      return e;
    case Op::Compose: {
      ExprPtr a = eliminate_rec(e->a, supply);
      ExprPtr b = eliminate_rec(e->b, supply);
      std::set<std::string> outs = syn_io(b).outputs;
      std::vector<std::string> xs(outs.begin(), outs.end());
      std::vector<std::string> ys;
      for (const auto& x : xs) ys.push_back(supply.fresh(x));
      ExprPtr moved = build_move(xs, ys, b);
      ExprPtr split = compose_io_disjoint(a, moved);
      return build_move(ys, xs, split);
    }
    case Op::Union:
    case Op::Intersect:
    case Op::Diff: {
      ExprPtr a = eliminate_rec(e->a, supply), b = eliminate_rec(e->b, supply);
      if (a == e->a && b == e->b) return e;
      return mk_binary(e->op, a, b);
    }
    case Op::Converse: {
      ExprPtr a = eliminate_rec(e->a, supply);
      if (a == e->a) return e;
      return mk_converse(a);
    }
    case Op::CylL:
    case Op::CylR: {
      ExprPtr a = eliminate_rec(e->a, supply);
      if (a == e->a) return e;
      return mk_cyl(e->op, e->vars, a);
    }
    case Op::SelL:
    case Op::SelR:
    case Op::SelLR: {
      ExprPtr a = eliminate_rec(e->a, supply);
      if (a == e->a) return e;
      return mk_sel(e->op, e->x, e->y, a);
    }
  }
  throw Error("unreachable operator in eliminate_compositions");
}

}  // namespace detail

// Removes every composition, working innermost-leftmost.  Each composition
// alpha;beta first has beta's outputs moved onto fresh variables, making the
// io-disjoint split applicable, and the fresh variables are moved back
// afterwards.  The result is equivalent over the universe extended with the
// issued fresh variables.
inline ElimResult eliminate_compositions(const ExprPtr& e, FreshVarSupply& supply) {
  std::size_t before = supply.issued().size();
  ExprPtr out = detail::eliminate_rec(e, supply);
  std::vector<std::string> fresh(supply.issued().begin() + before, supply.issued().end());
  return {out, fresh};
}

inline ElimResult eliminate_compositions(const ExprPtr& e) {
  FreshVarSupply supply(vars_of(*e));
  return eliminate_compositions(e, supply);
}

}  // namespace lif
