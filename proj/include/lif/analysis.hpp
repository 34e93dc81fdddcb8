#pragma once

#include <map>
#include <set>
#include <string>

#include "lif/syntax.hpp"

namespace lif {

struct IOReport {
  std::set<std::string> inputs;
  std::set<std::string> outputs;

  std::set<std::string> fvars() const {
    std::set<std::string> out = inputs;
    out.insert(outputs.begin(), outputs.end());
    return out;
  }
};

namespace detail {

inline std::set<std::string> set_union(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> out = a;
  out.insert(b.begin(), b.end());
  return out;
}

inline std::set<std::string> set_intersect(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> out;
  for (const auto& x : a)
    if (b.count(x)) out.insert(x);
  return out;
}

inline std::set<std::string> set_minus(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> out;
  for (const auto& x : a)
    if (!b.count(x)) out.insert(x);
  return out;
}

inline std::set<std::string> set_symdiff(const std::set<std::string>& a, const std::set<std::string>& b) {
  return set_union(set_minus(a, b), set_minus(b, a));
}

inline IOReport syn_io_rec(const Expr& e, std::map<const Expr*, IOReport>& memo) {
  auto it = memo.find(&e);
  if (it != memo.end()) return it->second;
  IOReport out;
  switch (e.op) {
    case Op::Id:
      break;
    case Op::Atom:
      out.inputs.insert(e.args_in.begin(), e.args_in.end());
      out.outputs.insert(e.args_out.begin(), e.args_out.end());
      break;
    case Op::Union:
    case Op::Intersect:
    case Op::Diff: {
      IOReport l = syn_io_rec(*e.a, memo), r = syn_io_rec(*e.b, memo);
      out.inputs = set_union(set_union(l.inputs, r.inputs), set_symdiff(l.outputs, r.outputs));
      out.outputs = e.op == Op::Union  ? set_union(l.outputs, r.outputs)
                    : e.op == Op::Intersect ? set_intersect(l.outputs, r.outputs)
                                            : l.outputs;
      break;
    }
    case Op::Compose: {
      IOReport l = syn_io_rec(*e.a, memo), r = syn_io_rec(*e.b, memo);
      out.inputs = set_union(l.inputs, set_minus(r.inputs, l.outputs));
      out.outputs = set_union(l.outputs, r.outputs);
      break;
    }
    case Op::Converse: {
      IOReport c = syn_io_rec(*e.a, memo);
      out.inputs = set_union(c.outputs, c.inputs);
      out.outputs = c.outputs;
      break;
    }
    case Op::CylL: {
      IOReport c = syn_io_rec(*e.a, memo);
      std::set<std::string> z(e.vars.begin(), e.vars.end());
      out.inputs = set_minus(c.inputs, z);
      out.outputs = set_union(c.outputs, z);
      break;
    }
    case Op::CylR: {
      IOReport c = syn_io_rec(*e.a, memo);
      std::set<std::string> z(e.vars.begin(), e.vars.end());
      out.inputs = c.inputs;
      out.outputs = set_union(c.outputs, z);
      break;
    }
    case Op::SelLR: {
      IOReport c = syn_io_rec(*e.a, memo);
      bool same = e.x == e.y;
      bool y_out = c.outputs.count(e.y) != 0;
      if (same && !y_out)
        out.inputs = c.inputs;
      else if (!same && !y_out)
        out.inputs = set_union(c.inputs, {e.x, e.y});
      else
        out.inputs = set_union(c.inputs, {e.x});
      out.outputs = same ? set_minus(c.outputs, {e.x}) : c.outputs;
      break;
    }
    case Op::SelL: {
      IOReport c = syn_io_rec(*e.a, memo);
      out.inputs = e.x == e.y ? c.inputs : set_union(c.inputs, {e.x, e.y});
      out.outputs = c.outputs;
      break;
    }
    case Op::SelR: {
      IOReport c = syn_io_rec(*e.a, memo);
      out.inputs = e.x == e.y
                       ? c.inputs
                       : set_union(c.inputs, set_minus({e.x, e.y}, c.outputs));
      out.outputs = c.outputs;
      break;
    }
  }
  memo.emplace(&e, out);
  return out;
}

}  // namespace detail

// Syntactic inputs and outputs, computed recursively per operator.
inline IOReport syn_io(const Expr& e) {
  std::map<const Expr*, IOReport> memo;
  return detail::syn_io_rec(e, memo);
}

inline IOReport syn_io(const ExprPtr& e) { return syn_io(*e); }

inline bool is_io_disjoint(const Expr& e) {
  IOReport io = syn_io(e);
  for (const auto& v : io.outputs)
    if (io.inputs.count(v)) return false;
  return true;
}

inline bool is_io_disjoint(const ExprPtr& e) { return is_io_disjoint(*e); }

}  // namespace lif
