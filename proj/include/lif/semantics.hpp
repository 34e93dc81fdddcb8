#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lif/syntax.hpp"

namespace lif {

using Value = std::int64_t;

class Domain {
 public:
  explicit Domain(std::vector<Value> elements) : elems_(std::move(elements)) {
    if (elems_.empty()) throw Error("domain must be nonempty");
    for (uint32_t i = 0; i < elems_.size(); ++i)
      if (!index_.emplace(elems_[i], i).second)
        throw Error("duplicate domain element " + std::to_string(elems_[i]));
  }

  uint32_t size() const { return static_cast<uint32_t>(elems_.size()); }
  Value at(uint32_t i) const { return elems_[i]; }
  const std::vector<Value>& elements() const { return elems_; }

  bool contains(Value v) const { return index_.count(v) != 0; }

  uint32_t index_of(Value v) const {
    auto it = index_.find(v);
    if (it == index_.end()) throw Error("value " + std::to_string(v) + " outside domain");
    return it->second;
  }

  friend bool operator==(const Domain& a, const Domain& b) { return a.elems_ == b.elems_; }

 private:
  std::vector<Value> elems_;
  std::map<Value, uint32_t> index_;
};

class VarUniverse {
 public:
  VarUniverse() = default;
  explicit VarUniverse(std::vector<std::string> vars) : vars_(std::move(vars)) {
    for (uint32_t i = 0; i < vars_.size(); ++i)
      if (!index_.emplace(vars_[i], i).second) throw Error("duplicate variable '" + vars_[i] + "'");
  }

  uint32_t size() const { return static_cast<uint32_t>(vars_.size()); }
  const std::string& at(uint32_t i) const { return vars_[i]; }
  const std::vector<std::string>& names() const { return vars_; }

  bool contains(const std::string& v) const { return index_.count(v) != 0; }

  uint32_t index_of(const std::string& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) throw Error("variable '" + v + "' outside universe");
    return it->second;
  }

  friend bool operator==(const VarUniverse& a, const VarUniverse& b) { return a.vars_ == b.vars_; }

 private:
  std::vector<std::string> vars_;
  std::map<std::string, uint32_t> index_;
};

// All |domain|^|universe| total valuations, identified by a mixed-radix index:
// the first universe variable is the most significant digit, so valuation ids
// sort lexicographically by variable order then domain order.
class ValuationSpace {
 public:
  static constexpr uint64_t kMaxValuations = 4096;

  static std::shared_ptr<const ValuationSpace> make(VarUniverse universe, Domain domain) {
    uint64_t count = 1;
    for (uint32_t i = 0; i < universe.size(); ++i) {
      count *= domain.size();
      if (count > kMaxValuations)
        throw Error("valuation space too large (limit " + std::to_string(kMaxValuations) + " valuations)");
    }
    return std::shared_ptr<const ValuationSpace>(
        new ValuationSpace(std::move(universe), std::move(domain), static_cast<uint32_t>(count)));
  }

  const VarUniverse& universe() const { return universe_; }
  const Domain& domain() const { return domain_; }
  uint32_t count() const { return count_; }

  uint32_t value_index(uint32_t vid, uint32_t var) const {
    return vid / stride_[var] % domain_.size();
  }

  Value value(uint32_t vid, uint32_t var) const { return domain_.at(value_index(vid, var)); }

  uint32_t with_value_index(uint32_t vid, uint32_t var, uint32_t dom_idx) const {
    return vid + (dom_idx - value_index(vid, var)) * stride_[var];
  }

  std::vector<Value> values(uint32_t vid) const {
    std::vector<Value> out(universe_.size());
    for (uint32_t i = 0; i < universe_.size(); ++i) out[i] = value(vid, i);
    return out;
  }

  friend bool operator==(const ValuationSpace& a, const ValuationSpace& b) {
    return a.universe_ == b.universe_ && a.domain_ == b.domain_;
  }

 private:
  ValuationSpace(VarUniverse universe, Domain domain, uint32_t count)
      : universe_(std::move(universe)), domain_(std::move(domain)), count_(count) {
    stride_.resize(universe_.size());
    uint64_t s = 1;
    for (uint32_t i = universe_.size(); i-- > 0;) {
      stride_[i] = static_cast<uint32_t>(s);
      s *= domain_.size();
    }
  }

  VarUniverse universe_;
  Domain domain_;
  uint32_t count_;
  std::vector<uint32_t> stride_;
};

using SpacePtr = std::shared_ptr<const ValuationSpace>;

// A finite BRV: a bit matrix over valuation-id pairs, one word-aligned bit row
// per left valuation.
class Brv {
 public:
  explicit Brv(SpacePtr space)
      : space_(std::move(space)),
        row_words_((space_->count() + 63) / 64),
        bits_(static_cast<size_t>(space_->count()) * row_words_, 0) {}

  static Brv empty(SpacePtr space) { return Brv(std::move(space)); }

  static Brv diagonal(SpacePtr space) {
    Brv b(std::move(space));
    for (uint32_t v = 0; v < b.space_->count(); ++v) b.insert(v, v);
    return b;
  }

  static Brv full(SpacePtr space) {
    Brv b(std::move(space));
    uint32_t n = b.space_->count();
    for (uint32_t l = 0; l < n; ++l)
      for (uint32_t r = 0; r < n; ++r) b.insert(l, r);
    return b;
  }

  const SpacePtr& space() const { return space_; }

  bool contains(uint32_t l, uint32_t r) const {
    return (bits_[static_cast<size_t>(l) * row_words_ + r / 64] >> (r % 64)) & 1;
  }

  void insert(uint32_t l, uint32_t r) {
    bits_[static_cast<size_t>(l) * row_words_ + r / 64] |= uint64_t{1} << (r % 64);
  }

  uint64_t count() const {
    uint64_t n = 0;
    for (uint64_t w : bits_) n += std::popcount(w);
    return n;
  }

  bool is_empty() const {
    for (uint64_t w : bits_) if (w) return false;
    return true;
  }

  // Pairs in row-major valuation-id order: lexicographic by left then right.
  template <typename F>
  void for_each_pair(F f) const {
    uint32_t n = space_->count();
    for (uint32_t l = 0; l < n; ++l)
      for (uint32_t wi = 0; wi < row_words_; ++wi) {
        uint64_t w = bits_[static_cast<size_t>(l) * row_words_ + wi];
        while (w) {
          uint32_t r = wi * 64 + static_cast<uint32_t>(std::countr_zero(w));
          w &= w - 1;
          f(l, r);
        }
      }
  }

  std::vector<std::pair<uint32_t, uint32_t>> pairs() const {
    std::vector<std::pair<uint32_t, uint32_t>> out;
    for_each_pair([&](uint32_t l, uint32_t r) { out.emplace_back(l, r); });
    return out;
  }

  friend bool operator==(const Brv& a, const Brv& b) {
    return *a.space_ == *b.space_ && a.bits_ == b.bits_;
  }

  uint32_t row_words() const { return row_words_; }
  const uint64_t* row(uint32_t l) const { return bits_.data() + static_cast<size_t>(l) * row_words_; }
  uint64_t* row(uint32_t l) { return bits_.data() + static_cast<size_t>(l) * row_words_; }

 private:
  SpacePtr space_;
  uint32_t row_words_;
  std::vector<uint64_t> bits_;
};

inline void check_same_space(const Brv& a, const Brv& b) {
  if (!(*a.space() == *b.space())) throw Error("universe/domain mismatch between operands");
}

inline Brv brv_union(const Brv& a, const Brv& b) {
  check_same_space(a, b);
  Brv out = a;
  uint32_t n = out.space()->count();
  for (uint32_t l = 0; l < n; ++l)
    for (uint32_t w = 0; w < out.row_words(); ++w) out.row(l)[w] |= b.row(l)[w];
  return out;
}

inline Brv brv_intersect(const Brv& a, const Brv& b) {
  check_same_space(a, b);
  Brv out = a;
  uint32_t n = out.space()->count();
  for (uint32_t l = 0; l < n; ++l)
    for (uint32_t w = 0; w < out.row_words(); ++w) out.row(l)[w] &= b.row(l)[w];
  return out;
}

inline Brv brv_difference(const Brv& a, const Brv& b) {
  check_same_space(a, b);
  Brv out = a;
  uint32_t n = out.space()->count();
  for (uint32_t l = 0; l < n; ++l)
    for (uint32_t w = 0; w < out.row_words(); ++w) out.row(l)[w] &= ~b.row(l)[w];
  return out;
}

inline Brv brv_compose(const Brv& a, const Brv& b) {
  check_same_space(a, b);
  Brv out = Brv::empty(a.space());
  uint32_t n = a.space()->count();
  for (uint32_t l = 0; l < n; ++l)
    for (uint32_t wi = 0; wi < a.row_words(); ++wi) {
      uint64_t w = a.row(l)[wi];
      while (w) {
        uint32_t m = wi * 64 + static_cast<uint32_t>(std::countr_zero(w));
        w &= w - 1;
        for (uint32_t wj = 0; wj < out.row_words(); ++wj) out.row(l)[wj] |= b.row(m)[wj];
      }
    }
  return out;
}

inline Brv brv_converse(const Brv& a) {
  Brv out = Brv::empty(a.space());
  a.for_each_pair([&](uint32_t l, uint32_t r) { out.insert(r, l); });
  return out;
}

enum class Side { Left, Right };

// Existential relaxation of one side on the variables in Z (by universe index).
inline Brv brv_cyl(const Brv& a, Side side, const std::vector<uint32_t>& z) {
  for (uint32_t var : z)
    if (var >= a.space()->universe().size()) throw Error("cylindrification variable outside universe");
  Brv cur = a;
  const ValuationSpace& sp = *a.space();
  for (uint32_t var : z) {
    Brv next = Brv::empty(a.space());
    cur.for_each_pair([&](uint32_t l, uint32_t r) {
      for (uint32_t d = 0; d < sp.domain().size(); ++d) {
        if (side == Side::Left)
          next.insert(sp.with_value_index(l, var, d), r);
        else
          next.insert(l, sp.with_value_index(r, var, d));
      }
    });
    cur = std::move(next);
  }
  return cur;
}

enum class SelKind { L, R, LR };

// sel_l: nu1(x) = nu1(y);  sel_r: nu2(x) = nu2(y);  sel_lr: nu1(x) = nu2(y).
inline Brv brv_select(const Brv& a, SelKind kind, uint32_t x, uint32_t y) {
  const ValuationSpace& sp = *a.space();
  if (x >= sp.universe().size() || y >= sp.universe().size())
    throw Error("selection variable outside universe");
  Brv out = Brv::empty(a.space());
  a.for_each_pair([&](uint32_t l, uint32_t r) {
    bool keep = false;
    switch (kind) {
      case SelKind::L: keep = sp.value_index(l, x) == sp.value_index(l, y); break;
      case SelKind::R: keep = sp.value_index(r, x) == sp.value_index(r, y); break;
      case SelKind::LR: keep = sp.value_index(l, x) == sp.value_index(r, y); break;
    }
    if (keep) out.insert(l, r);
  });
  return out;
}

class Interpretation {
 public:
  Interpretation() = default;

  void set(const std::string& module, std::vector<std::vector<Value>> tuples) {
    for (const auto& t : tuples)
      if (t.size() != tuples.front().size())
        throw Error("module '" + module + "': tuples of unequal length");
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    rels_[module] = std::move(tuples);
  }

  const std::vector<std::vector<Value>>* find(const std::string& module) const {
    auto it = rels_.find(module);
    return it == rels_.end() ? nullptr : &it->second;
  }

  const std::map<std::string, std::vector<std::vector<Value>>>& relations() const { return rels_; }

  friend bool operator==(const Interpretation& a, const Interpretation& b) { return a.rels_ == b.rels_; }
  friend bool operator<(const Interpretation& a, const Interpretation& b) { return a.rels_ < b.rels_; }

 private:
  std::map<std::string, std::vector<std::vector<Value>>> rels_;
};

namespace detail {

// sem of M(in;out): nu1 matches the input positions, nu2 is nu1 overwritten on
// set(out) by the output positions.  A tuple mentioning values outside the
// domain, or binding one variable to two values, matches nothing.
inline Brv eval_atom(const Expr& e, const Interpretation& interp, const SpacePtr& space) {
  const auto* tuples = interp.find(e.module);
  if (!tuples) throw Error("unknown module '" + e.module + "' in interpretation");
  const ValuationSpace& sp = *space;
  size_t arity = e.args_in.size() + e.args_out.size();
  Brv out = Brv::empty(space);
  for (const auto& t : *tuples) {
    if (t.size() != arity)
      throw Error("module '" + e.module + "': tuple length " + std::to_string(t.size()) +
                  " does not match arity " + std::to_string(arity));
    std::map<uint32_t, uint32_t> left, right;
    bool ok = true;
    for (size_t i = 0; i < t.size() && ok; ++i) {
      if (!sp.domain().contains(t[i])) {
        ok = false;
        break;
      }
      uint32_t dom_idx = sp.domain().index_of(t[i]);
      const std::string& name = i < e.args_in.size() ? e.args_in[i] : e.args_out[i - e.args_in.size()];
      auto& side = i < e.args_in.size() ? left : right;
      auto [it, inserted] = side.emplace(sp.universe().index_of(name), dom_idx);
      if (!inserted && it->second != dom_idx) ok = false;
    }
    if (!ok) continue;
    for (uint32_t l = 0; l < sp.count(); ++l) {
      bool match = true;
      for (auto [var, dom_idx] : left)
        if (sp.value_index(l, var) != dom_idx) {
          match = false;
          break;
        }
      if (!match) continue;
      uint32_t r = l;
      for (auto [var, dom_idx] : right) r = sp.with_value_index(r, var, dom_idx);
      out.insert(l, r);
    }
  }
  return out;
}

}  // namespace detail

inline Brv evaluate(const Expr& e, const Interpretation& interp, const SpacePtr& space) {
  switch (e.op) {
    case Op::Id:
      return Brv::diagonal(space);
    case Op::Atom:
      return detail::eval_atom(e, interp, space);
    case Op::Union:
      return brv_union(evaluate(*e.a, interp, space), evaluate(*e.b, interp, space));
    case Op::Intersect:
      return brv_intersect(evaluate(*e.a, interp, space), evaluate(*e.b, interp, space));
    case Op::Diff:
      return brv_difference(evaluate(*e.a, interp, space), evaluate(*e.b, interp, space));
    case Op::Compose:
      return brv_compose(evaluate(*e.a, interp, space), evaluate(*e.b, interp, space));
    case Op::Converse:
      return brv_converse(evaluate(*e.a, interp, space));
    case Op::CylL:
    case Op::CylR: {
      std::vector<uint32_t> z;
      z.reserve(e.vars.size());
      for (const auto& v : e.vars) z.push_back(space->universe().index_of(v));
      return brv_cyl(evaluate(*e.a, interp, space), e.op == Op::CylL ? Side::Left : Side::Right, z);
    }
    case Op::SelL:
    case Op::SelR:
    case Op::SelLR: {
      SelKind k = e.op == Op::SelL ? SelKind::L : e.op == Op::SelR ? SelKind::R : SelKind::LR;
      return brv_select(evaluate(*e.a, interp, space), k, space->universe().index_of(e.x),
                        space->universe().index_of(e.y));
    }
  }
  throw Error("unreachable expression kind");
}

inline Brv evaluate(const ExprPtr& e, const Interpretation& interp, const SpacePtr& space) {
  return evaluate(*e, interp, space);
}

inline bool equivalent_on(const Expr& e1, const Expr& e2, const Interpretation& interp,
                          const SpacePtr& space) {
  return evaluate(e1, interp, space) == evaluate(e2, interp, space);
}

inline bool equivalent_on(const ExprPtr& e1, const ExprPtr& e2, const Interpretation& interp,
                          const SpacePtr& space) {
  return equivalent_on(*e1, *e2, interp, space);
}

}  // namespace lif
