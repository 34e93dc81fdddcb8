#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lif/semantics.hpp"
#include "lif/syntax.hpp"

namespace lif {

// One semantic witness: the interpretation (index into the family that was
// searched), the pair exhibiting the behaviour, and for input witnesses the
// value the left valuation was moved to.
struct WitnessReport {
  std::string variable;
  std::size_t interp_index = 0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  std::optional<Value> moved_to;
};

struct WitnessResult {
  std::set<std::string> variables;
  std::vector<WitnessReport> reports;
};

// Does X determine q on Y?  For every (v1, v2) in q and every v1' agreeing
// with v1 on X there must be some v2' agreeing with v2 on Y with
// (v1', v2') in q.
inline bool determines(const Brv& q, const std::set<std::string>& xs, const std::set<std::string>& ys) {
  const ValuationSpace& sp = *q.space();
  const VarUniverse& u = sp.universe();
  const std::uint32_t dsize = sp.domain().size();

  std::vector<std::uint32_t> x_idx, y_idx, free_idx;
  for (std::uint32_t i = 0; i < u.size(); ++i) {
    if (xs.count(u.at(i)))
      x_idx.push_back(i);
    else
      free_idx.push_back(i);
    if (ys.count(u.at(i))) y_idx.push_back(i);
  }

  bool ok = true;
  q.for_each_pair([&](std::uint32_t l, std::uint32_t r) {
    if (!ok) return;
    // Enumerate every left valuation agreeing with l on xs by patching the
    // remaining variables with all value combinations.
    std::vector<std::uint32_t> digits(free_idx.size(), 0);
    while (true) {
      std::uint32_t l2 = l;
      for (std::size_t i = 0; i < free_idx.size(); ++i)
        l2 = sp.with_value_index(l2, free_idx[i], digits[i]);
      bool found = false;
      for (std::uint32_t r2 = 0; r2 < sp.count() && !found; ++r2) {
        if (!q.contains(l2, r2)) continue;
        bool agrees = true;
        for (std::uint32_t yi : y_idx)
          if (sp.value_index(r2, yi) != sp.value_index(r, yi)) {
            agrees = false;
            break;
          }
        found = agrees;
      }
      if (!found) {
        ok = false;
        return;
      }
      std::size_t k = 0;
      while (k < digits.size() && ++digits[k] == dsize) digits[k++] = 0;
      if (k == digits.size()) break;
    }
  });
  return ok;
}

inline bool determines(const Expr& e, const Interpretation& interp, const std::set<std::string>& xs,
                       const std::set<std::string>& ys, const SpacePtr& space) {
  return determines(evaluate(e, interp, space), xs, ys);
}

// Is q inertial on xs and closed under substituting arbitrary values for xs
// on both sides of a pair?
inline bool inertially_cylindrified(const Brv& q, const std::set<std::string>& xs) {
  const ValuationSpace& sp = *q.space();
  const VarUniverse& u = sp.universe();
  const std::uint32_t dsize = sp.domain().size();

  std::vector<std::uint32_t> x_idx;
  for (std::uint32_t i = 0; i < u.size(); ++i)
    if (xs.count(u.at(i))) x_idx.push_back(i);

  bool ok = true;
  q.for_each_pair([&](std::uint32_t l, std::uint32_t r) {
    if (!ok) return;
    for (std::uint32_t xi : x_idx)
      if (sp.value_index(l, xi) != sp.value_index(r, xi)) {
        ok = false;
        return;
      }
    std::vector<std::uint32_t> digits(x_idx.size(), 0);
    while (true) {
      std::uint32_t l2 = l, r2 = r;
      for (std::size_t i = 0; i < x_idx.size(); ++i) {
        l2 = sp.with_value_index(l2, x_idx[i], digits[i]);
        r2 = sp.with_value_index(r2, x_idx[i], digits[i]);
      }
      if (!q.contains(l2, r2)) {
        ok = false;
        return;
      }
      std::size_t k = 0;
      while (k < digits.size() && ++digits[k] == dsize) digits[k++] = 0;
      if (k == digits.size()) break;
    }
  });
  return ok;
}

inline bool inertially_cylindrified(const Expr& e, const Interpretation& interp, const std::set<std::string>& xs,
                                    const SpacePtr& space) {
  return inertially_cylindrified(evaluate(e, interp, space), xs);
}

// Variables witnessed as semantic outputs: some pair in some evaluation
// changes the variable between its left and right valuation.
inline WitnessResult witness_outputs(const Expr& e, const std::vector<Interpretation>& family,
                                     const SpacePtr& space) {
  const ValuationSpace& sp = *space;
  const VarUniverse& u = sp.universe();
  WitnessResult result;
  for (std::size_t di = 0; di < family.size(); ++di) {
    if (result.variables.size() == u.size()) break;
    Brv q = evaluate(e, family[di], space);
    q.for_each_pair([&](std::uint32_t l, std::uint32_t r) {
      for (std::uint32_t i = 0; i < u.size(); ++i) {
        const std::string& name = u.at(i);
        if (result.variables.count(name)) continue;
        if (sp.value_index(l, i) != sp.value_index(r, i)) {
          result.variables.insert(name);
          result.reports.push_back({name, di, l, r, std::nullopt});
        }
      }
    });
  }
  return result;
}

// Variables witnessed as semantic inputs.  A variable x is witnessed by a
// pair (v1, v2) in some evaluation and a value d such that no pair
// (v1[x:=d], v2') with v2' agreeing with v2 on the witnessed outputs exists
// in that evaluation.  Witnessed outputs come from the same family, which
// keeps the report an under-approximation of the syntactic inputs.
inline WitnessResult witness_inputs(const Expr& e, const std::vector<Interpretation>& family,
                                    const SpacePtr& space) {
  const ValuationSpace& sp = *space;
  const VarUniverse& u = sp.universe();
  const std::uint32_t dsize = sp.domain().size();

  WitnessResult outs = witness_outputs(e, family, space);
  std::vector<std::uint32_t> w_idx;
  for (std::uint32_t i = 0; i < u.size(); ++i)
    if (outs.variables.count(u.at(i))) w_idx.push_back(i);

  WitnessResult result;
  for (std::size_t di = 0; di < family.size(); ++di) {
    if (result.variables.size() == u.size()) break;
    Brv q = evaluate(e, family[di], space);
    for (std::uint32_t xi = 0; xi < u.size(); ++xi) {
      const std::string& name = u.at(xi);
      if (result.variables.count(name)) continue;
      bool found = false;
      q.for_each_pair([&](std::uint32_t l, std::uint32_t r) {
        if (found) return;
        for (std::uint32_t d = 0; d < dsize && !found; ++d) {
          if (d == sp.value_index(l, xi)) continue;
          std::uint32_t l2 = sp.with_value_index(l, xi, d);
          bool defeated = false;
          for (std::uint32_t r2 = 0; r2 < sp.count() && !defeated; ++r2) {
            if (!q.contains(l2, r2)) continue;
            bool agrees = true;
            for (std::uint32_t wi : w_idx)
              if (sp.value_index(r2, wi) != sp.value_index(r, wi)) {
                agrees = false;
                break;
              }
            defeated = agrees;
          }
          if (!defeated) {
            found = true;
            result.variables.insert(name);
            result.reports.push_back({name, di, l, r, sp.domain().at(d)});
          }
        }
      });
    }
  }
  return result;
}

// -------------------------------------------------------------------------
// Interpretation families.
//
// The default family enumerates, per module, every relation of size up to
// max_relation_size over the domain, and combines the per-module choices.
// Combinations are emitted stratified by total tuple count, smallest
// first, so the small interpretations that carry most witnesses are always
// present.  When a stratum would exceed the remaining budget a seeded
// pseudo-random sample of that stratum is taken instead and generation
// stops.

struct FamilyOptions {
  std::size_t max_relation_size = 2;
  std::uint64_t budget = 10000;
  std::uint64_t seed = 0;
};

struct Family {
  std::vector<Interpretation> interps;
  bool truncated = false;
  std::uint64_t total = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

// Lexicographically k-th size-`size` subset of {0..count-1}, ascending.
inline std::vector<std::uint64_t> unrank_subset(std::uint64_t count, std::size_t size, std::uint64_t rank) {
  std::vector<std::uint64_t> out;
  std::uint64_t next = 0;
  for (std::size_t slot = 0; slot < size; ++slot) {
    for (std::uint64_t a = next;; ++a) {
      std::uint64_t block = binom(count - 1 - a, size - slot - 1);
      if (rank < block) {
        out.push_back(a);
        next = a + 1;
        break;
      }
      rank -= block;
    }
  }
  return out;
}

inline std::vector<Value> unrank_tuple(const Domain& dom, int arity, std::uint64_t rank) {
  std::vector<Value> tuple(arity);
  for (int i = arity - 1; i >= 0; --i) {
    tuple[i] = dom.at(static_cast<std::uint32_t>(rank % dom.size()));
    rank /= dom.size();
  }
  return tuple;
}

}  // namespace detail

inline Family generate_family(const Vocabulary& vocab, const Domain& dom, const FamilyOptions& opt = {}) {
  struct ModuleInfo {
    std::string name;
    int arity;
    std::uint64_t tuple_count;
    std::vector<std::uint64_t> counts;  // relations per size
  };
  std::vector<ModuleInfo> mods;
  for (const auto& [name, sig] : vocab.modules()) {
    ModuleInfo m{name, sig.arity, 1, {}};
    for (int i = 0; i < sig.arity; ++i) m.tuple_count *= dom.size();
    for (std::size_t k = 0; k <= opt.max_relation_size; ++k)
      m.counts.push_back(detail::binom(m.tuple_count, k));
    mods.push_back(std::move(m));
  }

  Family family;
  family.seed = opt.seed;
  family.total = 1;
  for (const auto& m : mods) {
    std::uint64_t per = 0;
    for (std::uint64_t c : m.counts) per += c;
    family.total *= per;
  }

  auto materialize = [&](const std::vector<std::size_t>& sizes, std::uint64_t within) {
    Interpretation interp;
    for (std::size_t mi = mods.size(); mi-- > 0;) {
      std::uint64_t c = mods[mi].counts[sizes[mi]];
      std::uint64_t rank = within % c;
      within /= c;
      std::vector<std::vector<Value>> tuples;
      for (std::uint64_t t : detail::unrank_subset(mods[mi].tuple_count, sizes[mi], rank))
        tuples.push_back(detail::unrank_tuple(dom, mods[mi].arity, t));
      interp.set(mods[mi].name, tuples);
    }
    return interp;
  };

  // Compositions of the stratum's total tuple count into per-module sizes,
  // in lexicographic order.
  auto compositions = [&](std::size_t total_size) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur(mods.size(), 0);
    auto rec = [&](auto&& self, std::size_t mi, std::size_t left) -> void {
      if (mi == mods.size()) {
        if (left == 0) out.push_back(cur);
        return;
      }
      for (std::size_t s = 0; s <= std::min(left, opt.max_relation_size); ++s) {
        cur[mi] = s;
        self(self, mi + 1, left - s);
      }
    };
    rec(rec, 0, total_size);
    return out;
  };

  std::mt19937_64 rng(opt.seed);
  std::uint64_t remaining = opt.budget;
  std::size_t max_total = mods.size() * opt.max_relation_size;
  if (mods.empty()) {
    family.interps.push_back(Interpretation{});
    return family;
  }
  for (std::size_t stratum = 0; stratum <= max_total && remaining > 0; ++stratum) {
    auto comps = compositions(stratum);
    std::uint64_t stratum_size = 0;
    std::vector<std::uint64_t> comp_sizes;
    for (const auto& sizes : comps) {
      std::uint64_t n = 1;
      for (std::size_t mi = 0; mi < mods.size(); ++mi) n *= mods[mi].counts[sizes[mi]];
      comp_sizes.push_back(n);
      stratum_size += n;
    }
    auto decode = [&](std::uint64_t idx) {
      for (std::size_t ci = 0; ci < comps.size(); ++ci) {
        if (idx < comp_sizes[ci]) return materialize(comps[ci], idx);
        idx -= comp_sizes[ci];
      }
      throw Error("family stratum index out of range");
    };
    if (stratum_size <= remaining) {
      for (std::uint64_t i = 0; i < stratum_size; ++i) family.interps.push_back(decode(i));
      remaining -= stratum_size;
    } else {
      std::set<std::uint64_t> picked;
      while (picked.size() < remaining) picked.insert(rng() % stratum_size);
      for (std::uint64_t i : picked) family.interps.push_back(decode(i));
      remaining = 0;
    }
  }
  family.truncated = family.interps.size() < family.total;
  return family;
}

}  // namespace lif
