#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lif/analysis.hpp"
#include "lif/fo.hpp"
#include "lif/oracle.hpp"
#include "lif/rewrite.hpp"
#include "lif/semantics.hpp"
#include "lif/syntax.hpp"

namespace lif {

// Seeded generation of expressions, interpretations and formulas, plus the
// randomized property suites built on them.  All draws go through the
// bounded helper below; std::uniform_int_distribution is not portable
// across standard libraries and would break byte-identical reruns.

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return n ? eng_() % n : 0; }

  // k distinct picks from 0..n-1 via a partial Fisher-Yates pass.
  std::vector<std::size_t> distinct(std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + below(n - i)]);
    idx.resize(k);
    return idx;
  }

 private:
  std::mt19937_64 eng_;
};

struct Scenario {
  Vocabulary vocab;
  std::vector<std::string> universe;
  Domain domain = Domain({1});
  SpacePtr space;
};

// Universe drawn from {x, y, z}, domain from {1, 2, 3}, two module names
// with arity up to 3 and every input/output split possible.
inline Scenario gen_scenario(Rng& rng) {
  static const std::vector<std::string> var_pool{"x", "y", "z"};
  static const std::vector<Value> dom_pool{1, 2, 3};
  Scenario s;
  std::size_t usize = 1 + rng.below(3);
  s.universe.assign(var_pool.begin(), var_pool.begin() + usize);
  std::size_t dsize = 1 + rng.below(3);
  s.domain = Domain(std::vector<Value>(dom_pool.begin(), dom_pool.begin() + dsize));
  for (const char* name : {"M1", "M2"}) {
    int arity = static_cast<int>(rng.below(4));
    int iar = static_cast<int>(rng.below(arity + 1));
    s.vocab.add(name, arity, iar);
  }
  s.space = ValuationSpace::make(VarUniverse(s.universe), s.domain);
  return s;
}

inline ExprPtr gen_expression(Rng& rng, const std::vector<std::string>& universe, const Vocabulary& vocab,
                              int depth) {
  auto pick_var = [&]() { return universe[rng.below(universe.size())]; };
  auto atom = [&]() {
    std::vector<std::string> names;
    for (const auto& [name, sig] : vocab.modules()) names.push_back(name);
    const std::string& name = names[rng.below(names.size())];
    const ModuleSig& sig = *vocab.find(name);
    std::vector<std::string> in, out;
    for (int i = 0; i < sig.input_arity; ++i) in.push_back(pick_var());
    for (int i = 0; i < sig.arity - sig.input_arity; ++i) out.push_back(pick_var());
    return mk_atom(name, in, out);
  };
  std::uint64_t k = depth == 0 ? rng.below(4) : rng.below(14);
  switch (k) {
    case 0:
      return mk_id();
    case 1:
    case 2:
    case 3:
      return atom();
    case 4:
      return mk_union(gen_expression(rng, universe, vocab, depth - 1),
                      gen_expression(rng, universe, vocab, depth - 1));
    case 5:
      return mk_intersect(gen_expression(rng, universe, vocab, depth - 1),
                          gen_expression(rng, universe, vocab, depth - 1));
    case 6:
      return mk_diff(gen_expression(rng, universe, vocab, depth - 1),
                     gen_expression(rng, universe, vocab, depth - 1));
    case 7:
      return mk_compose(gen_expression(rng, universe, vocab, depth - 1),
                        gen_expression(rng, universe, vocab, depth - 1));
    case 8:
      return mk_converse(gen_expression(rng, universe, vocab, depth - 1));
    case 9:
    case 10: {
      std::size_t size = 1 + rng.below(universe.size());
      std::vector<std::string> vars;
      for (std::size_t i : rng.distinct(universe.size(), size)) vars.push_back(universe[i]);
      return mk_cyl(k == 9 ? Op::CylL : Op::CylR, vars, gen_expression(rng, universe, vocab, depth - 1));
    }
    default: {
      Op op = k == 11 ? Op::SelL : k == 12 ? Op::SelR : Op::SelLR;
      return mk_sel(op, pick_var(), pick_var(), gen_expression(rng, universe, vocab, depth - 1));
    }
  }
}

inline Interpretation gen_interpretation(Rng& rng, const Vocabulary& vocab, const Domain& dom,
                                         std::size_t max_tuples = 3) {
  Interpretation interp;
  for (const auto& [name, sig] : vocab.modules()) {
    std::size_t k = rng.below(max_tuples + 1);
    std::vector<std::vector<Value>> tuples;
    for (std::size_t t = 0; t < k; ++t) {
      std::vector<Value> tuple;
      for (int i = 0; i < sig.arity; ++i) tuple.push_back(dom.at(static_cast<std::uint32_t>(rng.below(dom.size()))));
      tuples.push_back(std::move(tuple));
    }
    interp.set(name, tuples);
  }
  return interp;
}

inline FOPtr gen_fo_formula(Rng& rng, const std::vector<std::string>& vars, const Vocabulary& vocab,
                            int depth) {
  auto pick_var = [&]() { return vars[rng.below(vars.size())]; };
  auto leaf = [&]() -> FOPtr {
    if (rng.below(2) == 0) return fo_equals(pick_var(), pick_var());
    std::vector<std::string> names;
    for (const auto& [name, sig] : vocab.modules()) names.push_back(name);
    const std::string& name = names[rng.below(names.size())];
    std::vector<std::string> args;
    for (int i = 0; i < vocab.find(name)->arity; ++i) args.push_back(pick_var());
    return fo_rel(name, args);
  };
  if (depth == 0) return leaf();
  switch (rng.below(6)) {
    case 0:
    case 1:
      return leaf();
    case 2:
      return fo_or({gen_fo_formula(rng, vars, vocab, depth - 1), gen_fo_formula(rng, vars, vocab, depth - 1)});
    case 3:
      return fo_and({gen_fo_formula(rng, vars, vocab, depth - 1), gen_fo_formula(rng, vars, vocab, depth - 1)});
    case 4:
      return fo_not(gen_fo_formula(rng, vars, vocab, depth - 1));
    default:
      return fo_exists(pick_var(), gen_fo_formula(rng, vars, vocab, depth - 1));
  }
}

inline std::size_t count_op(const Expr& e, Op op) {
  std::size_t n = e.op == op ? 1 : 0;
  if (e.a) n += count_op(*e.a, op);
  if (e.b) n += count_op(*e.b, op);
  return n;
}

// ---------------------------------------------------------------------------
// Property suites.

struct SuiteReport {
  std::string suite;
  std::uint64_t cases = 0;
  std::uint64_t violations = 0;
  std::vector<std::string> notes;
};

namespace detail {

inline void note_violation(SuiteReport& report, const std::string& what) {
  ++report.violations;
  if (report.notes.size() < 5) report.notes.push_back(what);
}

}  // namespace detail

// Every pair in an evaluation agrees outside the syntactic outputs.
inline SuiteReport suite_inertia(std::uint64_t seed, std::uint64_t count, std::size_t interps_per = 10) {
  Rng rng(seed);
  SuiteReport report;
  report.suite = "inertia";
  for (std::uint64_t c = 0; c < count; ++c) {
    Scenario s = gen_scenario(rng);
    ExprPtr e = gen_expression(rng, s.universe, s.vocab, 5);
    std::set<std::string> outs = syn_io(e).outputs;
    ++report.cases;
    for (std::size_t i = 0; i < interps_per; ++i) {
      Interpretation interp = gen_interpretation(rng, s.vocab, s.domain);
      Brv q = evaluate(e, interp, s.space);
      const ValuationSpace& sp = *s.space;
      q.for_each_pair([&](std::uint32_t l, std::uint32_t r) {
        for (std::uint32_t vi = 0; vi < sp.universe().size(); ++vi)
          if (!outs.count(sp.universe().at(vi)) && sp.value_index(l, vi) != sp.value_index(r, vi))
            detail::note_violation(report, "inertia broken by " + render(e));
      });
    }
  }
  return report;
}

// The syntactic inputs determine every evaluation on the syntactic outputs.
inline SuiteReport suite_determinacy(std::uint64_t seed, std::uint64_t count, std::size_t interps_per = 10) {
  Rng rng(seed);
  SuiteReport report;
  report.suite = "determinacy";
  for (std::uint64_t c = 0; c < count; ++c) {
    Scenario s = gen_scenario(rng);
    ExprPtr e = gen_expression(rng, s.universe, s.vocab, 5);
    IOReport io = syn_io(e);
    ++report.cases;
    for (std::size_t i = 0; i < interps_per; ++i) {
      Interpretation interp = gen_interpretation(rng, s.vocab, s.domain);
      if (!determines(evaluate(e, interp, s.space), io.inputs, io.outputs))
        detail::note_violation(report, "inputs fail to determine outputs for " + render(e));
    }
  }
  return report;
}

// Evaluations are inertially cylindrified on the variables outside the
// syntactic free variables.
inline SuiteReport suite_free_variable(std::uint64_t seed, std::uint64_t count, std::size_t interps_per = 10) {
  Rng rng(seed);
  SuiteReport report;
  report.suite = "free-variable";
  for (std::uint64_t c = 0; c < count; ++c) {
    Scenario s = gen_scenario(rng);
    ExprPtr e = gen_expression(rng, s.universe, s.vocab, 5);
    std::set<std::string> fv = syn_io(e).fvars();
    std::set<std::string> rest;
    for (const auto& v : s.universe)
      if (!fv.count(v)) rest.insert(v);
    ++report.cases;
    for (std::size_t i = 0; i < interps_per; ++i) {
      Interpretation interp = gen_interpretation(rng, s.vocab, s.domain);
      if (!inertially_cylindrified(evaluate(e, interp, s.space), rest))
        detail::note_violation(report, "free-variable property broken by " + render(e));
    }
  }
  return report;
}

// Semantic witnesses stay inside the syntactic analysis.
inline SuiteReport suite_soundness(std::uint64_t seed, std::uint64_t count, std::size_t family_size = 20) {
  Rng rng(seed);
  SuiteReport report;
  report.suite = "soundness";
  for (std::uint64_t c = 0; c < count; ++c) {
    Scenario s = gen_scenario(rng);
    ExprPtr e = gen_expression(rng, s.universe, s.vocab, 5);
    IOReport io = syn_io(e);
    std::vector<Interpretation> family;
    for (std::size_t i = 0; i < family_size; ++i) family.push_back(gen_interpretation(rng, s.vocab, s.domain));
    ++report.cases;
    for (const auto& v : witness_outputs(*e, family, s.space).variables)
      if (!io.outputs.count(v))
        detail::note_violation(report, "output witness '" + v + "' outside analysis for " + render(e));
    for (const auto& v : witness_inputs(*e, family, s.space).variables)
      if (!io.inputs.count(v))
        detail::note_violation(report, "input witness '" + v + "' outside analysis for " + render(e));
  }
  return report;
}

// Rewrites preserve the evaluation: the io-disjoint composition split on
// eligible samples, and full composition elimination over the universe
// extended with the issued fresh variables.
inline SuiteReport suite_rewrite_equivalence(std::uint64_t seed, std::uint64_t count,
                                             std::size_t interps_per = 5) {
  Rng rng(seed);
  SuiteReport report;
  report.suite = "rewrite-equivalence";
  std::uint64_t split_cases = count / 2, elim_cases = count - split_cases;

  for (std::uint64_t c = 0; c < split_cases; ++c) {
    Scenario s = gen_scenario(rng);
    ExprPtr alpha, beta;
    bool found = false;
    for (int attempt = 0; attempt < 200 && !found; ++attempt) {
      alpha = gen_expression(rng, s.universe, s.vocab, 3);
      beta = gen_expression(rng, s.universe, s.vocab, 3);
      found = is_io_disjoint(beta);
    }
    if (!found) continue;
    ++report.cases;
    ExprPtr composed = mk_compose(alpha, beta);
    ExprPtr split = compose_io_disjoint(alpha, beta);
    for (std::size_t i = 0; i < interps_per; ++i) {
      Interpretation interp = gen_interpretation(rng, s.vocab, s.domain);
      if (!equivalent_on(composed, split, interp, s.space))
        detail::note_violation(report, "composition split changed " + render(composed));
    }
  }

  std::vector<std::string> base{"x", "y"};
  Vocabulary vocab;
  vocab.add("M1", 2, 1);
  vocab.add("M2", 1, 0);
  Domain dom({1, 2, 3});
  for (std::uint64_t c = 0; c < elim_cases; ++c) {
    ExprPtr e;
    bool found = false;
    for (int attempt = 0; attempt < 200 && !found; ++attempt) {
      e = gen_expression(rng, base, vocab, 4);
      std::size_t composes = count_op(*e, Op::Compose);
      found = composes >= 1 && composes <= 2;
    }
    if (!found) continue;
    ++report.cases;
    FreshVarSupply supply(vars_of(*e));
    ElimResult elim = eliminate_compositions(e, supply);
    if (count_op(*elim.expr, Op::Compose) != 0) {
      detail::note_violation(report, "composition survived elimination in " + render(elim.expr));
      continue;
    }
    std::vector<std::string> extended = base;
    extended.insert(extended.end(), elim.fresh.begin(), elim.fresh.end());
    SpacePtr space = ValuationSpace::make(VarUniverse(extended), dom);
    for (std::size_t i = 0; i < interps_per; ++i) {
      Interpretation interp = gen_interpretation(rng, vocab, dom);
      if (!equivalent_on(e, elim.expr, interp, space))
        detail::note_violation(report, "composition elimination changed " + render(e));
    }
  }
  return report;
}

// Formula-to-expression produces the diagonal of the satisfying
// valuations; expression-to-formula agrees with the evaluation pairwise
// and stays within two copies when no composition occurs.
inline SuiteReport suite_fo_roundtrip(std::uint64_t seed, std::uint64_t count, std::size_t interps_per = 3) {
  Rng rng(seed);
  SuiteReport report;
  report.suite = "fo-roundtrip";
  std::uint64_t to_lif_cases = count / 2, to_fo_cases = count - to_lif_cases;

  std::vector<std::string> base{"x", "y"};
  Vocabulary vocab;
  vocab.add("R", 1, 0);
  vocab.add("S", 2, 0);
  static const std::vector<Value> dom_pool{1, 2, 3};
  for (std::uint64_t c = 0; c < to_lif_cases; ++c) {
    Domain dom(std::vector<Value>(dom_pool.begin(), dom_pool.begin() + 1 + rng.below(3)));
    SpacePtr space = ValuationSpace::make(VarUniverse(base), dom);
    FOPtr f = gen_fo_formula(rng, base, vocab, 3);
    ExprPtr e = fo_to_lif(f, vocab);
    ++report.cases;
    for (std::size_t i = 0; i < interps_per; ++i) {
      Interpretation interp = gen_interpretation(rng, vocab, dom);
      Brv q = evaluate(e, interp, space);
      for (std::uint32_t l = 0; l < space->count(); ++l) {
        std::map<std::string, Value> val;
        for (std::uint32_t vi = 0; vi < space->universe().size(); ++vi)
          val[space->universe().at(vi)] = space->value(l, vi);
        bool holds = fo_evaluate(f, interp, val, dom);
        if (q.contains(l, l) != holds)
          detail::note_violation(report, "diagonal mismatch for " + print_fo(f));
        for (std::uint32_t r = 0; r < space->count(); ++r)
          if (r != l && q.contains(l, r))
            detail::note_violation(report, "off-diagonal pair from " + print_fo(f));
      }
    }
  }

  for (std::uint64_t c = 0; c < to_fo_cases; ++c) {
    Scenario s = gen_scenario(rng);
    ExprPtr e = gen_expression(rng, s.universe, s.vocab, 3);
    FOTranslation trans = lif_to_fo(e, s.space->universe());
    ++report.cases;
    if (count_op(*e, Op::Compose) == 0 && trans.uses_third_copy)
      detail::note_violation(report, "third copy used for composition-free " + render(e));
    for (std::size_t i = 0; i < interps_per; ++i) {
      Interpretation interp = gen_interpretation(rng, s.vocab, s.domain);
      Brv q = evaluate(e, interp, s.space);
      const ValuationSpace& sp = *s.space;
      for (std::uint32_t l = 0; l < sp.count(); ++l)
        for (std::uint32_t r = 0; r < sp.count(); ++r) {
          std::map<std::string, Value> val;
          for (std::uint32_t vi = 0; vi < sp.universe().size(); ++vi) {
            val["x" + std::to_string(vi + 1)] = sp.value(l, vi);
            val["y" + std::to_string(vi + 1)] = sp.value(r, vi);
          }
          if (fo_evaluate(trans.formula, interp, val, s.domain) != q.contains(l, r)) {
            detail::note_violation(report, "membership mismatch for " + render(e));
            r = sp.count();
            l = sp.count() - 1;
          }
        }
    }
  }
  return report;
}

}  // namespace lif
