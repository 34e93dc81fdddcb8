#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lif/syntax.hpp"

namespace lif {

// Expressions over n variables and one binary relation R (input arity 2)
// whose evaluations detect cliques: alpha_2n is nonempty exactly when the
// interpretation of R has a 2n-clique, and (alpha_2n ; alpha_2n) & alpha_2n
// is nonempty exactly when it has a 3n-clique.

struct CliqueSpec {
  std::uint32_t n = 2;
};

inline std::vector<std::string> clique_universe(const CliqueSpec& spec) {
  if (spec.n < 2) throw Error("clique construction requires n >= 2");
  std::vector<std::string> out;
  for (std::uint32_t i = 1; i <= spec.n; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

inline Vocabulary clique_vocabulary() {
  Vocabulary vocab;
  vocab.add("R", 2, 2);
  return vocab;
}

// The full binary relation on valuations.
inline ExprPtr build_all(const CliqueSpec& spec) {
  std::vector<std::string> u = clique_universe(spec);
  return mk_cyl_l(u, mk_cyl_r(u, mk_id()));
}

// Pairs where some two of the 2n variable slots share a value.
inline ExprPtr build_alpha_eq(const CliqueSpec& spec) {
  std::vector<std::string> u = clique_universe(spec);
  ExprPtr all = build_all(spec);
  ExprPtr out;
  auto add = [&](const ExprPtr& term) { out = out ? mk_union(out, term) : term; };
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = i + 1; j < u.size(); ++j) {
      add(mk_sel_l(u[i], u[j], all));
      add(mk_sel_r(u[i], u[j], all));
    }
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j) add(mk_sel_lr(u[i], u[j], all));
  return out;
}

namespace detail {

inline std::vector<std::string> without(const std::vector<std::string>& u, const std::string& a,
                                        const std::string& b) {
  std::vector<std::string> out;
  for (const auto& v : u)
    if (v != a && v != b) out.push_back(v);
  return out;
}

inline ExprPtr bidirectional_edge(const std::string& x, const std::string& y) {
  return mk_intersect(mk_atom("R", {x, y}, {}), mk_atom("R", {y, x}, {}));
}

}  // namespace detail

inline ExprPtr build_alpha_2n(const CliqueSpec& spec) {
  std::vector<std::string> u = clique_universe(spec);
  ExprPtr out = mk_diff(build_all(spec), build_alpha_eq(spec));

  // Edges among the left slots and among the right slots.
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = i + 1; j < u.size(); ++j) {
      ExprPtr edge = detail::bidirectional_edge(u[i], u[j]);
      ExprPtr left = mk_cyl_l(detail::without(u, u[i], u[j]), mk_cyl_r(u, edge));
      ExprPtr right = mk_cyl_l(u, mk_cyl_r(detail::without(u, u[i], u[j]), edge));
      out = mk_intersect(out, mk_intersect(left, right));
    }

  // Edges between a left slot and a right slot.  The diagonal case reads
  // both endpoints of the edge through a carrier variable, since an atom
  // cannot mention the same variable on both sides of a pair.
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j) {
      ExprPtr term;
      if (i != j) {
        ExprPtr edge = detail::bidirectional_edge(u[i], u[j]);
        term = mk_cyl_l(detail::without(u, u[i], u[i]), mk_cyl_r(detail::without(u, u[j], u[j]), edge));
      } else {
        const std::string& carrier = u[i == 0 ? 1 : 0];
        ExprPtr edge = detail::bidirectional_edge(u[i], carrier);
        ExprPtr cross =
            mk_cyl_l(detail::without(u, u[i], u[i]), mk_cyl_r(detail::without(u, carrier, carrier), edge));
        term = mk_cyl_r({carrier}, mk_sel_r(u[i], carrier, cross));
      }
      out = mk_intersect(out, term);
    }
  return out;
}

inline ExprPtr build_alpha_exists_3n(const CliqueSpec& spec) {
  ExprPtr a = build_alpha_2n(spec);
  return mk_intersect(mk_compose(a, a), a);
}

}  // namespace lif
