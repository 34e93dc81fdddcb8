#include <catch2/catch_amalgamated.hpp>

#include "lif/fo.hpp"
#include "lif/generate.hpp"

using namespace lif;

namespace {

Vocabulary fo_vocab() {
  Vocabulary v;
  v.add("R", 1, 0);
  v.add("S", 2, 0);
  return v;
}

}  // namespace

TEST_CASE("formula parsing and printing") {
  FOPtr f = parse_fo("(exists x (and (R x) (= x y)))");
  CHECK(print_fo(f) == "(exists x (and (R x) (= x y)))");
  CHECK(fo_free_vars(*f) == std::set<std::string>{"y"});

  CHECK(print_fo(parse_fo("(or (R x) (not (S x y)))")) == "(or (R x) (not (S x y)))");

  Vocabulary v = fo_vocab();
  CHECK_THROWS_AS(parse_fo("(T x)", &v), ParseError);
  CHECK_THROWS_AS(parse_fo("(R x y)", &v), ParseError);
  CHECK_THROWS_AS(parse_fo("(and (R x)", &v), ParseError);
  CHECK_THROWS_AS(parse_fo("(exists 1x (R 1x))", &v), ParseError);
}

TEST_CASE("formula evaluation") {
  Interpretation interp;
  interp.set("R", {{1}});
  interp.set("S", {{1, 2}});
  Domain dom({1, 2});

  CHECK(fo_evaluate(parse_fo("(R x)"), interp, {{"x", 1}}, dom));
  CHECK_FALSE(fo_evaluate(parse_fo("(R x)"), interp, {{"x", 2}}, dom));
  CHECK(fo_evaluate(parse_fo("(exists y (S x y))"), interp, {{"x", 1}}, dom));
  CHECK(fo_evaluate(parse_fo("(not (S x x))"), interp, {{"x", 1}}, dom));
  CHECK(fo_evaluate(parse_fo("(and (= x y) (R x))"), interp, {{"x", 1}, {"y", 1}}, dom));
  CHECK_FALSE(fo_evaluate(parse_fo("(or (R y) (S y x))"), interp, {{"x", 2}, {"y", 2}}, dom));

  CHECK_THROWS_AS(fo_evaluate(parse_fo("(R x)"), interp, {}, dom), Error);
  CHECK_THROWS_AS(fo_evaluate(parse_fo("(T x)"), interp, {{"x", 1}}, dom), Error);
}

TEST_CASE("formula to expression structure") {
  Vocabulary v = fo_vocab();
  CHECK(render(fo_to_lif(parse_fo("(= x y)"), v)) == "sel_r{x=y}(id)");
  CHECK(render(fo_to_lif(parse_fo("(R x)"), v)) == "id & R(;x)");
  CHECK(render(fo_to_lif(parse_fo("(not (R x))"), v)) == "id \\ id & R(;x)");
  CHECK(render(fo_to_lif(parse_fo("(exists x (R x))"), v)) ==
        "sel_lr{x=x}(cyl_l{x}(cyl_r{x}(id & R(;x))))");
  CHECK(render(fo_to_lif(parse_fo("(or (R x) (R y))"), v)) == "id & R(;x) + id & R(;y)");

  Vocabulary bad;
  bad.add("R", 1, 1);
  CHECK_THROWS_AS(fo_to_lif(parse_fo("(R x)"), bad), Error);
  CHECK_THROWS_AS(fo_to_lif(parse_fo("(T x)"), v), Error);
}

TEST_CASE("formula to expression semantics") {
  Vocabulary v = fo_vocab();
  Domain dom({1, 2});
  auto sp = ValuationSpace::make(VarUniverse({"x", "y"}), dom);

  Rng rng(37);
  for (int i = 0; i < 100; ++i) {
    FOPtr f = gen_fo_formula(rng, {"x", "y"}, v, 3);
    ExprPtr e = fo_to_lif(f, v);
    Interpretation interp = gen_interpretation(rng, v, dom);
    Brv q = evaluate(*e, interp, sp);

    // The expression holds the formula's truth on the diagonal and touches
    // nothing off it.
    for (std::uint32_t vid = 0; vid < sp->count(); ++vid) {
      std::map<std::string, Value> val;
      for (std::uint32_t k = 0; k < sp->universe().size(); ++k)
        val[sp->universe().at(k)] = sp->value(vid, k);
      REQUIRE(q.contains(vid, vid) == fo_evaluate(f, interp, val, dom));
    }
    q.for_each_pair([&](std::uint32_t l, std::uint32_t r) { REQUIRE(l == r); });
  }
}

TEST_CASE("expression to formula on pinned shapes") {
  VarUniverse u({"x1", "x2"});
  Vocabulary v;
  v.add("M", 2, 1);

  FOTranslation id = lif_to_fo(mk_id(), u);
  CHECK(print_fo(id.formula) == "(and (= x1 y1) (= x2 y2))");
  CHECK_FALSE(id.uses_third_copy);

  FOTranslation atom = lif_to_fo(parse_expression("M(x1;x2)", v), u);
  CHECK(print_fo(atom.formula) == "(and (M x1 y2) (= x1 y1))");

  FOTranslation comp = lif_to_fo(parse_expression("M(x1;x2) ; M(x2;x1)", v), u);
  CHECK(comp.uses_third_copy);

  CHECK_THROWS_AS(lif_to_fo(mk_id(), VarUniverse(std::vector<std::string>{})), Error);
  CHECK_THROWS_AS(lif_to_fo(parse_expression("M(x1;x2)", v), VarUniverse({"x1"})), Error);
}

TEST_CASE("expression to formula agrees pair by pair") {
  Vocabulary v;
  v.add("A", 2, 1);
  v.add("B", 1, 0);
  VarUniverse u({"x", "y"});
  Domain dom({1, 2});
  auto sp = ValuationSpace::make(u, dom);

  Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    ExprPtr e = gen_expression(rng, {"x", "y"}, v, 3);
    FOTranslation t = lif_to_fo(e, u);
    if (count_op(*e, Op::Compose) == 0) CHECK_FALSE(t.uses_third_copy);

    Interpretation interp = gen_interpretation(rng, v, dom);
    Brv q = evaluate(*e, interp, sp);
    for (std::uint32_t l = 0; l < sp->count(); ++l)
      for (std::uint32_t r = 0; r < sp->count(); ++r) {
        std::map<std::string, Value> val;
        for (std::uint32_t k = 0; k < u.size(); ++k) {
          val["x" + std::to_string(k + 1)] = sp->value(l, k);
          val["y" + std::to_string(k + 1)] = sp->value(r, k);
        }
        REQUIRE(fo_evaluate(t.formula, interp, val, dom) == q.contains(l, r));
      }
  }
}
