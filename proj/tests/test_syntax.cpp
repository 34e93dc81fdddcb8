#include <catch2/catch_amalgamated.hpp>

#include "lif/generate.hpp"
#include "lif/syntax.hpp"

using namespace lif;

namespace {

Vocabulary test_vocab() {
  Vocabulary v;
  v.add("P1", 2, 1);
  v.add("P2", 2, 1);
  v.add("M", 3, 2);
  v.add("N", 0, 0);
  return v;
}

}  // namespace

TEST_CASE("vocabulary parsing") {
  Vocabulary v = parse_vocabulary("P1/2 in 1\n\n# comment line\nM/3 in 0\n");
  REQUIRE(v.find("P1") != nullptr);
  CHECK(v.find("P1")->arity == 2);
  CHECK(v.find("P1")->input_arity == 1);
  CHECK(v.find("M")->arity == 3);
  CHECK(v.find("M")->input_arity == 0);
  CHECK(v.find("missing") == nullptr);

  CHECK_THROWS_AS(parse_vocabulary("P1/2 in 3\n"), Error);
  CHECK_THROWS_AS(parse_vocabulary("id/1 in 0\n"), Error);
  CHECK_THROWS_AS(parse_vocabulary("P1/2 in 1\nP1/1 in 0\n"), Error);
  CHECK_THROWS_AS(parse_vocabulary("P1 2 in 1\n"), ParseError);
}

TEST_CASE("operator precedence and associativity") {
  Vocabulary v = test_vocab();

  // ';' over '&' over '+' and '\'.
  ExprPtr e = parse_expression("P1(x;y) ; P2(y;z) & id + N(;)", v);
  REQUIRE(e->op == Op::Union);
  CHECK(e->a->op == Op::Intersect);
  CHECK(e->a->a->op == Op::Compose);
  CHECK(e->b->op == Op::Atom);

  ExprPtr f = parse_expression("id + id \\ id + id", v);
  REQUIRE(f->op == Op::Union);
  REQUIRE(f->a->op == Op::Diff);
  CHECK(f->a->a->op == Op::Union);

  ExprPtr g = parse_expression("(id + id) ; id", v);
  REQUIRE(g->op == Op::Compose);
  CHECK(g->a->op == Op::Union);
}

TEST_CASE("prefix operators") {
  Vocabulary v = test_vocab();

  ExprPtr c = parse_expression("conv(P1(x;y))", v);
  REQUIRE(c->op == Op::Converse);
  CHECK(c->a->op == Op::Atom);

  ExprPtr cyl = parse_expression("cyl_l{y,x}(id)", v);
  REQUIRE(cyl->op == Op::CylL);
  CHECK(cyl->vars == std::vector<std::string>{"x", "y"});

  ExprPtr sel = parse_expression("sel_lr{x=y}(id)", v);
  REQUIRE(sel->op == Op::SelLR);
  CHECK(sel->x == "x");
  CHECK(sel->y == "y");
}

TEST_CASE("tuple selection sugar nests first pair outermost") {
  Vocabulary v = test_vocab();
  ExprPtr e = parse_expression("sel_lr{(x,y)=(y,x)}(id)", v);
  REQUIRE(e->op == Op::SelLR);
  CHECK(e->x == "x");
  CHECK(e->y == "y");
  REQUIRE(e->a->op == Op::SelLR);
  CHECK(e->a->x == "y");
  CHECK(e->a->y == "x");
  CHECK(e->a->a->op == Op::Id);
  CHECK(render(e) == "sel_lr{x=y}(sel_lr{y=x}(id))");
}

TEST_CASE("parse errors carry positions") {
  Vocabulary v = test_vocab();
  CHECK_THROWS_AS(parse_expression("Q(x;y)", v), ParseError);
  CHECK_THROWS_WITH(parse_expression("P1(x,y;z)", v),
                    Catch::Matchers::ContainsSubstring("expects"));
  CHECK_THROWS_WITH(parse_expression("P1(x;x#1)", v), Catch::Matchers::ContainsSubstring("reserved"));
  CHECK_THROWS_AS(parse_expression("cyl_l{}(id)", v), ParseError);
  try {
    parse_expression("(id", v);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.col == 4);
  }
}

TEST_CASE("render canonical forms") {
  Vocabulary v = test_vocab();
  for (const std::string& s : {
           "P1(x;y)", "id ; id", "conv(id)", "cyl_l{x,y}(P1(x;y))", "sel_lr{x=y}(id)",
           "P1(x;y) + P2(y;z) & id", "(P1(x;y) + P2(y;z)) & id", "id \\ id", "N(;)", "M(x,y;z)",
           "P1(x;y) ; (P2(y;z) + id)", "sel_l{x=y}(sel_r{y=z}(id))",
       }) {
    CHECK(render(parse_expression(s, v)) == s);
  }
}

TEST_CASE("random expressions round-trip through render and parse") {
  Vocabulary v = test_vocab();
  std::vector<std::string> universe{"x", "y", "z"};
  Rng rng(42);
  for (int i = 0; i < 300; ++i) {
    ExprPtr e = gen_expression(rng, universe, v, 4);
    ExprPtr back = parse_expression(render(e), v);
    REQUIRE(equal(back, e));
  }
}

TEST_CASE("constructors normalize") {
  ExprPtr child = mk_id();
  CHECK(mk_cyl_l({}, child) == child);
  ExprPtr cyl = mk_cyl_l({"y", "x", "y"}, child);
  CHECK(cyl->vars == std::vector<std::string>{"x", "y"});

  ExprPtr e = mk_cyl_l({"z"}, mk_sel_lr("x", "y", mk_id()));
  CHECK(vars_of(*e) == std::set<std::string>{"x", "y", "z"});

  ExprPtr atoms = mk_union(mk_atom("P1", {"x"}, {"y"}), mk_atom("M", {"x", "y"}, {"z"}));
  CHECK(modules_of(*atoms) == std::set<std::string>{"M", "P1"});

  CHECK(is_reserved_word("id"));
  CHECK(is_reserved_word("sel_lr"));
  CHECK_FALSE(is_reserved_word("P1"));
}
