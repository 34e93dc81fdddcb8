#include <catch2/catch_amalgamated.hpp>

#include "lif/analysis.hpp"
#include "lif/syntax.hpp"

using namespace lif;

namespace {

Vocabulary test_vocab() {
  Vocabulary v;
  v.add("M1", 2, 1);
  v.add("M2", 2, 1);
  v.add("M", 3, 2);
  v.add("P", 1, 1);
  v.add("P1", 2, 1);
  v.add("R", 2, 1);
  return v;
}

using Set = std::set<std::string>;

IOReport io(const std::string& s) { return syn_io(parse_expression(s, test_vocab())); }

}  // namespace

TEST_CASE("io of atoms and id") {
  CHECK(io("id").inputs == Set{});
  CHECK(io("id").outputs == Set{});

  IOReport m = io("M(x,y;z)");
  CHECK(m.inputs == Set{"x", "y"});
  CHECK(m.outputs == Set{"z"});

  IOReport rep = io("M1(x;x)");
  CHECK(rep.inputs == Set{"x"});
  CHECK(rep.outputs == Set{"x"});
  CHECK(rep.fvars() == Set{"x"});
}

TEST_CASE("io of set operations") {
  // A = M1(x;y), B = M2(y;z): symmetric difference of outputs feeds inputs.
  IOReport u = io("M1(x;y) + M2(y;z)");
  CHECK(u.inputs == Set{"x", "y", "z"});
  CHECK(u.outputs == Set{"y", "z"});

  IOReport n = io("M1(x;y) & M2(y;z)");
  CHECK(n.inputs == Set{"x", "y", "z"});
  CHECK(n.outputs == Set{});

  IOReport d = io("M1(x;y) \\ M2(y;z)");
  CHECK(d.inputs == Set{"x", "y", "z"});
  CHECK(d.outputs == Set{"y"});

  IOReport same = io("M1(x;y) + M2(x;y)");
  CHECK(same.inputs == Set{"x"});
  CHECK(same.outputs == Set{"y"});
}

TEST_CASE("io of composition") {
  IOReport c = io("M1(x;y) ; M2(y;z)");
  CHECK(c.inputs == Set{"x"});
  CHECK(c.outputs == Set{"y", "z"});

  IOReport c2 = io("P1(x;x) ; P1(x;y)");
  CHECK(c2.inputs == Set{"x"});
  CHECK(c2.outputs == Set{"x", "y"});
}

TEST_CASE("io of converse") {
  IOReport c = io("conv(M1(x;y))");
  CHECK(c.inputs == Set{"x", "y"});
  CHECK(c.outputs == Set{"y"});
}

TEST_CASE("io of cylindrifications") {
  IOReport l = io("cyl_l{x}(M1(x;y))");
  CHECK(l.inputs == Set{});
  CHECK(l.outputs == Set{"x", "y"});

  IOReport l2 = io("cyl_l{z}(M1(x;y))");
  CHECK(l2.inputs == Set{"x"});
  CHECK(l2.outputs == Set{"y", "z"});

  IOReport r = io("cyl_r{x}(M1(x;y))");
  CHECK(r.inputs == Set{"x"});
  CHECK(r.outputs == Set{"x", "y"});
}

TEST_CASE("io of two-sided selections") {
  IOReport xx = io("sel_lr{x=x}(M1(x;y))");
  CHECK(xx.inputs == Set{"x"});
  CHECK(xx.outputs == Set{"y"});

  IOReport yy = io("sel_lr{y=y}(M1(x;y))");
  CHECK(yy.inputs == Set{"x", "y"});
  CHECK(yy.outputs == Set{});

  IOReport xz = io("sel_lr{x=z}(M1(x;y))");
  CHECK(xz.inputs == Set{"x", "z"});
  CHECK(xz.outputs == Set{"y"});

  IOReport zy = io("sel_lr{z=y}(M1(x;y))");
  CHECK(zy.inputs == Set{"x", "z"});
  CHECK(zy.outputs == Set{"y"});
}

TEST_CASE("io of one-sided selections") {
  IOReport l = io("sel_l{x=x}(M1(x;y))");
  CHECK(l.inputs == Set{"x"});
  CHECK(l.outputs == Set{"y"});

  IOReport l2 = io("sel_l{x=y}(M1(x;y))");
  CHECK(l2.inputs == Set{"x", "y"});
  CHECK(l2.outputs == Set{"y"});

  IOReport r = io("sel_r{x=x}(M1(x;y))");
  CHECK(r.inputs == Set{"x"});
  CHECK(r.outputs == Set{"y"});

  // y is an output of the child, so the right-hand side needs no new input.
  IOReport r2 = io("sel_r{x=y}(M1(x;y))");
  CHECK(r2.inputs == Set{"x"});
  CHECK(r2.outputs == Set{"y"});

  IOReport r3 = io("sel_r{z=y}(M1(x;y))");
  CHECK(r3.inputs == Set{"x", "z"});
  CHECK(r3.outputs == Set{"y"});
}

TEST_CASE("selection stacks") {
  IOReport a = io("sel_l{x=y}(sel_r{x=y}(R(x;y)))");
  CHECK(a.inputs == Set{"x", "y"});
  CHECK(a.outputs == Set{"y"});

  IOReport b = io("sel_lr{x=x}(cyl_r{x}(cyl_l{x}(P(x;))))");
  CHECK(b.inputs == Set{"x"});
  CHECK(b.outputs == Set{});
}

TEST_CASE("io disjointness") {
  Vocabulary v = test_vocab();
  CHECK_FALSE(is_io_disjoint(parse_expression("P1(x;x)", v)));
  CHECK(is_io_disjoint(parse_expression("P1(x;y)", v)));
  CHECK(is_io_disjoint(parse_expression("id", v)));
  CHECK_FALSE(is_io_disjoint(parse_expression("cyl_r{x}(M1(x;y))", v)));
}
