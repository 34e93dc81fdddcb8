#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "lif/rewrite.hpp"
#include "lif/semantics.hpp"
#include "lif/syntax.hpp"

namespace lif {

enum class FOKind { Equals, Rel, Or, And, Not, Exists };

struct FOFormula;
using FOPtr = std::shared_ptr<const FOFormula>;

struct FOFormula {
  FOKind kind;
  std::string var_a;               // Equals left side, Exists bound variable
  std::string var_b;               // Equals right side
  std::string rel;                 // Rel name
  std::vector<std::string> args;   // Rel arguments
  std::vector<FOPtr> kids;         // Or/And children, Not/Exists child
};

inline FOPtr fo_equals(std::string a, std::string b) {
  auto f = std::make_shared<FOFormula>();
  f->kind = FOKind::Equals;
  f->var_a = std::move(a);
  f->var_b = std::move(b);
  return f;
}

inline FOPtr fo_rel(std::string name, std::vector<std::string> args) {
  auto f = std::make_shared<FOFormula>();
  f->kind = FOKind::Rel;
  f->rel = std::move(name);
  f->args = std::move(args);
  return f;
}

inline FOPtr fo_junction(FOKind kind, std::vector<FOPtr> kids) {
  if (kids.empty()) throw Error("connective needs at least one operand");
  if (kids.size() == 1) return kids[0];
  auto f = std::make_shared<FOFormula>();
  f->kind = kind;
  f->kids = std::move(kids);
  return f;
}

inline FOPtr fo_or(std::vector<FOPtr> kids) { return fo_junction(FOKind::Or, std::move(kids)); }
inline FOPtr fo_and(std::vector<FOPtr> kids) { return fo_junction(FOKind::And, std::move(kids)); }

inline FOPtr fo_not(FOPtr kid) {
  auto f = std::make_shared<FOFormula>();
  f->kind = FOKind::Not;
  f->kids = {std::move(kid)};
  return f;
}

inline FOPtr fo_exists(std::string var, FOPtr kid) {
  auto f = std::make_shared<FOFormula>();
  f->kind = FOKind::Exists;
  f->var_a = std::move(var);
  f->kids = {std::move(kid)};
  return f;
}

inline std::set<std::string> fo_free_vars(const FOFormula& f) {
  switch (f.kind) {
    case FOKind::Equals:
      return {f.var_a, f.var_b};
    case FOKind::Rel:
      return std::set<std::string>(f.args.begin(), f.args.end());
    case FOKind::Or:
    case FOKind::And: {
      std::set<std::string> out;
      for (const auto& k : f.kids) {
        auto sub = fo_free_vars(*k);
        out.insert(sub.begin(), sub.end());
      }
      return out;
    }
    case FOKind::Not:
      return fo_free_vars(*f.kids[0]);
    case FOKind::Exists: {
      auto out = fo_free_vars(*f.kids[0]);
      out.erase(f.var_a);
      return out;
    }
  }
  throw Error("unreachable formula kind");
}

// ---------------------------------------------------------------------------
// S-expression syntax: (= x y), (R x y), (or f g ...), (and f g ...),
// (not f), (exists x f).

namespace detail {

struct FOToken {
  std::string text;  // "(", ")" or a word
  int line, col;
};

inline std::vector<FOToken> fo_tokenize(const std::string& text) {
  std::vector<FOToken> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
    } else if (c == '(' || c == ')') {
      out.push_back({std::string(1, c), line, col});
      ++col;
      ++i;
    } else {
      int start_col = col;
      std::string word;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '(' &&
             text[i] != ')') {
        word.push_back(text[i]);
        ++col;
        ++i;
      }
      out.push_back({word, line, start_col});
    }
  }
  return out;
}

class FOParser {
 public:
  FOParser(std::vector<FOToken> tokens, const Vocabulary* vocab) : tokens_(std::move(tokens)), vocab_(vocab) {}

  FOPtr parse() {
    FOPtr f = formula();
    if (pos_ < tokens_.size()) fail("trailing input after formula");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    int line = 1, col = 1;
    if (pos_ < tokens_.size()) {
      line = tokens_[pos_].line;
      col = tokens_[pos_].col;
    } else if (!tokens_.empty()) {
      line = tokens_.back().line;
      col = tokens_.back().col;
    }
    throw ParseError(line, col, msg);
  }

  const FOToken& peek() {
    if (pos_ >= tokens_.size()) fail("unexpected end of formula");
    return tokens_[pos_];
  }

  FOToken next() {
    const FOToken& t = peek();
    ++pos_;
    return t;
  }

  void expect(const std::string& text) {
    if (peek().text != text) fail("expected '" + text + "'");
    ++pos_;
  }

  std::string variable() {
    FOToken t = next();
    if (t.text == "(" || t.text == ")") throw ParseError(t.line, t.col, "expected a variable");
    for (char c : t.text)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
        throw ParseError(t.line, t.col, "invalid variable name '" + t.text + "'");
    if (std::isdigit(static_cast<unsigned char>(t.text[0])))
      throw ParseError(t.line, t.col, "invalid variable name '" + t.text + "'");
    return t.text;
  }

  FOPtr formula() {
    expect("(");
    FOToken head = next();
    if (head.text == "=") {
      std::string a = variable(), b = variable();
      expect(")");
      return fo_equals(a, b);
    }
    if (head.text == "or" || head.text == "and") {
      std::vector<FOPtr> kids;
      while (peek().text != ")") kids.push_back(formula());
      ++pos_;
      if (kids.empty()) throw ParseError(head.line, head.col, "'" + head.text + "' needs at least one operand");
      auto f = std::make_shared<FOFormula>();
      f->kind = head.text == "or" ? FOKind::Or : FOKind::And;
      f->kids = std::move(kids);
      return f;
    }
    if (head.text == "not") {
      FOPtr kid = formula();
      expect(")");
      return fo_not(kid);
    }
    if (head.text == "exists") {
      std::string var = variable();
      FOPtr kid = formula();
      expect(")");
      return fo_exists(var, kid);
    }
    if (head.text == "(" || head.text == ")") fail("expected a connective or relation name");
    std::vector<std::string> args;
    while (peek().text != ")") args.push_back(variable());
    ++pos_;
    if (vocab_) {
      const ModuleSig* sig = vocab_->find(head.text);
      if (!sig) throw ParseError(head.line, head.col, "unknown relation '" + head.text + "'");
      if (static_cast<std::size_t>(sig->arity) != args.size())
        throw ParseError(head.line, head.col,
                         "relation '" + head.text + "' expects " + std::to_string(sig->arity) +
                             " arguments, got " + std::to_string(args.size()));
    }
    return fo_rel(head.text, std::move(args));
  }

  std::vector<FOToken> tokens_;
  const Vocabulary* vocab_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline FOPtr parse_fo(const std::string& text, const Vocabulary* vocab = nullptr) {
  return detail::FOParser(detail::fo_tokenize(text), vocab).parse();
}

inline std::string print_fo(const FOFormula& f) {
  switch (f.kind) {
    case FOKind::Equals:
      return "(= " + f.var_a + " " + f.var_b + ")";
    case FOKind::Rel: {
      std::string out = "(" + f.rel;
      for (const auto& a : f.args) out += " " + a;
      return out + ")";
    }
    case FOKind::Or:
    case FOKind::And: {
      std::string out = f.kind == FOKind::Or ? "(or" : "(and";
      for (const auto& k : f.kids) out += " " + print_fo(*k);
      return out + ")";
    }
    case FOKind::Not:
      return "(not " + print_fo(*f.kids[0]) + ")";
    case FOKind::Exists:
      return "(exists " + f.var_a + " " + print_fo(*f.kids[0]) + ")";
  }
  throw Error("unreachable formula kind");
}

inline std::string print_fo(const FOPtr& f) { return print_fo(*f); }

// ---------------------------------------------------------------------------
// Tarskian evaluation over a finite domain.

namespace detail {

inline bool fo_eval_rec(const FOFormula& f, const Interpretation& interp, std::map<std::string, Value>& val,
                        const Domain& dom) {
  switch (f.kind) {
    case FOKind::Equals: {
      auto a = val.find(f.var_a), b = val.find(f.var_b);
      if (a == val.end()) throw Error("unbound variable '" + f.var_a + "'");
      if (b == val.end()) throw Error("unbound variable '" + f.var_b + "'");
      return a->second == b->second;
    }
    case FOKind::Rel: {
      const auto* tuples = interp.find(f.rel);
      if (!tuples) throw Error("unknown relation '" + f.rel + "' in interpretation");
      std::vector<Value> tuple;
      for (const auto& a : f.args) {
        auto it = val.find(a);
        if (it == val.end()) throw Error("unbound variable '" + a + "'");
        tuple.push_back(it->second);
      }
      return std::binary_search(tuples->begin(), tuples->end(), tuple);
    }
    case FOKind::Or:
      for (const auto& k : f.kids)
        if (fo_eval_rec(*k, interp, val, dom)) return true;
      return false;
    case FOKind::And:
      for (const auto& k : f.kids)
        if (!fo_eval_rec(*k, interp, val, dom)) return false;
      return true;
    case FOKind::Not:
      return !fo_eval_rec(*f.kids[0], interp, val, dom);
    case FOKind::Exists: {
      auto old = val.find(f.var_a);
      bool had = old != val.end();
      Value saved = had ? old->second : Value{};
      for (std::uint32_t i = 0; i < dom.size(); ++i) {
        val[f.var_a] = dom.at(i);
        if (fo_eval_rec(*f.kids[0], interp, val, dom)) {
          if (had)
            val[f.var_a] = saved;
          else
            val.erase(f.var_a);
          return true;
        }
      }
      if (had)
        val[f.var_a] = saved;
      else
        val.erase(f.var_a);
      return false;
    }
  }
  throw Error("unreachable formula kind");
}

}  // namespace detail

inline bool fo_evaluate(const FOFormula& f, const Interpretation& interp,
                        const std::map<std::string, Value>& valuation, const Domain& dom) {
  std::map<std::string, Value> val = valuation;
  return detail::fo_eval_rec(f, interp, val, dom);
}

inline bool fo_evaluate(const FOPtr& f, const Interpretation& interp,
                        const std::map<std::string, Value>& valuation, const Domain& dom) {
  return fo_evaluate(*f, interp, valuation, dom);
}

// ---------------------------------------------------------------------------
// Formulas to expressions.  Requires every relation used to have input
// arity zero.  The resulting expression evaluates to the diagonal pairs
// (v, v) over the satisfying valuations.

inline ExprPtr fo_to_lif(const FOFormula& f, const Vocabulary& vocab) {
  switch (f.kind) {
    case FOKind::Equals:
      return mk_sel_r(f.var_a, f.var_b, mk_id());
    case FOKind::Rel: {
      const ModuleSig* sig = vocab.find(f.rel);
      if (!sig) throw Error("unknown module '" + f.rel + "'");
      if (sig->input_arity != 0)
        throw Error("module '" + f.rel + "' has nonzero input arity");
      if (static_cast<std::size_t>(sig->arity) != f.args.size())
        throw Error("module '" + f.rel + "' expects " + std::to_string(sig->arity) + " arguments, got " +
                    std::to_string(f.args.size()));
      return mk_intersect(mk_id(), mk_atom(f.rel, {}, f.args));
    }
    case FOKind::Or: {
      ExprPtr out = fo_to_lif(*f.kids[0], vocab);
      for (std::size_t i = 1; i < f.kids.size(); ++i) out = mk_union(out, fo_to_lif(*f.kids[i], vocab));
      return out;
    }
    case FOKind::And: {
      ExprPtr out = fo_to_lif(*f.kids[0], vocab);
      for (std::size_t i = 1; i < f.kids.size(); ++i) out = mk_intersect(out, fo_to_lif(*f.kids[i], vocab));
      return out;
    }
    case FOKind::Not:
      return mk_diff(mk_id(), fo_to_lif(*f.kids[0], vocab));
    case FOKind::Exists:
      return mk_sel_lr(f.var_a, f.var_a,
                       mk_cyl_l({f.var_a}, mk_cyl_r({f.var_a}, fo_to_lif(*f.kids[0], vocab))));
  }
  throw Error("unreachable formula kind");
}

inline ExprPtr fo_to_lif(const FOPtr& f, const Vocabulary& vocab) { return fo_to_lif(*f, vocab); }

// ---------------------------------------------------------------------------
// Expressions to formulas over three indexed copies of the universe.  The
// pair (v1, v2) is in the evaluation of the expression exactly when the
// formula holds under x_i = v1(u_i), y_i = v2(u_i).  Inputs without
// composition never touch the third copy.

struct FOTranslation {
  FOPtr formula;
  std::set<std::string> variables;  // every variable occurring, free or bound
  bool uses_third_copy = false;
};

namespace detail {

inline std::string copy_name(int copy, std::uint32_t i) {
  static const char* prefix[] = {"x", "y", "z"};
  return std::string(prefix[copy]) + std::to_string(i + 1);
}

inline FOPtr lif_to_fo_rec(const Expr& e, const VarUniverse& u, int lc, int rc) {
  const std::uint32_t n = u.size();
  switch (e.op) {
    case Op::Id: {
      std::vector<FOPtr> eqs;
      for (std::uint32_t i = 0; i < n; ++i) eqs.push_back(fo_equals(copy_name(lc, i), copy_name(rc, i)));
      return fo_and(std::move(eqs));
    }
    case Op::Atom: {
      std::vector<std::string> args;
      for (const auto& v : e.args_in) args.push_back(copy_name(lc, u.index_of(v)));
      for (const auto& v : e.args_out) args.push_back(copy_name(rc, u.index_of(v)));
      std::set<std::string> outs(e.args_out.begin(), e.args_out.end());
      std::vector<FOPtr> parts{fo_rel(e.module, std::move(args))};
      for (std::uint32_t i = 0; i < n; ++i)
        if (!outs.count(u.at(i))) parts.push_back(fo_equals(copy_name(lc, i), copy_name(rc, i)));
      return fo_and(std::move(parts));
    }
    case Op::Union:
      return fo_or({lif_to_fo_rec(*e.a, u, lc, rc), lif_to_fo_rec(*e.b, u, lc, rc)});
    case Op::Diff:
      return fo_and({lif_to_fo_rec(*e.a, u, lc, rc), fo_not(lif_to_fo_rec(*e.b, u, lc, rc))});
    case Op::Compose: {
      int mid = 3 - lc - rc;
      FOPtr body = fo_and({lif_to_fo_rec(*e.a, u, lc, mid), lif_to_fo_rec(*e.b, u, mid, rc)});
      for (std::uint32_t i = n; i-- > 0;) body = fo_exists(copy_name(mid, i), body);
      return body;
    }
    case Op::Converse:
      return lif_to_fo_rec(*e.a, u, rc, lc);
    case Op::SelLR:
      return fo_and({lif_to_fo_rec(*e.a, u, lc, rc),
                     fo_equals(copy_name(lc, u.index_of(e.x)), copy_name(rc, u.index_of(e.y)))});
    case Op::CylL: {
      FOPtr body = lif_to_fo_rec(*e.a, u, lc, rc);
      for (std::size_t i = e.vars.size(); i-- > 0;) body = fo_exists(copy_name(lc, u.index_of(e.vars[i])), body);
      return body;
    }
    default:
      throw Error("unreachable operator after expansion");
  }
}

inline void collect_fo_vars(const FOFormula& f, std::set<std::string>& out) {
  switch (f.kind) {
    case FOKind::Equals:
      out.insert(f.var_a);
      out.insert(f.var_b);
      return;
    case FOKind::Rel:
      out.insert(f.args.begin(), f.args.end());
      return;
    case FOKind::Exists:
      out.insert(f.var_a);
      collect_fo_vars(*f.kids[0], out);
      return;
    default:
      for (const auto& k : f.kids) collect_fo_vars(*k, out);
      return;
  }
}

}  // namespace detail

inline FOTranslation lif_to_fo(const ExprPtr& e, const VarUniverse& universe) {
  if (universe.size() == 0) throw Error("translation requires a nonempty universe");
  for (const auto& v : vars_of(*e))
    if (!universe.contains(v)) throw Error("variable '" + v + "' not in universe");
  FOTranslation out;
  out.formula = detail::lif_to_fo_rec(*expand_redundant(e), universe, 0, 1);
  detail::collect_fo_vars(*out.formula, out.variables);
  for (const auto& v : out.variables)
    if (v[0] == 'z') out.uses_third_copy = true;
  return out;
}

}  // namespace lif
