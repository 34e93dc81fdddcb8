#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lif {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  int line;
  int col;
  ParseError(int line_, int col_, const std::string& msg)
      : Error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

// Module signature: the first input_arity argument positions are inputs,
// the remaining arity - input_arity are outputs.
struct ModuleSig {
  int arity = 0;
  int input_arity = 0;
};

inline bool is_reserved_word(const std::string& s) {
  return s == "id" || s == "conv" || s == "cyl_l" || s == "cyl_r" ||
         s == "sel_l" || s == "sel_r" || s == "sel_lr";
}

class Vocabulary {
 public:
  void add(const std::string& name, int arity, int input_arity) {
    if (name.empty()) throw Error("module name must be nonempty");
    if (is_reserved_word(name)) throw Error("'" + name + "' is a reserved word");
    if (arity < 0 || input_arity < 0 || input_arity > arity)
      throw Error("module '" + name + "': need 0 <= input arity <= arity");
    if (modules_.count(name)) throw Error("duplicate module '" + name + "'");
    modules_[name] = ModuleSig{arity, input_arity};
  }

  const ModuleSig* find(const std::string& name) const {
    auto it = modules_.find(name);
    return it == modules_.end() ? nullptr : &it->second;
  }

  const std::map<std::string, ModuleSig>& modules() const { return modules_; }

 private:
  std::map<std::string, ModuleSig> modules_;
};

enum class Op {
  Id,
  Atom,
  Union,
  Intersect,
  Diff,
  Compose,
  Converse,
  CylL,
  CylR,
  SelL,
  SelR,
  SelLR,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// One node kind per grammar production.  Field use by op:
//   Atom:        module, args_in, args_out
//   CylL/CylR:   vars (kept sorted and unique), a
//   SelL/SelR/SelLR: x, y, a
//   Converse:    a
//   binaries:    a, b
struct Expr {
  Op op = Op::Id;
  std::string module;
  std::vector<std::string> args_in;
  std::vector<std::string> args_out;
  std::vector<std::string> vars;
  std::string x, y;
  ExprPtr a, b;
};

inline ExprPtr mk_id() {
  auto e = std::make_shared<Expr>();
  e->op = Op::Id;
  return e;
}

inline ExprPtr mk_atom(std::string module, std::vector<std::string> in,
                       std::vector<std::string> out) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Atom;
  e->module = std::move(module);
  e->args_in = std::move(in);
  e->args_out = std::move(out);
  return e;
}

inline ExprPtr mk_binary(Op op, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

inline ExprPtr mk_union(ExprPtr a, ExprPtr b) { return mk_binary(Op::Union, std::move(a), std::move(b)); }
inline ExprPtr mk_intersect(ExprPtr a, ExprPtr b) { return mk_binary(Op::Intersect, std::move(a), std::move(b)); }
inline ExprPtr mk_diff(ExprPtr a, ExprPtr b) { return mk_binary(Op::Diff, std::move(a), std::move(b)); }
inline ExprPtr mk_compose(ExprPtr a, ExprPtr b) { return mk_binary(Op::Compose, std::move(a), std::move(b)); }

inline ExprPtr mk_converse(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Converse;
  e->a = std::move(a);
  return e;
}

// Cylindrification over the empty set is the identity, so no node is made.
inline ExprPtr mk_cyl(Op op, std::vector<std::string> vars, ExprPtr a) {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (vars.empty()) return a;
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->vars = std::move(vars);
  e->a = std::move(a);
  return e;
}

inline ExprPtr mk_cyl_l(std::vector<std::string> vars, ExprPtr a) { return mk_cyl(Op::CylL, std::move(vars), std::move(a)); }
inline ExprPtr mk_cyl_r(std::vector<std::string> vars, ExprPtr a) { return mk_cyl(Op::CylR, std::move(vars), std::move(a)); }

inline ExprPtr mk_sel(Op op, std::string x, std::string y, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->x = std::move(x);
  e->y = std::move(y);
  e->a = std::move(a);
  return e;
}

inline ExprPtr mk_sel_l(std::string x, std::string y, ExprPtr a) { return mk_sel(Op::SelL, std::move(x), std::move(y), std::move(a)); }
inline ExprPtr mk_sel_r(std::string x, std::string y, ExprPtr a) { return mk_sel(Op::SelR, std::move(x), std::move(y), std::move(a)); }
inline ExprPtr mk_sel_lr(std::string x, std::string y, ExprPtr a) { return mk_sel(Op::SelLR, std::move(x), std::move(y), std::move(a)); }

inline bool equal(const Expr& l, const Expr& r) {
  if (l.op != r.op) return false;
  switch (l.op) {
    case Op::Id:
      return true;
    case Op::Atom:
      return l.module == r.module && l.args_in == r.args_in && l.args_out == r.args_out;
    case Op::CylL:
    case Op::CylR:
      return l.vars == r.vars && equal(*l.a, *r.a);
    case Op::SelL:
    case Op::SelR:
    case Op::SelLR:
      return l.x == r.x && l.y == r.y && equal(*l.a, *r.a);
    case Op::Converse:
      return equal(*l.a, *r.a);
    default:
      return equal(*l.a, *r.a) && equal(*l.b, *r.b);
  }
}

inline bool equal(const ExprPtr& l, const ExprPtr& r) { return equal(*l, *r); }

inline void collect_vars(const Expr& e, std::set<std::string>& out) {
  switch (e.op) {
    case Op::Id:
      return;
    case Op::Atom:
      out.insert(e.args_in.begin(), e.args_in.end());
      out.insert(e.args_out.begin(), e.args_out.end());
      return;
    case Op::CylL:
    case Op::CylR:
      out.insert(e.vars.begin(), e.vars.end());
      collect_vars(*e.a, out);
      return;
    case Op::SelL:
    case Op::SelR:
    case Op::SelLR:
      out.insert(e.x);
      out.insert(e.y);
      collect_vars(*e.a, out);
      return;
    case Op::Converse:
      collect_vars(*e.a, out);
      return;
    default:
      collect_vars(*e.a, out);
      collect_vars(*e.b, out);
      return;
  }
}

// Every variable occurring anywhere in the expression (not just the free ones).
inline std::set<std::string> vars_of(const Expr& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

inline void collect_modules(const Expr& e, std::set<std::string>& out) {
  if (e.op == Op::Atom) out.insert(e.module);
  if (e.a) collect_modules(*e.a, out);
  if (e.b) collect_modules(*e.b, out);
}

inline std::set<std::string> modules_of(const Expr& e) {
  std::set<std::string> out;
  collect_modules(e, out);
  return out;
}

namespace detail {

enum class Tok { Ident, LParen, RParen, LBrace, RBrace, Comma, Semi, Eq, Plus, Minus, Amp, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_space();
    int line = line_, col = col_;
    if (pos_ >= src_.size()) return {Tok::End, "", line, col};
    char c = src_[pos_];
    if (c == '#') throw ParseError(line, col, "'#' is reserved for generated variable names");
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        s += src_[pos_];
        advance();
      }
      return {Tok::Ident, s, line, col};
    }
    advance();
    switch (c) {
      case '(': return {Tok::LParen, "(", line, col};
      case ')': return {Tok::RParen, ")", line, col};
      case '{': return {Tok::LBrace, "{", line, col};
      case '}': return {Tok::RBrace, "}", line, col};
      case ',': return {Tok::Comma, ",", line, col};
      case ';': return {Tok::Semi, ";", line, col};
      case '=': return {Tok::Eq, "=", line, col};
      case '+': return {Tok::Plus, "+", line, col};
      case '\\': return {Tok::Minus, "\\", line, col};
      case '&': return {Tok::Amp, "&", line, col};
      default:
        throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class ExprParser {
 public:
  ExprParser(const std::string& src, const Vocabulary& vocab) : lex_(src), vocab_(vocab) { bump(); }

  ExprPtr parse() {
    ExprPtr e = parse_sum();
    if (cur_.kind != Tok::End) fail("expected end of input");
    return e;
  }

 private:
  void bump() { cur_ = lex_.next(); }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(cur_.line, cur_.col, msg + " (got '" + (cur_.kind == Tok::End ? "<end>" : cur_.text) + "')");
  }

  void expect(Tok k, const char* what) {
    if (cur_.kind != k) fail(std::string("expected ") + what);
    bump();
  }

  std::string expect_ident(const char* what) {
    if (cur_.kind != Tok::Ident) fail(std::string("expected ") + what);
    std::string s = cur_.text;
    bump();
    return s;
  }

  // '+' and '\' share the lowest precedence level; '&' binds tighter, ';' tighter still.
  ExprPtr parse_sum() {
    ExprPtr e = parse_inter();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      Op op = cur_.kind == Tok::Plus ? Op::Union : Op::Diff;
      bump();
      e = mk_binary(op, e, parse_inter());
    }
    return e;
  }

  ExprPtr parse_inter() {
    ExprPtr e = parse_comp();
    while (cur_.kind == Tok::Amp) {
      bump();
      e = mk_binary(Op::Intersect, e, parse_comp());
    }
    return e;
  }

  ExprPtr parse_comp() {
    ExprPtr e = parse_prefix();
    while (cur_.kind == Tok::Semi) {
      bump();
      e = mk_binary(Op::Compose, e, parse_prefix());
    }
    return e;
  }

  std::vector<std::string> parse_varlist() {
    std::vector<std::string> vars;
    vars.push_back(expect_ident("variable"));
    while (cur_.kind == Tok::Comma) {
      bump();
      vars.push_back(expect_ident("variable"));
    }
    return vars;
  }

  ExprPtr parse_prefix() {
    if (cur_.kind == Tok::LParen) {
      bump();
      ExprPtr e = parse_sum();
      expect(Tok::RParen, "')'");
      return e;
    }
    if (cur_.kind != Tok::Ident) fail("expected expression");
    Token head = cur_;
    std::string name = head.text;
    bump();
    if (name == "id") return mk_id();
    if (name == "conv") {
      expect(Tok::LParen, "'('");
      ExprPtr e = parse_sum();
      expect(Tok::RParen, "')'");
      return mk_converse(e);
    }
    if (name == "cyl_l" || name == "cyl_r") {
      expect(Tok::LBrace, "'{'");
      std::vector<std::string> vars = parse_varlist();
      expect(Tok::RBrace, "'}'");
      expect(Tok::LParen, "'('");
      ExprPtr e = parse_sum();
      expect(Tok::RParen, "')'");
      return mk_cyl(name == "cyl_l" ? Op::CylL : Op::CylR, std::move(vars), e);
    }
    if (name == "sel_l" || name == "sel_r" || name == "sel_lr") {
      Op op = name == "sel_l" ? Op::SelL : name == "sel_r" ? Op::SelR : Op::SelLR;
      expect(Tok::LBrace, "'{'");
      std::vector<std::string> xs, ys;
      if (cur_.kind == Tok::LParen) {
        Token open = cur_;
        bump();
        xs = parse_varlist();
        expect(Tok::RParen, "')'");
        expect(Tok::Eq, "'='");
        expect(Tok::LParen, "'('");
        ys = parse_varlist();
        expect(Tok::RParen, "')'");
        if (xs.size() != ys.size())
          throw ParseError(open.line, open.col, "selection tuples must have equal length");
      } else {
        xs.push_back(expect_ident("variable"));
        expect(Tok::Eq, "'='");
        ys.push_back(expect_ident("variable"));
      }
      expect(Tok::RBrace, "'}'");
      expect(Tok::LParen, "'('");
      ExprPtr e = parse_sum();
      expect(Tok::RParen, "')'");
      // Tuple selection is sugar for nested single selections, first pair outermost.
      for (size_t i = xs.size(); i-- > 0;) e = mk_sel(op, xs[i], ys[i], e);
      return e;
    }
    // Anything else is an atom.
    const ModuleSig* sig = vocab_.find(name);
    if (!sig) throw ParseError(head.line, head.col, "unknown module '" + name + "'");
    expect(Tok::LParen, "'('");
    std::vector<std::string> in, out;
    if (cur_.kind != Tok::Semi) in = parse_varlist();
    expect(Tok::Semi, "';'");
    if (cur_.kind != Tok::RParen) out = parse_varlist();
    expect(Tok::RParen, "')'");
    if (static_cast<int>(in.size()) != sig->input_arity ||
        static_cast<int>(out.size()) != sig->arity - sig->input_arity)
      throw ParseError(head.line, head.col,
                       "module '" + name + "' expects " + std::to_string(sig->input_arity) + ";" +
                           std::to_string(sig->arity - sig->input_arity) + " arguments, got " +
                           std::to_string(in.size()) + ";" + std::to_string(out.size()));
    return mk_atom(name, std::move(in), std::move(out));
  }

  Lexer lex_;
  const Vocabulary& vocab_;
  Token cur_;
};

inline std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

inline int precedence(Op op) {
  switch (op) {
    case Op::Union:
    case Op::Diff:
      return 0;
    case Op::Intersect:
      return 1;
    case Op::Compose:
      return 2;
    default:
      return 3;
  }
}

inline void render_rec(const Expr& e, std::string& out) {
  auto child = [&](const Expr& c, bool needs_parens) {
    if (needs_parens) out += '(';
    render_rec(c, out);
    if (needs_parens) out += ')';
  };
  switch (e.op) {
    case Op::Id:
      out += "id";
      return;
    case Op::Atom:
      out += e.module;
      out += '(';
      out += join(e.args_in, ",");
      out += ';';
      out += join(e.args_out, ",");
      out += ')';
      return;
    case Op::Converse:
      out += "conv(";
      render_rec(*e.a, out);
      out += ')';
      return;
    case Op::CylL:
    case Op::CylR:
      out += e.op == Op::CylL ? "cyl_l{" : "cyl_r{";
      out += join(e.vars, ",");
      out += "}(";
      render_rec(*e.a, out);
      out += ')';
      return;
    case Op::SelL:
    case Op::SelR:
    case Op::SelLR:
      out += e.op == Op::SelL ? "sel_l{" : e.op == Op::SelR ? "sel_r{" : "sel_lr{";
      out += e.x;
      out += '=';
      out += e.y;
      out += "}(";
      render_rec(*e.a, out);
      out += ')';
      return;
    default: {
      const char* sym = e.op == Op::Union ? " + " : e.op == Op::Diff ? " \\ " : e.op == Op::Intersect ? " & " : " ; ";
      int p = precedence(e.op);
      child(*e.a, precedence(e.a->op) < p);
      out += sym;
      child(*e.b, precedence(e.b->op) <= p);
      return;
    }
  }
}

}  // namespace detail

inline ExprPtr parse_expression(const std::string& text, const Vocabulary& vocab) {
  detail::ExprParser p(text, vocab);
  return p.parse();
}

// Canonical text form; parse_expression(render(e)) is structurally equal to e.
// Generated fresh variables (containing '#') render fine but are deliberately
// not re-parseable.
inline std::string render(const Expr& e) {
  std::string out;
  detail::render_rec(e, out);
  return out;
}

inline std::string render(const ExprPtr& e) { return render(*e); }

// Vocabulary files: one "NAME/ARITY in IAR" declaration per line, '#' comments.
inline Vocabulary parse_vocabulary(const std::string& text) {
  Vocabulary vocab;
  int line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (size_t hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
      if (start > text.size()) break;
      continue;
    }
    size_t e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);

    size_t slash = line.find('/');
    size_t in_kw = line.find(" in ");
    if (slash == std::string::npos || in_kw == std::string::npos || in_kw < slash)
      throw ParseError(line_no, 1, "expected 'NAME/ARITY in IAR'");
    std::string name = line.substr(0, slash);
    std::string ar_s = line.substr(slash + 1, in_kw - slash - 1);
    std::string iar_s = line.substr(in_kw + 4);
    auto trim = [](std::string s) {
      size_t b2 = s.find_first_not_of(" \t");
      if (b2 == std::string::npos) return std::string();
      size_t e2 = s.find_last_not_of(" \t");
      return s.substr(b2, e2 - b2 + 1);
    };
    name = trim(name);
    ar_s = trim(ar_s);
    iar_s = trim(iar_s);
    auto is_number = [](const std::string& s) {
      return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
    };
    auto is_name = [](const std::string& s) {
      if (s.empty() || (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')) return false;
      return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
    };
    if (!is_name(name)) throw ParseError(line_no, 1, "bad module name '" + name + "'");
    if (!is_number(ar_s) || !is_number(iar_s))
      throw ParseError(line_no, 1, "arity and input arity must be nonnegative integers");
    try {
      vocab.add(name, std::stoi(ar_s), std::stoi(iar_s));
    } catch (const Error& err) {
      throw ParseError(line_no, 1, err.what());
    }
  }
  return vocab;
}

}  // namespace lif
