#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lif/analysis.hpp"
#include "lif/constructions.hpp"
#include "lif/fo.hpp"
#include "lif/generate.hpp"
#include "lif/oracle.hpp"
#include "lif/rewrite.hpp"
#include "lif/semantics.hpp"
#include "lif/syntax.hpp"

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lif::Error("cannot read file '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  for (const auto& s : out)
    if (s.empty()) throw lif::Error("empty entry in comma-separated list '" + text + "'");
  return out;
}

struct CommonOpts {
  std::string vocab_path;
  std::vector<std::string> expr_files;
  std::vector<std::string> expr_strs;
  std::string interp_path;
  std::string universe_csv;
  std::string domain_csv;
  std::uint64_t seed = 0;
  std::uint64_t budget = 10000;
  bool json_flag = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_family = false) {
  cmd->add_option("--vocab", opts.vocab_path, "vocabulary file");
  cmd->add_option("--expr", opts.expr_files, "expression file (repeatable)");
  cmd->add_option("--expr-str", opts.expr_strs, "expression text (repeatable)");
  cmd->add_option("--interp", opts.interp_path, "interpretation JSON file");
  cmd->add_option("--universe", opts.universe_csv, "comma-separated variable universe");
  cmd->add_option("--domain", opts.domain_csv, "comma-separated domain values");
  if (with_family) {
    cmd->add_option("--seed", opts.seed, "random seed");
    cmd->add_option("--budget", opts.budget, "interpretation family budget");
  }
  cmd->add_flag("--json", opts.json_flag, "emit JSON (always on)");
}

lif::Vocabulary load_vocab(const CommonOpts& opts) {
  if (opts.vocab_path.empty()) throw lif::Error("--vocab is required");
  return lif::parse_vocabulary(read_file(opts.vocab_path));
}

std::vector<std::string> expr_texts(const CommonOpts& opts) {
  std::vector<std::string> out;
  for (const auto& f : opts.expr_files) out.push_back(read_file(f));
  for (const auto& s : opts.expr_strs) out.push_back(s);
  return out;
}

std::string one_expr_text(const CommonOpts& opts) {
  auto texts = expr_texts(opts);
  if (texts.size() != 1) throw lif::Error("expected exactly one expression (--expr or --expr-str)");
  return texts[0];
}

std::vector<std::string> resolve_universe(const CommonOpts& opts, const std::set<std::string>& fallback) {
  std::vector<std::string> names;
  if (!opts.universe_csv.empty()) {
    names = split_csv(opts.universe_csv);
    std::set<std::string> seen;
    for (const auto& n : names)
      if (!seen.insert(n).second) throw lif::Error("duplicate variable '" + n + "' in universe");
  } else {
    names.assign(fallback.begin(), fallback.end());
  }
  if (names.empty()) throw lif::Error("universe is empty; pass --universe");
  return names;
}

lif::Domain resolve_domain(const CommonOpts& opts) {
  std::vector<lif::Value> values;
  if (opts.domain_csv.empty()) {
    values = {1, 2, 3};
  } else {
    for (const auto& s : split_csv(opts.domain_csv)) {
      try {
        values.push_back(std::stoll(s));
      } catch (const std::exception&) {
        throw lif::Error("invalid domain value '" + s + "'");
      }
    }
  }
  return lif::Domain(values);
}

std::pair<lif::Domain, lif::Interpretation> load_interp(const std::string& path, const lif::Vocabulary& vocab) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw lif::Error("invalid interpretation JSON: " + std::string(e.what()));
  }
  if (!j.contains("domain") || !j["domain"].is_array())
    throw lif::Error("interpretation JSON needs a \"domain\" array");
  std::vector<lif::Value> dom_values;
  for (const auto& v : j["domain"]) {
    if (!v.is_number_integer()) throw lif::Error("domain values must be integers");
    dom_values.push_back(v.get<lif::Value>());
  }
  lif::Domain dom(dom_values);

  lif::Interpretation interp;
  for (const auto& [name, sig] : vocab.modules()) interp.set(name, {});
  if (j.contains("relations")) {
    if (!j["relations"].is_object()) throw lif::Error("\"relations\" must be an object");
    for (const auto& [name, tuples_json] : j["relations"].items()) {
      std::vector<std::vector<lif::Value>> tuples;
      for (const auto& t : tuples_json) {
        std::vector<lif::Value> tuple;
        for (const auto& v : t) tuple.push_back(v.get<lif::Value>());
        tuples.push_back(std::move(tuple));
      }
      const lif::ModuleSig* sig = vocab.find(name);
      if (sig)
        for (const auto& t : tuples)
          if (t.size() != static_cast<std::size_t>(sig->arity))
            throw lif::Error("relation '" + name + "' tuple has length " + std::to_string(t.size()) +
                             ", expected " + std::to_string(sig->arity));
      interp.set(name, tuples);
    }
  }
  return {dom, interp};
}

json valuation_json(const lif::ValuationSpace& space, std::uint32_t vid) {
  json out = json::object();
  for (std::uint32_t i = 0; i < space.universe().size(); ++i)
    out[space.universe().at(i)] = space.value(vid, i);
  return out;
}

json relations_json(const lif::Interpretation& interp) {
  json out = json::object();
  for (const auto& [name, tuples] : interp.relations()) {
    json arr = json::array();
    for (const auto& t : tuples) arr.push_back(t);
    out[name] = arr;
  }
  return out;
}

json set_json(const std::set<std::string>& s) { return json(std::vector<std::string>(s.begin(), s.end())); }

void emit(const json& j) { std::cout << j.dump() << "\n"; }

int cmd_parse(const CommonOpts& opts) {
  lif::Vocabulary vocab = load_vocab(opts);
  lif::ExprPtr e = lif::parse_expression(one_expr_text(opts), vocab);
  emit(json{{"rendered", lif::render(e)}, {"vars", set_json(lif::vars_of(*e))}});
  return 0;
}

int cmd_analyze(const CommonOpts& opts) {
  lif::Vocabulary vocab = load_vocab(opts);
  lif::ExprPtr e = lif::parse_expression(one_expr_text(opts), vocab);
  lif::IOReport io = lif::syn_io(e);
  emit(json{{"inputs", set_json(io.inputs)},
            {"outputs", set_json(io.outputs)},
            {"fvars", set_json(io.fvars())},
            {"io_disjoint", lif::is_io_disjoint(e)}});
  return 0;
}

int cmd_eval(const CommonOpts& opts) {
  lif::Vocabulary vocab = load_vocab(opts);
  lif::ExprPtr e = lif::parse_expression(one_expr_text(opts), vocab);
  if (opts.interp_path.empty()) throw lif::Error("--interp is required");
  auto [dom, interp] = load_interp(opts.interp_path, vocab);
  std::vector<std::string> names = resolve_universe(opts, lif::vars_of(*e));
  lif::SpacePtr space = lif::ValuationSpace::make(lif::VarUniverse(names), dom);
  lif::Brv q = lif::evaluate(e, interp, space);
  json pairs = json::array();
  q.for_each_pair([&](std::uint32_t l, std::uint32_t r) {
    pairs.push_back(json::array({valuation_json(*space, l), valuation_json(*space, r)}));
  });
  emit(json{{"count", q.count()},
            {"pairs", pairs},
            {"universe", names},
            {"domain", dom.elements()}});
  return 0;
}

int cmd_check_equiv(const CommonOpts& opts) {
  lif::Vocabulary vocab = load_vocab(opts);
  auto texts = expr_texts(opts);
  if (texts.size() != 2) throw lif::Error("check-equiv needs exactly two expressions");
  lif::ExprPtr e1 = lif::parse_expression(texts[0], vocab);
  lif::ExprPtr e2 = lif::parse_expression(texts[1], vocab);
  std::set<std::string> all_vars = lif::vars_of(*e1);
  for (const auto& v : lif::vars_of(*e2)) all_vars.insert(v);
  std::vector<std::string> names = resolve_universe(opts, all_vars);

  std::vector<lif::Interpretation> family;
  lif::Domain dom({1});
  bool truncated = false;
  std::uint64_t total = 0;
  if (!opts.interp_path.empty()) {
    auto [d, interp] = load_interp(opts.interp_path, vocab);
    dom = d;
    family.push_back(interp);
    total = 1;
  } else {
    dom = resolve_domain(opts);
    lif::Family fam = lif::generate_family(vocab, dom, {2, opts.budget, opts.seed});
    family = std::move(fam.interps);
    truncated = fam.truncated;
    total = fam.total;
  }
  lif::SpacePtr space = lif::ValuationSpace::make(lif::VarUniverse(names), dom);

  json result{{"equivalent", true},
              {"checked", family.size()},
              {"family_total", total},
              {"family_truncated", truncated},
              {"seed", opts.seed},
              {"counterexample", nullptr}};
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!lif::equivalent_on(e1, e2, family[i], space)) {
      result["equivalent"] = false;
      result["counterexample"] = json{{"index", i}, {"relations", relations_json(family[i])}};
      break;
    }
  }
  emit(result);
  return 0;
}

int cmd_oracle(const CommonOpts& opts) {
  lif::Vocabulary vocab = load_vocab(opts);
  lif::ExprPtr e = lif::parse_expression(one_expr_text(opts), vocab);
  std::vector<std::string> names = resolve_universe(opts, lif::vars_of(*e));

  std::vector<lif::Interpretation> family;
  lif::Domain dom({1});
  bool truncated = false;
  std::uint64_t total = 0;
  if (!opts.interp_path.empty()) {
    auto [d, interp] = load_interp(opts.interp_path, vocab);
    dom = d;
    family.push_back(interp);
    total = 1;
  } else {
    dom = resolve_domain(opts);
    lif::Family fam = lif::generate_family(vocab, dom, {2, opts.budget, opts.seed});
    family = std::move(fam.interps);
    truncated = fam.truncated;
    total = fam.total;
  }
  lif::SpacePtr space = lif::ValuationSpace::make(lif::VarUniverse(names), dom);

  lif::WitnessResult wo = lif::witness_outputs(*e, family, space);
  lif::WitnessResult wi = lif::witness_inputs(*e, family, space);
  lif::IOReport io = lif::syn_io(e);

  bool sound = true;
  for (const auto& v : wo.variables)
    if (!io.outputs.count(v)) sound = false;
  for (const auto& v : wi.variables)
    if (!io.inputs.count(v)) sound = false;

  json witnesses = json::array();
  auto add_witness = [&](const lif::WitnessReport& w, const char* kind) {
    json item{{"variable", w.variable},
              {"kind", kind},
              {"interpretation", w.interp_index},
              {"pair", json::array({valuation_json(*space, w.left), valuation_json(*space, w.right)})}};
    if (w.moved_to) item["moved_to"] = *w.moved_to;
    witnesses.push_back(item);
  };
  for (const auto& w : wo.reports) add_witness(w, "output");
  for (const auto& w : wi.reports) add_witness(w, "input");

  emit(json{{"witnessed_outputs", set_json(wo.variables)},
            {"witnessed_inputs", set_json(wi.variables)},
            {"syntactic", json{{"inputs", set_json(io.inputs)}, {"outputs", set_json(io.outputs)}}},
            {"sound", sound},
            {"witnesses", witnesses},
            {"family", json{{"size", family.size()}, {"total", total}, {"truncated", truncated}, {"seed", opts.seed}}}});
  return 0;
}

int cmd_rewrite(const CommonOpts& opts, bool expand, bool eliminate) {
  lif::Vocabulary vocab = load_vocab(opts);
  lif::ExprPtr e = lif::parse_expression(one_expr_text(opts), vocab);
  if (expand == eliminate)
    throw lif::Error("pass exactly one of --expand-redundant and --eliminate-composition");
  if (expand) {
    emit(json{{"expression", lif::render(lif::expand_redundant(e))}});
    return 0;
  }
  std::vector<std::string> names = resolve_universe(opts, lif::vars_of(*e));
  std::set<std::string> base(names.begin(), names.end());
  for (const auto& v : lif::vars_of(*e)) base.insert(v);
  lif::FreshVarSupply supply(base);
  lif::ElimResult result = lif::eliminate_compositions(e, supply);
  std::vector<std::string> extended = names;
  extended.insert(extended.end(), result.fresh.begin(), result.fresh.end());
  emit(json{{"expression", lif::render(result.expr)}, {"fresh", result.fresh}, {"universe", extended}});
  return 0;
}

int cmd_to_fo(const CommonOpts& opts) {
  lif::Vocabulary vocab = load_vocab(opts);
  lif::ExprPtr e = lif::parse_expression(one_expr_text(opts), vocab);
  std::vector<std::string> names = resolve_universe(opts, lif::vars_of(*e));
  lif::FOTranslation trans = lif::lif_to_fo(e, lif::VarUniverse(names));
  emit(json{{"formula", lif::print_fo(trans.formula)},
            {"variables", set_json(trans.variables)},
            {"uses_third_copy", trans.uses_third_copy}});
  return 0;
}

int cmd_from_fo(const CommonOpts& opts) {
  lif::Vocabulary vocab = load_vocab(opts);
  lif::FOPtr f = lif::parse_fo(one_expr_text(opts), &vocab);
  emit(json{{"expression", lif::render(lif::fo_to_lif(f, vocab))}});
  return 0;
}

int cmd_clique(const CommonOpts&, std::uint32_t n, const std::string& emit_what,
               const std::string& graph_path) {
  lif::CliqueSpec spec{n};
  lif::ExprPtr e;
  if (emit_what == "all")
    e = lif::build_all(spec);
  else if (emit_what == "eq")
    e = lif::build_alpha_eq(spec);
  else if (emit_what == "2n")
    e = lif::build_alpha_2n(spec);
  else if (emit_what == "exists3n")
    e = lif::build_alpha_exists_3n(spec);
  else
    throw lif::Error("--emit must be one of all, eq, 2n, exists3n");

  json out{{"n", n}, {"emit", emit_what}, {"expression", lif::render(e)}};
  if (!graph_path.empty()) {
    json g;
    try {
      g = json::parse(read_file(graph_path));
    } catch (const json::exception& ex) {
      throw lif::Error("invalid graph JSON: " + std::string(ex.what()));
    }
    if (!g.contains("vertices") || !g["vertices"].is_array())
      throw lif::Error("graph JSON needs a \"vertices\" array");
    std::vector<lif::Value> vertices;
    for (const auto& v : g["vertices"]) vertices.push_back(v.get<lif::Value>());
    std::vector<std::vector<lif::Value>> edges;
    if (g.contains("edges"))
      for (const auto& edge : g["edges"]) {
        if (!edge.is_array() || edge.size() != 2) throw lif::Error("graph edges must be pairs");
        lif::Value a = edge[0].get<lif::Value>(), b = edge[1].get<lif::Value>();
        edges.push_back({a, b});
        edges.push_back({b, a});
      }
    lif::Domain dom(vertices);
    lif::Interpretation interp;
    interp.set("R", edges);
    lif::SpacePtr space = lif::ValuationSpace::make(lif::VarUniverse(lif::clique_universe(spec)), dom);
    lif::Brv q = lif::evaluate(e, interp, space);
    out["nonempty"] = !q.is_empty();
    out["pair_count"] = q.count();
  }
  emit(out);
  return 0;
}

int cmd_property_suite(const std::string& suite, std::uint64_t seed, std::uint64_t count) {
  lif::SuiteReport report;
  if (suite == "inertia")
    report = lif::suite_inertia(seed, count);
  else if (suite == "determinacy")
    report = lif::suite_determinacy(seed, count);
  else if (suite == "free-variable")
    report = lif::suite_free_variable(seed, count);
  else if (suite == "soundness")
    report = lif::suite_soundness(seed, count);
  else if (suite == "rewrite-equivalence")
    report = lif::suite_rewrite_equivalence(seed, count);
  else if (suite == "fo-roundtrip")
    report = lif::suite_fo_roundtrip(seed, count);
  else
    throw lif::Error("unknown suite '" + suite + "'");
  emit(json{{"suite", report.suite},
            {"seed", seed},
            {"cases", report.cases},
            {"violations", report.violations},
            {"notes", report.notes}});
  return report.violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logic of information flows toolbox"};
  app.require_subcommand(1);

  CommonOpts parse_opts, analyze_opts, eval_opts, equiv_opts, oracle_opts, rewrite_opts, tofo_opts, fromfo_opts;
  bool expand = false, eliminate = false;
  std::uint32_t clique_n = 2;
  std::string clique_emit = "exists3n", clique_graph;
  std::string suite_name;
  std::uint64_t suite_seed = 0, suite_count = 100;
  CommonOpts clique_opts, suite_opts;

  add_common(app.add_subcommand("parse", "parse and render an expression"), parse_opts);
  add_common(app.add_subcommand("analyze", "syntactic inputs and outputs"), analyze_opts);
  add_common(app.add_subcommand("eval", "evaluate over an interpretation"), eval_opts);
  add_common(app.add_subcommand("check-equiv", "compare two expressions"), equiv_opts, true);
  add_common(app.add_subcommand("oracle", "semantic witness search"), oracle_opts, true);

  CLI::App* rewrite_cmd = app.add_subcommand("rewrite", "semantics-preserving rewrites");
  add_common(rewrite_cmd, rewrite_opts);
  rewrite_cmd->add_flag("--expand-redundant", expand, "expand to the core operators");
  rewrite_cmd->add_flag("--eliminate-composition", eliminate, "remove compositions with fresh variables");

  add_common(app.add_subcommand("to-fo", "translate an expression to a formula"), tofo_opts);
  add_common(app.add_subcommand("from-fo", "translate a formula to an expression"), fromfo_opts);

  CLI::App* clique_cmd = app.add_subcommand("clique", "clique-detecting expressions");
  add_common(clique_cmd, clique_opts);
  clique_cmd->add_option("--n", clique_n, "half the clique size");
  clique_cmd->add_option("--emit", clique_emit, "which expression: all, eq, 2n, exists3n");
  clique_cmd->add_option("--graph", clique_graph, "undirected graph JSON to evaluate on");

  CLI::App* suite_cmd = app.add_subcommand("property-suite", "randomized property checks");
  add_common(suite_cmd, suite_opts);
  suite_cmd->add_option("--suite", suite_name, "suite name")->required();
  suite_cmd->add_option("--seed", suite_seed, "random seed");
  suite_cmd->add_option("--count", suite_count, "number of cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand("parse")) return cmd_parse(parse_opts);
    if (app.got_subcommand("analyze")) return cmd_analyze(analyze_opts);
    if (app.got_subcommand("eval")) return cmd_eval(eval_opts);
    if (app.got_subcommand("check-equiv")) return cmd_check_equiv(equiv_opts);
    if (app.got_subcommand("oracle")) return cmd_oracle(oracle_opts);
    if (app.got_subcommand("rewrite")) return cmd_rewrite(rewrite_opts, expand, eliminate);
    if (app.got_subcommand("to-fo")) return cmd_to_fo(tofo_opts);
    if (app.got_subcommand("from-fo")) return cmd_from_fo(fromfo_opts);
    if (app.got_subcommand("clique")) return cmd_clique(clique_opts, clique_n, clique_emit, clique_graph);
    if (app.got_subcommand("property-suite")) return cmd_property_suite(suite_name, suite_seed, suite_count);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const lif::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
