#include "cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "wlab/constructions.hpp"
#include "wlab/witnesses.hpp"
#include "wlab/zoo.hpp"

namespace wlab::cli {

namespace {

struct Options {
  std::uint64_t budget = 10000;
  std::size_t depth = 10;
  std::size_t window = 200;
  std::uint64_t seed = 0;
  std::string facts_path;

  SuiteConfig suite_config() const { return {budget, depth, window, seed}; }
};

std::string facts_text(const Options& opt) {
  if (opt.facts_path.empty()) return embedded_zoo_facts();
  std::ifstream in(opt.facts_path);
  if (!in.good()) throw Error("cannot read facts file: " + opt.facts_path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_step(std::ostream& out, const zoo::Step& s) {
  out << "  [" << s.rule << "] " << zoo::fact_text(s.conclusion);
  if (s.rule == "seed" && !s.conclusion.provenance.empty())
    out << " # " << s.conclusion.provenance;
  bool first = true;
  for (const zoo::Fact& p : s.premises) {
    out << (first ? " <- " : " ; ") << zoo::fact_text(p);
    first = false;
  }
  out << "\n";
}

void print_derivation(std::ostream& out, const zoo::Derivation& d,
                      const zoo::FactBase& base) {
  out << "derivation:\n";
  for (const zoo::Step& s : d.steps) print_step(out, s);
  out << (zoo::replay(d, base) ? "replay ok\n" : "replay failed\n");
}

int cmd_verify(const std::string& name, const Options& opt,
               std::ostream& out, std::ostream& err) {
  register_builtin_witnesses();
  const auto& registry = witness_registry();
  std::vector<std::string> selected;
  if (registry.count(name)) {
    selected.push_back(name);
  } else {
    for (const auto& [key, fn] : registry) {
      (void)fn;
      if (key.rfind(name + "_", 0) == 0) selected.push_back(key);
    }
  }
  if (selected.empty()) {
    err << "unknown witness: " << name << "\n";
    err << "known witnesses:\n";
    for (const auto& [key, fn] : registry) {
      (void)fn;
      err << "  " << key << "\n";
    }
    return 2;
  }
  bool ok = true;
  for (const std::string& key : selected) {
    Report report = registry.at(key)(opt.suite_config());
    out << report.to_text();
    ok = ok && report.ok();
  }
  return ok ? 0 : 1;
}

int cmd_zoo_query(const std::string& text, const Options& opt,
                  std::ostream& out, std::ostream& err) {
  zoo::FactBase base = zoo::parse_facts(facts_text(opt));
  std::istringstream in(text);
  std::string rel_tok, lhs_tok, rhs_tok, extra;
  if (!(in >> rel_tok >> lhs_tok >> rhs_tok) || (in >> extra)) {
    err << "query must be '<relation> <expr> <expr>', got '" << text << "'\n";
    return 2;
  }
  auto rel = zoo::rel_from_token(rel_tok);
  if (!rel) {
    err << "unknown relation '" << rel_tok << "'\n";
    return 2;
  }
  zoo::ExprPtr lhs = zoo::parse_expr(lhs_tok);
  zoo::ExprPtr rhs = zoo::parse_expr(rhs_tok);
  zoo::QueryResult r = zoo::query(base, *rel, lhs, rhs);
  out << "query " << rel_tok << " " << zoo::render(lhs) << " "
      << zoo::render(rhs) << "\n";
  out << "verdict " << zoo::verdict_name(r.verdict) << "\n";
  if (r.derivation) print_derivation(out, *r.derivation, base);
  return 0;
}

int cmd_zoo_consistency(const Options& opt, std::ostream& out) {
  zoo::FactBase base = zoo::parse_facts(facts_text(opt));
  auto conflicts = zoo::check_consistency(base);
  if (conflicts.empty()) {
    zoo::Closure c = zoo::derive_closure(base);
    out << "consistency: no conflicts (" << c.facts.size()
        << " facts closed)\n";
    return 0;
  }
  for (const auto& c : conflicts)
    out << "conflict: " << zoo::fact_text(c.positive) << "  vs  "
        << zoo::fact_text(c.negative) << "\n";
  print_derivation(out, conflicts.front().derivation, base);
  out << "consistency: " << conflicts.size() << " conflicts\n";
  return 1;
}

int cmd_zoo_classify(const std::string& text, const Options& opt,
                     std::ostream& out) {
  zoo::FactBase base = zoo::parse_facts(facts_text(opt));
  zoo::ExprPtr e = zoo::parse_expr(text);
  zoo::Classification c = zoo::classify(base, e);
  out << "classify " << zoo::render(e) << "\n";
  out << "discriminative: " << zoo::verdict_name(c.discriminative.verdict)
      << "\n";
  out << "omega_discriminative: "
      << zoo::verdict_name(c.omega_discriminative.verdict) << "\n";
  return 0;
}

int cmd_zoo_graph(const Options& opt, std::ostream& out) {
  zoo::FactBase base = zoo::parse_facts(facts_text(opt));
  out << zoo::export_graph(base);
  return 0;
}

int cmd_suite(const Options& opt, std::ostream& out) {
  register_builtin_witnesses();
  const auto& registry = witness_registry();
  std::size_t pass = 0, fail = 0, exhausted = 0;
  for (const std::string& name : suite_names()) {
    Report report = registry.at(name)(opt.suite_config());
    out << report.to_text();
    pass += report.count(CaseVerdict::Pass);
    fail += report.count(CaseVerdict::Fail);
    exhausted += report.count(CaseVerdict::BudgetExhausted);
  }
  zoo::FactBase base = zoo::parse_facts(facts_text(opt));
  auto conflicts = zoo::check_consistency(base);
  if (conflicts.empty()) {
    out << "zoo consistency: no conflicts\n";
  } else {
    for (const auto& c : conflicts)
      out << "conflict: " << zoo::fact_text(c.positive) << "  vs  "
          << zoo::fact_text(c.negative) << "\n";
  }
  out << "suite summary witnesses=" << suite_names().size()
      << " pass=" << pass << " fail=" << fail
      << " budget-exhausted=" << exhausted
      << " conflicts=" << conflicts.size() << "\n";
  return fail == 0 && conflicts.empty() ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"finite-budget reduction witnesses and a degree zoo"};
  app.name("wlab");
  Options opt;
  app.add_option("--budget", opt.budget, "interpreter step cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--depth", opt.depth, "tree depth cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--window", opt.window, "finite observation window")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", opt.seed, "instance generator seed")
      ->capture_default_str();
  app.add_option("--facts", opt.facts_path,
                 "fact file path (defaults to the embedded seed)");
  app.require_subcommand(1);

  auto* verify =
      app.add_subcommand("verify", "run one witness suite (or a family)");
  verify->fallthrough();
  std::string witness_name;
  verify->add_option("name", witness_name, "witness name")->required();

  auto* zoo_cmd = app.add_subcommand("zoo", "query the degree fact base");
  zoo_cmd->fallthrough();
  zoo_cmd->require_subcommand(1);
  auto* zq = zoo_cmd->add_subcommand("query", "answer '<rel> <expr> <expr>'");
  zq->fallthrough();
  std::string query_text;
  zq->add_option("relation", query_text, "relation and two expressions")
      ->required();
  auto* zc = zoo_cmd->add_subcommand("consistency",
                                     "search the closure for contradictions");
  zc->fallthrough();
  auto* zl = zoo_cmd->add_subcommand("classify",
                                     "discriminative and omega-discriminative");
  zl->fallthrough();
  std::string classify_text;
  zl->add_option("atom", classify_text, "expression to classify")->required();
  auto* zg = zoo_cmd->add_subcommand("graph", "export the atom order as dot");
  zg->fallthrough();

  auto* suite =
      app.add_subcommand("suite", "run every witness suite and zoo consistency");
  suite->fallthrough();

  std::vector<std::string> argv(args);
  try {
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (*verify) return cmd_verify(witness_name, opt, out, err);
    if (*zq) return cmd_zoo_query(query_text, opt, out, err);
    if (*zc) return cmd_zoo_consistency(opt, out);
    if (*zl) return cmd_zoo_classify(classify_text, opt, out);
    if (*zg) return cmd_zoo_graph(opt, out);
    if (*suite) return cmd_suite(opt, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "no command selected\n";
  return 2;
}

}  // namespace wlab::cli
