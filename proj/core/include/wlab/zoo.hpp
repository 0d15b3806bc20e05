#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wlab/errors.hpp"

// Degree-expression algebra over named problems, a seeded fact base, a
// fixpoint deduction engine, queries with replayable derivations, consistency
// checking, classification, and dot export.
namespace wlab::zoo {

// Relations of the fact language. The first four are atomic; eq and incomp
// forms expand into pairs of atomic facts when a base is built.
enum class Rel { leW, lesW, nleW, nlesW, eqW, eqsW, incompW, incompsW };

const char* rel_name(Rel rel);
std::optional<Rel> rel_from_token(const std::string& token);
bool is_atomic(Rel rel);
// leW <-> nleW, lesW <-> nlesW (atomic relations only).
Rel negation_of(Rel rel);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Atom, Prod, Coprod, Meet, Star, Par, FinPar, Jump, Impl };
  Kind kind = Kind::Atom;
  std::string atom;    // Kind::Atom only
  ExprPtr a, b;        // children; b empty for Par, FinPar, Jump
  unsigned jump = 0;   // Kind::Jump only, >= 1
};

ExprPtr atom(const std::string& name);
ExprPtr prod(ExprPtr a, ExprPtr b);
ExprPtr coprod(ExprPtr a, ExprPtr b);
ExprPtr meet(ExprPtr a, ExprPtr b);
ExprPtr star(ExprPtr a, ExprPtr b);
ExprPtr par(ExprPtr a);
ExprPtr finpar(ExprPtr a);
ExprPtr jump(ExprPtr a, unsigned n = 1);
ExprPtr impl(ExprPtr a, ExprPtr b);

// Canonical text form, identical to the fact-file grammar. Structural
// equality of expressions is equality of rendered text.
std::string render(const ExprPtr& e);
// Parses the grammar EXPR: NAME | prod(E,E) | coprod(E,E) | meet(E,E) |
// star(E,E) | par(E) | finpar(E) | jump(E[,n]) | impl(E,E).
ExprPtr parse_expr(const std::string& text);

struct Fact {
  Rel rel = Rel::leW;
  ExprPtr lhs, rhs;
  std::string provenance;
};

std::string fact_key(const Fact& f);
std::string fact_text(const Fact& f);

struct AtomInfo {
  bool pointed = false;
  bool cylinder = false;
};

// One deduction step: `conclusion` follows from `premises` by `rule`.
// Rule "seed" has no premises and cites the fact file through provenance.
struct Step {
  std::string rule;
  std::vector<Fact> premises;
  Fact conclusion;
};

struct Derivation {
  Fact conclusion;
  std::vector<Step> steps;  // topologically ordered, conclusion last
};

struct FactBase {
  std::map<std::string, AtomInfo> atoms;
  std::vector<Fact> facts;  // atomic relations only (expansions applied)
};

// Parses the line grammar:
//   atom <NAME> [pointed] [cylinder]
//   <rel> <EXPR> <EXPR>   # provenance
// '#' starts a comment anywhere; blank lines are skipped.
FactBase parse_facts(const std::string& text);

// The deductive closure: every derived atomic fact together with one
// justification. Facts are indexed by fact_key over canonical renderings.
struct Closure {
  std::vector<Fact> facts;                 // insertion order, seeds first
  std::map<std::string, std::size_t> index;
  std::map<std::string, Step> how;         // fact key -> producing step
  bool has(Rel rel, const ExprPtr& lhs, const ExprPtr& rhs) const;
  // Justification chain for a closure fact, seeds first, conclusion last.
  Derivation derivation(const Fact& f) const;
};

// Least fixpoint of the rule set over the seed facts. Rules never form
// expressions outside the subexpression universe of the seed plus `extras`.
Closure derive_closure(const FactBase& base,
                       const std::vector<ExprPtr>& extras = {});

enum class Verdict { Proved, Refuted, Open };
const char* verdict_name(Verdict v);

struct QueryResult {
  Verdict verdict = Verdict::Open;
  std::optional<Derivation> derivation;  // present unless Open
};

// Answers any relation, composite ones included. Proved carries a derivation
// of the fact, Refuted a derivation of a fact contradicting it.
QueryResult query(const FactBase& base, Rel rel, const ExprPtr& lhs,
                  const ExprPtr& rhs);

struct Conflict {
  Fact positive;
  Fact negative;
  Derivation derivation;  // derives both facts, negative one last
};

// Every pair {X, not X} in the closure. Empty means consistent.
std::vector<Conflict> check_consistency(const FactBase& base);

struct Classification {
  QueryResult discriminative;        // leW(C_2, e)
  QueryResult omega_discriminative;  // leW(ACC_N, e)
};

Classification classify(const FactBase& base, const ExprPtr& e);

// Dot digraph over the declared atoms. Edge X -> Y means Y reduces to X;
// solid edges carry strong reductions (transitively reduced over degree
// classes), dashed edges ordinary-only ones, dotted edges equivalences.
std::string export_graph(const FactBase& base);

// Re-checks a derivation step by step against the seed facts and the rule
// schemas; true iff every step is licensed and the conclusion is reproduced.
bool replay(const Derivation& d, const FactBase& base);

}  // namespace wlab::zoo
