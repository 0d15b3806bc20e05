#include "wlab/zoo.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <tuple>

namespace wlab::zoo {

namespace {

ExprPtr binary(Expr::Kind k, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr unary(Expr::Kind k, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->a = std::move(a);
  return e;
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Recursive-descent parser over a single whitespace-free token.
struct ExprParser {
  const std::string& s;
  std::size_t pos = 0;
  std::size_t line;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line, what + " in expression '" + s + "'");
  }

  std::string name() {
    std::size_t start = pos;
    while (pos < s.size() && ident_char(s[pos])) ++pos;
    if (pos == start) fail("expected a name");
    return s.substr(start, pos - start);
  }

  void expect(char c) {
    if (pos >= s.size() || s[pos] != c)
      fail(std::string("expected '") + c + "'");
    ++pos;
  }

  ExprPtr expr() {
    std::string head = name();
    if (pos >= s.size() || s[pos] != '(') return atom(head);
    ++pos;
    ExprPtr first = expr();
    if (head == "par" || head == "finpar") {
      expect(')');
      return head == "par" ? par(first) : finpar(first);
    }
    if (head == "jump") {
      unsigned n = 1;
      if (pos < s.size() && s[pos] == ',') {
        ++pos;
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
          ++pos;
        if (pos == start) fail("expected a jump exponent");
        n = static_cast<unsigned>(std::stoul(s.substr(start, pos - start)));
        if (n < 1) fail("jump exponent must be at least 1");
      }
      expect(')');
      return jump(first, n);
    }
    expect(',');
    ExprPtr second = expr();
    expect(')');
    if (head == "prod") return prod(first, second);
    if (head == "coprod") return coprod(first, second);
    if (head == "meet") return meet(first, second);
    if (head == "star") return star(first, second);
    if (head == "impl") return impl(first, second);
    fail("unknown operator '" + head + "'");
  }
};

ExprPtr parse_expr_at(const std::string& text, std::size_t line) {
  ExprParser p{text, 0, line};
  ExprPtr e = p.expr();
  if (p.pos != text.size())
    throw ParseError(line, "trailing characters in expression '" + text + "'");
  return e;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

const char* rel_name(Rel rel) {
  switch (rel) {
    case Rel::leW: return "leW";
    case Rel::lesW: return "lesW";
    case Rel::nleW: return "nleW";
    case Rel::nlesW: return "nlesW";
    case Rel::eqW: return "eqW";
    case Rel::eqsW: return "eqsW";
    case Rel::incompW: return "incompW";
    case Rel::incompsW: return "incompsW";
  }
  return "?";
}

std::optional<Rel> rel_from_token(const std::string& token) {
  for (Rel r : {Rel::leW, Rel::lesW, Rel::nleW, Rel::nlesW, Rel::eqW,
                Rel::eqsW, Rel::incompW, Rel::incompsW})
    if (token == rel_name(r)) return r;
  return std::nullopt;
}

bool is_atomic(Rel rel) {
  return rel == Rel::leW || rel == Rel::lesW || rel == Rel::nleW ||
         rel == Rel::nlesW;
}

Rel negation_of(Rel rel) {
  switch (rel) {
    case Rel::leW: return Rel::nleW;
    case Rel::nleW: return Rel::leW;
    case Rel::lesW: return Rel::nlesW;
    case Rel::nlesW: return Rel::lesW;
    default: throw ContractViolation("negation_of: relation is not atomic");
  }
}

ExprPtr atom(const std::string& name) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Atom;
  e->atom = name;
  return e;
}

ExprPtr prod(ExprPtr a, ExprPtr b) { return binary(Expr::Kind::Prod, std::move(a), std::move(b)); }
ExprPtr coprod(ExprPtr a, ExprPtr b) { return binary(Expr::Kind::Coprod, std::move(a), std::move(b)); }
ExprPtr meet(ExprPtr a, ExprPtr b) { return binary(Expr::Kind::Meet, std::move(a), std::move(b)); }
ExprPtr star(ExprPtr a, ExprPtr b) { return binary(Expr::Kind::Star, std::move(a), std::move(b)); }
ExprPtr par(ExprPtr a) { return unary(Expr::Kind::Par, std::move(a)); }
ExprPtr finpar(ExprPtr a) { return unary(Expr::Kind::FinPar, std::move(a)); }

ExprPtr jump(ExprPtr a, unsigned n) {
  if (n < 1) throw ContractViolation("jump exponent must be at least 1");
  auto e = unary(Expr::Kind::Jump, std::move(a));
  const_cast<Expr*>(e.get())->jump = n;
  return e;
}

ExprPtr impl(ExprPtr a, ExprPtr b) { return binary(Expr::Kind::Impl, std::move(a), std::move(b)); }

std::string render(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Atom: return e->atom;
    case Expr::Kind::Prod: return "prod(" + render(e->a) + "," + render(e->b) + ")";
    case Expr::Kind::Coprod: return "coprod(" + render(e->a) + "," + render(e->b) + ")";
    case Expr::Kind::Meet: return "meet(" + render(e->a) + "," + render(e->b) + ")";
    case Expr::Kind::Star: return "star(" + render(e->a) + "," + render(e->b) + ")";
    case Expr::Kind::Par: return "par(" + render(e->a) + ")";
    case Expr::Kind::FinPar: return "finpar(" + render(e->a) + ")";
    case Expr::Kind::Jump:
      return "jump(" + render(e->a) + "," + std::to_string(e->jump) + ")";
    case Expr::Kind::Impl: return "impl(" + render(e->a) + "," + render(e->b) + ")";
  }
  return "?";
}

ExprPtr parse_expr(const std::string& text) { return parse_expr_at(text, 1); }

std::string fact_key(const Fact& f) {
  return std::string(rel_name(f.rel)) + " " + render(f.lhs) + " " + render(f.rhs);
}

std::string fact_text(const Fact& f) { return fact_key(f); }

FactBase parse_facts(const std::string& text) {
  FactBase base;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  auto note_atoms = [&base](const ExprPtr& e, auto&& self) -> void {
    if (e->kind == Expr::Kind::Atom) {
      base.atoms.emplace(e->atom, AtomInfo{});
      return;
    }
    self(e->a, self);
    if (e->b) self(e->b, self);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string provenance;
    std::string body = raw;
    if (auto hash = raw.find('#'); hash != std::string::npos) {
      provenance = trim(raw.substr(hash + 1));
      body = raw.substr(0, hash);
    }
    std::vector<std::string> toks = split_ws(body);
    if (toks.empty()) continue;
    if (toks[0] == "atom") {
      if (toks.size() < 2)
        throw ParseError(lineno, "expected an atom name after 'atom'");
      const std::string& name = toks[1];
      for (char c : name)
        if (!ident_char(c))
          throw ParseError(lineno, "invalid atom name '" + name + "'");
      AtomInfo& info = base.atoms[name];
      for (std::size_t i = 2; i < toks.size(); ++i) {
        if (toks[i] == "pointed") info.pointed = true;
        else if (toks[i] == "cylinder") info.cylinder = true;
        else throw ParseError(lineno, "expected 'pointed' or 'cylinder', got '" + toks[i] + "'");
      }
      continue;
    }
    auto rel = rel_from_token(toks[0]);
    if (!rel)
      throw ParseError(lineno, "expected 'atom' or a relation (leW lesW nleW nlesW eqW eqsW incompW incompsW), got '" + toks[0] + "'");
    if (toks.size() != 3)
      throw ParseError(lineno, "expected exactly two expressions after the relation");
    ExprPtr lhs = parse_expr_at(toks[1], lineno);
    ExprPtr rhs = parse_expr_at(toks[2], lineno);
    note_atoms(lhs, note_atoms);
    note_atoms(rhs, note_atoms);
    auto push = [&](Rel r, ExprPtr l, ExprPtr rr) {
      base.facts.push_back(Fact{r, std::move(l), std::move(rr), provenance});
    };
    switch (*rel) {
      case Rel::eqW: push(Rel::leW, lhs, rhs); push(Rel::leW, rhs, lhs); break;
      case Rel::eqsW: push(Rel::lesW, lhs, rhs); push(Rel::lesW, rhs, lhs); break;
      case Rel::incompW: push(Rel::nleW, lhs, rhs); push(Rel::nleW, rhs, lhs); break;
      case Rel::incompsW: push(Rel::nlesW, lhs, rhs); push(Rel::nlesW, rhs, lhs); break;
      default: push(*rel, lhs, rhs); break;
    }
  }
  return base;
}

namespace {

// Fixpoint engine over the interned subexpression universe.
struct Engine {
  const FactBase& base;

  std::vector<ExprPtr> exprs;
  std::map<std::string, int> eid;
  std::vector<int> par_of, finpar_of, jump1_of, prod_of_key, dummy;
  // For pair lookups: prod/star/coprod/meet/impl by (a,b).
  std::map<std::pair<int, int>, int> prods, stars, coprods, meets, impls;

  struct Rec { Rel rel; int l, r; };
  std::vector<Rec> facts;
  std::map<std::tuple<int, int, int>, int> fidx;
  struct Just { std::string rule; std::vector<int> prem; std::string prov; };
  std::vector<Just> just;
  bool changed = false;

  explicit Engine(const FactBase& b) : base(b) {}

  int intern(const ExprPtr& e) {
    std::string key = render(e);
    if (auto it = eid.find(key); it != eid.end()) return it->second;
    int a = e->a ? intern(e->a) : -1;
    int b = e->b ? intern(e->b) : -1;
    int id = static_cast<int>(exprs.size());
    eid.emplace(key, id);
    exprs.push_back(e);
    par_of.resize(exprs.size(), -1);
    finpar_of.resize(exprs.size(), -1);
    jump1_of.resize(exprs.size(), -1);
    switch (e->kind) {
      case Expr::Kind::Par: par_of[a] = id; break;
      case Expr::Kind::FinPar: finpar_of[a] = id; break;
      case Expr::Kind::Jump: if (e->jump == 1) jump1_of[a] = id; break;
      case Expr::Kind::Prod: prods[{a, b}] = id; break;
      case Expr::Kind::Star: stars[{a, b}] = id; break;
      case Expr::Kind::Coprod: coprods[{a, b}] = id; break;
      case Expr::Kind::Meet: meets[{a, b}] = id; break;
      case Expr::Kind::Impl: impls[{a, b}] = id; break;
      case Expr::Kind::Atom: break;
    }
    return id;
  }

  int child_a(int i) const { return eid.at(render(exprs[i]->a)); }
  int child_b(int i) const { return eid.at(render(exprs[i]->b)); }

  bool add(Rel rel, int l, int r, const char* rule, std::vector<int> prem,
           std::string prov = "") {
    auto key = std::make_tuple(static_cast<int>(rel), l, r);
    if (fidx.count(key)) return false;
    fidx.emplace(key, static_cast<int>(facts.size()));
    facts.push_back(Rec{rel, l, r});
    just.push_back(Just{rule, std::move(prem), std::move(prov)});
    changed = true;
    return true;
  }

  int find(Rel rel, int l, int r) const {
    auto it = fidx.find(std::make_tuple(static_cast<int>(rel), l, r));
    return it == fidx.end() ? -1 : it->second;
  }

  void pass() {
    const int n = static_cast<int>(exprs.size());
    // R1 reflexivity.
    for (int i = 0; i < n; ++i) {
      add(Rel::leW, i, i, "R1-refl", {});
      add(Rel::lesW, i, i, "R1-refl", {});
    }
    // Snapshot-driven scans; additions are picked up by the next pass.
    const int m = static_cast<int>(facts.size());
    // Group positive facts by lhs and rhs for the binary rules.
    for (Rel rel : {Rel::leW, Rel::lesW}) {
      std::map<int, std::vector<std::pair<int, int>>> out;  // l -> (r, idx)
      for (int i = 0; i < m; ++i)
        if (facts[i].rel == rel) out[facts[i].l].push_back({facts[i].r, i});
      // R1 transitivity.
      for (int i = 0; i < m; ++i) {
        if (facts[i].rel != rel) continue;
        auto it = out.find(facts[i].r);
        if (it == out.end()) continue;
        for (auto [c, j] : it->second)
          add(rel, facts[i].l, c, "R1-trans", {i, j});
      }
      // R3 contrapositives of transitivity.
      Rel neg = rel == Rel::leW ? Rel::nleW : Rel::nlesW;
      const char* ra = rel == Rel::leW ? "R3a" : "R3a-s";
      const char* rb = rel == Rel::leW ? "R3b" : "R3b-s";
      for (int i = 0; i < m; ++i) {
        if (facts[i].rel != neg) continue;
        const int a = facts[i].l, c = facts[i].r;
        for (int j = 0; j < m; ++j) {
          if (facts[j].rel != rel) continue;
          if (facts[j].l == a) add(neg, facts[j].r, c, ra, {i, j});
          if (facts[j].r == c) add(neg, a, facts[j].l, rb, {i, j});
        }
      }
    }
    for (int i = 0; i < m; ++i) {
      const Rec f = facts[i];
      // R2 strong implies ordinary.
      if (f.rel == Rel::lesW) add(Rel::leW, f.l, f.r, "R2", {i});
      // R4 jump is monotone for the strong order.
      if (f.rel == Rel::lesW && jump1_of[f.l] >= 0 && jump1_of[f.r] >= 0)
        add(Rel::lesW, jump1_of[f.l], jump1_of[f.r], "R4", {i});
      // R7 par and finpar are monotone.
      if (f.rel == Rel::leW) {
        if (par_of[f.l] >= 0 && par_of[f.r] >= 0)
          add(Rel::leW, par_of[f.l], par_of[f.r], "R7-mono", {i});
        if (finpar_of[f.l] >= 0 && finpar_of[f.r] >= 0)
          add(Rel::leW, finpar_of[f.l], finpar_of[f.r], "R7-mono", {i});
      }
      // R11 into a cylinder the orders coincide.
      if (f.rel == Rel::leW) {
        const Expr& rhs = *exprs[f.r];
        if (rhs.kind == Expr::Kind::Atom) {
          auto it = base.atoms.find(rhs.atom);
          if (it != base.atoms.end() && it->second.cylinder)
            add(Rel::lesW, f.l, f.r, "R11", {i});
        }
      }
    }
    // Expression-driven rules.
    for (int i = 0; i < n; ++i) {
      const Expr& e = *exprs[i];
      switch (e.kind) {
        case Expr::Kind::Meet: {
          const int x = child_a(i), y = child_b(i);
          add(Rel::leW, i, x, "R5-lb", {});
          add(Rel::leW, i, y, "R5-lb", {});
          add(Rel::lesW, i, x, "R5-lb", {});
          add(Rel::lesW, i, y, "R5-lb", {});
          for (Rel rel : {Rel::leW, Rel::lesW})
            for (int c = 0; c < n; ++c) {
              int f1 = find(rel, c, x), f2 = find(rel, c, y);
              if (f1 >= 0 && f2 >= 0) add(rel, c, i, "R5-glb", {f1, f2});
            }
          break;
        }
        case Expr::Kind::Coprod: {
          const int x = child_a(i), y = child_b(i);
          add(Rel::leW, x, i, "R6-ub", {});
          add(Rel::leW, y, i, "R6-ub", {});
          for (int d = 0; d < n; ++d) {
            int f1 = find(Rel::leW, x, d), f2 = find(Rel::leW, y, d);
            if (f1 >= 0 && f2 >= 0) add(Rel::leW, i, d, "R6-lub", {f1, f2});
          }
          // R10 pointed coproduct reduces strongly to the product.
          const Expr& ax = *exprs[x];
          const Expr& ay = *exprs[y];
          if (ax.kind == Expr::Kind::Atom && ay.kind == Expr::Kind::Atom) {
            auto ix = base.atoms.find(ax.atom);
            auto iy = base.atoms.find(ay.atom);
            auto ip = prods.find({x, y});
            if (ix != base.atoms.end() && ix->second.pointed &&
                iy != base.atoms.end() && iy->second.pointed &&
                ip != prods.end())
              add(Rel::lesW, i, ip->second, "R10", {});
          }
          break;
        }
        case Expr::Kind::Par:
        case Expr::Kind::FinPar: {
          const int x = child_a(i);
          add(Rel::leW, x, i, "R7-inc", {});
          const auto& table = e.kind == Expr::Kind::Par ? par_of : finpar_of;
          if (table[i] >= 0) add(Rel::leW, table[i], i, "R7-idem", {});
          break;
        }
        case Expr::Kind::Star: {
          const int x = child_a(i), y = child_b(i);
          if (auto ip = prods.find({x, y}); ip != prods.end())
            add(Rel::leW, ip->second, i, "R8", {});
          // R9 the implication is a witness for the compositional residual.
          const Expr& rhs = *exprs[y];
          if (rhs.kind == Expr::Kind::Impl && render(rhs.a) == render(exprs[x]))
            add(Rel::leW, eid.at(render(rhs.b)), i, "R9-intro", {});
          break;
        }
        case Expr::Kind::Impl: {
          const int x = child_a(i), y = child_b(i);
          for (const auto& [key, st] : stars) {
            if (key.first != x) continue;
            int f = find(Rel::leW, y, st);
            if (f >= 0) add(Rel::leW, i, key.second, "R9-min", {f});
          }
          break;
        }
        default: break;
      }
    }
  }

  void run(const std::vector<ExprPtr>& extras) {
    for (const auto& [name, info] : base.atoms) {
      (void)info;
      intern(atom(name));
    }
    std::vector<std::tuple<Rel, int, int, std::string>> seeds;
    for (const Fact& f : base.facts) {
      int l = intern(f.lhs), r = intern(f.rhs);
      seeds.emplace_back(f.rel, l, r, f.provenance);
    }
    for (const ExprPtr& e : extras) intern(e);
    for (auto& [rel, l, r, prov] : seeds) add(rel, l, r, "seed", {}, prov);
    do {
      changed = false;
      pass();
    } while (changed);
  }

  Closure finish() const {
    Closure c;
    for (std::size_t i = 0; i < facts.size(); ++i) {
      Fact f{facts[i].rel, exprs[facts[i].l], exprs[facts[i].r], just[i].prov};
      std::string key = fact_key(f);
      Step s;
      s.rule = just[i].rule;
      for (int p : s.rule == "seed" ? std::vector<int>{} : just[i].prem)
        s.premises.push_back(Fact{facts[p].rel, exprs[facts[p].l],
                                  exprs[facts[p].r], just[p].prov});
      s.conclusion = f;
      c.index.emplace(key, c.facts.size());
      c.facts.push_back(f);
      c.how.emplace(key, std::move(s));
    }
    return c;
  }
};

void collect_steps(const Closure& c, const Fact& f,
                   std::set<std::string>& seen, std::vector<Step>& out) {
  std::string key = fact_key(f);
  if (seen.count(key)) return;
  seen.insert(key);
  const Step& s = c.how.at(key);
  for (const Fact& p : s.premises) collect_steps(c, p, seen, out);
  out.push_back(s);
}

Derivation derive_fact(const Closure& c, const Fact& f) {
  Derivation d;
  d.conclusion = f;
  std::set<std::string> seen;
  collect_steps(c, f, seen, d.steps);
  return d;
}

Derivation merge_derivations(const Closure& c, const std::vector<Fact>& facts,
                             const Step& final_step) {
  Derivation d;
  std::set<std::string> seen;
  for (const Fact& f : facts) collect_steps(c, f, seen, d.steps);
  d.steps.push_back(final_step);
  d.conclusion = final_step.conclusion;
  return d;
}

}  // namespace

bool Closure::has(Rel rel, const ExprPtr& lhs, const ExprPtr& rhs) const {
  return index.count(fact_key(Fact{rel, lhs, rhs, ""})) != 0;
}

Derivation Closure::derivation(const Fact& f) const {
  if (!index.count(fact_key(f)))
    throw ContractViolation("derivation requested for a fact outside the closure: " + fact_key(f));
  return derive_fact(*this, f);
}

Closure derive_closure(const FactBase& base, const std::vector<ExprPtr>& extras) {
  Engine eng(base);
  eng.run(extras);
  return eng.finish();
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Proved: return "Proved";
    case Verdict::Refuted: return "Refuted";
    case Verdict::Open: return "Open";
  }
  return "?";
}

QueryResult query(const FactBase& base, Rel rel, const ExprPtr& lhs,
                  const ExprPtr& rhs) {
  Closure c = derive_closure(base, {lhs, rhs});
  QueryResult out;
  auto proved = [&](const Fact& f) {
    out.verdict = Verdict::Proved;
    out.derivation = c.derivation(f);
  };
  auto refuted = [&](const Fact& f) {
    out.verdict = Verdict::Refuted;
    out.derivation = c.derivation(f);
  };
  if (is_atomic(rel)) {
    Fact want{rel, lhs, rhs, ""};
    Fact anti{negation_of(rel), lhs, rhs, ""};
    if (c.has(want.rel, lhs, rhs)) proved(want);
    else if (c.has(anti.rel, lhs, rhs)) refuted(anti);
    return out;
  }
  const bool strong = rel == Rel::eqsW || rel == Rel::incompsW;
  const Rel pos = strong ? Rel::lesW : Rel::leW;
  const Rel neg = strong ? Rel::nlesW : Rel::nleW;
  const bool eq = rel == Rel::eqW || rel == Rel::eqsW;
  const Rel fwd_rel = eq ? pos : neg;
  const Rel blocker = eq ? neg : pos;
  Fact fwd{fwd_rel, lhs, rhs, ""};
  Fact bwd{fwd_rel, rhs, lhs, ""};
  if (c.has(fwd.rel, lhs, rhs) && c.has(bwd.rel, rhs, lhs)) {
    Step final_step{eq ? "eq-intro" : "incomp-intro", {fwd, bwd},
                    Fact{rel, lhs, rhs, ""}};
    out.verdict = Verdict::Proved;
    out.derivation = merge_derivations(c, {fwd, bwd}, final_step);
    return out;
  }
  for (const Fact& f : {Fact{blocker, lhs, rhs, ""}, Fact{blocker, rhs, lhs, ""}})
    if (c.has(f.rel, f.lhs, f.rhs)) {
      refuted(f);
      return out;
    }
  return out;
}

std::vector<Conflict> check_consistency(const FactBase& base) {
  Closure c = derive_closure(base);
  std::vector<Conflict> out;
  for (const Fact& f : c.facts) {
    if (f.rel != Rel::leW && f.rel != Rel::lesW) continue;
    Fact anti{negation_of(f.rel), f.lhs, f.rhs, ""};
    auto it = c.index.find(fact_key(anti));
    if (it == c.index.end()) continue;
    const Fact& neg = c.facts[it->second];
    Derivation d;
    std::set<std::string> seen;
    collect_steps(c, f, seen, d.steps);
    collect_steps(c, neg, seen, d.steps);
    d.conclusion = neg;
    out.push_back(Conflict{f, neg, std::move(d)});
  }
  return out;
}

Classification classify(const FactBase& base, const ExprPtr& e) {
  if (!base.atoms.count("C_2") || !base.atoms.count("ACC_N"))
    throw ContractViolation("classify requires the atoms C_2 and ACC_N");
  Classification out;
  out.discriminative = query(base, Rel::leW, atom("C_2"), e);
  out.omega_discriminative = query(base, Rel::leW, atom("ACC_N"), e);
  return out;
}

std::string export_graph(const FactBase& base) {
  Closure c = derive_closure(base);
  std::vector<std::string> names;
  for (const auto& [name, info] : base.atoms) {
    (void)info;
    names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  auto leq = [&](const std::string& x, const std::string& y) {
    return c.has(Rel::leW, atom(x), atom(y));
  };
  auto sleq = [&](const std::string& x, const std::string& y) {
    return c.has(Rel::lesW, atom(x), atom(y));
  };
  // Degree classes: atoms mutually reducible in the ordinary sense.
  std::map<std::string, std::string> rep;
  std::map<std::string, std::vector<std::string>> members;
  for (const std::string& n : names) {
    std::string r = n;
    for (const std::string& m : names)
      if (m < r && leq(n, m) && leq(m, n)) r = m;
    rep[n] = r;
    members[r].push_back(n);
  }
  std::vector<std::string> reps;
  for (const auto& [r, ms] : members) {
    (void)ms;
    reps.push_back(r);
  }
  auto edge = [&](const std::string& x, const std::string& y) {
    // Dot edge x -> y states that y reduces to x.
    return x != y && leq(y, x);
  };
  std::ostringstream dot;
  dot << "digraph zoo {\n";
  dot << "  node [shape=box];\n";
  for (const std::string& n : names) dot << "  \"" << n << "\";\n";
  dot << "  // edge X -> Y: Y reduces to X; solid strong, dashed ordinary, dotted equivalent\n";
  std::vector<std::string> solid, dashed, dotted;
  for (const std::string& x : reps)
    for (const std::string& y : reps) {
      if (!edge(x, y)) continue;
      bool redundant = false;
      for (const std::string& z : reps)
        if (z != x && z != y && edge(x, z) && edge(z, y)) {
          redundant = true;
          break;
        }
      if (redundant) continue;
      std::string line = "  \"" + x + "\" -> \"" + y + "\"";
      if (sleq(y, x)) solid.push_back(line + ";\n");
      else dashed.push_back(line + " [style=dashed];\n");
    }
  for (const auto& [r, ms] : members)
    for (std::size_t i = 0; i + 1 < ms.size(); ++i)
      dotted.push_back("  \"" + ms[i] + "\" -> \"" + ms[i + 1] +
                       "\" [style=dotted, arrowhead=none];\n");
  std::sort(solid.begin(), solid.end());
  std::sort(dashed.begin(), dashed.end());
  std::sort(dotted.begin(), dotted.end());
  for (const std::string& s : solid) dot << s;
  for (const std::string& s : dashed) dot << s;
  for (const std::string& s : dotted) dot << s;
  dot << "}\n";
  return dot.str();
}

namespace {

bool same(const ExprPtr& a, const ExprPtr& b) { return render(a) == render(b); }

bool check_step(const Step& s, const FactBase& base) {
  const Fact& c = s.conclusion;
  const auto& ps = s.premises;
  auto prem = [&](std::size_t i) -> const Fact& { return ps[i]; };
  if (s.rule == "seed") {
    if (!ps.empty()) return false;
    for (const Fact& f : base.facts)
      if (fact_key(f) == fact_key(c)) return true;
    return false;
  }
  if (s.rule == "R1-refl")
    return ps.empty() && (c.rel == Rel::leW || c.rel == Rel::lesW) &&
           same(c.lhs, c.rhs);
  if (s.rule == "R1-trans")
    return ps.size() == 2 && (c.rel == Rel::leW || c.rel == Rel::lesW) &&
           prem(0).rel == c.rel && prem(1).rel == c.rel &&
           same(prem(0).rhs, prem(1).lhs) && same(prem(0).lhs, c.lhs) &&
           same(prem(1).rhs, c.rhs);
  if (s.rule == "R2")
    return ps.size() == 1 && prem(0).rel == Rel::lesW && c.rel == Rel::leW &&
           same(prem(0).lhs, c.lhs) && same(prem(0).rhs, c.rhs);
  if (s.rule == "R3a" || s.rule == "R3a-s") {
    const bool strong = s.rule == "R3a-s";
    const Rel neg = strong ? Rel::nlesW : Rel::nleW;
    const Rel pos = strong ? Rel::lesW : Rel::leW;
    // nleW(A,C) and leW(A,B) give nleW(B,C).
    return ps.size() == 2 && prem(0).rel == neg && prem(1).rel == pos &&
           c.rel == neg && same(prem(0).lhs, prem(1).lhs) &&
           same(prem(1).rhs, c.lhs) && same(prem(0).rhs, c.rhs);
  }
  if (s.rule == "R3b" || s.rule == "R3b-s") {
    const bool strong = s.rule == "R3b-s";
    const Rel neg = strong ? Rel::nlesW : Rel::nleW;
    const Rel pos = strong ? Rel::lesW : Rel::leW;
    // nleW(A,C) and leW(B,C) give nleW(A,B).
    return ps.size() == 2 && prem(0).rel == neg && prem(1).rel == pos &&
           c.rel == neg && same(prem(0).rhs, prem(1).rhs) &&
           same(prem(0).lhs, c.lhs) && same(prem(1).lhs, c.rhs);
  }
  if (s.rule == "R4")
    return ps.size() == 1 && prem(0).rel == Rel::lesW && c.rel == Rel::lesW &&
           c.lhs->kind == Expr::Kind::Jump && c.lhs->jump == 1 &&
           c.rhs->kind == Expr::Kind::Jump && c.rhs->jump == 1 &&
           same(c.lhs->a, prem(0).lhs) && same(c.rhs->a, prem(0).rhs);
  if (s.rule == "R5-lb")
    return ps.empty() && (c.rel == Rel::leW || c.rel == Rel::lesW) &&
           c.lhs->kind == Expr::Kind::Meet &&
           (same(c.lhs->a, c.rhs) || same(c.lhs->b, c.rhs));
  if (s.rule == "R5-glb")
    return ps.size() == 2 && (c.rel == Rel::leW || c.rel == Rel::lesW) &&
           prem(0).rel == c.rel && prem(1).rel == c.rel &&
           c.rhs->kind == Expr::Kind::Meet &&
           same(prem(0).lhs, c.lhs) && same(prem(1).lhs, c.lhs) &&
           same(prem(0).rhs, c.rhs->a) && same(prem(1).rhs, c.rhs->b);
  if (s.rule == "R6-ub")
    return ps.empty() && c.rel == Rel::leW &&
           c.rhs->kind == Expr::Kind::Coprod &&
           (same(c.rhs->a, c.lhs) || same(c.rhs->b, c.lhs));
  if (s.rule == "R6-lub")
    return ps.size() == 2 && c.rel == Rel::leW &&
           prem(0).rel == Rel::leW && prem(1).rel == Rel::leW &&
           c.lhs->kind == Expr::Kind::Coprod &&
           same(prem(0).lhs, c.lhs->a) && same(prem(1).lhs, c.lhs->b) &&
           same(prem(0).rhs, c.rhs) && same(prem(1).rhs, c.rhs);
  if (s.rule == "R7-inc")
    return ps.empty() && c.rel == Rel::leW &&
           (c.rhs->kind == Expr::Kind::Par || c.rhs->kind == Expr::Kind::FinPar) &&
           same(c.rhs->a, c.lhs);
  if (s.rule == "R7-mono")
    return ps.size() == 1 && c.rel == Rel::leW && prem(0).rel == Rel::leW &&
           c.lhs->kind == c.rhs->kind &&
           (c.lhs->kind == Expr::Kind::Par || c.lhs->kind == Expr::Kind::FinPar) &&
           same(c.lhs->a, prem(0).lhs) && same(c.rhs->a, prem(0).rhs);
  if (s.rule == "R7-idem")
    return ps.empty() && c.rel == Rel::leW &&
           (c.rhs->kind == Expr::Kind::Par || c.rhs->kind == Expr::Kind::FinPar) &&
           c.lhs->kind == c.rhs->kind && same(c.lhs->a, c.rhs);
  if (s.rule == "R8")
    return ps.empty() && c.rel == Rel::leW &&
           c.lhs->kind == Expr::Kind::Prod && c.rhs->kind == Expr::Kind::Star &&
           same(c.lhs->a, c.rhs->a) && same(c.lhs->b, c.rhs->b);
  if (s.rule == "R9-intro")
    return ps.empty() && c.rel == Rel::leW &&
           c.rhs->kind == Expr::Kind::Star &&
           c.rhs->b->kind == Expr::Kind::Impl &&
           same(c.rhs->b->a, c.rhs->a) && same(c.rhs->b->b, c.lhs);
  if (s.rule == "R9-min")
    return ps.size() == 1 && c.rel == Rel::leW && prem(0).rel == Rel::leW &&
           c.lhs->kind == Expr::Kind::Impl &&
           prem(0).rhs->kind == Expr::Kind::Star &&
           same(prem(0).rhs->a, c.lhs->a) && same(prem(0).lhs, c.lhs->b) &&
           same(prem(0).rhs->b, c.rhs);
  if (s.rule == "R10") {
    if (!ps.empty() || c.rel != Rel::lesW) return false;
    if (c.lhs->kind != Expr::Kind::Coprod || c.rhs->kind != Expr::Kind::Prod)
      return false;
    if (!same(c.lhs->a, c.rhs->a) || !same(c.lhs->b, c.rhs->b)) return false;
    for (const ExprPtr& side : {c.lhs->a, c.lhs->b}) {
      if (side->kind != Expr::Kind::Atom) return false;
      auto it = base.atoms.find(side->atom);
      if (it == base.atoms.end() || !it->second.pointed) return false;
    }
    return true;
  }
  if (s.rule == "R11") {
    if (ps.size() != 1 || c.rel != Rel::lesW || prem(0).rel != Rel::leW)
      return false;
    if (!same(prem(0).lhs, c.lhs) || !same(prem(0).rhs, c.rhs)) return false;
    if (c.rhs->kind != Expr::Kind::Atom) return false;
    auto it = base.atoms.find(c.rhs->atom);
    return it != base.atoms.end() && it->second.cylinder;
  }
  if (s.rule == "eq-intro") {
    const bool strong = c.rel == Rel::eqsW;
    if (c.rel != Rel::eqW && c.rel != Rel::eqsW) return false;
    const Rel pos = strong ? Rel::lesW : Rel::leW;
    return ps.size() == 2 && prem(0).rel == pos && prem(1).rel == pos &&
           same(prem(0).lhs, c.lhs) && same(prem(0).rhs, c.rhs) &&
           same(prem(1).lhs, c.rhs) && same(prem(1).rhs, c.lhs);
  }
  if (s.rule == "incomp-intro") {
    const bool strong = c.rel == Rel::incompsW;
    if (c.rel != Rel::incompW && c.rel != Rel::incompsW) return false;
    const Rel neg = strong ? Rel::nlesW : Rel::nleW;
    return ps.size() == 2 && prem(0).rel == neg && prem(1).rel == neg &&
           same(prem(0).lhs, c.lhs) && same(prem(0).rhs, c.rhs) &&
           same(prem(1).lhs, c.rhs) && same(prem(1).rhs, c.lhs);
  }
  return false;
}

}  // namespace

bool replay(const Derivation& d, const FactBase& base) {
  std::set<std::string> have;
  for (const Step& s : d.steps) {
    for (const Fact& p : s.premises)
      if (!have.count(fact_key(p))) return false;
    if (!check_step(s, base)) return false;
    have.insert(fact_key(s.conclusion));
  }
  return have.count(fact_key(d.conclusion)) != 0;
}

}  // namespace wlab::zoo
