#include "wlab/witnesses.hpp"

#include <algorithm>
#include <memory>
#include <set>
#include <sstream>

#include "wlab/errors.hpp"

namespace wlab {

namespace {

Name recording(const Name& p, std::shared_ptr<std::set<nat>> log) {
  return Name([p, log](const nat& i) {
    log->insert(i);
    return p(i);
  },
              p.alphabet_bound());
}

}  // namespace

Name Transducer::lift(const std::vector<Name>& inputs,
                      std::uint64_t budget) const {
  if (inputs.size() != arity_)
    throw ContractViolation("transducer " + label_ + " expects " +
                            std::to_string(arity_) + " inputs, got " +
                            std::to_string(inputs.size()));
  return fn_(inputs, budget);
}

Transducer::Run Transducer::run(const std::vector<Name>& inputs,
                                std::size_t out_len,
                                std::uint64_t budget) const {
  std::vector<std::shared_ptr<std::set<nat>>> logs;
  std::vector<Name> wrapped;
  for (const Name& p : inputs) {
    logs.push_back(std::make_shared<std::set<nat>>());
    wrapped.push_back(recording(p, logs.back()));
  }
  Run r;
  r.output = lift(wrapped, budget).prefix(out_len);
  for (const auto& log : logs)
    r.consulted.emplace_back(log->begin(), log->end());
  return r;
}

Transducer identity_transducer() {
  return Transducer("identity", 1,
                    [](const std::vector<Name>& in, std::uint64_t) {
                      return in[0];
                    });
}

Transducer constant_transducer(std::string label, Prefix value, nat fill) {
  return Transducer(std::move(label), 1,
                    [value, fill](const std::vector<Name>&, std::uint64_t) {
                      return Name::from_prefix(value, fill);
                    });
}

bool continuity_replay(const Transducer& t, const std::vector<Name>& inputs,
                       std::size_t out_len, std::uint64_t budget) {
  Transducer::Run first = t.run(inputs, out_len, budget);
  std::vector<Name> altered;
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    Name p = inputs[j];
    auto keep = std::make_shared<std::set<nat>>(first.consulted[j].begin(),
                                                first.consulted[j].end());
    auto bound = p.alphabet_bound();
    altered.push_back(Name([p, keep, bound](const nat& i) -> nat {
      if (keep->count(i)) return p(i);
      nat v = p(i) + 1;
      if (bound) v %= *bound;
      return v + (bound ? nat(0) : nat(7));
    },
                           bound));
  }
  Transducer::Run second = t.run(altered, out_len, budget);
  return first.output == second.output;
}

bool monotone_check(const Transducer& t, const std::vector<Name>& inputs,
                    std::size_t shorter, std::size_t longer,
                    std::uint64_t budget) {
  Prefix small = t.run(inputs, shorter, budget).output;
  Prefix big = t.run(inputs, longer, budget).output;
  if (small.size() > big.size()) return false;
  return std::equal(small.begin(), small.end(), big.begin());
}

std::size_t Report::count(CaseVerdict v) const {
  std::size_t n = 0;
  for (const auto& c : cases)
    if (c.verdict == v) ++n;
  return n;
}

namespace {

const char* verdict_word(CaseVerdict v) {
  switch (v) {
    case CaseVerdict::Pass:
      return "pass";
    case CaseVerdict::Fail:
      return "fail";
    default:
      return "budget-exhausted";
  }
}

}  // namespace

std::string Report::to_text() const {
  std::ostringstream out;
  out << "witness " << witness << "\n";
  for (const auto& c : cases) {
    out << "  case " << c.label << ": " << verdict_word(c.verdict);
    if (!c.detail.empty()) out << " - " << c.detail;
    out << "\n";
  }
  out << "  summary pass=" << count(CaseVerdict::Pass)
      << " fail=" << count(CaseVerdict::Fail)
      << " budget-exhausted=" << count(CaseVerdict::BudgetExhausted) << "\n";
  return out.str();
}

namespace {

struct Registry {
  std::map<std::string, SuiteFn> all;
  std::set<std::string> diagnostics;
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

const std::map<std::string, SuiteFn>& witness_registry() {
  return registry().all;
}

void register_witness(const std::string& name, SuiteFn fn, bool in_suite) {
  registry().all[name] = std::move(fn);
  if (!in_suite) registry().diagnostics.insert(name);
}

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry().all)
    if (registry().diagnostics.count(name) == 0) names.push_back(name);
  return names;
}

}  // namespace wlab
