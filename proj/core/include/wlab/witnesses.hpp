#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wlab/names.hpp"
#include "wlab/nat.hpp"

namespace wlab {

// A budget-aware name transformer. The wrapped function must be
// deterministic and may only depend on input positions it actually reads;
// run() records those positions so the contract can be replayed.
class Transducer {
 public:
  using Fn = std::function<Name(const std::vector<Name>&, std::uint64_t)>;

  Transducer() = default;
  Transducer(std::string label, std::size_t arity, Fn fn)
      : label_(std::move(label)), arity_(arity), fn_(std::move(fn)) {}

  const std::string& label() const { return label_; }
  std::size_t arity() const { return arity_; }

  // The lazy output name; consultation of the inputs happens per queried
  // position.
  Name lift(const std::vector<Name>& inputs, std::uint64_t budget) const;

  struct Run {
    Prefix output;
    std::vector<std::vector<nat>> consulted;  // per input, sorted unique
  };
  Run run(const std::vector<Name>& inputs, std::size_t out_len,
          std::uint64_t budget) const;

 private:
  std::string label_;
  std::size_t arity_ = 1;
  Fn fn_;
};

Transducer identity_transducer();
Transducer constant_transducer(std::string label, Prefix value, nat fill = 0);

// Reruns the transducer on inputs that agree with the originals exactly on
// the consulted positions and differ everywhere else (respecting alphabet
// bounds); true iff the output prefix is identical.
bool continuity_replay(const Transducer& t, const std::vector<Name>& inputs,
                       std::size_t out_len, std::uint64_t budget);

// True iff the output at the shorter length is a prefix of the output at
// the longer one.
bool monotone_check(const Transducer& t, const std::vector<Name>& inputs,
                    std::size_t shorter, std::size_t longer,
                    std::uint64_t budget);

enum class Strength { Strong, Ordinary };

// A reduction witness: inner maps a source instance name to a target
// instance name; outer maps a target answer (strong) or the pair
// (source input, target answer) (ordinary) to a source answer.
struct Witness {
  std::string name;
  Strength strength = Strength::Strong;
  Transducer inner;
  Transducer outer;
};

enum class CaseVerdict { Pass, Fail, BudgetExhausted };

struct CaseResult {
  std::string label;
  CaseVerdict verdict = CaseVerdict::Pass;
  std::string detail;
};

struct SuiteConfig {
  std::uint64_t budget = 10000;
  std::size_t depth = 10;
  std::size_t window = 200;
  std::uint64_t seed = 0;
};

struct Report {
  std::string witness;
  std::vector<CaseResult> cases;

  std::size_t count(CaseVerdict v) const;
  // A report fails only on Fail verdicts; exhausted budgets are counted
  // but tolerated.
  bool ok() const { return count(CaseVerdict::Fail) == 0; }
  std::string to_text() const;
};

using SuiteFn = std::function<Report(const SuiteConfig&)>;

// Named verification suites. Diagnostic entries (deliberately broken
// witnesses kept as harness self-tests) are registered but left out of
// suite_names().
const std::map<std::string, SuiteFn>& witness_registry();
void register_witness(const std::string& name, SuiteFn fn,
                      bool in_suite = true);
std::vector<std::string> suite_names();

}  // namespace wlab
