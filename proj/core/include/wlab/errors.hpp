#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A transformer could not produce the requested output within its budget.
// Reported distinctly from a verification failure.
struct BudgetExhausted : Error {
  using Error::Error;
};

// An instance violates a stated domain restriction (two live LLPO tracks,
// a tree that is not big, a measure bound that does not hold).
struct DomainViolation : Error {
  using Error::Error;
};

// An internal invariant failed (a replayed run diverged from the original).
struct ContractViolation : Error {
  using Error::Error;
};

// The finite observation window is too small for the requested construction.
struct WindowExhausted : Error {
  using Error::Error;
};

// Neither candidate bit obtained a certificate within the stage budget.
struct StageBudgetExhausted : Error {
  using Error::Error;
};

// The input names an empty set where a nonempty one is required.
struct EmptySetError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

}  // namespace wlab
