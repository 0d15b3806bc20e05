#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wlab/names.hpp"
#include "wlab/nat.hpp"

namespace wlab {

// Register machine with a single oracle-read instruction. Registers hold
// naturals; there are kRegisters of them, all starting at zero. Execution
// falling past the last instruction never halts.
inline constexpr std::size_t kRegisters = 64;

enum class Op : std::uint8_t {
  Halt,    // output := reg a, stop
  Oracle,  // reg a := oracle(reg b)
  LoadC,   // reg a := constant b
  Inc,     // reg a += 1
  Jz,      // if reg a == 0 jump to b
  Jmp,     // jump to a
  Dec,     // reg a -= 1 (floored at 0)
  Move,    // reg a := reg b
  Input,   // reg a := machine input
};

struct Instr {
  Op op;
  nat a;
  nat b;
  bool operator==(const Instr&) const = default;
};

// Instruction list in normal form: register fields reduced mod kRegisters,
// jump targets clamped to [0, size] (target == size spins forever), unused
// operand fields zeroed. decode_program(encode_program(p)) == p holds for
// normal forms, which the constructor establishes.
struct Program {
  Program() = default;
  explicit Program(std::vector<Instr> instrs);
  std::vector<Instr> instrs;
  bool operator==(const Program&) const = default;
};

// Bijective-style numbering: encode is injective on normal forms and decode
// is total, with a fixed repair rule for malformed codes. Codes grow
// linearly in program size (bit-packed, not nested pairing).
nat encode_program(const Program& p);
Program decode_program(const nat& code);

struct RunResult {
  bool halted = false;
  nat value = 0;  // meaningful only when halted
  nat use = 0;    // 1 + largest oracle position read (0 if none)
  std::uint64_t steps = 0;
  bool operator==(const RunResult&) const = default;
};

// Simulate for at most `budget` instruction steps. Halting is stable: a
// halted result is identical under every larger budget.
RunResult run(const Program& p, const nat& input, const Name& oracle,
              std::uint64_t budget);
RunResult run(const nat& code, const nat& input, const Name& oracle,
              std::uint64_t budget);

// The diagonal run: program n on input n.
RunResult diag_approx(const Name& p, const nat& n, std::uint64_t s);

// 1 iff the diagonal run halts within s steps; monotone in s.
nat halting_bit(const Name& p, const nat& n, std::uint64_t s);

// Code of a machine that scans tuple track i of its oracle for the first
// nonzero entry x+1 and outputs x, diverging when the track is all zeros.
// Built by prefixing one constant load onto a fixed scanner body; never
// consults any oracle itself.
nat smn_search(const nat& i);

// Re-runs a halted computation against an adversarial oracle that agrees
// with `p` only below the reported use, and checks the result is identical.
// Throws ContractViolation on mismatch (that would be a machine bug) and
// Error when the original run did not halt.
bool use_replay(const nat& code, const nat& input, const Name& p,
                std::uint64_t budget);

// Textual fixture format: one instruction per line, e.g. "LOADC r0 7",
// "JZ r2 11", "ORACLE r5 r4", "HALT r0". '#' starts a comment.
Program parse_asm(const std::string& text);
std::string print_asm(const Program& p);

}  // namespace wlab
