#include "wlab/machine.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "wlab/errors.hpp"

namespace wlab {

namespace {

std::size_t small(const nat& x) { return x.convert_to<std::size_t>(); }

// Self-delimiting field coder. A natural x is written as the binary digits
// of x+1 without their leading 1, each digit b sent as the bit pair (1, b),
// then a single 0 terminator.
void put_field(std::vector<bool>& bits, const nat& x) {
  nat v = x + 1;
  std::vector<bool> payload;
  while (v > 1) {
    payload.push_back((v & 1) != 0);
    v >>= 1;
  }
  for (auto it = payload.rbegin(); it != payload.rend(); ++it) {
    bits.push_back(true);
    bits.push_back(*it);
  }
  bits.push_back(false);
}

// Total inverse: a missing payload bit reads as 0 and a missing terminator
// ends the field, so truncated streams still decode.
nat take_field(const std::vector<bool>& bits, std::size_t& pos) {
  nat v = 1;
  while (pos < bits.size()) {
    if (!bits[pos]) {
      ++pos;
      break;
    }
    ++pos;
    bool digit = pos < bits.size() && bits[pos];
    if (pos < bits.size()) ++pos;
    v = (v << 1) | static_cast<int>(digit);
  }
  return v - 1;
}

nat bits_to_nat(const std::vector<bool>& bits) {
  nat acc = 1;
  for (bool b : bits) acc = (acc << 1) | static_cast<int>(b);
  return acc - 1;
}

std::vector<bool> nat_to_bits(const nat& n) {
  nat v = n + 1;
  std::vector<bool> rev;
  while (v > 1) {
    rev.push_back((v & 1) != 0);
    v >>= 1;
  }
  return {rev.rbegin(), rev.rend()};
}

constexpr std::array<const char*, 9> kMnemonics = {
    "HALT", "ORACLE", "LOADC", "INC", "JZ", "JMP", "DEC", "MOVE", "INPUT"};

}  // namespace

Program::Program(std::vector<Instr> list) : instrs(std::move(list)) {
  nat len = instrs.size();
  // Field meanings differ per opcode, so normalize per opcode.
  for (Instr& ins : instrs) {
    switch (ins.op) {
      case Op::Jmp:
        if (ins.a > len) ins.a = len;
        ins.b = 0;
        break;
      case Op::Jz:
        ins.a %= static_cast<unsigned>(kRegisters);
        if (ins.b > len) ins.b = len;
        break;
      case Op::LoadC:
        ins.a %= static_cast<unsigned>(kRegisters);
        break;
      case Op::Oracle:
      case Op::Move:
        ins.a %= static_cast<unsigned>(kRegisters);
        ins.b %= static_cast<unsigned>(kRegisters);
        break;
      case Op::Inc:
      case Op::Dec:
      case Op::Input:
      case Op::Halt:
        ins.a %= static_cast<unsigned>(kRegisters);
        ins.b = 0;
        break;
    }
  }
}

nat encode_program(const Program& p) {
  std::vector<bool> bits;
  for (const Instr& ins : p.instrs) {
    put_field(bits, nat(static_cast<unsigned>(ins.op)));
    put_field(bits, ins.a);
    put_field(bits, ins.b);
  }
  return bits_to_nat(bits);
}

Program decode_program(const nat& code) {
  std::vector<bool> bits = nat_to_bits(code);
  std::vector<Instr> instrs;
  std::size_t pos = 0;
  while (pos < bits.size()) {
    nat op = take_field(bits, pos);
    nat a = take_field(bits, pos);
    nat b = take_field(bits, pos);
    instrs.push_back(
        Instr{static_cast<Op>(small(op % 9)), std::move(a), std::move(b)});
  }
  return Program(std::move(instrs));
}

RunResult run(const Program& p, const nat& input, const Name& oracle,
              std::uint64_t budget) {
  std::vector<nat> reg(kRegisters);
  nat use = 0;
  const std::size_t len = p.instrs.size();
  std::size_t pc = 0;
  for (std::uint64_t steps = 1; steps <= budget; ++steps) {
    if (pc >= len) break;
    const Instr& ins = p.instrs[pc];
    switch (ins.op) {
      case Op::Halt:
        return RunResult{true, reg[small(ins.a)], use, steps};
      case Op::Oracle: {
        const nat& idx = reg[small(ins.b)];
        if (idx + 1 > use) use = idx + 1;
        reg[small(ins.a)] = oracle(idx);
        ++pc;
        break;
      }
      case Op::LoadC:
        reg[small(ins.a)] = ins.b;
        ++pc;
        break;
      case Op::Inc:
        ++reg[small(ins.a)];
        ++pc;
        break;
      case Op::Jz:
        pc = (reg[small(ins.a)] == 0) ? small(ins.b) : pc + 1;
        break;
      case Op::Jmp:
        pc = small(ins.a);
        break;
      case Op::Dec: {
        nat& r = reg[small(ins.a)];
        if (r > 0) --r;
        ++pc;
        break;
      }
      case Op::Move:
        reg[small(ins.a)] = reg[small(ins.b)];
        ++pc;
        break;
      case Op::Input:
        reg[small(ins.a)] = input;
        ++pc;
        break;
    }
  }
  return RunResult{false, 0, use, budget};
}

RunResult run(const nat& code, const nat& input, const Name& oracle,
              std::uint64_t budget) {
  return run(decode_program(code), input, oracle, budget);
}

RunResult diag_approx(const Name& p, const nat& n, std::uint64_t s) {
  return run(n, n, p, s);
}

nat halting_bit(const Name& p, const nat& n, std::uint64_t s) {
  return diag_approx(p, n, s).halted ? 1 : 0;
}

nat smn_search(const nat& i) {
  // Scans oracle positions cantor_pair(i, j) for j = 0, 1, 2, ... keeping
  // pos = triangle(i + j) + j incrementally: pos advances by (i + j) + 2
  // per round. Registers: r0 = i, r1 = s = i + j, r2/r3 = scratch
  // counters, r4 = pos, r5 = last value read.
  std::vector<Instr> body = {
      {Op::LoadC, 0, i},    //  0: the prefixed parameter load
      {Op::Move, 1, 0},     //  1: s := i
      {Op::Move, 2, 0},     //  2: c := i
      {Op::Jz, 2, 11},      //  3: triangle init: pos += c for c = i..1
      {Op::Move, 3, 2},     //  4
      {Op::Jz, 3, 9},       //  5
      {Op::Inc, 4, 0},      //  6
      {Op::Dec, 3, 0},      //  7
      {Op::Jmp, 5, 0},      //  8
      {Op::Dec, 2, 0},      //  9
      {Op::Jmp, 3, 0},      // 10
      {Op::Oracle, 5, 4},   // 11: scan loop head
      {Op::Jz, 5, 15},      // 12
      {Op::Dec, 5, 0},      // 13
      {Op::Halt, 5, 0},     // 14: found x+1, output x
      {Op::Move, 3, 1},     // 15: pos += s
      {Op::Jz, 3, 20},      // 16
      {Op::Inc, 4, 0},      // 17
      {Op::Dec, 3, 0},      // 18
      {Op::Jmp, 16, 0},     // 19
      {Op::Inc, 4, 0},      // 20: pos += 2
      {Op::Inc, 4, 0},      // 21
      {Op::Inc, 1, 0},      // 22: s += 1
      {Op::Jmp, 11, 0},     // 23
  };
  return encode_program(Program(std::move(body)));
}

bool use_replay(const nat& code, const nat& input, const Name& p,
                std::uint64_t budget) {
  Program prog = decode_program(code);
  RunResult first = run(prog, input, p, budget);
  if (!first.halted) throw Error("use_replay requires a halted run");
  // Adversary: agrees below the use, differs everywhere from it on.
  nat use = first.use;
  Name adversary([p, use](const nat& idx) {
    return idx < use ? p(idx) : p(idx) + 1;
  });
  RunResult again = run(prog, input, adversary, budget);
  if (!(again == first))
    throw ContractViolation("replayed run diverged from the original");
  return true;
}

Program parse_asm(const std::string& text) {
  std::istringstream in(text);
  std::vector<Instr> instrs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string mnem;
    if (!(ls >> mnem)) continue;
    int op = -1;
    for (std::size_t k = 0; k < kMnemonics.size(); ++k)
      if (mnem == kMnemonics[k]) op = static_cast<int>(k);
    if (op < 0) throw ParseError(lineno, "unknown mnemonic '" + mnem + "'");
    auto operand = [&](bool reg) -> nat {
      std::string tok;
      if (!(ls >> tok)) throw ParseError(lineno, "missing operand");
      if (reg) {
        if (tok.empty() || tok[0] != 'r')
          throw ParseError(lineno, "expected register, got '" + tok + "'");
        tok.erase(0, 1);
      }
      try {
        return nat(tok);
      } catch (const std::exception&) {
        throw ParseError(lineno, "bad operand '" + tok + "'");
      }
    };
    Instr ins{static_cast<Op>(op), 0, 0};
    switch (ins.op) {
      case Op::Halt:
      case Op::Inc:
      case Op::Dec:
      case Op::Input:
        ins.a = operand(true);
        break;
      case Op::Jmp:
        ins.a = operand(false);
        break;
      case Op::LoadC:
        ins.a = operand(true);
        ins.b = operand(false);
        break;
      case Op::Jz:
        ins.a = operand(true);
        ins.b = operand(false);
        break;
      case Op::Oracle:
      case Op::Move:
        ins.a = operand(true);
        ins.b = operand(true);
        break;
    }
    std::string extra;
    if (ls >> extra) throw ParseError(lineno, "trailing token '" + extra + "'");
    instrs.push_back(std::move(ins));
  }
  return Program(std::move(instrs));
}

std::string print_asm(const Program& p) {
  std::ostringstream out;
  for (const Instr& ins : p.instrs) {
    out << kMnemonics[static_cast<std::size_t>(ins.op)];
    switch (ins.op) {
      case Op::Halt:
      case Op::Inc:
      case Op::Dec:
      case Op::Input:
        out << " r" << ins.a;
        break;
      case Op::Jmp:
        out << ' ' << ins.a;
        break;
      case Op::LoadC:
        out << " r" << ins.a << ' ' << ins.b;
        break;
      case Op::Jz:
        out << " r" << ins.a << ' ' << ins.b;
        break;
      case Op::Oracle:
      case Op::Move:
        out << " r" << ins.a << " r" << ins.b;
        break;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace wlab
