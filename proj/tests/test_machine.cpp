#include <random>

#include "doctest.h"
#include "wlab/errors.hpp"
#include "wlab/machine.hpp"
#include "wlab/names.hpp"

using namespace wlab;

namespace {

nat rand_below(std::mt19937_64& rng, std::uint64_t n) {
  return nat(rng() % n);
}

Name random_name(std::mt19937_64& rng) {
  Prefix vals;
  for (int i = 0; i < 64; ++i) vals.push_back(rand_below(rng, 6));
  return Name::from_prefix(std::move(vals), rng() % 3);
}

const Program kLoadHalt({{Op::LoadC, 0, 7}, {Op::Halt, 0, 0}});
const Program kSpin({{Op::Jmp, 0, 0}});
// Outputs oracle(3) + 1.
const Program kReadPlusOne({{Op::LoadC, 1, 3},
                            {Op::Oracle, 0, 1},
                            {Op::Inc, 0, 0},
                            {Op::Halt, 0, 0}});

}  // namespace

TEST_CASE("constant program halts with value, no oracle use") {
  RunResult r = run(kLoadHalt, 0, Name::zeros(), 1000);
  CHECK(r == RunResult{true, 7, 0, 2});
  // Input and oracle are irrelevant to it.
  CHECK(run(kLoadHalt, 42, Name::constant(9), 1000) == r);
}

TEST_CASE("tight loop never halts and consumes the whole budget") {
  for (std::uint64_t budget : {1u, 10u, 10000u}) {
    RunResult r = run(kSpin, 0, Name::zeros(), budget);
    CHECK(!r.halted);
    CHECK(r.steps == budget);
  }
  // Falling past the end spins too.
  RunResult r = run(Program({{Op::Inc, 0, 0}}), 0, Name::zeros(), 50);
  CHECK(!r.halted);
}

TEST_CASE("oracle reads are counted into use") {
  Name ident([](const nat& i) { return i; });
  RunResult r = run(kReadPlusOne, 0, ident, 1000);
  CHECK(r == RunResult{true, 4, 4, 4});
  RunResult zero = run(kReadPlusOne, 0, Name::zeros(), 1000);
  CHECK(zero == RunResult{true, 1, 4, 4});
}

TEST_CASE("input instruction reads the machine input") {
  Program p({{Op::Input, 2, 0}, {Op::Inc, 2, 0}, {Op::Halt, 2, 0}});
  CHECK(run(p, 41, Name::zeros(), 100).value == 42);
  nat big = nat(1) << 90;
  CHECK(run(p, big, Name::zeros(), 100).value == big + 1);
}

TEST_CASE("empty and tiny codes decode to canonical programs") {
  CHECK(decode_program(0) == Program());
  CHECK(!run(nat(0), 5, Name::zeros(), 100).halted);
  CHECK(decode_program(1) == Program({{Op::Halt, 0, 0}}));
  CHECK(run(nat(1), 5, Name::zeros(), 100) == RunResult{true, 0, 0, 1});
}

TEST_CASE("encode and decode are mutually inverse on normal forms") {
  Program p({{Op::Input, 3, 0},
             {Op::LoadC, 1, 500},
             {Op::Oracle, 2, 3},
             {Op::Jz, 2, 5},
             {Op::Halt, 1, 0}});
  CHECK(decode_program(encode_program(p)) == p);
  CHECK(decode_program(encode_program(kReadPlusOne)) == kReadPlusOne);

  std::mt19937_64 rng(7011);
  for (int t = 0; t < 1000; ++t) {
    nat code = nat(rng()) % (nat(1) << (1 + t % 80));
    Program q = decode_program(code);
    CHECK(decode_program(encode_program(q)) == q);
  }
}

TEST_CASE("decoding is total on huge codes") {
  nat code = (nat(1) << 500) + (nat(1) << 321) + 12345;
  Program q = decode_program(code);
  CHECK(decode_program(encode_program(q)) == q);
}

TEST_CASE("normalization clamps fields") {
  Program p({{Op::Inc, 200, 5}, {Op::Jmp, 99, 1}, {Op::Jz, 64, 77}});
  CHECK(p.instrs[0] == Instr{Op::Inc, 200 % 64, 0});
  CHECK(p.instrs[1] == Instr{Op::Jmp, 3, 0});
  CHECK(p.instrs[2] == Instr{Op::Jz, 0, 3});
}

TEST_CASE("running a code equals running its decoded program") {
  std::mt19937_64 rng(7012);
  for (int t = 0; t < 200; ++t) {
    nat code = rand_below(rng, 1) + (nat(rng()) << (t % 30));
    Name p = random_name(rng);
    CHECK(run(code, t, p, 500) == run(decode_program(code), t, p, 500));
  }
}

TEST_CASE("halting is stable under larger budgets") {
  std::mt19937_64 rng(7013);
  int halted = 0;
  for (int t = 0; t < 500; ++t) {
    nat code(rng() % 100000);
    Name p = random_name(rng);
    RunResult r = run(code, t, p, 400);
    if (!r.halted) continue;
    ++halted;
    CHECK(run(code, t, p, 800) == r);
    CHECK(run(code, t, p, 5000) == r);
  }
  CHECK(halted > 200);
}

TEST_CASE("diagonal runs are monotone in the step bound") {
  std::mt19937_64 rng(7014);
  for (int t = 0; t < 200; ++t) {
    Name p = random_name(rng);
    nat n = rand_below(rng, 5000);
    RunResult r = diag_approx(p, n, 300);
    if (r.halted) CHECK(diag_approx(p, n, 1300) == r);
    CHECK(halting_bit(p, n, 300) == (r.halted ? 1 : 0));
  }
}

TEST_CASE("halting bit is monotone") {
  std::mt19937_64 rng(7015);
  for (int t = 0; t < 500; ++t) {
    Name p = random_name(rng);
    nat n = rand_below(rng, 3000);
    std::uint64_t s1 = rng() % 600, s2 = s1 + rng() % 600;
    CHECK(halting_bit(p, n, s1) <= halting_bit(p, n, s2));
  }
}

TEST_CASE("track scanner finds the first nonzero entry") {
  // Track 2 holds 0, 0, 5, 0, ...: first hit is entry 5 at slot 2, value 4.
  Name t = tuple_names([](const nat& i) {
    return i == 2 ? Name::from_prefix({0, 0, 5}) : Name::zeros();
  });
  RunResult r = run(smn_search(2), 0, t, 10000);
  CHECK(r.halted);
  CHECK(r.value == 4);
  CHECK(use_replay(smn_search(2), 0, t, 10000));

  // Track 0 holds 3, 2, ...: entry 3 at slot 0, value 2.
  Name u = tuple_names([](const nat& i) {
    return i == 0 ? Name::from_prefix({3, 2}, 1) : Name::zeros();
  });
  CHECK(run(smn_search(0), 0, u, 10000).value == 2);
}

TEST_CASE("track scanner diverges on an all-zero track") {
  Name t = tuple_names([](const nat& i) {
    return i == 4 ? Name::zeros() : Name::constant(1);
  });
  CHECK(!run(smn_search(4), 0, t, 10000).halted);
}

TEST_CASE("track scanner meets the step budget at the far corner") {
  // Highest track index and latest reveal the generators ever use.
  Name t = tuple_names([](const nat& i) {
    if (i != 31) return Name::zeros();
    Prefix vals(32, 0);
    vals.push_back(9);
    return Name::from_prefix(std::move(vals));
  });
  RunResult r = run(smn_search(31), 0, t, 10000);
  CHECK(r.halted);
  CHECK(r.value == 8);
  CHECK(r.steps <= 10000);
}

TEST_CASE("track scanner ignores other tracks") {
  std::mt19937_64 rng(7016);
  for (int t = 0; t < 20; ++t) {
    nat i = rand_below(rng, 8);
    nat slot = rand_below(rng, 8);
    nat x = rand_below(rng, 50);
    Name noise = tuple_names([&](const nat& track) {
      if (track == i) {
        Prefix vals(static_cast<std::size_t>(slot), 0);
        vals.push_back(x + 1);
        return Name::from_prefix(std::move(vals), 1);
      }
      return random_name(rng);
    });
    Name noisy = Name::memoized(noise);
    RunResult r = run(smn_search(i), 0, noisy, 10000);
    CHECK(r.halted);
    CHECK(r.value == x);
  }
}

TEST_CASE("use replay accepts honest runs and rejects divergent ones") {
  Name ident([](const nat& i) { return i; });
  CHECK(use_replay(encode_program(kReadPlusOne), 0, ident, 1000));
  CHECK(use_replay(encode_program(kLoadHalt), 0, ident, 1000));
  CHECK_THROWS_AS(use_replay(encode_program(kSpin), 0, ident, 1000), Error);

  std::mt19937_64 rng(7017);
  int replayed = 0;
  for (int t = 0; t < 300; ++t) {
    nat code(rng() % 1000000);
    Name p = random_name(rng);
    if (!run(code, t, p, 400).halted) continue;
    ++replayed;
    CHECK(use_replay(code, t, p, 400));
  }
  CHECK(replayed > 100);
}

TEST_CASE("assembly round trips") {
  std::string text = print_asm(kReadPlusOne);
  CHECK(parse_asm(text) == kReadPlusOne);
  Program scanner = decode_program(smn_search(3));
  CHECK(parse_asm(print_asm(scanner)) == scanner);

  Program p = parse_asm(
      "# scans nothing\n"
      "LOADC r1 3   # position\n"
      "ORACLE r0 r1\n"
      "INC r0\n"
      "\n"
      "HALT r0\n");
  CHECK(p == kReadPlusOne);
}

TEST_CASE("assembly errors carry line numbers") {
  CHECK_THROWS_AS(parse_asm("NOP r0"), ParseError);
  CHECK_THROWS_AS(parse_asm("INC 3"), ParseError);
  CHECK_THROWS_AS(parse_asm("HALT r0 r1"), ParseError);
  CHECK_THROWS_AS(parse_asm("LOADC r0"), ParseError);
  try {
    parse_asm("HALT r0\nJMP x\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}
