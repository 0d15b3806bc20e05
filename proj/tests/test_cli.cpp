#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = wlab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string shipped_text() {
  std::ifstream in(WLAB_FACTS_PATH);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes a temp fact file and returns its path.
std::string temp_facts(const std::string& content, const char* name) {
  std::string path = std::string("/tmp/wlab_cli_") + name + ".txt";
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--budget", "0", "verify", "kpt_split"}).code == 2);
  CHECK(run({"zoo"}).code == 2);
  CHECK(run({"verify"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify: unknown witness exits 2 and lists the catalog") {
  RunResult r = run({"verify", "nosuch"});
  CHECK(r.code == 2);
  CHECK(r.err.find("unknown witness: nosuch") != std::string::npos);
  CHECK(r.err.find("kpt_split") != std::string::npos);
}

TEST_CASE("verify: a passing witness exits 0 with a deterministic report") {
  RunResult a = run({"verify", "kpt_split"});
  RunResult b = run({"verify", "kpt_split"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("witness kpt_split\n", 0) == 0);
  CHECK(a.out.find("summary pass=8 fail=0 budget-exhausted=0") != std::string::npos);
}

TEST_CASE("verify: a sabotaged witness exits 1 with a fail line") {
  RunResult r = run({"verify", "defect_offset"});
  CHECK(r.code == 1);
  CHECK(r.out.find(": fail - ") != std::string::npos);
  RunResult c = run({"verify", "defect_counter"});
  CHECK(c.code == 1);
}

TEST_CASE("verify: a family prefix runs every member") {
  RunResult r = run({"verify", "dnc_to_paracc"});
  CHECK(r.code == 0);
  CHECK(r.out.find("witness dnc_to_paracc_2\n") != std::string::npos);
  CHECK(r.out.find("witness dnc_to_paracc_3\n") != std::string::npos);
  CHECK(r.out.find("witness dnc_to_paracc_4\n") != std::string::npos);
}

TEST_CASE("verify: seeds vary instances but not the contract") {
  RunResult s0 = run({"verify", "coh_backtrack", "--seed", "0"});
  RunResult s1 = run({"verify", "coh_backtrack", "--seed", "1"});
  CHECK(s0.code == 0);
  CHECK(s1.code == 0);
  auto cases = [](const std::string& text) {
    std::size_t n = 0, at = 0;
    while ((at = text.find("\n  case ", at)) != std::string::npos) {
      ++n;
      ++at;
    }
    return n;
  };
  CHECK(cases(s0.out) == cases(s1.out));
  CHECK(s0.out.find(" fail=0 ") != std::string::npos);
  CHECK(s1.out.find(" fail=0 ") != std::string::npos);
}

TEST_CASE("zoo query prints a verdict and a replaying derivation") {
  RunResult r = run({"zoo", "query", "leW ACC_N ACC_3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("verdict Proved\n") != std::string::npos);
  CHECK(r.out.find("derivation:\n") != std::string::npos);
  CHECK(r.out.find("[seed]") != std::string::npos);
  CHECK(r.out.find("replay ok\n") != std::string::npos);

  RunResult refuted = run({"zoo", "query", "leW WKL MLR"});
  CHECK(refuted.code == 0);
  CHECK(refuted.out.find("verdict Refuted\n") != std::string::npos);

  RunResult open = run({"zoo", "query", "leW FRESH_A FRESH_B"});
  CHECK(open.code == 0);
  CHECK(open.out.find("verdict Open\n") != std::string::npos);
  CHECK(open.out.find("derivation:") == std::string::npos);

  CHECK(run({"zoo", "query", "leW WKL"}).code == 2);
  CHECK(run({"zoo", "query", "banana WKL MLR"}).code == 2);
  CHECK(run({"zoo", "query", "leW WKL prod(A"}).code == 2);
}

TEST_CASE("zoo consistency is clean on the shipped base and catches injections") {
  RunResult clean = run({"zoo", "consistency"});
  CHECK(clean.code == 0);
  CHECK(clean.out.find("consistency: no conflicts") != std::string::npos);

  std::string poisoned =
      temp_facts(shipped_text() + "\nleW MLR DNC_N # injected\n", "poisoned");
  RunResult bad = run({"zoo", "consistency", "--facts", poisoned});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("conflict: leW MLR DNC_N  vs  nleW MLR DNC_N") != std::string::npos);
  CHECK(bad.out.find("replay ok\n") != std::string::npos);
  CHECK(bad.out.find("consistency: ") != std::string::npos);
  std::remove(poisoned.c_str());
}

TEST_CASE("zoo classify prints both verdicts") {
  RunResult r = run({"zoo", "classify", "MLR"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "classify MLR\n"
        "discriminative: Refuted\n"
        "omega_discriminative: Refuted\n");
  RunResult wkl = run({"zoo", "classify", "WKL"});
  CHECK(wkl.out.find("discriminative: Proved") != std::string::npos);
}

TEST_CASE("zoo graph emits dot text and the embedded seed matches the file") {
  RunResult r = run({"zoo", "graph"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("digraph zoo {", 0) == 0);
  RunResult from_file = run({"zoo", "graph", "--facts", WLAB_FACTS_PATH});
  CHECK(from_file.out == r.out);
  CHECK(std::string(wlab::cli::embedded_zoo_facts()) == shipped_text());
}

TEST_CASE("facts parse errors exit 2 with a located message") {
  std::string bad = temp_facts("atom A\nlqW A B\n", "bad");
  RunResult r = run({"zoo", "graph", "--facts", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
  RunResult missing = run({"zoo", "graph", "--facts", "/tmp/wlab_cli_missing.txt"});
  CHECK(missing.code == 2);
  std::remove(bad.c_str());
}

TEST_CASE("suite runs everything and reports one summary") {
  RunResult r = run({"suite"});
  CHECK(r.code == 0);
  CHECK(r.out.find("zoo consistency: no conflicts\n") != std::string::npos);
  std::size_t at = r.out.find("suite summary witnesses=20 pass=");
  REQUIRE(at != std::string::npos);
  CHECK(r.out.find(" fail=0 ", at) != std::string::npos);
  CHECK(r.out.find(" conflicts=0\n", at) != std::string::npos);

  std::string poisoned =
      temp_facts(shipped_text() + "\nleW MLR DNC_N # injected\n", "poisoned2");
  RunResult bad = run({"suite", "--facts", poisoned});
  CHECK(bad.code == 1);
  std::remove(poisoned.c_str());
}
