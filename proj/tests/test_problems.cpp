#include <map>
#include <random>

#include "doctest.h"
#include "wlab/errors.hpp"
#include "wlab/machine.hpp"
#include "wlab/problems.hpp"

using namespace wlab;

namespace {

std::uint64_t rand_below(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

FiniteTree drop_subtree(FiniteTree t, const std::string& w) {
  for (auto it = t.members.begin(); it != t.members.end();) {
    if (it->compare(0, w.size(), w) == 0)
      it = t.members.erase(it);
    else
      ++it;
  }
  return t;
}

// Second opinion: recursive descent gathering the full-depth words.
void enum_paths(const FiniteTree& t, const std::string& w,
                std::vector<Prefix>& out) {
  if (w.size() == t.depth) {
    Prefix p;
    for (char c : w) p.push_back(c - '0');
    out.push_back(std::move(p));
    return;
  }
  for (int c = 0; c < t.arity; ++c) {
    std::string child = w + static_cast<char>('0' + c);
    if (t.contains(child)) enum_paths(t, child, out);
  }
}

bool has_full_branch(const FiniteTree& t, const std::string& w,
                     std::map<std::string, bool>& memo) {
  if (w.size() == t.depth) return true;
  auto it = memo.find(w);
  if (it != memo.end()) return it->second;
  bool any = false;
  for (int c = 0; c < t.arity && !any; ++c) {
    std::string child = w + static_cast<char>('0' + c);
    any = t.contains(child) && has_full_branch(t, child, memo);
  }
  memo[w] = any;
  return any;
}

// Second opinion for big_tree_check, straight off the definition.
bool big_tree_slow(const FiniteTree& t) {
  std::map<std::string, bool> memo;
  for (const auto& w : t.members) {
    if (w.size() >= t.depth) continue;
    int dead = 0;
    for (int c = 0; c < t.arity; ++c) {
      std::string child = w + static_cast<char>('0' + c);
      if (!t.contains(child) || !has_full_branch(t, child, memo)) ++dead;
    }
    if (dead > 1) return false;
  }
  return true;
}

FiniteTree random_tree(std::mt19937_64& rng) {
  FiniteTree t;
  t.arity = 2 + static_cast<int>(rand_below(rng, 3));
  t.depth = 1 + rand_below(rng, 12);
  std::uint64_t keep = t.arity == 2 ? 6 : t.arity == 3 ? 4 : 3;
  t.members.insert("");
  std::vector<std::string> level{""};
  for (std::size_t d = 0; d < t.depth && !level.empty(); ++d) {
    std::vector<std::string> next;
    for (const auto& w : level)
      for (int c = 0; c < t.arity; ++c)
        if (rand_below(rng, 10) < keep) {
          std::string child = w + static_cast<char>('0' + c);
          t.members.insert(child);
          next.push_back(std::move(child));
        }
    level = std::move(next);
  }
  return t;
}

}  // namespace

TEST_CASE("choice instance encoding") {
  AccInstance open{nat(3), std::nullopt, 0};
  Name a = acc_encode(open);
  for (int i = 0; i < 40; ++i) CHECK(a(i) == 0);

  AccInstance inst{nat(3), nat(1), 4};
  Name b = acc_encode(inst);
  for (int i = 0; i < 4; ++i) CHECK(b(i) == 0);
  for (int i = 4; i < 40; ++i) CHECK(b(i) == 2);

  CHECK(acc_check(inst, 0));
  CHECK_FALSE(acc_check(inst, 1));
  CHECK(acc_check(inst, 2));
  CHECK_FALSE(acc_check(inst, 3));
  CHECK_FALSE(acc_check(open, 7));
  CHECK(acc_check(open, 2));
  CHECK(acc_check(AccInstance{std::nullopt, nat(1), 0}, 100));

  CHECK_THROWS_AS(acc_encode(AccInstance{nat(3), nat(3), 0}),
                  ContractViolation);
  CHECK_THROWS_AS(acc_encode(AccInstance{nat(1), std::nullopt, 0}),
                  ContractViolation);
}

TEST_CASE("choice solution enumeration and probing") {
  CHECK(acc_solutions({nat(3), nat(1), 0}, 99) ==
        std::vector<nat>{nat(0), nat(2)});
  CHECK(acc_solutions({nat(3), std::nullopt, 0}, 99) ==
        std::vector<nat>{nat(0), nat(1), nat(2)});
  CHECK(acc_solutions({std::nullopt, nat(5), 0}, 8) ==
        std::vector<nat>{nat(0), nat(1), nat(2), nat(3), nat(4), nat(6),
                         nat(7)});

  Name b = acc_encode({nat(3), nat(1), 4});
  CHECK_FALSE(acc_revealed(b, 0).has_value());
  CHECK(acc_revealed(b, 10) == nat(1));
  CHECK_FALSE(acc_revealed(acc_encode({nat(3), std::nullopt, 0}), 1000)
                  .has_value());
}

TEST_CASE("track bundle to choice name and back") {
  // Track 1 goes nonzero from slot 3 onward; 1 becomes the forbidden value.
  std::vector<Name> tracks(4, Name::zeros());
  tracks[1] = Name::from_prefix(Prefix(3, nat(0)), 1);
  Name tuple = tuple_names(tracks);
  Name a = llpo_to_acc(tuple, 4, 2000);
  CHECK(acc_revealed(a, 1000) == nat(1));
  std::size_t flip = to_index(cantor_pair(1, 3), 1 << 20);
  CHECK(a(flip == 0 ? 0 : flip - 1) == 0);
  CHECK(a(flip) == 2);

  Name back = acc_to_llpo(a, 4, 2000);
  for (int j = 0; j < 50; ++j) {
    CHECK(project_tuple(back, 0)(j) == 0);
    CHECK(project_tuple(back, 2)(j) == 0);
    CHECK(project_tuple(back, 3)(j) == 0);
  }
  bool lit = false;
  for (int j = 0; j < 50; ++j) lit = lit || project_tuple(back, 1)(j) != 0;
  CHECK(lit);
}

TEST_CASE("choice translations preserve the valid answers, all small cases") {
  for (int n = 2; n <= 5; ++n) {
    for (int t = -1; t < n; ++t) {
      for (std::size_t reveal : {std::size_t(0), std::size_t(3)}) {
        std::vector<Name> tracks(n, Name::zeros());
        if (t >= 0)
          tracks[t] = Name::from_prefix(Prefix(reveal, nat(0)), 1);
        Name a = llpo_to_acc(tuple_names(tracks), n, 600);
        AccInstance inst{nat(n),
                         t >= 0 ? std::optional<nat>(t) : std::nullopt, 0};
        for (int v = 0; v < n; ++v) {
          bool valid_llpo = v != t;
          auto revealed = acc_revealed(a, 599);
          bool valid_acc = !revealed || *revealed != v;
          CHECK(valid_llpo == valid_acc);
          CHECK(valid_llpo == bool(acc_check(inst, v)));
        }
        Name back = acc_to_llpo(a, n, 600);
        for (int u = 0; u < n; ++u) {
          bool nonzero = false;
          for (int j = 0; j < 40; ++j)
            nonzero = nonzero || project_tuple(back, u)(j) != 0;
          CHECK(nonzero == (u == t));
        }
      }
    }
  }
}

TEST_CASE("two live tracks are rejected") {
  std::vector<Name> tracks(3, Name::zeros());
  tracks[0] = Name::from_prefix(Prefix(2, nat(0)), 1);
  tracks[2] = Name::from_prefix(Prefix(5, nat(0)), 1);
  Name tuple = tuple_names(tracks);
  Name a = llpo_to_acc(tuple, 3, 2000);
  CHECK_THROWS_AS(a(1999), DomainViolation);

  Name junk([](const nat& i) { return i == 3 ? nat(1) : i == 7 ? nat(2)
                                                              : nat(0); });
  CHECK_THROWS_AS(acc_to_llpo(junk, 4, 100), DomainViolation);
  Name wide([](const nat& i) { return i == 0 ? nat(9) : nat(0); });
  CHECK_THROWS_AS(acc_to_llpo(wide, 4, 100), DomainViolation);
}

TEST_CASE("tree membership, validation, paths") {
  FiniteTree full3 = FiniteTree::full(2, 3);
  CHECK(full3.members.size() == 15);
  full3.validate();
  auto paths = tree_paths(full3);
  REQUIRE(paths.size() == 8);
  CHECK(paths.front() == Prefix{nat(0), nat(0), nat(0)});
  CHECK(paths.back() == Prefix{nat(1), nat(1), nat(1)});
  for (std::size_t i = 1; i < paths.size(); ++i)
    CHECK(paths[i - 1] < paths[i]);

  FiniteTree chain = tree_from_lines(2, 4, "0000\n");
  CHECK(chain.members.size() == 5);
  auto cp = tree_paths(chain);
  REQUIRE(cp.size() == 1);
  CHECK(cp[0] == Prefix(4, nat(0)));

  FiniteTree bad;
  bad.depth = 2;
  bad.members = {"", "01"};
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
  bad.members = {"", "2"};
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
  bad.members = {"", "0", "010"};
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
}

TEST_CASE("at most one dead child per interior node") {
  CHECK(big_tree_check(FiniteTree::full(2, 4)));
  CHECK(big_tree_check(FiniteTree::full(3, 3)));

  // Node 1 is a member but both of its children's branches are gone.
  FiniteTree lost = tree_from_lines(2, 2, "00\n01\n1\n");
  CHECK_FALSE(big_tree_check(lost));

  // Dropping one whole subtree kills exactly one child of node 1.
  FiniteTree pruned = drop_subtree(FiniteTree::full(2, 3), "11");
  CHECK(big_tree_check(pruned));

  // Empty and root-only trees have no interior member to fault.
  CHECK(big_tree_check(tree_from_lines(2, 3, "")));
  FiniteTree stub;
  stub.depth = 0;
  stub.members = {""};
  CHECK(big_tree_check(stub));
}

TEST_CASE("exact branch measure") {
  CHECK(tree_measure(FiniteTree::full(2, 5)) == Rational(1));
  CHECK(tree_measure(tree_from_lines(2, 3, "")) == Rational(0));

  FiniteTree full8 = FiniteTree::full(2, 8);
  CHECK(tree_measure(drop_subtree(full8, "000")) == Rational(7, 8));
  for (std::size_t m = 1; m <= 8; ++m) {
    std::string node(m, '1');
    CHECK(Rational(1) - tree_measure(drop_subtree(full8, node)) ==
          Rational(1, nat(1) << m));
  }

  CHECK_THROWS_AS(tree_measure(FiniteTree::full(3, 2)), DomainViolation);
}

TEST_CASE("tree intersection and the deficit bound") {
  std::mt19937_64 rng(2030);
  for (int trial = 0; trial < 60; ++trial) {
    FiniteTree full = FiniteTree::full(2, 7);
    FiniteTree a = full, b = full;
    for (int cuts = 0; cuts < 3; ++cuts) {
      std::string w;
      for (int d = 0; d < 3 + static_cast<int>(rand_below(rng, 4)); ++d)
        w += static_cast<char>('0' + rand_below(rng, 2));
      a = drop_subtree(a, w);
      w.clear();
      for (int d = 0; d < 3 + static_cast<int>(rand_below(rng, 4)); ++d)
        w += static_cast<char>('0' + rand_below(rng, 2));
      b = drop_subtree(b, w);
    }
    FiniteTree both = tree_intersection(a, b);
    both.validate();
    Rational deficit = (Rational(1) - tree_measure(a)) +
                       (Rational(1) - tree_measure(b));
    CHECK(tree_measure(both) >= Rational(1) - deficit);
    for (const auto& w : both.members) {
      CHECK(a.contains(w));
      CHECK(b.contains(w));
    }
  }
  FiniteTree wrong = FiniteTree::full(2, 3);
  CHECK_THROWS_AS(tree_intersection(wrong, FiniteTree::full(2, 4)),
                  DomainViolation);
}

TEST_CASE("length-lexicographic word coding") {
  CHECK(word_index("", 2) == 0);
  CHECK(word_index("0", 2) == 1);
  CHECK(word_index("1", 2) == 2);
  CHECK(word_index("00", 2) == 3);
  CHECK(word_index("01", 2) == 4);
  CHECK(word_index("10", 2) == 5);
  CHECK(word_index("11", 2) == 6);
  CHECK(word_index("000", 2) == 7);
  CHECK(word_at(0, 3) == "");
  CHECK(word_at(3, 3) == "2");
  CHECK(word_at(4, 3) == "00");

  for (int k = 2; k <= 4; ++k)
    for (nat n = 0; n < 2000; ++n) CHECK(word_index(word_at(n, k), k) == n);

  std::mt19937_64 rng(2031);
  for (int trial = 0; trial < 300; ++trial) {
    int k = 2 + static_cast<int>(rand_below(rng, 3));
    std::string w;
    std::size_t len = rand_below(rng, 40);
    for (std::size_t i = 0; i < len; ++i)
      w += static_cast<char>('0' + rand_below(rng, k));
    CHECK(word_at(word_index(w, k), k) == w);
  }
}

TEST_CASE("tree text fixtures") {
  FiniteTree t = tree_from_lines(2, 3, "# a comment\n-\n011  # inline\n\n00\n");
  CHECK(t.members ==
        std::set<std::string>{"", "0", "00", "01", "011"});
  t.validate();
  FiniteTree again = tree_from_lines(2, 3, tree_to_lines(t));
  CHECK(again.members == t.members);

  try {
    tree_from_lines(2, 3, "0\n02\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  CHECK_THROWS_AS(tree_from_lines(2, 2, "000\n"), ParseError);
}

TEST_CASE("family text fixtures") {
  CohFamily f = family_from_lines("# sets\n1010\n0110\n");
  CHECK(f.window == 4);
  REQUIRE(f.sets.size() == 2);
  CHECK(f.in(0, 0));
  CHECK_FALSE(f.in(0, 1));
  CHECK(f.in(1, 2));
  CHECK(family_to_lines(f) == "1010\n0110\n");

  try {
    family_from_lines("1010\n011\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  CHECK_THROWS_AS(family_from_lines("10x0\n"), ParseError);
}

TEST_CASE("cohesion check against a family") {
  CohFamily evens = family_from_lines("1010101010\n");
  CHECK(coh_check(evens, {0, 2, 4, 6}, 0));
  CHECK_FALSE(coh_check(evens, {0, 1, 2, 3}, 0));
  CHECK(coh_check(evens, {1, 2, 4, 6}, 1));
  CHECK_FALSE(coh_check(evens, {1, 2, 4, 7}, 1));
  CHECK(coh_check(evens, {1, 3, 5, 7}, 0));

  CHECK_FALSE(coh_check(evens, {0, 2}, 1));
  CHECK(coh_check(evens, {0, 2}, 0));

  CohFamily two = family_from_lines("1111100000\n1010101010\n");
  CHECK(coh_check(two, {0, 2, 4}, 0));
  CHECK_FALSE(coh_check(two, {2, 4, 6}, 0));
  CHECK(coh_check(two, {1, 6, 8}, 1));
  CHECK_FALSE(coh_check(two, {1, 6, 8}, 0));

  CHECK_THROWS_AS(coh_check(evens, {0, 2, 1}, 0), DomainViolation);
  CHECK_THROWS_AS(coh_check(evens, {0, 2, 10}, 0), DomainViolation);
}

TEST_CASE("diagonal avoidance check") {
  Name zeros = Name::zeros();
  CHECK(dnc_check(zeros, std::nullopt, {}, 1000));
  // Code 0 is the empty program and never halts; code 1 halts with value 0.
  CHECK(dnc_check(zeros, std::nullopt, {nat(5)}, 1000));
  CHECK_FALSE(dnc_check(zeros, std::nullopt, {nat(5), nat(0)}, 1000));
  CHECK(dnc_check(zeros, std::nullopt, {nat(5), nat(1)}, 1000));
  CHECK_FALSE(dnc_check(zeros, nat(2), {nat(0), nat(3)}, 1000));

  // Constructive filler: dodge every halting diagonal by one.
  Prefix q;
  for (std::size_t n = 0; n < 24; ++n) {
    RunResult r = diag_approx(zeros, n, 4000);
    q.push_back(r.halted ? r.value + 1 : nat(0));
  }
  CHECK(dnc_check(zeros, std::nullopt, q, 4000));

  // A violation observed at some budget persists at larger ones.
  Prefix bad;
  bool found = false;
  for (std::size_t n = 0; n < 24 && !found; ++n) {
    RunResult r = diag_approx(zeros, n, 500);
    if (r.halted) {
      bad = Prefix(n + 1, nat(0));
      bad[n] = r.value;
      found = true;
    }
  }
  REQUIRE(found);
  CHECK_FALSE(dnc_check(zeros, std::nullopt, bad, 500));
  CHECK_FALSE(dnc_check(zeros, std::nullopt, bad, 2000));
  CHECK_FALSE(dnc_check(zeros, std::nullopt, bad, 8000));
}

TEST_CASE("random trees agree with the second opinion") {
  std::mt19937_64 rng(2032);
  for (int trial = 0; trial < 1000; ++trial) {
    FiniteTree t = random_tree(rng);
    t.validate();
    std::vector<Prefix> expect;
    if (t.contains("")) enum_paths(t, "", expect);
    CHECK(tree_paths(t) == expect);
    CHECK(big_tree_check(t) == big_tree_slow(t));
    if (t.arity == 2) {
      Rational mu = tree_measure(t);
      CHECK(mu == Rational(expect.size(), nat(1) << t.depth));
    }
  }
}
