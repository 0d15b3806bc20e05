#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "wlab/names.hpp"
#include "wlab/nat.hpp"

namespace wlab {

using Rational = boost::rational<nat>;

// Outcome of a finite-budget solution check. Consistency is relative to the
// inspected budget; a violation never heals under a larger one.
struct Verdict {
  bool consistent = true;
  std::string reason;

  static Verdict yes() { return {}; }
  static Verdict no(std::string why) { return {false, std::move(why)}; }
  explicit operator bool() const { return consistent; }
};

// All-or-co-unique choice over {0..n-1} (or over all naturals when the
// alphabet is absent): at most one element is forbidden. Instances are
// presented as negative information, a name p with range(p) - 1 equal to
// the set of excluded elements.
struct AccInstance {
  std::optional<nat> alphabet;   // n >= 2; absent means unbounded
  std::optional<nat> forbidden;  // absent: nothing is excluded
  std::size_t reveal_at = 0;     // position where the exclusion appears
};

Name acc_encode(const AccInstance& inst);
Verdict acc_check(const AccInstance& inst, const nat& output);
// Valid answers; `ceiling` bounds the candidates for unbounded instances.
std::vector<nat> acc_solutions(const AccInstance& inst, const nat& ceiling);
// Reads the exclusion off an encoder-shaped name by probing one position
// at or past every reveal index of interest.
std::optional<nat> acc_revealed(const Name& p, const nat& probe);

// The two presentations of binary-choice-with-at-most-one-culprit data:
// a tuple of n tracks of which at most one ever goes nonzero (answer t is
// valid iff track t stays zero) and an ACC_n name that forbids exactly the
// nonzero track's index. Both scans inspect `budget` leading positions and
// throw DomainViolation when two distinct tracks turn out nonzero.
Name llpo_to_acc(const Name& tracks, const nat& n, std::size_t budget);
Name acc_to_llpo(const Name& p, const nat& n, std::size_t budget);

// A finite prefix-closed tree over the alphabet {0..arity-1}, depth-capped.
// Words are strings of digit characters; the empty word is the root.
struct FiniteTree {
  int arity = 2;
  std::size_t depth = 0;
  std::set<std::string> members;

  bool contains(const std::string& w) const { return members.count(w) > 0; }
  static FiniteTree full(int arity, std::size_t depth);
  // Throws ContractViolation when not prefix-closed or words are malformed.
  void validate() const;
};

// All words of full depth, lexicographically ordered, as digit prefixes.
// By prefix closure these are exactly the endpoints of maximal branches.
std::vector<Prefix> tree_paths(const FiniteTree& t);

// True iff every member node of depth < d has at most one child (out of
// arity many) that fails to extend to a full-depth branch.
bool big_tree_check(const FiniteTree& t);

// Fraction of full-depth branches surviving, exactly; arity 2 only.
Rational tree_measure(const FiniteTree& t);

// Intersection, with the common depth and arity required to match.
FiniteTree tree_intersection(const FiniteTree& a, const FiniteTree& b);

// Length-lexicographic bijection between naturals and k-ary words:
// 0 is the empty word, then all length-1 words in order, and so on.
nat word_index(const std::string& w, int k);
std::string word_at(const nat& n, int k);

// Plain-text fixtures: one member word per line ('-' for the root), '#'
// starts a comment; prefixes are added implicitly.
FiniteTree tree_from_lines(int arity, std::size_t depth,
                           const std::string& text);
std::string tree_to_lines(const FiniteTree& t);

// A finite family of subsets of the window {0..window-1}, as bit rows.
struct CohFamily {
  std::size_t window = 0;
  std::vector<std::vector<bool>> sets;

  bool in(std::size_t i, std::size_t x) const { return sets[i][x]; }
};

// Plain-text fixture: one row of '0'/'1' per set, all rows equally long.
CohFamily family_from_lines(const std::string& text);
std::string family_to_lines(const CohFamily& f);

// X is consistent at the given slack iff |X| >= slack + 2 and for every
// set R_i all elements of X past the first `slack` lie entirely inside
// R_i or entirely inside its complement. X must be strictly increasing
// within the window (DomainViolation otherwise).
Verdict coh_check(const CohFamily& f, const std::vector<std::size_t>& x,
                  std::size_t slack);

// q is a consistent diagonal-avoidance prefix for oracle p iff no n < |q|
// has a halting diagonal run with value q(n) within the budget. Values
// must stay below the alphabet when one is given.
Verdict dnc_check(const Name& p, const std::optional<nat>& alphabet,
                  const Prefix& q, std::uint64_t budget);

}  // namespace wlab
